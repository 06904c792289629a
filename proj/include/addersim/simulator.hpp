#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "addersim/netlist.hpp"
#include "addersim/strength.hpp"

namespace addersim {

// Electrical model knobs. Defaults target the 1.8V / 100MHz operating point
// with uniform 2/2 lambda devices.
struct ModelParams {
  double vdd = 1.8;    // volts
  double vtn = 0.4;    // volts
  double vtp = 0.4;    // volts
  double rn = 10e3;    // ohms per square (NMOS on-resistance at L/W = 1)
  double rp = 20e3;    // ohms per square
  double cg = 2e-15;   // farads per gate terminal
  double csd = 1e-15;  // farads per drain/source terminal
  double freq = 1e8;   // Hz
  double period_ns = 10.0;
  double layout_overhead = 8.0;  // area = overhead * sum(W*L)

  void validate() const;  // throws std::invalid_argument
};

struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Channel-connected component: nets reachable от each other through
// drain-source channels. Driver nets (supplies, inputs) belong to every
// component they touch but never merge two components.
struct Ccc {
  std::vector<int> nets;     // sorted; includes touched driver nets
  std::vector<int> devices;  // sorted
};

std::vector<Ccc> partition_ccc(const FlatNetlist& flat);

struct SolveResult {
  std::vector<Signal> signals;       // per net
  std::vector<double> path_res_ohm;  // winning drive path; +inf when undriven
  int iterations = 0;                // outer gate-state refinements
};

// Steady state for one input vector: the least fixpoint of per-net joins of
// retained charge and degrade-adjusted signals conducted through On devices
// (an LX-gated device contributes the join of its conducting and
// non-conducting hypotheses). `prior` carries the previous vector's net
// state; nullptr means power-on. Throws SimError if the iteration bound
// (nets x strength levels x 3) is exceeded.
SolveResult settle(const FlatNetlist& flat, const std::map<int, Level>& inputs,
                   const std::vector<Signal>* prior, const ModelParams& params);

struct StimulusError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Timed input vectors. Rows apply at `times_ns` when given, otherwise at
// multiples of period_ns.
struct Stimulus {
  std::vector<std::string> input_names;
  std::vector<std::vector<Level>> rows;  // row-major, one Level per input
  std::vector<double> times_ns;          // empty => periodic
  double period_ns = 10.0;

  // Accepts both forms: "time_ns,<inputs...>" and plain "<inputs...>".
  static Stimulus from_csv(std::string_view text, double period_ns);
  std::string to_csv() const;
};

// Binary counting stimulus over the given inputs, one vector per period.
Stimulus counting_stimulus(const std::vector<std::string>& input_names,
                           double period_ns);

struct TraceEvent {
  int64_t time_ps = 0;
  int net = -1;
  Signal value;
};

struct Trace {
  std::vector<TraceEvent> events;  // ordered by (time, net)
  int64_t duration_ps = 0;
  std::vector<std::string> net_names;

  std::string to_csv() const;  // header: time_ps,net,signal
};

// Event-driven transient run. Each vector is applied at its scheduled time;
// a net moving to a newly driven value transitions R_path * C_node later.
// The first event per net records its power-on/initial value.
Trace run_transient(const FlatNetlist& flat, const Stimulus& stim,
                    const ModelParams& params);

enum class HazardKind { StaticPath, FloatingOutput, WeakOutput };

struct Hazard {
  HazardKind kind;
  int net;

  friend bool operator==(const Hazard&, const Hazard&) = default;
};

std::string_view to_string(HazardKind k);

// Per settled vector: nets with live paths to both rails, outputs held only
// by charge, and outputs at Weak strength.
std::vector<Hazard> detect_hazards(const FlatNetlist& flat,
                                   const SolveResult& settled);

// Lumped capacitance: cg per gate terminal, csd per drain/source terminal.
double node_capacitance(const FlatNetlist& flat, const ModelParams& params,
                        int net);

}  // namespace addersim
