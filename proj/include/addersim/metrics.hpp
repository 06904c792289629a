#pragma once

#include <string>
#include <vector>

#include "addersim/simulator.hpp"

namespace addersim {

// Switching energy over a trace: sum of C*dV^2/2 per level transition. The
// swing is vdd rail to rail, vdd minus the responsible threshold when an
// endpoint is Weak (both thresholds when both are), and the conservative
// full swing for anything touching LX.
double estimate_energy_j(const Trace& trace, const FlatNetlist& flat,
                         const ModelParams& params);

// Average power in microwatts. Throws std::invalid_argument on a
// zero-duration trace.
double estimate_power_uw(const Trace& trace, const FlatNetlist& flat,
                         const ModelParams& params);

// area = layout_overhead * sum of W*L over devices, in lambda^2.
double estimate_area_lambda2(const FlatNetlist& flat, const ModelParams& params);

// Worst settling time of the carry output: max over vector periods of
// (last cout transition - vector time), 0 if it never switches. Throws
// std::invalid_argument when the net is missing.
double extract_cout_delay_ns(const Trace& trace, const FlatNetlist& flat,
                             const Stimulus& stim,
                             const std::string& cout_net = "cout");

double total_node_capacitance(const FlatNetlist& flat, const ModelParams& params);

struct MetricsRow {
  std::string design;
  int transistors = 0;
  double area_lambda2 = 0;
  double cout_delay_ns = 0;
  double avg_power_uw = 0;
  double pdp_uw_ns = 0;
  int hazard_count = 0;
  std::string error;  // non-empty when the row could not be computed
};

struct MetricsReport {
  std::vector<MetricsRow> rows;

  std::string to_csv() const;       // design,transistors,area_lambda2,...
  std::string to_markdown() const;  // adds a hazards column and a footnote
};

// Runs each named corpus cell through the counting stimulus and extracts
// one row per design, in the given order.
MetricsReport build_report(const std::vector<std::string>& cell_names,
                           const ModelParams& params);

}  // namespace addersim
