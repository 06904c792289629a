#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "addersim/strength.hpp"

namespace addersim {

// One MOS device. Bulk is parsed when present but carries no switch-level
// meaning. Width and length are in lambda; 2/2 is the uniform default.
struct Device {
  std::string id;
  DeviceKind kind = DeviceKind::Nmos;
  std::string drain;
  std::string gate;
  std::string source;
  std::optional<std::string> bulk;
  double width = 2.0;
  double length = 2.0;
  int src_line = 0;

  friend bool operator==(const Device& a, const Device& b) {
    return a.id == b.id && a.kind == b.kind && a.drain == b.drain &&
           a.gate == b.gate && a.source == b.source && a.bulk == b.bulk &&
           a.width == b.width && a.length == b.length;
  }
};

struct Instance {
  std::string id;
  std::vector<std::string> nets;  // positional bindings
  std::string subckt;
  int src_line = 0;

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.id == b.id && a.nets == b.nets && a.subckt == b.subckt;
  }
};

struct Subckt {
  std::string name;
  std::vector<std::string> ports;
  std::vector<std::string> inputs;   // optional .inputs directive
  std::vector<std::string> outputs;  // optional .outputs directive
  std::vector<Device> devices;
  std::vector<Instance> instances;

  friend bool operator==(const Subckt&, const Subckt&) = default;
};

struct Design {
  std::vector<Subckt> subckts;  // definition order
  std::string top;
  std::string vdd = "vdd";
  std::string gnd = "gnd";

  const Subckt* find(std::string_view name) const;
  friend bool operator==(const Design&, const Design&) = default;
};

struct ParseError : std::runtime_error {
  ParseError(std::string msg, int line, int col)
      : std::runtime_error(std::move(msg)), line(line), col(col) {}
  int line;
  int col;
};

enum class NetKind { SupplyHigh, SupplyLow, Input, Output, Internal };

struct FlatNet {
  std::string name;  // hierarchical: instance path joined with '.'
  NetKind kind = NetKind::Internal;
  int src_line = 0;
};

struct FlatDevice {
  std::string id;  // hierarchical id
  DeviceKind kind = DeviceKind::Nmos;
  int drain = -1;
  int gate = -1;
  int source = -1;
  double width = 2.0;
  double length = 2.0;
  int src_line = 0;
};

struct FlatNetlist {
  std::vector<FlatNet> nets;
  std::vector<FlatDevice> devices;
  int vdd = -1;
  int gnd = -1;
  std::vector<int> input_nets;   // in top port order
  std::vector<int> output_nets;  // in top port order

  int index_of(std::string_view net_name) const;  // -1 if absent
  bool is_driver(int net) const {
    NetKind k = nets[net].kind;
    return k == NetKind::SupplyHigh || k == NetKind::SupplyLow || k == NetKind::Input;
  }
};

struct Diagnostic {
  std::string severity;  // "warning" | "error"
  std::string message;
  int line = 0;

  std::string render(std::string_view file) const;  // file:line: severity: message
};

// Parses the netlist dialect. Grammar (one construct per line, # comments):
//   .global <vdd-name> <gnd-name>
//   .subckt <name> <ports...> / .ends
//   .inputs <nets...>   .outputs <nets...>     (inside a subckt)
//   M<id> <drain> <gate> <source> [<bulk>] <n|p> [w=<lambda>] [l=<lambda>]
//   X<id> <nets...> <subckt-name>
//   .top <name>                                 (default: last subckt)
// Throws ParseError with 1-based line/column on any violation, including
// unknown subckt references, arity mismatches, duplicate definitions and
// instance cycles.
Design parse(std::string_view text);

// Expands the instance tree of the top subckt into a flat device list.
// Nested nets are named "<instance>.<net>"; globals stay global. Top ports
// become Input/Output nets per the .inputs/.outputs directives; ports left
// unclassified fall back to a name heuristic (sum/carry/cout/out/s/co are
// outputs, everything else an input).
FlatNetlist flatten(const Design& design);

// Structural lint: floating gates, dangling internal nets, missing supply
// connections. Diagnostics, not failures.
std::vector<Diagnostic> validate(const FlatNetlist& flat);

inline int count_transistors(const FlatNetlist& flat) {
  return static_cast<int>(flat.devices.size());
}

// Canonical text form; parse(serialize(d)) is structurally equal to d.
std::string serialize(const Design& design);

}  // namespace addersim
