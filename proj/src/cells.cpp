#include "addersim/cells.hpp"

#include <stdexcept>

namespace addersim {

namespace {

Subckt& add_subckt(Design& d, std::string name, std::vector<std::string> ports,
                   std::vector<std::string> inputs = {},
                   std::vector<std::string> outputs = {}) {
  Subckt s;
  s.name = std::move(name);
  s.ports = std::move(ports);
  s.inputs = std::move(inputs);
  s.outputs = std::move(outputs);
  d.subckts.push_back(std::move(s));
  return d.subckts.back();
}

void mos(Subckt& s, std::string id, DeviceKind kind, std::string drain,
         std::string gate, std::string source, std::string bulk = "") {
  Device dev;
  dev.id = std::move(id);
  dev.kind = kind;
  dev.drain = std::move(drain);
  dev.gate = std::move(gate);
  dev.source = std::move(source);
  if (!bulk.empty()) dev.bulk = std::move(bulk);
  s.devices.push_back(std::move(dev));
}

void inst(Subckt& s, std::string id, std::vector<std::string> nets,
          std::string subckt) {
  Instance i;
  i.id = std::move(id);
  i.nets = std::move(nets);
  i.subckt = std::move(subckt);
  s.instances.push_back(std::move(i));
}

constexpr DeviceKind N = DeviceKind::Nmos;
constexpr DeviceKind P = DeviceKind::Pmos;

// Two-PMOS cross pass pair with an always-on weak pulldown. out = a^b with
// a strong 1 and a weak 0; no rail fight on any vector.
void add_xor3(Design& d) {
  Subckt& s = add_subckt(d, "xor3", {"a", "b", "out"}, {"a", "b"}, {"out"});
  mos(s, "1", P, "out", "a", "b");
  mos(s, "2", P, "out", "b", "a");
  mos(s, "3", P, "out", "gnd", "gnd");
}

// Inverter whose pull-up rail is a data signal: out = in' & rail.
void add_tsinv(Design& d) {
  Subckt& s = add_subckt(d, "tsinv", {"in", "rail", "out"}, {"in", "rail"},
                         {"out"});
  mos(s, "1", P, "out", "in", "rail");
  mos(s, "2", N, "out", "in", "gnd");
}

// Common-gate pair with diffusion inputs; bulks tied to the diffusion
// inputs (parsed, inert at switch level). out = g'p + gn.
void add_gdi(Design& d) {
  Subckt& s = add_subckt(d, "gdi", {"g", "p", "n", "out"}, {"g", "p", "n"},
                         {"out"});
  mos(s, "1", P, "out", "g", "p", "p");
  mos(s, "2", N, "out", "g", "n", "n");
}

// Cross-coupled NMOS pass pair plus a series PMOS pull-up: out = a xnor b,
// strong except for the weak 1 at a=b=1.
void add_xnor4(Design& d) {
  Subckt& s = add_subckt(d, "xnor4", {"a", "b", "out"}, {"a", "b"}, {"out"});
  mos(s, "1", N, "out", "a", "b");
  mos(s, "2", N, "out", "b", "a");
  mos(s, "3", P, "out", "a", "m1");
  mos(s, "4", P, "m1", "b", "vdd");
}

void add_inv(Design& d) {
  Subckt& s = add_subckt(d, "inv", {"in", "out"}, {"in"}, {"out"});
  mos(s, "1", P, "out", "in", "vdd");
  mos(s, "2", N, "out", "in", "gnd");
}

// Complemented majority, mirror style: pull-down ab + c(a+b), mirrored
// pull-up. 10 devices.
void add_maj_n(Design& d) {
  Subckt& s = add_subckt(d, "maj_n", {"a", "b", "c", "out"}, {"a", "b", "c"},
                         {"out"});
  mos(s, "1", N, "out", "a", "m1");
  mos(s, "2", N, "out", "b", "m1");
  mos(s, "3", N, "m1", "c", "gnd");
  mos(s, "4", N, "out", "a", "m2");
  mos(s, "5", N, "m2", "b", "gnd");
  mos(s, "6", P, "out", "a", "m3");
  mos(s, "7", P, "out", "b", "m3");
  mos(s, "8", P, "m3", "c", "vdd");
  mos(s, "9", P, "out", "a", "m4");
  mos(s, "10", P, "m4", "b", "vdd");
}

// Complemented sum given cn = majority': pull-down abc + (a+b+c)cn,
// mirrored pull-up. 14 devices.
void add_sum_n(Design& d) {
  Subckt& s = add_subckt(d, "sum_n", {"a", "b", "c", "cn", "out"},
                         {"a", "b", "c", "cn"}, {"out"});
  mos(s, "1", N, "out", "a", "m1");
  mos(s, "2", N, "m1", "b", "m2");
  mos(s, "3", N, "m2", "c", "gnd");
  mos(s, "4", N, "out", "cn", "m3");
  mos(s, "5", N, "m3", "a", "gnd");
  mos(s, "6", N, "m3", "b", "gnd");
  mos(s, "7", N, "m3", "c", "gnd");
  mos(s, "8", P, "out", "a", "m4");
  mos(s, "9", P, "m4", "b", "m5");
  mos(s, "10", P, "m5", "c", "vdd");
  mos(s, "11", P, "out", "cn", "m6");
  mos(s, "12", P, "m6", "a", "vdd");
  mos(s, "13", P, "m6", "b", "vdd");
  mos(s, "14", P, "m6", "c", "vdd");
}

std::vector<std::string> adder_ports() { return {"a", "b", "c", "sum", "cout"}; }

Design build_conv28() {
  Design d;
  add_maj_n(d);
  add_sum_n(d);
  add_inv(d);
  Subckt& top = add_subckt(d, "conv28", adder_ports(), {"a", "b", "c"},
                           {"sum", "cout"});
  inst(top, "1", {"a", "b", "c", "cn"}, "maj_n");
  inst(top, "2", {"a", "b", "c", "cn", "sn"}, "sum_n");
  inst(top, "3", {"cn", "cout"}, "inv");
  inst(top, "4", {"sn", "sum"}, "inv");
  d.top = "conv28";
  return d;
}

Design build_chow8() {
  Design d;
  add_xor3(d);
  Subckt& top = add_subckt(d, "chow8", adder_ports(), {"a", "b", "c"},
                           {"sum", "cout"});
  inst(top, "1", {"a", "b", "x1"}, "xor3");
  inst(top, "2", {"x1", "c", "sum"}, "xor3");
  mos(top, "1", P, "cout", "x1", "a");
  mos(top, "2", N, "cout", "x1", "c");
  d.top = "chow8";
  return d;
}

Design build_serf10() {
  Design d;
  add_xnor4(d);
  Subckt& top = add_subckt(d, "serf10", adder_ports(), {"a", "b", "c"},
                           {"sum", "cout"});
  inst(top, "1", {"a", "b", "xn"}, "xnor4");
  inst(top, "2", {"xn", "c", "sum"}, "xnor4");
  mos(top, "1", N, "cout", "xn", "a");
  mos(top, "2", P, "cout", "xn", "c");
  d.top = "serf10";
  return d;
}

Design build_p12() {
  Design d;
  add_xor3(d);
  add_gdi(d);
  Subckt& top = add_subckt(d, "p12", adder_ports(), {"a", "b", "c"},
                           {"sum", "cout"});
  inst(top, "1", {"a", "b", "x1"}, "xor3");
  inst(top, "2", {"x1", "c", "sum"}, "xor3");
  inst(top, "3", {"a", "gnd", "b", "u"}, "gdi");    // u = ab
  inst(top, "4", {"x1", "gnd", "c", "v"}, "gdi");   // v = (a^b)c
  inst(top, "5", {"u", "v", "vdd", "cout"}, "gdi"); // cout = u + v
  d.top = "p12";
  return d;
}

Design build_p10() {
  Design d;
  add_xor3(d);
  add_tsinv(d);
  Subckt& top = add_subckt(d, "p10", adder_ports(), {"a", "b", "c"},
                           {"sum", "cout"});
  inst(top, "1", {"a", "b", "x1"}, "xor3");
  inst(top, "2", {"x1", "c", "sum"}, "xor3");
  inst(top, "3", {"x1", "b", "u"}, "tsinv");  // u = (a^b)' & b = ab
  mos(top, "1", P, "cout", "x1", "u");
  mos(top, "2", N, "cout", "x1", "c");
  d.top = "p10";
  return d;
}

Design build_p8() {
  Design d;
  add_xor3(d);
  Subckt& top = add_subckt(d, "p8", adder_ports(), {"a", "b", "c"},
                           {"sum", "cout"});
  inst(top, "1", {"a", "b", "x1"}, "xor3");
  inst(top, "2", {"x1", "c", "sum"}, "xor3");
  mos(top, "1", P, "cout", "x1", "b");
  mos(top, "2", N, "cout", "x1", "c");
  d.top = "p8";
  return d;
}

// Two-transistor stages throughout; the (a^b) stage has no complement
// available, so some vectors settle to wrong levels. Those are findings the
// verifier reports, not bugs in the builder.
Design build_p6() {
  Design d;
  Subckt& top = add_subckt(d, "p6", adder_ports(), {"a", "b", "c"},
                           {"sum", "cout"});
  mos(top, "1", P, "x1", "b", "a");
  mos(top, "2", N, "x1", "b", "gnd");
  mos(top, "3", P, "cout", "x1", "a");
  mos(top, "4", N, "cout", "x1", "c");
  mos(top, "5", P, "sum", "x1", "c");
  mos(top, "6", N, "sum", "x1", "gnd");
  d.top = "p6";
  return d;
}

Design build_primitive(std::string_view name) {
  Design d;
  if (name == "tsinv") add_tsinv(d);
  if (name == "xor3") add_xor3(d);
  if (name == "gdi") add_gdi(d);
  d.top = std::string(name);
  return d;
}

std::vector<bool> adder_ref(const std::vector<bool>& in) {
  auto [sum, carry] = reference_adder(in[0], in[1], in[2]);
  return {sum, carry};
}

}  // namespace

const std::vector<CellSpec>& corpus() {
  static const std::vector<CellSpec> cells = [] {
    std::vector<CellSpec> v;
    auto adder = [&](std::string name, int count, std::string note) {
      v.push_back({std::move(name),
                   {"a", "b", "c"},
                   {"sum", "cout"},
                   count,
                   std::move(note),
                   adder_ref});
    };
    adder("conv28", 28, "complementary static CMOS, mirror sum/carry stages");
    adder("chow8", 8, "two 3T XOR stages, 2T carry pass pair (a-side)");
    adder("serf10", 10, "two 4T XNOR stages, 2T carry mux");
    adder("p12", 12, "3T XOR sum, carry from three 2T common-gate cells");
    adder("p8", 8, "3T XOR sum, 2T carry pass pair (b-side)");
    adder("p10", 10, "3T XOR sum, signal-rail inverter ab, 2T carry mux");
    adder("p6", 6, "2T stages only; complement-free, degrades on some vectors");
    v.push_back({"tsinv",
                 {"in", "rail"},
                 {"out"},
                 2,
                 "inverter with a data signal as its pull-up rail",
                 [](const std::vector<bool>& in) {
                   return std::vector<bool>{!in[0] && in[1]};
                 }});
    v.push_back({"xor3",
                 {"a", "b"},
                 {"out"},
                 3,
                 "3T XOR: PMOS cross pass pair plus weak pulldown",
                 [](const std::vector<bool>& in) {
                   return std::vector<bool>{in[0] != in[1]};
                 }});
    v.push_back({"gdi",
                 {"g", "p", "n"},
                 {"out"},
                 2,
                 "common-gate pair with diffusion inputs: out = g'p + gn",
                 [](const std::vector<bool>& in) {
                   return std::vector<bool>{gdi_function(in[0], in[1], in[2])};
                 }});
    return v;
  }();
  return cells;
}

const CellSpec* find_cell(std::string_view name) {
  for (const CellSpec& c : corpus())
    if (c.name == name) return &c;
  return nullptr;
}

Design build_cell(std::string_view name) {
  if (name == "conv28") return build_conv28();
  if (name == "chow8") return build_chow8();
  if (name == "serf10") return build_serf10();
  if (name == "p12") return build_p12();
  if (name == "p10") return build_p10();
  if (name == "p8") return build_p8();
  if (name == "p6") return build_p6();
  if (name == "tsinv" || name == "xor3" || name == "gdi")
    return build_primitive(name);
  throw std::invalid_argument("unknown cell '" + std::string(name) + "'");
}

}  // namespace addersim
