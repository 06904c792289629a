#include "addersim/netlist.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <set>
#include <sstream>

namespace addersim {

namespace {

struct Token {
  std::string text;
  int col;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) { ++i; continue; }
    if (line[i] == '#') break;
    size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#')
      ++i;
    out.push_back({std::string(line.substr(start, i - start)),
                   static_cast<int>(start) + 1});
  }
  return out;
}

bool valid_ident(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

[[noreturn]] void fail(const std::string& msg, int line, int col) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%d:%d: ", line, col);
  throw ParseError(std::string(buf) + msg, line, col);
}

double parse_dim(const Token& t, std::string_view body, int line) {
  try {
    size_t pos = 0;
    double v = std::stod(std::string(body), &pos);
    if (pos != body.size() || v <= 0) throw std::invalid_argument("");
    return v;
  } catch (...) {
    fail("bad device attribute '" + t.text + "'", line, t.col);
  }
}

void check_dag(const Design& d) {
  // 0 = unseen, 1 = on stack, 2 = done
  std::unordered_map<std::string, int> mark;
  struct Rec {
    const Design& d;
    std::unordered_map<std::string, int>& mark;
    void visit(const Subckt& s) {
      mark[s.name] = 1;
      for (const Instance& inst : s.instances) {
        const Subckt* child = d.find(inst.subckt);
        int m = mark[child->name];
        if (m == 1)
          fail("instance cycle through subckt '" + child->name + "'",
               inst.src_line, 1);
        if (m == 0) visit(*child);
      }
      mark[s.name] = 2;
    }
  } rec{d, mark};
  for (const Subckt& s : d.subckts)
    if (mark[s.name] == 0) rec.visit(s);
}

}  // namespace

const Subckt* Design::find(std::string_view name) const {
  for (const Subckt& s : subckts)
    if (s.name == name) return &s;
  return nullptr;
}

int FlatNetlist::index_of(std::string_view net_name) const {
  for (size_t i = 0; i < nets.size(); ++i)
    if (nets[i].name == net_name) return static_cast<int>(i);
  return -1;
}

std::string Diagnostic::render(std::string_view file) const {
  std::string out(file);
  out += ':';
  out += std::to_string(line);
  out += ": ";
  out += severity;
  out += ": ";
  out += message;
  return out;
}

Design parse(std::string_view text) {
  Design design;
  design.top.clear();
  Subckt* cur = nullptr;
  bool saw_global = false;
  bool saw_top = false;
  int lineno = 0;

  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::vector<Token> tok = tokenize(raw);
    if (tok.empty()) continue;
    const std::string& head = tok[0].text;

    if (head == ".global") {
      if (saw_global) fail("duplicate .global", lineno, tok[0].col);
      if (!design.subckts.empty())
        fail(".global must precede the first .subckt", lineno, tok[0].col);
      if (tok.size() != 3) fail(".global expects two net names", lineno, tok[0].col);
      if (!valid_ident(tok[1].text) || !valid_ident(tok[2].text))
        fail("bad global net name", lineno, tok[1].col);
      design.vdd = tok[1].text;
      design.gnd = tok[2].text;
      if (design.vdd == design.gnd)
        fail("supply nets must differ", lineno, tok[2].col);
      saw_global = true;
      continue;
    }
    if (head == ".subckt") {
      if (cur) fail("nested .subckt", lineno, tok[0].col);
      if (tok.size() < 2) fail(".subckt expects a name", lineno, tok[0].col);
      if (design.find(tok[1].text))
        fail("duplicate definition of subckt '" + tok[1].text + "'", lineno,
             tok[1].col);
      Subckt s;
      s.name = tok[1].text;
      std::set<std::string> seen;
      for (size_t i = 2; i < tok.size(); ++i) {
        if (!valid_ident(tok[i].text))
          fail("bad port name '" + tok[i].text + "'", lineno, tok[i].col);
        if (!seen.insert(tok[i].text).second)
          fail("duplicate port '" + tok[i].text + "'", lineno, tok[i].col);
        if (tok[i].text == design.vdd || tok[i].text == design.gnd)
          fail("port may not shadow a global net", lineno, tok[i].col);
        s.ports.push_back(tok[i].text);
      }
      design.subckts.push_back(std::move(s));
      cur = &design.subckts.back();
      continue;
    }
    if (head == ".ends") {
      if (!cur) fail(".ends without .subckt", lineno, tok[0].col);
      cur = nullptr;
      continue;
    }
    if (head == ".inputs" || head == ".outputs") {
      if (!cur) fail(head + " outside .subckt", lineno, tok[0].col);
      auto& list = head == ".inputs" ? cur->inputs : cur->outputs;
      if (!list.empty()) fail("duplicate " + head, lineno, tok[0].col);
      for (size_t i = 1; i < tok.size(); ++i) {
        if (std::find(cur->ports.begin(), cur->ports.end(), tok[i].text) ==
            cur->ports.end())
          fail(head + " names non-port net '" + tok[i].text + "'", lineno,
               tok[i].col);
        list.push_back(tok[i].text);
      }
      continue;
    }
    if (head == ".top") {
      if (tok.size() != 2) fail(".top expects a subckt name", lineno, tok[0].col);
      if (saw_top) fail("duplicate .top", lineno, tok[0].col);
      design.top = tok[1].text;
      saw_top = true;
      continue;
    }
    if (head[0] == '.')
      fail("unknown directive '" + head + "'", lineno, tok[0].col);

    if (head[0] == 'M' || head[0] == 'm') {
      if (!cur) fail("device outside .subckt", lineno, tok[0].col);
      Device dev;
      dev.id = head.substr(1);
      dev.src_line = lineno;
      if (!valid_ident(dev.id)) fail("bad device id", lineno, tok[0].col);
      for (const Device& other : cur->devices)
        if (other.id == dev.id)
          fail("duplicate definition of device M" + dev.id, lineno, tok[0].col);
      // Attributes are the trailing k=v tokens; the device type is the last
      // bare token, so a net spelled "n" or "p" stays unambiguous.
      size_t end = tok.size();
      while (end > 1 && tok[end - 1].text.find('=') != std::string::npos) --end;
      if (end < 2) fail("missing device type", lineno, tok[0].col);
      const Token& type_tok = tok[end - 1];
      if (type_tok.text == "n" || type_tok.text == "nmos")
        dev.kind = DeviceKind::Nmos;
      else if (type_tok.text == "p" || type_tok.text == "pmos")
        dev.kind = DeviceKind::Pmos;
      else
        fail("bad device type '" + type_tok.text + "' (want n or p)", lineno,
             type_tok.col);
      size_t nterm = end - 2;
      if (nterm != 3 && nterm != 4)
        fail("device expects 3 or 4 terminals", lineno, tok[0].col);
      auto term = [&](size_t i) -> const std::string& {
        if (!valid_ident(tok[1 + i].text))
          fail("bad net name '" + tok[1 + i].text + "'", lineno, tok[1 + i].col);
        return tok[1 + i].text;
      };
      dev.drain = term(0);
      dev.gate = term(1);
      dev.source = term(2);
      if (nterm == 4) dev.bulk = term(3);
      for (size_t i = end; i < tok.size(); ++i) {
        std::string_view t = tok[i].text;
        size_t eq = t.find('=');
        std::string_view key = t.substr(0, eq);
        std::string_view val = t.substr(eq + 1);
        if (key == "w")
          dev.width = parse_dim(tok[i], val, lineno);
        else if (key == "l")
          dev.length = parse_dim(tok[i], val, lineno);
        else
          fail("unknown device attribute '" + std::string(key) + "'", lineno,
               tok[i].col);
      }
      cur->devices.push_back(std::move(dev));
      continue;
    }
    if (head[0] == 'X' || head[0] == 'x') {
      if (!cur) fail("instance outside .subckt", lineno, tok[0].col);
      Instance inst;
      inst.id = head.substr(1);
      inst.src_line = lineno;
      if (!valid_ident(inst.id)) fail("bad instance id", lineno, tok[0].col);
      for (const Instance& other : cur->instances)
        if (other.id == inst.id)
          fail("duplicate definition of instance X" + inst.id, lineno,
               tok[0].col);
      if (tok.size() < 3)
        fail("instance expects nets and a subckt name", lineno, tok[0].col);
      for (size_t i = 1; i + 1 < tok.size(); ++i) {
        if (!valid_ident(tok[i].text))
          fail("bad net name '" + tok[i].text + "'", lineno, tok[i].col);
        inst.nets.push_back(tok[i].text);
      }
      inst.subckt = tok.back().text;
      cur->instances.push_back(std::move(inst));
      continue;
    }
    fail("expected directive, M device or X instance", lineno, tok[0].col);
  }
  if (cur) fail("unterminated .subckt '" + cur->name + "'", lineno + 1, 1);
  if (design.subckts.empty()) fail("no subckt defined", lineno + 1, 1);
  if (design.top.empty()) design.top = design.subckts.back().name;
  if (!design.find(design.top))
    fail("unknown top subckt '" + design.top + "'", lineno + 1, 1);

  // Cross-reference checks.
  for (const Subckt& s : design.subckts) {
    for (const Instance& inst : s.instances) {
      const Subckt* target = design.find(inst.subckt);
      if (!target)
        fail("unknown subckt reference '" + inst.subckt + "'", inst.src_line, 1);
      if (target->ports.size() != inst.nets.size()) {
        char buf[96];
        std::snprintf(buf, sizeof buf,
                      "arity mismatch: X%s binds %zu nets, subckt '%s' has %zu ports",
                      inst.id.c_str(), inst.nets.size(), target->name.c_str(),
                      target->ports.size());
        fail(buf, inst.src_line, 1);
      }
    }
  }
  check_dag(design);
  return design;
}

namespace {

const std::array<std::string_view, 6> kOutputNameHints = {"sum", "carry", "cout",
                                                          "out", "s", "co"};

struct Flattener {
  const Design& design;
  FlatNetlist flat;

  int net_index(const std::string& name, int line, NetKind kind_if_new) {
    int idx = flat.index_of(name);
    if (idx >= 0) return idx;
    flat.nets.push_back({name, kind_if_new, line});
    return static_cast<int>(flat.nets.size()) - 1;
  }

  // bindings: subckt-local net name -> flat net index
  void expand(const Subckt& s, const std::string& prefix,
              std::unordered_map<std::string, int> bindings) {
    auto resolve_net = [&](const std::string& local, int line) -> int {
      if (local == design.vdd) return flat.vdd;
      if (local == design.gnd) return flat.gnd;
      auto it = bindings.find(local);
      if (it != bindings.end()) return it->second;
      int idx = net_index(prefix + local, line, NetKind::Internal);
      bindings.emplace(local, idx);
      return idx;
    };
    for (const Device& d : s.devices) {
      FlatDevice fd;
      fd.id = prefix + "M" + d.id;
      fd.kind = d.kind;
      fd.drain = resolve_net(d.drain, d.src_line);
      fd.gate = resolve_net(d.gate, d.src_line);
      fd.source = resolve_net(d.source, d.src_line);
      if (d.bulk) resolve_net(*d.bulk, d.src_line);  // inert, but named
      fd.width = d.width;
      fd.length = d.length;
      fd.src_line = d.src_line;
      flat.devices.push_back(std::move(fd));
    }
    for (const Instance& inst : s.instances) {
      const Subckt* child = design.find(inst.subckt);
      if (!child)
        throw std::runtime_error("unresolved instance X" + inst.id);
      std::unordered_map<std::string, int> child_bindings;
      for (size_t i = 0; i < child->ports.size(); ++i) {
        int net = resolve_net(inst.nets[i], inst.src_line);
        auto [it, fresh] = child_bindings.emplace(child->ports[i], net);
        if (!fresh && it->second != net)
          throw std::runtime_error("port/net collision on X" + inst.id);
      }
      expand(*child, prefix + "X" + inst.id + ".", std::move(child_bindings));
    }
  }
};

}  // namespace

FlatNetlist flatten(const Design& design) {
  const Subckt* top = design.find(design.top);
  if (!top) throw std::runtime_error("unknown top subckt '" + design.top + "'");

  Flattener fl{design, {}};
  fl.flat.nets.push_back({design.vdd, NetKind::SupplyHigh, 0});
  fl.flat.nets.push_back({design.gnd, NetKind::SupplyLow, 0});
  fl.flat.vdd = 0;
  fl.flat.gnd = 1;

  auto classify = [&](const std::string& port) {
    if (std::find(top->inputs.begin(), top->inputs.end(), port) != top->inputs.end())
      return NetKind::Input;
    if (std::find(top->outputs.begin(), top->outputs.end(), port) != top->outputs.end())
      return NetKind::Output;
    for (std::string_view hint : kOutputNameHints)
      if (port == hint) return NetKind::Output;
    return NetKind::Input;
  };

  std::unordered_map<std::string, int> top_bindings;
  for (const std::string& port : top->ports) {
    int idx = fl.net_index(port, 0, classify(port));
    top_bindings.emplace(port, idx);
    if (fl.flat.nets[idx].kind == NetKind::Input)
      fl.flat.input_nets.push_back(idx);
    else
      fl.flat.output_nets.push_back(idx);
  }
  fl.expand(*top, "", std::move(top_bindings));
  return fl.flat;
}

std::vector<Diagnostic> validate(const FlatNetlist& flat) {
  std::vector<Diagnostic> out;
  size_t n = flat.nets.size();
  std::vector<int> channel_terms(n, 0), gate_terms(n, 0);
  for (const FlatDevice& d : flat.devices) {
    ++channel_terms[d.drain];
    ++channel_terms[d.source];
    ++gate_terms[d.gate];
  }
  for (size_t i = 0; i < n; ++i) {
    const FlatNet& net = flat.nets[i];
    bool driver = flat.is_driver(static_cast<int>(i));
    if (gate_terms[i] > 0 && channel_terms[i] == 0 && !driver)
      out.push_back({"warning", "floating gate: net '" + net.name +
                                    "' drives gates but has no driver",
                     net.src_line});
    if (net.kind == NetKind::Internal && gate_terms[i] + channel_terms[i] == 1)
      out.push_back({"warning",
                     "dangling net: '" + net.name + "' has a single terminal",
                     net.src_line});
  }
  if (!flat.devices.empty()) {
    if (channel_terms[flat.vdd] + gate_terms[flat.vdd] == 0)
      out.push_back({"warning", "no connection to supply rail '" +
                                    flat.nets[flat.vdd].name + "'",
                     0});
    if (channel_terms[flat.gnd] + gate_terms[flat.gnd] == 0)
      out.push_back({"warning", "no connection to supply rail '" +
                                    flat.nets[flat.gnd].name + "'",
                     0});
  }
  return out;
}

namespace {

std::string format_dim(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string serialize(const Design& design) {
  std::string out;
  out += ".global " + design.vdd + " " + design.gnd + "\n";
  for (const Subckt& s : design.subckts) {
    out += "\n.subckt " + s.name;
    for (const std::string& p : s.ports) out += " " + p;
    out += "\n";
    if (!s.inputs.empty()) {
      out += ".inputs";
      for (const std::string& p : s.inputs) out += " " + p;
      out += "\n";
    }
    if (!s.outputs.empty()) {
      out += ".outputs";
      for (const std::string& p : s.outputs) out += " " + p;
      out += "\n";
    }
    for (const Device& d : s.devices) {
      out += "M" + d.id + " " + d.drain + " " + d.gate + " " + d.source;
      if (d.bulk) out += " " + *d.bulk;
      out += d.kind == DeviceKind::Nmos ? " n" : " p";
      if (d.width != 2.0) out += " w=" + format_dim(d.width);
      if (d.length != 2.0) out += " l=" + format_dim(d.length);
      out += "\n";
    }
    for (const Instance& inst : s.instances) {
      out += "X" + inst.id;
      for (const std::string& net : inst.nets) out += " " + net;
      out += " " + inst.subckt + "\n";
    }
    out += ".ends\n";
  }
  out += "\n.top " + design.top + "\n";
  return out;
}

}  // namespace addersim
