#include "addersim/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace addersim {

namespace {

struct OracleBase {
  std::vector<Signal> pinned;  // meaningful where is_source
  std::vector<bool> is_source; // supplies + inputs: path endpoints
  std::vector<Signal> charge;  // every non-source net is also a charge source
};

OracleBase oracle_base(const FlatNetlist& flat, const std::map<int, Level>& inputs,
                       const std::vector<Signal>* prior) {
  int n = static_cast<int>(flat.nets.size());
  OracleBase b;
  b.pinned.assign(n, kPowerOn);
  b.is_source.assign(n, false);
  b.charge.assign(n, kPowerOn);
  for (int i = 0; i < n; ++i) {
    switch (flat.nets[i].kind) {
      case NetKind::SupplyHigh:
        b.pinned[i] = {Level::L1, Strength::Strong};
        b.is_source[i] = true;
        break;
      case NetKind::SupplyLow:
        b.pinned[i] = {Level::L0, Strength::Strong};
        b.is_source[i] = true;
        break;
      case NetKind::Input: {
        auto it = inputs.find(i);
        if (it == inputs.end())
          throw SimError("input net '" + flat.nets[i].name + "' is unbound");
        b.pinned[i] = {it->second, Strength::Strong};
        b.is_source[i] = true;
        break;
      }
      default:
        b.charge[i] = prior ? retained_charge((*prior)[i]) : kPowerOn;
    }
  }
  return b;
}

struct Hop {
  DeviceKind kind;
  bool maybe;  // unknown gate: conducts at best, level unknowable
};

// Folds a base signal through the hops of one path, source end first.
Signal fold_path(Signal base, const std::vector<Hop>& hops) {
  Signal s = base;
  for (auto it = hops.rbegin(); it != hops.rend(); ++it) {
    s = degrade(it->kind, s);
    if (it->maybe) s.level = Level::LX;
  }
  return s;
}

// Joins the contributions of every simple conducting path that starts at
// `net`, visiting each reachable charge/driver source once per path. While
// gate states are being refined, unknown devices conduct optimistically
// (no level poisoning); assignments produced by the enumeration have no
// unknown devices left.
struct PathSolver {
  const FlatNetlist& flat;
  const OracleBase& base;
  const std::vector<SwitchState>& states;  // per device
  bool optimistic = false;
  std::vector<bool> on_path;
  std::vector<Hop> hops;

  Signal solve(int net) {
    on_path.assign(flat.nets.size(), false);
    hops.clear();
    Signal acc = base.is_source[net] ? base.pinned[net] : base.charge[net];
    if (base.is_source[net]) return acc;
    walk(net, acc);
    return acc;
  }

  void walk(int net, Signal& acc) {
    on_path[net] = true;
    for (size_t di = 0; di < flat.devices.size(); ++di) {
      if (states[di] == SwitchState::Off) continue;
      const FlatDevice& d = flat.devices[di];
      int next = -1;
      if (d.drain == net)
        next = d.source;
      else if (d.source == net)
        next = d.drain;
      if (next < 0 || on_path[next]) continue;
      hops.push_back({d.kind, !optimistic && states[di] == SwitchState::Unknown});
      if (base.is_source[next]) {
        acc = resolve(acc, fold_path(base.pinned[next], hops));
      } else {
        acc = resolve(acc, fold_path(base.charge[next], hops));
        walk(next, acc);
      }
      hops.pop_back();
    }
    on_path[net] = false;
  }
};

std::vector<Signal> solve_assignment(const FlatNetlist& flat,
                                     const OracleBase& base,
                                     const std::vector<SwitchState>& states,
                                     bool optimistic = false) {
  PathSolver solver{flat, base, states, optimistic, {}, {}};
  std::vector<Signal> out(flat.nets.size());
  for (size_t i = 0; i < flat.nets.size(); ++i)
    out[i] = solver.solve(static_cast<int>(i));
  return out;
}

// Pessimistic merge of two hypothetical solutions for one net.
Signal combine_hypotheses(Signal a, Signal b) {
  Strength s = std::max(a.strength, b.strength);
  return Signal{a.level == b.level ? a.level : Level::LX, s};
}

}  // namespace

std::vector<Signal> path_enumerate(const FlatNetlist& flat,
                                   const std::map<int, Level>& inputs,
                                   const std::vector<Signal>* prior) {
  if (flat.devices.size() > 32)
    throw SimError("path enumeration budget exceeded (" +
                   std::to_string(flat.devices.size()) + " devices > 32)");
  OracleBase base = oracle_base(flat, inputs, prior);
  size_t ndev = flat.devices.size();

  auto states_of = [&](const std::vector<Signal>& sig) {
    std::vector<SwitchState> st(ndev);
    for (size_t i = 0; i < ndev; ++i)
      st[i] = gate_state(flat.devices[i].kind, sig[flat.devices[i].gate]);
    return st;
  };

  // Refine gate states from the charge/pinned starting point until stable.
  std::vector<Signal> start(flat.nets.size());
  for (size_t i = 0; i < flat.nets.size(); ++i)
    start[i] = base.is_source[i] ? base.pinned[i] : base.charge[i];
  std::vector<SwitchState> states = states_of(start);
  std::vector<Signal> solution;
  int bound = static_cast<int>(flat.nets.size()) * 4 * 3 + 4;
  for (int iter = 0;; ++iter) {
    if (iter > bound)
      throw SimError("path enumeration did not converge (internal error)");
    solution = solve_assignment(flat, base, states, /*optimistic=*/true);
    std::vector<SwitchState> next = states_of(solution);
    if (next == states) break;
    states = std::move(next);
  }

  // Devices still unknown-gated: enumerate their On/Off cases, keep the
  // assignments whose implied gate states are consistent, and join the
  // surviving solutions. The merged-hypothesis rule makes Unknown behave as
  // On, so the unknown case itself needs no third branch.
  std::vector<size_t> unknown;
  for (size_t i = 0; i < ndev; ++i)
    if (states[i] == SwitchState::Unknown) unknown.push_back(i);
  if (unknown.empty()) return solution;

  std::vector<Signal> joined;
  bool any = false;
  for (uint64_t mask = 0; mask < (uint64_t{1} << unknown.size()); ++mask) {
    std::vector<SwitchState> attempt = states;
    for (size_t j = 0; j < unknown.size(); ++j)
      attempt[unknown[j]] =
          (mask >> j) & 1 ? SwitchState::On : SwitchState::Off;
    std::vector<Signal> sol = solve_assignment(flat, base, attempt);
    std::vector<SwitchState> implied = states_of(sol);
    bool consistent = true;
    for (size_t j = 0; j < unknown.size() && consistent; ++j) {
      SwitchState got = implied[unknown[j]];
      if (got != SwitchState::Unknown && got != attempt[unknown[j]])
        consistent = false;
    }
    if (!consistent) continue;
    if (!any) {
      joined = sol;
      any = true;
    } else {
      for (size_t i = 0; i < joined.size(); ++i)
        joined[i] = combine_hypotheses(joined[i], sol[i]);
    }
  }
  if (any) return joined;
  // No assignment was self-consistent (an oscillating structure): fall back
  // to the poisoned solve.
  return solve_assignment(flat, base, states, /*optimistic=*/false);
}

std::string_view to_string(VerifyStatus s) {
  switch (s) {
    case VerifyStatus::StrongCorrect: return "strong-correct";
    case VerifyStatus::WeakCorrect: return "weak-correct";
    case VerifyStatus::ChargedCorrect: return "charged-correct";
    case VerifyStatus::Floating: return "floating";
    case VerifyStatus::Conflict: return "conflict";
    default: return "wrong-level";
  }
}

VerifyStatus classify(bool expected, Signal observed) {
  if (observed.strength == Strength::Floating) return VerifyStatus::Floating;
  if (observed.level == Level::LX) return VerifyStatus::Conflict;
  bool level = observed.level == Level::L1;
  if (level != expected) return VerifyStatus::WrongLevel;
  switch (observed.strength) {
    case Strength::Strong: return VerifyStatus::StrongCorrect;
    case Strength::Weak: return VerifyStatus::WeakCorrect;
    default: return VerifyStatus::ChargedCorrect;
  }
}

bool VerifyReport::level_correct() const {
  for (const VerifyRow& row : rows)
    if (row.status >= VerifyStatus::Floating) return false;
  return true;
}

bool VerifyReport::all_strong() const {
  for (const VerifyRow& row : rows)
    if (row.status != VerifyStatus::StrongCorrect) return false;
  return true;
}

namespace {

std::string csv_inputs(const VerifyRow& row) {
  std::string out;
  for (size_t i = 0; i < 3; ++i) {
    out += ',';
    if (i < row.inputs.size())
      out += row.inputs[i] ? '1' : '0';
    else
      out += '-';
  }
  return out;
}

}  // namespace

std::string VerifyReport::to_csv() const {
  std::string out = "cell,a,b,c,sum_signal,carry_signal,status\n";
  for (const VerifyRow& row : rows) {
    out += cell;
    out += csv_inputs(row);
    for (size_t i = 0; i < 2; ++i) {
      out += ',';
      out += i < row.observed.size() ? to_token(row.observed[i]) : "-";
    }
    out += ',';
    out += to_string(row.status);
    out += '\n';
  }
  return out;
}

std::string VerifyReport::hazards_csv() const {
  std::string out = "cell,a,b,c,hazard,net\n";
  for (const VerifyRow& row : rows) {
    for (const Hazard& h : row.hazards) {
      out += cell;
      out += csv_inputs(row);
      out += ',';
      out += to_string(h.kind);
      out += ',';
      out += h.net < static_cast<int>(net_names.size()) ? net_names[h.net]
                                                        : std::to_string(h.net);
      out += '\n';
    }
  }
  return out;
}

VerifyReport verify_cell(const std::string& name, const ModelParams& params) {
  const CellSpec* spec = find_cell(name);
  if (!spec) throw std::invalid_argument("unknown cell '" + name + "'");
  Design design = build_cell(name);
  FlatNetlist flat = flatten(design);

  VerifyReport report;
  report.cell = name;
  report.input_names = spec->inputs;
  report.output_names = spec->outputs;
  for (const FlatNet& net : flat.nets) report.net_names.push_back(net.name);

  size_t k = spec->inputs.size();
  for (size_t v = 0; v < (1u << k); ++v) {
    VerifyRow row;
    std::map<int, Level> inputs;
    for (size_t i = 0; i < k; ++i) {
      bool bit = (v >> (k - 1 - i)) & 1;
      row.inputs.push_back(bit);
      inputs[flat.input_nets[i]] = bit ? Level::L1 : Level::L0;
    }
    row.expected = spec->reference(row.inputs);
    SolveResult solved = settle(flat, inputs, nullptr, params);
    for (size_t o = 0; o < spec->outputs.size(); ++o) {
      Signal sig = solved.signals[flat.output_nets[o]];
      row.observed.push_back(sig);
      row.statuses.push_back(classify(row.expected[o], sig));
    }
    row.status = *std::max_element(row.statuses.begin(), row.statuses.end());
    row.hazards = detect_hazards(flat, solved);
    report.rows.push_back(std::move(row));
  }
  return report;
}

namespace {

using BoolFn = bool (*)(bool, bool, bool);

IdentityCheck brute_force(std::string name, bool expect_equal, int arity,
                          BoolFn lhs, BoolFn rhs) {
  IdentityCheck check;
  check.name = std::move(name);
  check.expect_equal = expect_equal;
  check.equal = true;
  int count = 1 << arity;
  for (int v = 0; v < count; ++v) {
    bool a = (v >> (arity - 1)) & 1;
    bool b = (v >> (arity - 2)) & 1;
    bool c = arity == 3 ? (v & 1) : false;
    if (lhs(a, b, c) != rhs(a, b, c)) {
      check.equal = false;
      check.mismatches.push_back({a, b, c});
    }
  }
  return check;
}

bool majority(bool a, bool b, bool c) { return (a && b) || (b && c) || (c && a); }
bool parity(bool a, bool b, bool c) { return a ^ b ^ c; }

}  // namespace

std::vector<IdentityCheck> check_identities() {
  std::vector<IdentityCheck> out;
  out.push_back(brute_force(
      "ab + (a^b)c == majority", true, 3,
      [](bool a, bool b, bool c) { return (a && b) || ((a != b) && c); },
      majority));
  out.push_back(brute_force(
      "ab(a^b)' + (a^b)c == majority", true, 3,
      [](bool a, bool b, bool c) {
        return (a && b && !(a != b)) || ((a != b) && c);
      },
      majority));
  out.push_back(brute_force(
      "(a'b)'b + (a^b)c == majority", true, 3,
      [](bool a, bool b, bool c) {
        return (!(!a && b) && b) || ((a != b) && c);
      },
      majority));
  out.push_back(brute_force(
      "(a^b)'a + (a^b)c == majority", true, 3,
      [](bool a, bool b, bool c) { return (!(a != b) && a) || ((a != b) && c); },
      majority));
  out.push_back(brute_force(
      "(a^b)c' + (a^b)'c == parity", true, 3,
      [](bool a, bool b, bool c) { return ((a != b) && !c) || (!(a != b) && c); },
      parity));
  out.push_back(brute_force(
      "(a'b)'b == ab", true, 2,
      [](bool a, bool b, bool) { return !(!a && b) && b; },
      [](bool a, bool b, bool) { return a && b; }));
  // The dropped-prime reading (a'+b')b collapses to a'b; pinned unequal.
  out.push_back(brute_force(
      "(a'+b')b == ab", false, 2,
      [](bool a, bool b, bool) { return (!a || !b) && b; },
      [](bool a, bool b, bool) { return a && b; }));
  return out;
}

}  // namespace addersim
