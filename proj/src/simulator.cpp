#include "addersim/simulator.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

namespace addersim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double device_res(const FlatDevice& d, const ModelParams& p) {
  double r_sq = d.kind == DeviceKind::Nmos ? p.rn : p.rp;
  return r_sq * (d.length / d.width);
}

}  // namespace

void ModelParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0))
      throw std::invalid_argument(std::string("model parameter ") + name +
                                  " must be positive");
  };
  positive(vdd, "vdd");
  positive(vtn, "vtn");
  positive(vtp, "vtp");
  positive(rn, "rn");
  positive(rp, "rp");
  positive(cg, "cg");
  positive(csd, "csd");
  positive(freq, "freq");
  positive(period_ns, "period_ns");
  positive(layout_overhead, "layout_overhead");
  if (vtn >= vdd) throw std::invalid_argument("vtn must be below vdd");
  if (vtp >= vdd) throw std::invalid_argument("vtp must be below vdd");
}

std::vector<Ccc> partition_ccc(const FlatNetlist& flat) {
  int n = static_cast<int>(flat.nets.size());
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  std::function<int(int)> root = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const FlatDevice& d : flat.devices) {
    if (flat.is_driver(d.drain) || flat.is_driver(d.source)) continue;
    parent[root(d.drain)] = root(d.source);
  }
  // Group non-driver nets, then attach devices and the driver nets they pull
  // into each component.
  std::map<int, Ccc> groups;
  for (int i = 0; i < n; ++i)
    if (!flat.is_driver(i)) groups[root(i)].nets.push_back(i);
  for (size_t di = 0; di < flat.devices.size(); ++di) {
    const FlatDevice& d = flat.devices[di];
    std::set<int> touched;
    for (int term : {d.drain, d.source}) {
      if (!flat.is_driver(term))
        touched.insert(root(term));
    }
    for (int g : touched) {
      groups[g].devices.push_back(static_cast<int>(di));
      for (int term : {d.drain, d.source})
        if (flat.is_driver(term)) groups[g].nets.push_back(term);
    }
  }
  std::vector<Ccc> out;
  for (auto& [key, ccc] : groups) {
    std::sort(ccc.nets.begin(), ccc.nets.end());
    ccc.nets.erase(std::unique(ccc.nets.begin(), ccc.nets.end()), ccc.nets.end());
    std::sort(ccc.devices.begin(), ccc.devices.end());
    out.push_back(std::move(ccc));
  }
  return out;
}

namespace {

struct BaseState {
  std::vector<Signal> pinned;   // valid only where is_pinned
  std::vector<bool> is_pinned;  // supplies + inputs
  std::vector<Signal> charge;   // contribution of every non-pinned net
};

BaseState make_base(const FlatNetlist& flat, const std::map<int, Level>& inputs,
                    const std::vector<Signal>* prior) {
  int n = static_cast<int>(flat.nets.size());
  BaseState b;
  b.pinned.assign(n, kPowerOn);
  b.is_pinned.assign(n, false);
  b.charge.assign(n, kPowerOn);
  for (int i = 0; i < n; ++i) {
    switch (flat.nets[i].kind) {
      case NetKind::SupplyHigh:
        b.pinned[i] = {Level::L1, Strength::Strong};
        b.is_pinned[i] = true;
        break;
      case NetKind::SupplyLow:
        b.pinned[i] = {Level::L0, Strength::Strong};
        b.is_pinned[i] = true;
        break;
      case NetKind::Input: {
        auto it = inputs.find(i);
        if (it == inputs.end())
          throw SimError("input net '" + flat.nets[i].name + "' is unbound");
        b.pinned[i] = {it->second, Strength::Strong};
        b.is_pinned[i] = true;
        break;
      }
      default:
        b.charge[i] = prior ? retained_charge((*prior)[i]) : kPowerOn;
    }
  }
  for (auto& [net, level] : inputs) {
    if (net < 0 || net >= n || flat.nets[net].kind != NetKind::Input)
      throw SimError("stimulus binds non-input net index " + std::to_string(net));
    (void)level;
  }
  return b;
}

// One relaxation pass with frozen switch states: joins contributions until
// signals and winning-path resistances stop changing. In pessimistic mode a
// maybe-conducting (Unknown) device still delivers its conducting strength
// but with the level poisoned to LX; the optimistic mode is used while gate
// states are still being refined, so a transiently-unknown gate cannot lock
// the solve into a self-justifying X.
void propagate(const FlatNetlist& flat, const BaseState& base,
               const std::vector<SwitchState>& states, const ModelParams& params,
               bool pessimistic, std::vector<Signal>& sig,
               std::vector<double>& res) {
  int n = static_cast<int>(flat.nets.size());
  for (int i = 0; i < n; ++i) {
    if (base.is_pinned[i]) {
      sig[i] = base.pinned[i];
      res[i] = 0.0;
    } else {
      sig[i] = base.charge[i];
      res[i] = kInf;
    }
  }
  int max_sweeps = 2 * n + 8;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    for (size_t di = 0; di < flat.devices.size(); ++di) {
      const FlatDevice& d = flat.devices[di];
      if (states[di] == SwitchState::Off) continue;
      double r_dev = device_res(d, params);
      auto conduct = [&](int from, int to) {
        if (base.is_pinned[to]) return;  // ideal drivers absorb everything
        Signal cand = degrade(d.kind, sig[from]);
        if (pessimistic && states[di] == SwitchState::Unknown)
          cand.level = Level::LX;
        double cand_res = res[from] + r_dev;
        Signal joined = resolve(sig[to], cand);
        double new_res = res[to];
        if (cand.strength > sig[to].strength)
          new_res = cand_res;
        else if (cand.strength == sig[to].strength)
          new_res = std::min(res[to], cand_res);
        if (joined != sig[to] || new_res != res[to]) {
          sig[to] = joined;
          res[to] = new_res;
          changed = true;
        }
      };
      conduct(d.drain, d.source);
      conduct(d.source, d.drain);
    }
    if (!changed) return;
  }
  throw SimError("relaxation failed to stabilize (internal error)");
}

std::vector<SwitchState> switch_states(const FlatNetlist& flat,
                                       const std::vector<Signal>& sig) {
  std::vector<SwitchState> states(flat.devices.size());
  for (size_t i = 0; i < flat.devices.size(); ++i)
    states[i] = gate_state(flat.devices[i].kind, sig[flat.devices[i].gate]);
  return states;
}

}  // namespace

SolveResult settle(const FlatNetlist& flat, const std::map<int, Level>& inputs,
                   const std::vector<Signal>* prior, const ModelParams& params) {
  params.validate();
  BaseState base = make_base(flat, inputs, prior);
  int n = static_cast<int>(flat.nets.size());

  SolveResult r;
  r.signals.assign(n, kPowerOn);
  r.path_res_ohm.assign(n, kInf);
  for (int i = 0; i < n; ++i)
    r.signals[i] = base.is_pinned[i] ? base.pinned[i] : base.charge[i];

  int bound = n * 4 * 3;
  std::vector<SwitchState> states = switch_states(flat, r.signals);
  int iter = 0;
  for (bool pessimistic : {false, true}) {
    while (true) {
      if (++iter > bound)
        throw SimError("settle did not converge (internal error)");
      propagate(flat, base, states, params, pessimistic, r.signals,
                r.path_res_ohm);
      std::vector<SwitchState> next = switch_states(flat, r.signals);
      r.iterations = iter;
      if (next == states) break;
      states = std::move(next);
    }
  }
  return r;
}

Stimulus Stimulus::from_csv(std::string_view text, double period_ns) {
  Stimulus s;
  s.period_ns = period_ns;
  std::istringstream in{std::string(text)};
  std::string line;
  bool timed = false;
  bool header = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
      size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    for (std::string& f : fields) {
      while (!f.empty() && std::isspace(static_cast<unsigned char>(f.front())))
        f.erase(f.begin());
      while (!f.empty() && std::isspace(static_cast<unsigned char>(f.back())))
        f.pop_back();
    }
    if (header) {
      header = false;
      timed = !fields.empty() && fields[0] == "time_ns";
      size_t first = timed ? 1 : 0;
      if (fields.size() <= first)
        throw StimulusError("stimulus header declares no inputs");
      for (size_t i = first; i < fields.size(); ++i) {
        if (fields[i].empty())
          throw StimulusError("empty input name in stimulus header");
        s.input_names.push_back(fields[i]);
      }
      continue;
    }
    size_t first = timed ? 1 : 0;
    if (fields.size() != first + s.input_names.size())
      throw StimulusError("stimulus row " + std::to_string(lineno) +
                          " has wrong field count");
    if (timed) {
      try {
        s.times_ns.push_back(std::stod(fields[0]));
      } catch (...) {
        throw StimulusError("bad time on stimulus row " + std::to_string(lineno));
      }
      if (s.times_ns.size() > 1 && s.times_ns.back() <= s.times_ns[s.times_ns.size() - 2])
        throw StimulusError("stimulus times must increase");
    }
    std::vector<Level> row;
    for (size_t i = first; i < fields.size(); ++i) {
      if (fields[i] == "0")
        row.push_back(Level::L0);
      else if (fields[i] == "1")
        row.push_back(Level::L1);
      else
        throw StimulusError("bad level '" + fields[i] + "' on stimulus row " +
                            std::to_string(lineno));
    }
    s.rows.push_back(std::move(row));
  }
  if (s.rows.empty()) throw StimulusError("stimulus has no vectors");
  return s;
}

std::string Stimulus::to_csv() const {
  std::string out;
  bool timed = !times_ns.empty();
  if (timed) out += "time_ns";
  for (size_t i = 0; i < input_names.size(); ++i) {
    if (timed || i) out += ',';
    out += input_names[i];
  }
  out += '\n';
  for (size_t r = 0; r < rows.size(); ++r) {
    if (timed) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", times_ns[r]);
      out += buf;
    }
    for (size_t i = 0; i < rows[r].size(); ++i) {
      if (timed || i) out += ',';
      out += rows[r][i] == Level::L1 ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

Stimulus counting_stimulus(const std::vector<std::string>& input_names,
                           double period_ns) {
  Stimulus s;
  s.input_names = input_names;
  s.period_ns = period_ns;
  size_t k = input_names.size();
  for (size_t v = 0; v < (1u << k); ++v) {
    std::vector<Level> row(k);
    for (size_t i = 0; i < k; ++i)
      row[i] = ((v >> (k - 1 - i)) & 1) ? Level::L1 : Level::L0;
    s.rows.push_back(std::move(row));
  }
  return s;
}

std::string Trace::to_csv() const {
  std::string out = "time_ps,net,signal\n";
  for (const TraceEvent& e : events) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(e.time_ps));
    out += buf;
    out += ',';
    out += net_names[e.net];
    out += ',';
    out += to_token(e.value);
    out += '\n';
  }
  return out;
}

double node_capacitance(const FlatNetlist& flat, const ModelParams& params,
                        int net) {
  double c = 0;
  for (const FlatDevice& d : flat.devices) {
    if (d.gate == net) c += params.cg;
    if (d.drain == net) c += params.csd;
    if (d.source == net) c += params.csd;
  }
  return c;
}

namespace {

struct Pending {
  int64_t time;
  int net;
  uint64_t seq;
  Signal target;
  bool operator>(const Pending& o) const {
    if (time != o.time) return time > o.time;
    if (net != o.net) return net > o.net;
    return seq > o.seq;
  }
};

}  // namespace

Trace run_transient(const FlatNetlist& flat, const Stimulus& stim,
                    const ModelParams& params) {
  params.validate();
  if (stim.rows.empty()) throw StimulusError("stimulus has no vectors");
  if (stim.input_names.size() != flat.input_nets.size())
    throw StimulusError("stimulus binds " + std::to_string(stim.input_names.size()) +
                        " inputs, netlist declares " +
                        std::to_string(flat.input_nets.size()));
  std::vector<int> stim_net(stim.input_names.size(), -1);
  for (size_t i = 0; i < stim.input_names.size(); ++i) {
    int idx = flat.index_of(stim.input_names[i]);
    if (idx < 0 || flat.nets[idx].kind != NetKind::Input)
      throw StimulusError("stimulus input '" + stim.input_names[i] +
                          "' is not an input net");
    stim_net[i] = idx;
  }
  for (int input : flat.input_nets)
    if (std::find(stim_net.begin(), stim_net.end(), input) == stim_net.end())
      throw StimulusError("stimulus does not bind input net '" +
                          flat.nets[input].name + "'");

  int n = static_cast<int>(flat.nets.size());
  auto to_ps = [](double ns) { return static_cast<int64_t>(std::llround(ns * 1000.0)); };
  int64_t period_ps = to_ps(stim.period_ns);
  auto row_time = [&](size_t r) {
    return stim.times_ns.empty() ? static_cast<int64_t>(r) * period_ps
                                 : to_ps(stim.times_ns[r]);
  };

  Trace trace;
  trace.duration_ps = row_time(stim.rows.size() - 1) + period_ps;
  trace.net_names.reserve(n);
  for (const FlatNet& net : flat.nets) trace.net_names.push_back(net.name);

  std::vector<Signal> cur(n, kPowerOn);
  cur[flat.vdd] = {Level::L1, Strength::Strong};
  cur[flat.gnd] = {Level::L0, Strength::Strong};
  for (int i = 0; i < n; ++i) trace.events.push_back({0, i, cur[i]});

  std::priority_queue<Pending, std::vector<Pending>, std::greater<Pending>> queue;
  uint64_t seq = 0;
  // scheduled[net] = (seq, target) of the live pending event, if any
  std::vector<std::pair<uint64_t, Signal>> scheduled(n, {0, kPowerOn});
  std::vector<bool> has_pending(n, false);

  for (size_t r = 0; r < stim.rows.size(); ++r) {
    int64_t t = row_time(r);
    for (size_t i = 0; i < stim_net.size(); ++i)
      queue.push({t, stim_net[i], ++seq, {stim.rows[r][i], Strength::Strong}});
  }
  // Input edges are authoritative; they bypass the scheduled[] bookkeeping
  // used for solved (internal) transitions, so mark them always-live.
  std::vector<bool> is_input(n, false);
  for (int i : flat.input_nets) is_input[i] = true;

  size_t applied = 0;
  size_t budget = (flat.nets.size() + 4) * (stim.rows.size() + 1) * 64;
  while (!queue.empty()) {
    Pending ev = queue.top();
    queue.pop();
    if (!is_input[ev.net]) {
      if (!has_pending[ev.net] || scheduled[ev.net].first != ev.seq) continue;
      has_pending[ev.net] = false;
    }
    if (ev.time >= trace.duration_ps) continue;
    if (cur[ev.net] == ev.target) continue;
    if (++applied > budget)
      throw SimError("transient did not quiesce (internal error)");
    cur[ev.net] = ev.target;
    trace.events.push_back({ev.time, ev.net, ev.target});

    // Re-solve the steady state from the new situation and (re)schedule
    // every net whose target moved.
    std::map<int, Level> input_levels;
    for (int i : flat.input_nets) input_levels[i] = cur[i].level;
    SolveResult solved = settle(flat, input_levels, &cur, params);
    for (int i = 0; i < n; ++i) {
      if (flat.is_driver(i)) continue;
      Signal target = solved.signals[i];
      if (target == cur[i]) {
        has_pending[i] = false;  // cause evaporated; cancel anything pending
        continue;
      }
      if (has_pending[i] && scheduled[i].second == target) continue;
      double res = solved.path_res_ohm[i];
      int64_t tau = std::isfinite(res)
                        ? static_cast<int64_t>(std::llround(
                              res * node_capacitance(flat, params, i) * 1e12))
                        : 0;
      scheduled[i] = {++seq, target};
      has_pending[i] = true;
      queue.push({ev.time + tau, i, seq, target});
    }
  }
  std::stable_sort(trace.events.begin(), trace.events.end(),
                   [](const TraceEvent& a, const TraceEvent& b) {
                     if (a.time_ps != b.time_ps) return a.time_ps < b.time_ps;
                     return a.net < b.net;
                   });
  return trace;
}

std::string_view to_string(HazardKind k) {
  switch (k) {
    case HazardKind::StaticPath: return "static-path";
    case HazardKind::FloatingOutput: return "floating-output";
    default: return "weak-output";
  }
}

std::vector<Hazard> detect_hazards(const FlatNetlist& flat,
                                   const SolveResult& settled) {
  int n = static_cast<int>(flat.nets.size());
  std::vector<SwitchState> states = switch_states(flat, settled.signals);

  // Reachability from each rail through conducting channels; driver nets
  // never relay.
  auto reach_from = [&](int source) {
    std::vector<bool> seen(n, false);
    std::vector<int> stack{source};
    seen[source] = true;
    while (!stack.empty()) {
      int net = stack.back();
      stack.pop_back();
      if (net != source && flat.is_driver(net)) continue;
      for (size_t di = 0; di < flat.devices.size(); ++di) {
        if (states[di] == SwitchState::Off) continue;
        const FlatDevice& d = flat.devices[di];
        int other = d.drain == net ? d.source : d.source == net ? d.drain : -1;
        if (other >= 0 && !seen[other]) {
          seen[other] = true;
          stack.push_back(other);
        }
      }
    }
    return seen;
  };
  std::vector<bool> from_vdd = reach_from(flat.vdd);
  std::vector<bool> from_gnd = reach_from(flat.gnd);

  std::vector<Hazard> out;
  for (int i = 0; i < n; ++i) {
    if (flat.is_driver(i)) continue;
    if (from_vdd[i] && from_gnd[i]) out.push_back({HazardKind::StaticPath, i});
  }
  for (int i : flat.output_nets) {
    Strength s = settled.signals[i].strength;
    if (s <= Strength::Charged) out.push_back({HazardKind::FloatingOutput, i});
    if (s == Strength::Weak) out.push_back({HazardKind::WeakOutput, i});
  }
  return out;
}

}  // namespace addersim
