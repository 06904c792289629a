#include "addersim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "addersim/cells.hpp"

namespace addersim {

namespace {

double swing_volts(Signal from, Signal to, const ModelParams& p) {
  if (from.level == Level::LX || to.level == Level::LX) return p.vdd;
  double swing = p.vdd;
  // A Weak 1 sits a Vtn below the rail, a Weak 0 a Vtp above it.
  auto drop = [&](Signal s) {
    if (s.strength != Strength::Weak) return 0.0;
    return s.level == Level::L1 ? p.vtn : p.vtp;
  };
  swing -= drop(from);
  swing -= drop(to);
  return std::max(swing, 0.0);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

double estimate_energy_j(const Trace& trace, const FlatNetlist& flat,
                         const ModelParams& params) {
  std::vector<double> cap(flat.nets.size());
  for (size_t i = 0; i < cap.size(); ++i)
    cap[i] = node_capacitance(flat, params, static_cast<int>(i));

  std::map<int, Signal> last;
  double energy = 0;
  for (const TraceEvent& e : trace.events) {
    auto [it, first] = last.emplace(e.net, e.value);
    if (first) continue;  // the first entry per net is its initial value
    Signal prev = it->second;
    it->second = e.value;
    if (prev.level == e.value.level) continue;  // strength-only change
    double dv = swing_volts(prev, e.value, params);
    energy += 0.5 * cap[e.net] * dv * dv;
  }
  return energy;
}

double estimate_power_uw(const Trace& trace, const FlatNetlist& flat,
                         const ModelParams& params) {
  if (trace.duration_ps <= 0)
    throw std::invalid_argument("trace has zero duration");
  double seconds = static_cast<double>(trace.duration_ps) * 1e-12;
  return estimate_energy_j(trace, flat, params) / seconds * 1e6;
}

double estimate_area_lambda2(const FlatNetlist& flat, const ModelParams& params) {
  double sum = 0;
  for (const FlatDevice& d : flat.devices) sum += d.width * d.length;
  return params.layout_overhead * sum;
}

double extract_cout_delay_ns(const Trace& trace, const FlatNetlist& flat,
                             const Stimulus& stim, const std::string& cout_net) {
  int net = flat.index_of(cout_net);
  if (net < 0)
    throw std::invalid_argument("missing carry output net '" + cout_net + "'");
  std::vector<int64_t> vector_times;
  for (size_t r = 0; r < stim.rows.size(); ++r) {
    double ns = stim.times_ns.empty() ? static_cast<double>(r) * stim.period_ns
                                      : stim.times_ns[r];
    vector_times.push_back(static_cast<int64_t>(std::llround(ns * 1000.0)));
  }
  double worst_ps = 0;
  bool first = true;
  for (const TraceEvent& e : trace.events) {
    if (e.net != net) continue;
    if (first) {
      first = false;  // initial-value record, not a transition
      continue;
    }
    auto it = std::upper_bound(vector_times.begin(), vector_times.end(), e.time_ps);
    if (it == vector_times.begin()) continue;
    int64_t applied = *(it - 1);
    worst_ps = std::max(worst_ps, static_cast<double>(e.time_ps - applied));
  }
  return worst_ps / 1000.0;
}

double total_node_capacitance(const FlatNetlist& flat, const ModelParams& params) {
  double total = 0;
  for (size_t i = 0; i < flat.nets.size(); ++i)
    total += node_capacitance(flat, params, static_cast<int>(i));
  return total;
}

std::string MetricsReport::to_csv() const {
  std::string out = "design,transistors,area_lambda2,cout_delay_ns,avg_power_uw,pdp_uw_ns\n";
  for (const MetricsRow& r : rows) {
    out += r.design;
    if (!r.error.empty()) {
      out += ",error,error,error,error,error\n";
      continue;
    }
    out += ',' + std::to_string(r.transistors);
    out += ',' + fmt(r.area_lambda2);
    out += ',' + fmt(r.cout_delay_ns);
    out += ',' + fmt(r.avg_power_uw);
    out += ',' + fmt(r.pdp_uw_ns);
    out += '\n';
  }
  return out;
}

std::string MetricsReport::to_markdown() const {
  std::string out;
  out += "| design | transistors | area (lambda^2) | cout delay (ns) | avg power (uW) | PDP (uW*ns) | hazards |\n";
  out += "|---|---|---|---|---|---|---|\n";
  for (const MetricsRow& r : rows) {
    out += "| " + r.design + " | ";
    if (!r.error.empty()) {
      out += "error: " + r.error + " | | | | | |\n";
      continue;
    }
    out += std::to_string(r.transistors) + " | ";
    out += fmt(r.area_lambda2) + " | ";
    out += fmt(r.cout_delay_ns) + " | ";
    out += fmt(r.avg_power_uw) + " | ";
    out += fmt(r.pdp_uw_ns) + " | ";
    out += std::to_string(r.hazard_count) + " |\n";
  }
  out += "\nDelay and power columns are switch-level model estimates at the "
         "configured operating point, not silicon or analog-simulator "
         "measurements.\n";
  return out;
}

MetricsReport build_report(const std::vector<std::string>& cell_names,
                           const ModelParams& params) {
  MetricsReport report;
  for (const std::string& name : cell_names) {
    MetricsRow row;
    row.design = name;
    try {
      Design design;
      if (find_cell(name)) {
        design = build_cell(name);
      } else {
        std::ifstream in(name, std::ios::binary);
        if (!in) throw std::runtime_error("cannot read '" + name + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        design = parse(ss.str());
      }
      FlatNetlist flat = flatten(design);
      std::vector<std::string> inputs;
      for (int net : flat.input_nets) inputs.push_back(flat.nets[net].name);
      Stimulus stim = counting_stimulus(inputs, params.period_ns);
      Trace trace = run_transient(flat, stim, params);

      row.transistors = count_transistors(flat);
      row.area_lambda2 = estimate_area_lambda2(flat, params);
      row.cout_delay_ns = extract_cout_delay_ns(trace, flat, stim);
      row.avg_power_uw = estimate_power_uw(trace, flat, params);
      row.pdp_uw_ns = row.avg_power_uw * row.cout_delay_ns;

      for (const std::vector<Level>& vec : stim.rows) {
        std::map<int, Level> vector_inputs;
        for (size_t i = 0; i < vec.size(); ++i)
          vector_inputs[flat.input_nets[i]] = vec[i];
        SolveResult solved = settle(flat, vector_inputs, nullptr, params);
        row.hazard_count +=
            static_cast<int>(detect_hazards(flat, solved).size());
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace addersim
