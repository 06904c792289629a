// addersim: switch-level simulator and comparison tool for the 1-bit full
// adder corpus. Subcommands: list, netlist, verify, sim, lint, compare.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "addersim/cells.hpp"
#include "addersim/metrics.hpp"
#include "addersim/netlist.hpp"
#include "addersim/oracle.hpp"
#include "addersim/simulator.hpp"

namespace {

using namespace addersim;

constexpr int kExitVerifyFailed = 2;
constexpr int kExitParseIo = 3;
constexpr int kExitStimulus = 4;

const std::vector<std::string> kCompareAll = {"conv28", "chow8", "serf10",
                                              "p12",    "p8",    "p10",
                                              "p6"};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-")
    std::fputs(content.c_str(), stdout);
  else
    write_file(out_path, content);
}

// ./addersim.cfg (or $ADDERSIM_CONFIG) holds key=value defaults; explicit
// flags override them.
void load_config(ModelParams& params) {
  std::string path = "addersim.cfg";
  if (const char* env = std::getenv("ADDERSIM_CONFIG")) path = env;
  std::ifstream in(path);
  if (!in) return;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
      line.pop_back();
    size_t start = 0;
    while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start])))
      ++start;
    line.erase(0, start);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
    std::string key = line.substr(0, eq);
    double value = std::stod(line.substr(eq + 1));
    if (key == "vdd") params.vdd = value;
    else if (key == "vtn") params.vtn = value;
    else if (key == "vtp") params.vtp = value;
    else if (key == "rn") params.rn = value;
    else if (key == "rp") params.rp = value;
    else if (key == "cg") params.cg = value;
    else if (key == "csd") params.csd = value;
    else if (key == "freq") params.freq = value;
    else if (key == "period_ns") params.period_ns = value;
    else if (key == "layout_overhead") params.layout_overhead = value;
    else
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
  }
}

struct LoadedDesign {
  Design design;
  FlatNetlist flat;
  const CellSpec* spec = nullptr;  // null for file targets
  std::string origin;              // cell name or file path
};

LoadedDesign load_target(const std::string& target) {
  LoadedDesign out;
  out.origin = target;
  if (const CellSpec* spec = find_cell(target)) {
    out.spec = spec;
    out.design = build_cell(target);
  } else {
    out.design = parse(read_file(target));
  }
  out.flat = flatten(out.design);
  return out;
}

int cmd_list() {
  std::vector<const CellSpec*> cells;
  for (const CellSpec& c : corpus()) cells.push_back(&c);
  std::sort(cells.begin(), cells.end(),
            [](const CellSpec* a, const CellSpec* b) { return a->name < b->name; });
  for (const CellSpec* c : cells)
    std::printf("%-8s %2dT  %s\n", c->name.c_str(), c->transistor_count,
                c->note.c_str());
  return 0;
}

int cmd_netlist(const std::string& cell, const std::string& out_path) {
  emit(out_path, serialize(build_cell(cell)));
  return 0;
}

int cmd_verify(const std::string& target, const ModelParams& params) {
  VerifyReport report;
  if (find_cell(target)) {
    report = verify_cell(target, params);
  } else {
    // File targets are checked as adders: 3 inputs, sum/cout outputs.
    LoadedDesign loaded = load_target(target);
    if (loaded.flat.input_nets.size() != 3 || loaded.flat.output_nets.size() != 2)
      throw std::runtime_error(
          "cannot infer a reference function: expected 3 inputs and sum/cout");
    report.cell = target;
    for (int v = 0; v < 8; ++v) {
      VerifyRow row;
      std::map<int, Level> inputs;
      for (int i = 0; i < 3; ++i) {
        bool bit = (v >> (2 - i)) & 1;
        row.inputs.push_back(bit);
        inputs[loaded.flat.input_nets[i]] = bit ? Level::L1 : Level::L0;
      }
      auto [sum, carry] = reference_adder(row.inputs[0], row.inputs[1], row.inputs[2]);
      row.expected = {sum, carry};
      SolveResult solved = settle(loaded.flat, inputs, nullptr, params);
      for (int o = 0; o < 2; ++o) {
        Signal sig = solved.signals[loaded.flat.output_nets[o]];
        row.observed.push_back(sig);
        row.statuses.push_back(classify(row.expected[o], sig));
      }
      row.status = *std::max_element(row.statuses.begin(), row.statuses.end());
      row.hazards = detect_hazards(loaded.flat, solved);
      report.rows.push_back(std::move(row));
    }
  }
  std::fputs(report.to_csv().c_str(), stdout);
  return report.level_correct() ? 0 : kExitVerifyFailed;
}

int cmd_sim(const std::string& netlist_path, const std::string& stim_path,
            const std::string& out_path, const ModelParams& params) {
  LoadedDesign loaded = load_target(netlist_path);
  Stimulus stim = Stimulus::from_csv(read_file(stim_path), params.period_ns);
  Trace trace = run_transient(loaded.flat, stim, params);
  emit(out_path, trace.to_csv());

  std::map<int, int> toggles;
  for (const TraceEvent& e : trace.events) ++toggles[e.net];
  int total = 0;
  for (auto& [net, count] : toggles) total += count - 1;  // skip baselines
  std::fprintf(stderr, "vectors: %zu  events: %d\n", stim.rows.size(), total);
  try {
    double delay = extract_cout_delay_ns(trace, loaded.flat, stim);
    double power = estimate_power_uw(trace, loaded.flat, params);
    std::fprintf(stderr, "cout delay: %.6g ns  est. power: %.6g uW\n", delay,
                 power);
  } catch (const std::invalid_argument&) {
    // no cout net; toggle summary only
  }
  return 0;
}

int cmd_lint(const std::string& target) {
  LoadedDesign loaded = load_target(target);
  for (const Diagnostic& d : validate(loaded.flat))
    std::printf("%s\n", d.render(loaded.origin).c_str());
  return 0;
}

int cmd_compare(std::vector<std::string> names, bool all,
                const std::string& format, const std::string& out_path,
                const ModelParams& params) {
  if (all) names = kCompareAll;
  if (names.empty()) throw std::runtime_error("compare: no designs given");
  MetricsReport report = build_report(names, params);
  emit(out_path, format == "csv" ? report.to_csv() : report.to_markdown());
  for (const MetricsRow& row : report.rows)
    if (row.error.empty()) return 0;
  return kExitParseIo;  // no row succeeded
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"switch-level full-adder simulator and comparison tool"};
  app.require_subcommand(1);
  // model-parameter flags may appear after the subcommand
  app.fallthrough();

  ModelParams params;
  try {
    load_config(params);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitParseIo;
  }

  bool deterministic = true;
  app.add_option("--vdd", params.vdd, "supply voltage (V)");
  app.add_option("--vtn", params.vtn, "NMOS threshold (V)");
  app.add_option("--vtp", params.vtp, "PMOS threshold magnitude (V)");
  app.add_option("--rn", params.rn, "NMOS on-resistance per square (ohm)");
  app.add_option("--rp", params.rp, "PMOS on-resistance per square (ohm)");
  app.add_option("--cg", params.cg, "gate capacitance per terminal (F)");
  app.add_option("--csd", params.csd, "drain/source capacitance per terminal (F)");
  auto* freq_opt = app.add_option("--freq", params.freq, "operating frequency (Hz)");
  auto* period_opt =
      app.add_option("--period-ns", params.period_ns, "vector period (ns)");
  app.add_flag("--seedless-deterministic", deterministic,
               "deterministic evaluation (always on)");

  auto* list = app.add_subcommand("list", "list corpus cells");

  auto* netlist = app.add_subcommand("netlist", "emit a corpus cell netlist");
  std::string cell_name, out_path;
  netlist->add_option("cell", cell_name, "corpus cell name")->required();
  netlist->add_option("-o,--output", out_path, "output file (default stdout)");

  auto* verify = app.add_subcommand("verify", "check settled levels against the reference function");
  std::string verify_target;
  verify->add_option("target", verify_target, "corpus cell name or netlist file")
      ->required();

  auto* sim = app.add_subcommand("sim", "run a transient simulation");
  std::string sim_netlist, sim_stim, sim_out;
  sim->add_option("netlist", sim_netlist, "corpus cell name or netlist file")
      ->required();
  sim->add_option("-s,--stimulus", sim_stim, "stimulus CSV")->required();
  sim->add_option("-o,--output", sim_out, "trace CSV output (default stdout)");

  auto* lint = app.add_subcommand("lint", "report structural diagnostics");
  std::string lint_target;
  lint->add_option("target", lint_target, "corpus cell name or netlist file")
      ->required();

  auto* compare = app.add_subcommand("compare", "emit the comparison report");
  std::vector<std::string> compare_names;
  bool compare_all = false;
  std::string compare_format = "md", compare_out;
  compare->add_option("cells", compare_names, "corpus cell names");
  compare->add_flag("--all", compare_all, "compare the full adder corpus");
  compare->add_option("--format", compare_format, "md or csv")
      ->check(CLI::IsMember({"md", "csv"}));
  compare->add_option("-o,--output", compare_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (*freq_opt && !*period_opt) params.period_ns = 1e9 / params.freq;

  try {
    params.validate();
    if (*list) return cmd_list();
    if (*netlist) return cmd_netlist(cell_name, out_path);
    if (*verify) return cmd_verify(verify_target, params);
    if (*sim) {
      try {
        return cmd_sim(sim_netlist, sim_stim, sim_out, params);
      } catch (const StimulusError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitStimulus;
      }
    }
    if (*lint) return cmd_lint(lint_target);
    if (*compare)
      return cmd_compare(compare_names, compare_all, compare_format,
                         compare_out, params);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitParseIo;
  }
  return 0;
}
