#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "addersim/cells.hpp"
#include "addersim/metrics.hpp"

using namespace addersim;

namespace {

// one device -> its drain net carries exactly one 1 fF terminal
FlatNetlist one_ff_net() {
  return flatten(parse(
      ".subckt t g s n1\n.inputs g s\n.outputs n1\nM1 n1 g s n\n.ends\n"));
}

Trace toggle_trace(const FlatNetlist& flat, Signal from, Signal to) {
  Trace t;
  t.duration_ps = 10'000;
  for (const FlatNet& n : flat.nets) t.net_names.push_back(n.name);
  int net = flat.index_of("n1");
  t.events.push_back({0, net, from});
  t.events.push_back({5'000, net, to});
  return t;
}

}  // namespace

TEST_CASE("one full-swing toggle on 1 fF over 10 ns") {
  FlatNetlist flat = one_ff_net();
  ModelParams p;
  Trace t = toggle_trace(flat, {Level::L0, Strength::Strong},
                         {Level::L1, Strength::Strong});
  double e = estimate_energy_j(t, flat, p);
  CHECK(e == doctest::Approx(1.62e-15).epsilon(1e-9));  // C*vdd^2/2
  CHECK(estimate_power_uw(t, flat, p) == doctest::Approx(0.162).epsilon(1e-9));
}

TEST_CASE("weak endpoints shrink the counted swing") {
  FlatNetlist flat = one_ff_net();
  ModelParams p;
  // strong 0 to weak 1: swing vdd - vtn = 1.4
  Trace t = toggle_trace(flat, {Level::L0, Strength::Strong},
                         {Level::L1, Strength::Weak});
  CHECK(estimate_energy_j(t, flat, p) ==
        doctest::Approx(0.5e-15 * 1.4 * 1.4).epsilon(1e-9));
  // weak 0 to weak 1: vdd - vtn - vtp = 1.0
  t = toggle_trace(flat, {Level::L0, Strength::Weak}, {Level::L1, Strength::Weak});
  CHECK(estimate_energy_j(t, flat, p) ==
        doctest::Approx(0.5e-15 * 1.0 * 1.0).epsilon(1e-9));
  // anything touching LX is charged at the full swing
  t = toggle_trace(flat, kPowerOn, {Level::L1, Strength::Weak});
  CHECK(estimate_energy_j(t, flat, p) ==
        doctest::Approx(0.5e-15 * 1.8 * 1.8).epsilon(1e-9));
  // strength-only change carries no energy
  t = toggle_trace(flat, {Level::L1, Strength::Strong},
                   {Level::L1, Strength::Charged});
  CHECK(estimate_energy_j(t, flat, p) == 0.0);
}

TEST_CASE("a transition-free trace consumes nothing") {
  FlatNetlist flat = one_ff_net();
  Trace t;
  t.duration_ps = 10'000;
  for (const FlatNet& n : flat.nets) t.net_names.push_back(n.name);
  t.events.push_back({0, flat.index_of("n1"), kPowerOn});
  CHECK(estimate_power_uw(t, flat, ModelParams{}) == 0.0);

  t.duration_ps = 0;
  CHECK_THROWS_AS(estimate_power_uw(t, flat, ModelParams{}),
                  std::invalid_argument);
}

TEST_CASE("energy is linear in capacitance and invariant under time shift") {
  FlatNetlist flat = flatten(build_cell("p12"));
  ModelParams p;
  Stimulus stim = counting_stimulus({"a", "b", "c"}, p.period_ns);
  Trace trace = run_transient(flat, stim, p);
  double e1 = estimate_energy_j(trace, flat, p);
  CHECK(e1 > 0);

  ModelParams doubled = p;
  doubled.cg *= 2;
  doubled.csd *= 2;
  CHECK(estimate_energy_j(trace, flat, doubled) ==
        doctest::Approx(2 * e1).epsilon(1e-12));

  Trace shifted = trace;
  for (TraceEvent& e : shifted.events) e.time_ps += 3'000;
  shifted.duration_ps += 3'000;
  CHECK(estimate_energy_j(shifted, flat, p) == doctest::Approx(e1).epsilon(1e-12));
}

TEST_CASE("energy is proportional to toggle count for fixed swings") {
  FlatNetlist flat = one_ff_net();
  ModelParams p;
  Trace t = toggle_trace(flat, {Level::L0, Strength::Strong},
                         {Level::L1, Strength::Strong});
  double one = estimate_energy_j(t, flat, p);
  t.events.push_back({6'000, flat.index_of("n1"), {Level::L0, Strength::Strong}});
  t.events.push_back({7'000, flat.index_of("n1"), {Level::L1, Strength::Strong}});
  CHECK(estimate_energy_j(t, flat, p) == doctest::Approx(3 * one).epsilon(1e-12));
}

TEST_CASE("area is additive and linear") {
  ModelParams p;
  Design d1 = parse(".subckt t a x\nM1 x a gnd n\n.ends\n");
  Design d2 = parse(".subckt t a x\nM1 x a gnd n\nM2 x a gnd n\n.ends\n");
  double a1 = estimate_area_lambda2(flatten(d1), p);
  CHECK(a1 == doctest::Approx(8.0 * 4.0));
  CHECK(estimate_area_lambda2(flatten(d2), p) == doctest::Approx(2 * a1));

  double conv = estimate_area_lambda2(flatten(build_cell("conv28")), p);
  double p12 = estimate_area_lambda2(flatten(build_cell("p12")), p);
  CHECK(p12 / conv == doctest::Approx(12.0 / 28.0));

  // smallest cell in the adder corpus
  double p6 = estimate_area_lambda2(flatten(build_cell("p6")), p);
  for (const char* name : {"conv28", "chow8", "serf10", "p12", "p8", "p10"})
    CHECK(p6 < estimate_area_lambda2(flatten(build_cell(name)), p));
}

TEST_CASE("cout delay extraction") {
  FlatNetlist flat = flatten(build_cell("p8"));
  Stimulus stim = counting_stimulus({"a", "b", "c"}, 10.0);
  Trace t;
  t.duration_ps = 80'000;
  for (const FlatNet& n : flat.nets) t.net_names.push_back(n.name);
  int cout = flat.index_of("cout");
  t.events.push_back({0, cout, kPowerOn});
  // settles 120 ps after the edges of periods 1 and 3
  t.events.push_back({10'120, cout, {Level::L1, Strength::Strong}});
  t.events.push_back({30'120, cout, {Level::L0, Strength::Strong}});
  CHECK(extract_cout_delay_ns(t, flat, stim) == doctest::Approx(0.12));

  // a carry that never switches contributes zero
  Trace quiet;
  quiet.duration_ps = 80'000;
  quiet.net_names = t.net_names;
  quiet.events.push_back({0, cout, {Level::L1, Strength::Strong}});
  CHECK(extract_cout_delay_ns(quiet, flat, stim) == 0.0);

  CHECK_THROWS_AS(extract_cout_delay_ns(t, flat, stim, "nonexistent"),
                  std::invalid_argument);
}

TEST_CASE("conv28 delay lands within the calibration band") {
  ModelParams p;
  FlatNetlist flat = flatten(build_cell("conv28"));
  Stimulus stim = counting_stimulus({"a", "b", "c"}, p.period_ns);
  Trace trace = run_transient(flat, stim, p);
  double delay = extract_cout_delay_ns(trace, flat, stim);
  CHECK(delay >= 0.0366);
  CHECK(delay <= 3.66);
}

TEST_CASE("total node capacitance of every proposed design is below conv28") {
  ModelParams p;
  double conv = total_node_capacitance(flatten(build_cell("conv28")), p);
  for (const char* name : {"p12", "p10", "p8", "p6"})
    CHECK(total_node_capacitance(flatten(build_cell(name)), p) < conv);
}

TEST_CASE("report columns and orderings") {
  ModelParams p;
  MetricsReport report = build_report(
      {"conv28", "chow8", "serf10", "p12", "p8", "p10", "p6"}, p);
  REQUIRE(report.rows.size() == 7);
  std::vector<int> counts;
  for (const MetricsRow& r : report.rows) {
    CHECK(r.error.empty());
    counts.push_back(r.transistors);
    CHECK(r.pdp_uw_ns ==
          doctest::Approx(r.avg_power_uw * r.cout_delay_ns).epsilon(1e-9));
  }
  CHECK(counts == std::vector<int>{28, 8, 10, 12, 8, 10, 6});

  // model-forced orderings at uniform sizing
  double power_conv = report.rows[0].avg_power_uw;
  double power_p6 = report.rows[6].avg_power_uw;
  CHECK(power_p6 < power_conv);
  for (const MetricsRow& r : report.rows) CHECK(power_p6 <= r.avg_power_uw);

  std::string csv = report.to_csv();
  CHECK(csv.substr(0, csv.find('\n')) ==
        "design,transistors,area_lambda2,cout_delay_ns,avg_power_uw,pdp_uw_ns");
  CHECK(report.to_csv() == build_report(
      {"conv28", "chow8", "serf10", "p12", "p8", "p10", "p6"}, p).to_csv());

  std::string md = report.to_markdown();
  CHECK(md.find("| conv28 | 28 |") != std::string::npos);
  CHECK(md.find("hazards") != std::string::npos);

  MetricsReport bad = build_report({"nonexistent"}, p);
  CHECK(!bad.rows[0].error.empty());
}
