// Regenerates the checked-in golden files: cells/<name>.sp from the
// programmatic builders and goldens/<name>_expect.csv from the
// path-enumeration solver (the brute-force route, not settle). Run from the
// repository root after a deliberate corpus change, then review the diff.

#include <cstdio>
#include <fstream>

#include "addersim/cells.hpp"
#include "addersim/oracle.hpp"

using namespace addersim;

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::fprintf(stderr, "cannot write %s\n", path.c_str());
    std::exit(1);
  }
  out << content;
}

VerifyReport oracle_report(const std::string& name) {
  const CellSpec* spec = find_cell(name);
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
    SolveResult solved;
    solved.signals = path_enumerate(flat, inputs, nullptr);
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

}  // namespace

int main() {
  for (const CellSpec& spec : corpus()) {
    write_file("cells/" + spec.name + ".sp", serialize(build_cell(spec.name)));
    VerifyReport report = oracle_report(spec.name);
    write_file("goldens/" + spec.name + "_expect.csv", report.to_csv());
    if (spec.name == "p6")
      write_file("goldens/p6_hazards.csv", report.hazards_csv());
    std::printf("regenerated %s\n", spec.name.c_str());
  }
  return 0;
}
