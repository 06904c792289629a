#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "addersim/cells.hpp"
#include "addersim/simulator.hpp"

namespace addersim {

// Brute-force steady-state solver, kept independent of settle(): it
// enumerates simple conducting paths from each net to every driver and
// charge source and joins their degraded contributions. Devices whose gate
// state stays unknown are enumerated exhaustively (up to the 32-device
// budget) and the per-assignment solutions joined.
std::vector<Signal> path_enumerate(const FlatNetlist& flat,
                                   const std::map<int, Level>& inputs,
                                   const std::vector<Signal>* prior);

enum class VerifyStatus {
  StrongCorrect,
  WeakCorrect,
  ChargedCorrect,
  Floating,
  Conflict,
  WrongLevel,
};

std::string_view to_string(VerifyStatus s);

// Worse statuses order later; a row's status is the worst of its outputs'.
VerifyStatus classify(bool expected, Signal observed);

struct VerifyRow {
  std::vector<bool> inputs;
  std::vector<bool> expected;         // per output
  std::vector<Signal> observed;       // per output
  std::vector<VerifyStatus> statuses; // per output
  VerifyStatus status;                // worst of the above
  std::vector<Hazard> hazards;
};

struct VerifyReport {
  std::string cell;
  std::vector<std::string> input_names;
  std::vector<std::string> output_names;
  std::vector<std::string> net_names;  // for hazard rendering
  std::vector<VerifyRow> rows;

  bool level_correct() const;  // every output level matches on every vector
  bool all_strong() const;
  // cell,a,b,c,sum_signal,carry_signal,status -- unused columns render "-".
  std::string to_csv() const;
  std::string hazards_csv() const;  // cell,a,b,c,hazard,net
};

// Settles every input vector of the named corpus cell from power-on and
// classifies the outputs against the cell's reference function.
VerifyReport verify_cell(const std::string& name, const ModelParams& params = {});

struct IdentityCheck {
  std::string name;
  bool expect_equal;
  bool equal;
  std::vector<std::array<bool, 3>> mismatches;  // assignments where sides differ
  bool pass() const { return equal == expect_equal; }
};

// Brute-forces the carry/sum factorings against majority/parity, the
// (a'b)'b = ab identity, and the known-bad (a'+b')b reading of it.
std::vector<IdentityCheck> check_identities();

}  // namespace addersim
