#pragma once

#include <functional>
#include <string>
#include <vector>

#include "addersim/netlist.hpp"

namespace addersim {

// Static description of one corpus cell: its interface, pinned transistor
// count and the boolean function its settled levels must match.
struct CellSpec {
  std::string name;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  int transistor_count = 0;
  std::string note;
  // Maps an input assignment (in `inputs` order) to expected output levels
  // (in `outputs` order).
  std::function<std::vector<bool>(const std::vector<bool>&)> reference;
};

// All corpus cells in canonical (Table-style) order:
// conv28, chow8, serf10, p12, p8, p10, p6, tsinv, xor3, gdi.
const std::vector<CellSpec>& corpus();

const CellSpec* find_cell(std::string_view name);

// Builds a validated Design for the named corpus cell. Throws
// std::invalid_argument for unknown names.
Design build_cell(std::string_view name);

// The 2-transistor cell's boolean abstraction: common gate g selects the
// PMOS diffusion input p (g=0) or the NMOS diffusion input n (g=1).
constexpr bool gdi_function(bool g, bool p, bool n) { return g ? n : p; }

// sum = parity(a,b,c), carry = majority(a,b,c)
constexpr std::pair<bool, bool> reference_adder(bool a, bool b, bool c) {
  return {a ^ b ^ c, (a && b) || (b && c) || (c && a)};
}

}  // namespace addersim
