#include "addersim/strength.hpp"

#include <stdexcept>

namespace addersim {

std::string to_token(Signal s) {
  if (s.strength == Strength::Floating) return "Z";
  std::string t;
  switch (s.level) {
    case Level::L0: t = "0"; break;
    case Level::L1: t = "1"; break;
    case Level::LX: t = "X"; break;
  }
  if (s.strength == Strength::Weak) t += 'w';
  if (s.strength == Strength::Charged) t += 'c';
  return t;
}

Signal signal_from_token(std::string_view token) {
  if (token == "Z") return kPowerOn;
  if (token.empty() || token.size() > 2)
    throw std::invalid_argument("bad signal token: " + std::string(token));
  Level level;
  switch (token[0]) {
    case '0': level = Level::L0; break;
    case '1': level = Level::L1; break;
    case 'X': level = Level::LX; break;
    default: throw std::invalid_argument("bad signal token: " + std::string(token));
  }
  Strength strength = Strength::Strong;
  if (token.size() == 2) {
    switch (token[1]) {
      case 'w': strength = Strength::Weak; break;
      case 'c': strength = Strength::Charged; break;
      default: throw std::invalid_argument("bad signal token: " + std::string(token));
    }
  }
  return Signal{level, strength};
}

std::string_view to_string(DeviceKind k) {
  return k == DeviceKind::Nmos ? "nmos" : "pmos";
}

std::string_view to_string(Level l) {
  switch (l) {
    case Level::L0: return "0";
    case Level::L1: return "1";
    default: return "X";
  }
}

std::string_view to_string(Strength s) {
  switch (s) {
    case Strength::Floating: return "floating";
    case Strength::Charged: return "charged";
    case Strength::Weak: return "weak";
    default: return "strong";
  }
}

}  // namespace addersim
