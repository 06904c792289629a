#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace addersim {

enum class DeviceKind : uint8_t { Nmos, Pmos };

// Four-state logic level. LX covers both "unknown" and "conflict".
enum class Level : uint8_t { L0 = 0, L1 = 1, LX = 2 };

// Drive strength lattice, strongest last. Floating means the net has not
// been driven since power-on; Charged means it retains an old driven level.
enum class Strength : uint8_t { Floating = 0, Charged = 1, Weak = 2, Strong = 3 };

struct Signal {
  Level level = Level::LX;
  Strength strength = Strength::Floating;

  friend bool operator==(const Signal&, const Signal&) = default;
};

// Power-on state of every undriven net.
inline constexpr Signal kPowerOn{Level::LX, Strength::Floating};

constexpr bool is_definite(Level l) { return l != Level::LX; }

// Join of two contributions fighting over one net: the stronger one wins
// outright; an equal-strength fight over different levels yields LX.
constexpr Signal resolve(Signal a, Signal b) {
  if (a.strength > b.strength) return a;
  if (b.strength > a.strength) return b;
  return Signal{a.level == b.level ? a.level : Level::LX, a.strength};
}

// Threshold drop across a conducting channel. An NMOS passes '0' at full
// strength but a '1' only up to Vdd-Vtn (capped at Weak); a PMOS is the
// mirror image. LX is capped for both kinds. Strength never increases and
// a second pass through the same kind changes nothing.
constexpr Signal degrade(DeviceKind kind, Signal s) {
  const bool lossy = (kind == DeviceKind::Nmos) ? (s.level != Level::L0)
                                                : (s.level != Level::L1);
  if (lossy && s.strength > Strength::Weak) s.strength = Strength::Weak;
  return s;
}

enum class SwitchState : uint8_t { Off, On, Unknown };

// Conduction depends only on the gate level: a Weak or Charged '1' still
// turns an NMOS on in this single-threshold model.
constexpr SwitchState gate_state(DeviceKind kind, Signal gate) {
  if (gate.level == Level::LX) return SwitchState::Unknown;
  const bool high = gate.level == Level::L1;
  return ((kind == DeviceKind::Nmos) == high) ? SwitchState::On : SwitchState::Off;
}

// What an undriven net keeps of a previous signal: a definite level decays
// to Charged, anything else is indistinguishable from power-on.
constexpr Signal retained_charge(Signal s) {
  if (is_definite(s.level)) return Signal{s.level, Strength::Charged};
  return kPowerOn;
}

// Trace/report tokens: 0 1 X 0w 1w 0c 1c Z. Every Floating signal renders
// as Z; the level suffix scheme extends to Xw/Xc for completeness.
std::string to_token(Signal s);
Signal signal_from_token(std::string_view token);  // throws std::invalid_argument

std::string_view to_string(DeviceKind k);
std::string_view to_string(Level l);
std::string_view to_string(Strength s);

}  // namespace addersim
