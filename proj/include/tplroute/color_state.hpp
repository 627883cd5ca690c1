#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

#include "tplroute/error.hpp"

namespace tplroute {

// One of the three exposure masks. The enumerator value is the slot used to
// index per-color arrays; the mask bit is derived from it (RED=4, GREEN=2,
// BLUE=1) so that dumps read like the usual "100"/"010"/"001" encodings.
enum class Color : std::uint8_t { Red = 0, Green = 1, Blue = 2 };

inline constexpr std::array<Color, 3> kColors{Color::Red, Color::Green, Color::Blue};

constexpr std::size_t slot(Color c) { return static_cast<std::size_t>(c); }
constexpr std::uint8_t color_bit(Color c) { return static_cast<std::uint8_t>(4u >> slot(c)); }

constexpr char color_letter(Color c) {
  switch (c) {
    case Color::Red: return 'R';
    case Color::Green: return 'G';
    case Color::Blue: return 'B';
  }
  return '?';
}

inline Color color_from_letter(char ch) {
  switch (ch) {
    case 'R': return Color::Red;
    case 'G': return Color::Green;
    case 'B': return Color::Blue;
    default: break;
  }
  throw Error(ErrorKind::Parse, std::string("unknown color letter '") + ch + "'");
}

/// Set of masks that a wire piece may still take. 000 is the dead state.
class ColorState {
 public:
  constexpr ColorState() = default;
  constexpr explicit ColorState(unsigned bits) : bits_(static_cast<std::uint8_t>(bits & 7u)) {}

  static constexpr ColorState all() { return ColorState(7u); }
  static constexpr ColorState none() { return ColorState(0u); }
  static constexpr ColorState of(Color c) { return ColorState(color_bit(c)); }

  constexpr unsigned bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(Color c) const { return (bits_ & color_bit(c)) != 0; }
  constexpr int cardinality() const { return std::popcount(static_cast<unsigned>(bits_)); }

  constexpr ColorState with(Color c) const { return ColorState(bits_ | color_bit(c)); }

  friend constexpr ColorState operator&(ColorState a, ColorState b) { return ColorState(a.bits_ & b.bits_); }
  friend constexpr ColorState operator|(ColorState a, ColorState b) { return ColorState(a.bits_ | b.bits_); }
  friend constexpr bool operator==(ColorState, ColorState) = default;

 private:
  std::uint8_t bits_ = 0;
};

constexpr ColorState intersect(ColorState a, ColorState b) { return a & b; }
constexpr bool contains(ColorState s, Color c) { return s.contains(c); }
constexpr int cardinality(ColorState s) { return s.cardinality(); }

/// Per-color scalar, indexed by slot(Color).
using ColorCosts = std::array<double, 3>;

/// Picks the single mask a state collapses to: the cheapest member under
/// `costs`, ties going to the higher bit (RED, then GREEN, then BLUE).
inline Color pick_final(ColorState s, const ColorCosts& costs = {0.0, 0.0, 0.0}) {
  if (s.empty()) throw Error(ErrorKind::DeadState, "cannot pick a final color from state 000");
  Color best = Color::Red;
  bool found = false;
  for (Color c : kColors) {  // kColors is already in descending bit order
    if (!s.contains(c)) continue;
    if (!found || costs[slot(c)] < costs[slot(best)]) {
      best = c;
      found = true;
    }
  }
  return best;
}

inline std::string to_string(ColorState s) {
  std::string out(3, '0');
  for (Color c : kColors)
    if (s.contains(c)) out[slot(c)] = '1';
  return out;
}

inline ColorState parse_color_state(std::string_view text) {
  if (text.size() != 3) throw Error(ErrorKind::Parse, "color state must have 3 binary digits");
  unsigned bits = 0;
  for (char ch : text) {
    if (ch != '0' && ch != '1') throw Error(ErrorKind::Parse, "color state must have 3 binary digits");
    bits = (bits << 1) | static_cast<unsigned>(ch - '0');
  }
  return ColorState(bits);
}

}  // namespace tplroute
