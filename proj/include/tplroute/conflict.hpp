#pragma once

#include <compare>

#include "tplroute/color_state.hpp"
#include "tplroute/layout.hpp"

namespace tplroute {

/// Two same-mask vertices of different nets closer than d_color on one layer.
/// vertex_a is the lower grid index of the pair.
struct Conflict {
  Vertex vertex_a;
  Vertex vertex_b;
  int net_a = -1;
  int net_b = -1;
  Color color = Color::Red;
  int distance = 0;

  friend bool operator==(const Conflict&, const Conflict&) = default;
};

}  // namespace tplroute
