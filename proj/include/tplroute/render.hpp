#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "tplroute/conflict.hpp"
#include "tplroute/grid.hpp"
#include "tplroute/layout.hpp"
#include "tplroute/router.hpp"

namespace tplroute {

inline constexpr int kCell = 20;

namespace detail {

inline const char* fill_of(Color c) {
  switch (c) {
    case Color::Red: return "#d62728";
    case Color::Green: return "#2ca02c";
    case Color::Blue: return "#1f77b4";
  }
  return "#000000";
}

// Centre of a cell, doubled so midpoints between neighbours stay integral.
inline std::pair<int, int> centre2(const Vertex& v) { return {2 * v.x * kCell + kCell, 2 * v.y * kCell + kCell}; }

inline std::string half(int v2) {
  return v2 % 2 == 0 ? std::to_string(v2 / 2) : std::to_string(v2 / 2) + ".5";
}

inline std::string star_points(int cx2, int cy2) {
  std::ostringstream out;
  for (int k = 0; k < 10; ++k) {
    const double r = (k % 2 == 0 ? 7.0 : 3.0);
    const double a = -std::numbers::pi / 2 + k * std::numbers::pi / 5;
    const double x = cx2 / 2.0 + r * std::cos(a);
    const double y = cy2 / 2.0 + r * std::sin(a);
    out << (k ? " " : "") << std::lround(x * 10) / 10.0 << "," << std::lround(y * 10) / 10.0;
  }
  return out.str();
}

}  // namespace detail

/// One layer as SVG: obstacles grey, wires in their mask color, pins
/// outlined, vias as rings, stitches as black diamonds, conflicts as yellow stars.
inline std::string render_layer_svg(const Grid& grid, const std::map<int, RouteTree>& routes,
                                    const std::vector<Conflict>& conflicts, const std::vector<Vertex>& pins, int layer) {
  std::ostringstream out;
  const int w = grid.width() * kCell;
  const int h = grid.height() * kCell;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
      << " " << h << "\">\n";
  out << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"#ffffff\"/>\n";
  out << "<text x=\"2\" y=\"10\" font-size=\"8\" fill=\"#555555\">layer " << layer
      << (grid.preferred(layer) == Preferred::Horizontal ? " H" : " V") << "</text>\n";

  for (int y = 0; y < grid.height(); ++y)
    for (int x = 0; x < grid.width(); ++x) {
      const Vertex v{x, y, layer};
      if (grid.is_obstacle(v))
        out << "<rect x=\"" << x * kCell << "\" y=\"" << y * kCell << "\" width=\"" << kCell << "\" height=\"" << kCell
            << "\" fill=\"#9e9e9e\"/>\n";
    }

  for (const auto& [id, tree] : routes) {
    for (const auto& path : tree.paths)
      for (std::size_t i = 1; i < path.size(); ++i) {
        const Vertex& a = path[i - 1];
        const Vertex& b = path[i];
        if (a.layer != layer || b.layer != layer) continue;
        const Color ca = tree.vertex_colors.at(a);
        const Color cb = tree.vertex_colors.at(b);
        const auto [ax, ay] = detail::centre2(a);
        const auto [bx, by] = detail::centre2(b);
        const int mx = (ax + bx) / 2, my = (ay + by) / 2;
        out << "<line x1=\"" << ax / 2 << "\" y1=\"" << ay / 2 << "\" x2=\"" << detail::half(mx) << "\" y2=\""
            << detail::half(my) << "\" stroke=\"" << detail::fill_of(ca) << "\" stroke-width=\"6\"/>\n";
        out << "<line x1=\"" << detail::half(mx) << "\" y1=\"" << detail::half(my) << "\" x2=\"" << bx / 2
            << "\" y2=\"" << by / 2 << "\" stroke=\"" << detail::fill_of(cb) << "\" stroke-width=\"6\"/>\n";
      }
    for (const auto& [v, c] : tree.vertex_colors) {
      if (v.layer != layer) continue;
      const auto [cx, cy] = detail::centre2(v);
      out << "<rect x=\"" << cx / 2 - 4 << "\" y=\"" << cy / 2 - 4 << "\" width=\"8\" height=\"8\" fill=\""
          << detail::fill_of(c) << "\"/>\n";
      const bool via = tree.vertex_colors.count({v.x, v.y, v.layer + 1}) || tree.vertex_colors.count({v.x, v.y, v.layer - 1});
      if (via)
        out << "<circle cx=\"" << cx / 2 << "\" cy=\"" << cy / 2 << "\" r=\"6\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    }
  }

  for (const Vertex& p : pins) {
    if (p.layer != layer) continue;
    out << "<rect x=\"" << p.x * kCell + 2 << "\" y=\"" << p.y * kCell + 2 << "\" width=\"" << kCell - 4
        << "\" height=\"" << kCell - 4 << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";
  }

  for (const auto& [id, tree] : routes)
    for (const auto& [a, b] : tree.stitches) {
      if (a.layer != layer) continue;
      const auto [ax, ay] = detail::centre2(a);
      const auto [bx, by] = detail::centre2(b);
      const int mx = (ax + bx) / 2, my = (ay + by) / 2;
      out << "<polygon points=\"" << detail::half(mx) << "," << detail::half(my - 10) << " " << detail::half(mx + 10)
          << "," << detail::half(my) << " " << detail::half(mx) << "," << detail::half(my + 10) << " "
          << detail::half(mx - 10) << "," << detail::half(my) << "\" fill=\"#000000\"/>\n";
    }

  for (const Conflict& c : conflicts) {
    if (c.vertex_a.layer != layer) continue;
    const auto [ax, ay] = detail::centre2(c.vertex_a);
    const auto [bx, by] = detail::centre2(c.vertex_b);
    out << "<polygon points=\"" << detail::star_points((ax + bx) / 2, (ay + by) / 2)
        << "\" fill=\"#ffeb3b\" stroke=\"#000000\" stroke-width=\"0.5\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace tplroute
