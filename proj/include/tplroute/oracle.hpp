#pragma once

// Brute-force ground truth for small instances. Costs here are recomputed
// from the raw grid contents (cells, history, rules); nothing in this file
// calls the grid's or router's cost functions.

#include <algorithm>
#include <array>
#include <cstdlib>
#include <limits>
#include <set>
#include <span>
#include <vector>

#include "tplroute/color_state.hpp"
#include "tplroute/conflict.hpp"
#include "tplroute/error.hpp"
#include "tplroute/grid.hpp"
#include "tplroute/layout.hpp"

namespace tplroute::oracle {

struct OracleResult {
  double best_cost = 0.0;
  std::vector<Vertex> best_path;
  std::vector<Color> best_coloring;
  long long enumerated_count = 0;
};

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool usable(const Grid& g, const Vertex& v, int net) {
  if (v.x < 0 || v.y < 0 || v.layer < 0 || v.x >= g.width() || v.y >= g.height() || v.layer >= g.num_layers())
    return false;
  const Cell& c = g.cells()[g.index(v)];
  if (c.state == CellState::Obstacle) return false;
  if (c.state == CellState::Committed && c.net != net) return false;
  const int owner = g.pin_owner(v);
  return owner == -1 || owner == net;
}

// Cost of the move a -> b (adjacent) before weighting by alpha.
inline double move_cost(const Grid& g, const Vertex& a, const Vertex& b, std::span<const GuideBox> guide) {
  const DesignRules& r = g.rules();
  double cost = 1.0;
  if (a.layer != b.layer) {
    cost += r.via_cost;
  } else {
    const bool along_x = a.y == b.y;
    const bool layer_horizontal = g.layers()[static_cast<std::size_t>(a.layer)] == Preferred::Horizontal;
    if (along_x != layer_horizontal) cost += r.wrong_way_cost;
  }
  cost += g.history(b);
  if (!guide.empty()) {
    bool inside = false;
    for (const GuideBox& box : guide)
      inside = inside || (b.layer == box.layer && b.x >= std::min(box.x0, box.x1) && b.x <= std::max(box.x0, box.x1) &&
                          b.y >= std::min(box.y0, box.y1) && b.y <= std::max(box.y0, box.y1));
    if (!inside) cost += r.off_guide_cost;
  }
  return cost;
}

// gamma * (foreign vertices of color c within distance < d_color on v's layer), by full layer scan.
inline double vertex_color_cost(const Grid& g, const Vertex& v, Color c, int net) {
  const DesignRules& r = g.rules();
  int count = 0;
  for (int y = 0; y < g.height(); ++y)
    for (int x = 0; x < g.width(); ++x) {
      const Cell& cell = g.cells()[g.index({x, y, v.layer})];
      if (cell.state != CellState::Committed || cell.net == net || cell.color != c) continue;
      if (std::abs(x - v.x) + std::abs(y - v.y) < r.d_color) ++count;
    }
  return r.gamma * count;
}

}  // namespace detail

/// Objective of a colored simple path: per edge alpha*trad + target color
/// cost, plus beta*stitch_cost for every same-layer color change. The first
/// vertex is the tree/source end and carries no color cost.
inline double objective(const Grid& g, int net, std::span<const Vertex> path, std::span<const Color> coloring,
                        std::span<const GuideBox> guide = {}) {
  const DesignRules& r = g.rules();
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    total += r.alpha * detail::move_cost(g, path[i - 1], path[i], guide);
    total += detail::vertex_color_cost(g, path[i], coloring[i], net);
    if (path[i - 1].layer == path[i].layer && coloring[i - 1] != coloring[i]) total += r.beta * r.stitch_cost;
  }
  return total;
}

namespace detail {

struct Enumerator {
  const Grid& g;
  int net;
  std::span<const GuideBox> guide;
  std::set<Vertex> sources;
  std::set<Vertex> targets;
  std::size_t max_vertices;

  std::vector<Vertex> path;
  std::vector<char> on_path;
  double best = kInf;
  std::vector<Vertex> best_path;
  long long count = 0;

  double lower_bound_to_target(const Vertex& v) const {
    const DesignRules& r = g.rules();
    double lb = kInf;
    for (const Vertex& t : targets) {
      const int planar = std::abs(t.x - v.x) + std::abs(t.y - v.y);
      const int vias = std::abs(t.layer - v.layer);
      lb = std::min(lb, r.alpha * (planar + vias * (1.0 + r.via_cost)));
    }
    return lb;
  }

  bool better_tie(const std::vector<Vertex>& candidate) const {
    if (candidate.size() != best_path.size()) return candidate.size() < best_path.size();
    return candidate < best_path;
  }

  void visit(const std::array<double, 3>& dp) {
    const Vertex v = path.back();
    const double here = *std::min_element(dp.begin(), dp.end());
    if (path.size() > 1 && targets.count(v)) {
      ++count;
      if (here < best || (here == best && better_tie(path))) {
        best = here;
        best_path = path;
      }
      return;
    }
    if (path.size() >= max_vertices) return;
    const DesignRules& r = g.rules();
    const Vertex moves[6] = {{v.x + 1, v.y, v.layer}, {v.x - 1, v.y, v.layer}, {v.x, v.y + 1, v.layer},
                             {v.x, v.y - 1, v.layer}, {v.x, v.y, v.layer + 1}, {v.x, v.y, v.layer - 1}};
    for (const Vertex& w : moves) {
      if (!usable(g, w, net) || on_path[g.index(w)] || sources.count(w)) continue;
      const bool via = w.layer != v.layer;
      const double step = r.alpha * move_cost(g, v, w, guide);
      const double change = via ? 0.0 : r.beta * r.stitch_cost;
      std::array<double, 3> next{};
      for (Color c : kColors) {
        double best_prev = kInf;
        for (Color p : kColors) best_prev = std::min(best_prev, dp[slot(p)] + (p == c ? 0.0 : change));
        next[slot(c)] = best_prev + step + vertex_color_cost(g, w, c, net);
      }
      const double next_min = *std::min_element(next.begin(), next.end());
      if (next_min + (targets.count(w) ? 0.0 : lower_bound_to_target(w)) > best) continue;
      path.push_back(w);
      on_path[g.index(w)] = 1;
      visit(next);
      on_path[g.index(w)] = 0;
      path.pop_back();
    }
  }
};

// Lexicographically smallest optimal coloring of a fixed path.
inline std::vector<Color> best_coloring(const Grid& g, int net, const std::vector<Vertex>& path) {
  const DesignRules& r = g.rules();
  const std::size_t n = path.size();
  // suffix[i][c]: cheapest cost of vertices i+1.. given vertex i has color c.
  std::vector<std::array<double, 3>> suffix(n, {0.0, 0.0, 0.0});
  std::vector<std::array<double, 3>> own(n, {0.0, 0.0, 0.0});
  for (std::size_t i = 1; i < n; ++i)
    for (Color c : kColors) own[i][slot(c)] = vertex_color_cost(g, path[i], c, net);
  for (std::size_t i = n - 1; i-- > 0;) {
    const double change = path[i].layer == path[i + 1].layer ? r.beta * r.stitch_cost : 0.0;
    for (Color c : kColors) {
      double best = kInf;
      for (Color d : kColors) best = std::min(best, own[i + 1][slot(d)] + (c == d ? 0.0 : change) + suffix[i + 1][slot(d)]);
      suffix[i][slot(c)] = best;
    }
  }
  std::vector<Color> out(n, Color::Red);
  // The source vertex has no cost of its own; pick the cheapest continuation.
  double target = kInf;
  for (Color c : kColors) target = std::min(target, suffix[0][slot(c)]);
  for (Color c : kColors)
    if (suffix[0][slot(c)] == target) {
      out[0] = c;
      break;
    }
  for (std::size_t i = 1; i < n; ++i) {
    const double change = path[i - 1].layer == path[i].layer ? r.beta * r.stitch_cost : 0.0;
    const double need = suffix[i - 1][slot(out[i - 1])];
    for (Color c : kColors) {
      const double v = own[i][slot(c)] + (c == out[i - 1] ? 0.0 : change) + suffix[i][slot(c)];
      if (v == need) {
        out[i] = c;
        break;
      }
    }
  }
  return out;
}

}  // namespace detail

/// Exhaustive minimum over simple paths of at most `max_vertices` vertices
/// from any source to any target, each with its best per-vertex coloring.
inline OracleResult optimal_colored_path(const Grid& g, std::span<const Vertex> src_set, std::span<const Vertex> dst_set,
                                         int net, std::span<const GuideBox> guide = {}, std::size_t max_vertices = 14) {
  detail::Enumerator e{g, net, guide, {src_set.begin(), src_set.end()}, {dst_set.begin(), dst_set.end()}, max_vertices,
                       {}, std::vector<char>(g.num_vertices(), 0), detail::kInf, {}, 0};
  OracleResult out;
  for (const Vertex& s : e.sources) {
    if (e.targets.count(s)) {
      // A source that already covers a target: zero-length connection.
      ++e.count;
      if (0.0 < e.best || (0.0 == e.best && e.better_tie({s}))) {
        e.best = 0.0;
        e.best_path = {s};
      }
      continue;
    }
    if (!detail::usable(g, s, net)) continue;
    e.path = {s};
    e.on_path[g.index(s)] = 1;
    e.visit({0.0, 0.0, 0.0});
    e.on_path[g.index(s)] = 0;
  }
  if (e.best_path.empty())
    throw Error(ErrorKind::CapExceeded, "no path within " + std::to_string(max_vertices) + " vertices");
  out.best_cost = e.best;
  out.best_path = e.best_path;
  out.best_coloring = detail::best_coloring(g, net, e.best_path);
  out.enumerated_count = e.count;
  return out;
}

/// Naive scan of all committed vertex pairs, restricted to grids of at most 10x10x2.
inline std::vector<Conflict> all_pairs_conflicts(const Grid& g) {
  if (g.width() > 10 || g.height() > 10 || g.num_layers() > 2)
    throw Error(ErrorKind::SizeCap, "all_pairs_conflicts is limited to 10x10x2 grids");
  std::vector<std::size_t> committed;
  for (std::size_t i = 0; i < g.num_vertices(); ++i)
    if (g.cells()[i].state == CellState::Committed) committed.push_back(i);
  std::vector<Conflict> out;
  for (std::size_t a = 0; a < committed.size(); ++a)
    for (std::size_t b = a + 1; b < committed.size(); ++b) {
      const Cell& ca = g.cells()[committed[a]];
      const Cell& cb = g.cells()[committed[b]];
      const Vertex va = g.vertex(committed[a]);
      const Vertex vb = g.vertex(committed[b]);
      const int dist = std::abs(va.x - vb.x) + std::abs(va.y - vb.y);
      if (ca.net != cb.net && ca.color == cb.color && va.layer == vb.layer && dist < g.rules().d_color)
        out.push_back({va, vb, ca.net, cb.net, ca.color, dist});
    }
  return out;
}

}  // namespace tplroute::oracle
