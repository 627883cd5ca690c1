#pragma once

// Route-then-decompose comparison flow: nets are routed with color costs
// switched off, and the finished wires are split into straight same-layer
// segments that are 3-colored afterwards.

#include <algorithm>
#include <array>
#include <climits>
#include <cstdlib>
#include <map>
#include <numeric>
#include <span>
#include <tuple>
#include <vector>

#include "tplroute/color_state.hpp"
#include "tplroute/grid.hpp"
#include "tplroute/layout.hpp"
#include "tplroute/negotiation.hpp"
#include "tplroute/router.hpp"

namespace tplroute {

struct SegmentNode {
  int net = -1;
  std::vector<Vertex> vertices;  // sorted by grid index; vertices.front() is the start
};

/// Edge between two segment nodes; weight counts the vertex pairs behind it.
struct WeightedEdge {
  int a = 0;
  int b = 0;
  int weight = 0;
  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

struct ConflictGraph {
  std::vector<SegmentNode> nodes;
  std::vector<WeightedEdge> conflict_edges;  // different nets, closer than d_color
  std::vector<WeightedEdge> stitch_edges;    // same net, grid-adjacent on one layer
};

inline ConflictGraph build_conflict_graph(const Grid& grid, const DesignRules& rules) {
  ConflictGraph graph;
  const std::size_t n = grid.num_vertices();
  std::vector<int> node_of(n, -1);
  auto committed = [&](const Vertex& v, int net) {
    if (!grid.in_bounds(v)) return false;
    const Cell& c = grid.cell(v);
    return c.state == CellState::Committed && c.net == net;
  };

  // Pass 1 takes maximal runs (length >= 2) along each layer's preferred
  // direction; pass 2 groups what is left into runs across it.
  struct Raw {
    int net;
    std::size_t start;
    std::vector<Vertex> vertices;
  };
  std::vector<Raw> raw;
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < n; ++i) {
      const Cell& c = grid.cells()[i];
      if (c.state != CellState::Committed || node_of[i] != -1) continue;
      const Vertex v = grid.vertex(i);
      const bool horizontal = (grid.preferred(v.layer) == Preferred::Horizontal) == (pass == 0);
      const Vertex before = horizontal ? Vertex{v.x - 1, v.y, v.layer} : Vertex{v.x, v.y - 1, v.layer};
      if (committed(before, c.net) && node_of[grid.index(before)] == -1) continue;  // not a run start
      std::vector<Vertex> run{v};
      Vertex next = v;
      while (true) {
        next = horizontal ? Vertex{next.x + 1, next.y, next.layer} : Vertex{next.x, next.y + 1, next.layer};
        if (!committed(next, c.net) || node_of[grid.index(next)] != -1) break;
        run.push_back(next);
      }
      if (pass == 0 && run.size() < 2) continue;
      for (const Vertex& r : run) node_of[grid.index(r)] = -2;  // claimed
      raw.push_back({c.net, i, std::move(run)});
    }
  }
  std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) { return std::tie(a.net, a.start) < std::tie(b.net, b.start); });
  for (std::size_t k = 0; k < raw.size(); ++k) {
    for (const Vertex& v : raw[k].vertices) node_of[grid.index(v)] = static_cast<int>(k);
    graph.nodes.push_back({raw[k].net, std::move(raw[k].vertices)});
  }

  std::map<std::pair<int, int>, int> conflicts, stitches;
  const int r = rules.d_color - 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (node_of[i] < 0) continue;
    const Vertex v = grid.vertex(i);
    const int net = grid.cells()[i].net;
    for (int dy = -r; dy <= r; ++dy) {
      const int span = r - std::abs(dy);
      for (int dx = -span; dx <= span; ++dx) {
        const Vertex u{v.x + dx, v.y + dy, v.layer};
        if (!grid.in_bounds(u)) continue;
        const std::size_t j = grid.index(u);
        if (j <= i || node_of[j] < 0 || grid.cells()[j].net == net) continue;
        ++conflicts[std::minmax(node_of[i], node_of[j])];
      }
    }
    for (const Vertex& u : {Vertex{v.x + 1, v.y, v.layer}, Vertex{v.x, v.y + 1, v.layer}}) {
      if (!committed(u, net)) continue;
      const int other = node_of[grid.index(u)];
      if (other != node_of[i]) ++stitches[std::minmax(node_of[i], other)];
    }
  }
  for (const auto& [k, w] : conflicts) graph.conflict_edges.push_back({k.first, k.second, w});
  for (const auto& [k, w] : stitches) graph.stitch_edges.push_back({k.first, k.second, w});
  return graph;
}

struct Decomposition {
  std::vector<Color> colors;  // per node
  int conflicts = 0;          // weighted same-color conflict edges
  int stitches = 0;           // weighted differently-colored stitch edges
};

inline std::pair<int, int> evaluate_coloring(const ConflictGraph& g, std::span<const Color> colors) {
  int conflicts = 0, stitches = 0;
  for (const WeightedEdge& e : g.conflict_edges)
    if (colors[static_cast<std::size_t>(e.a)] == colors[static_cast<std::size_t>(e.b)]) conflicts += e.weight;
  for (const WeightedEdge& e : g.stitch_edges)
    if (colors[static_cast<std::size_t>(e.a)] != colors[static_cast<std::size_t>(e.b)]) stitches += e.weight;
  return {conflicts, stitches};
}

/// Connected components over conflict and stitch edges, each sorted ascending.
inline std::vector<std::vector<int>> components(const ConflictGraph& g) {
  std::vector<int> parent(g.nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  for (const auto* edges : {&g.conflict_edges, &g.stitch_edges})
    for (const WeightedEdge& e : *edges) parent[static_cast<std::size_t>(find(e.a))] = find(e.b);
  std::map<int, std::vector<int>> groups;
  for (int v = 0; v < static_cast<int>(g.nodes.size()); ++v) groups[find(v)].push_back(v);
  std::vector<std::vector<int>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

struct Adjacency {
  std::vector<std::vector<std::pair<int, int>>> conflict;  // (neighbor, weight)
  std::vector<std::vector<std::pair<int, int>>> stitch;
  explicit Adjacency(const ConflictGraph& g) : conflict(g.nodes.size()), stitch(g.nodes.size()) {
    for (const WeightedEdge& e : g.conflict_edges) {
      conflict[static_cast<std::size_t>(e.a)].emplace_back(e.b, e.weight);
      conflict[static_cast<std::size_t>(e.b)].emplace_back(e.a, e.weight);
    }
    for (const WeightedEdge& e : g.stitch_edges) {
      stitch[static_cast<std::size_t>(e.a)].emplace_back(e.b, e.weight);
      stitch[static_cast<std::size_t>(e.b)].emplace_back(e.a, e.weight);
    }
  }
};

}  // namespace detail

/// Greedy 3-coloring of `nodes` in descending conflict-degree order (ties by
/// node id). A node takes a color no colored conflict neighbour uses,
/// preferring the one that adds the fewest stitches; when all three are
/// taken it falls back to the least-used neighbour color.
inline void greedy_color(const ConflictGraph& g, std::span<const int> nodes, std::vector<Color>& colors,
                         std::vector<bool>& colored) {
  const detail::Adjacency adj(g);
  std::vector<int> order(nodes.begin(), nodes.end());
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto da = adj.conflict[static_cast<std::size_t>(a)].size();
    const auto db = adj.conflict[static_cast<std::size_t>(b)].size();
    return da != db ? da > db : a < b;
  });
  for (int v : order) {
    std::array<int, 3> used{0, 0, 0}, stitch{0, 0, 0};
    for (const auto& [u, w] : adj.conflict[static_cast<std::size_t>(v)])
      if (colored[static_cast<std::size_t>(u)]) used[slot(colors[static_cast<std::size_t>(u)])] += w;
    for (const auto& [u, w] : adj.stitch[static_cast<std::size_t>(v)])
      if (colored[static_cast<std::size_t>(u)])
        for (Color c : kColors)
          if (colors[static_cast<std::size_t>(u)] != c) stitch[slot(c)] += w;
    const bool any_free = std::any_of(used.begin(), used.end(), [](int u) { return u == 0; });
    Color pick = Color::Red;
    bool have = false;
    for (Color c : kColors) {
      if (any_free && used[slot(c)] != 0) continue;
      const auto key = std::make_pair(used[slot(c)], stitch[slot(c)]);
      if (!have || key < std::make_pair(used[slot(pick)], stitch[slot(pick)])) {
        pick = c;
        have = true;
      }
    }
    colors[static_cast<std::size_t>(v)] = pick;
    colored[static_cast<std::size_t>(v)] = true;
  }
}

/// Exhaustive coloring of one component minimising (conflicts, stitches);
/// the first optimum in odometer order (R < G < B, first node most significant) wins.
inline void exact_color(const ConflictGraph& g, std::span<const int> nodes, std::vector<Color>& colors) {
  const std::size_t k = nodes.size();
  std::vector<int> local(g.nodes.size(), -1);
  for (std::size_t i = 0; i < k; ++i) local[static_cast<std::size_t>(nodes[i])] = static_cast<int>(i);
  std::vector<std::tuple<int, int, int>> cedges, sedges;
  for (const WeightedEdge& e : g.conflict_edges)
    if (local[static_cast<std::size_t>(e.a)] >= 0) cedges.emplace_back(local[static_cast<std::size_t>(e.a)], local[static_cast<std::size_t>(e.b)], e.weight);
  for (const WeightedEdge& e : g.stitch_edges)
    if (local[static_cast<std::size_t>(e.a)] >= 0) sedges.emplace_back(local[static_cast<std::size_t>(e.a)], local[static_cast<std::size_t>(e.b)], e.weight);

  std::vector<int> cur(k, 0), best(k, 0);
  std::pair<int, int> best_score{INT_MAX, INT_MAX};
  long long total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= 3;
  for (long long code = 0; code < total; ++code) {
    long long rest = code;
    for (std::size_t i = k; i-- > 0;) {
      cur[i] = static_cast<int>(rest % 3);
      rest /= 3;
    }
    int conf = 0, st = 0;
    for (const auto& [a, b, w] : cedges)
      if (cur[static_cast<std::size_t>(a)] == cur[static_cast<std::size_t>(b)]) conf += w;
    for (const auto& [a, b, w] : sedges)
      if (cur[static_cast<std::size_t>(a)] != cur[static_cast<std::size_t>(b)]) st += w;
    if (std::make_pair(conf, st) < best_score) {
      best_score = {conf, st};
      best = cur;
    }
  }
  for (std::size_t i = 0; i < k; ++i) colors[static_cast<std::size_t>(nodes[i])] = kColors[static_cast<std::size_t>(best[i])];
}

inline constexpr std::size_t kExactComponentLimit = 12;

/// Colors every component exactly when it has at most 12 nodes, greedily otherwise.
inline Decomposition decompose(const ConflictGraph& g) {
  Decomposition out;
  out.colors.assign(g.nodes.size(), Color::Red);
  std::vector<bool> colored(g.nodes.size(), false);
  for (const auto& comp : components(g)) {
    if (comp.size() <= kExactComponentLimit)
      exact_color(g, comp, out.colors);
    else
      greedy_color(g, comp, out.colors, colored);
  }
  std::tie(out.conflicts, out.stitches) = evaluate_coloring(g, out.colors);
  return out;
}

/// Rewrites the colors of every committed vertex according to `d`; geometry is untouched.
inline void apply_decomposition(Grid& grid, const ConflictGraph& g, const Decomposition& d) {
  for (std::size_t k = 0; k < g.nodes.size(); ++k)
    for (const Vertex& v : g.nodes[k].vertices) grid.recolor(v, d.colors[k]);
}

struct BaselineResult {
  Grid grid;
  std::map<int, RouteTree> routes;
  ConflictGraph graph;
  Decomposition decomposition;
  std::vector<int> order;
};

/// Colorless routing (gamma = stitch_cost = 0, single pass) followed by decomposition.
inline BaselineResult run_baseline(const Layout& layout) {
  Layout colorless = layout;
  colorless.rules.gamma = 0.0;
  colorless.rules.stitch_cost = 0.0;
  BaselineResult result{Grid(colorless), {}, {}, {}, net_order(layout)};
  for (int id : result.order)
    result.routes[id] = detail::route_and_commit(result.grid, detail::net_by_id(layout, id), 0);

  result.grid.set_rules(layout.rules);
  result.graph = build_conflict_graph(result.grid, layout.rules);
  result.decomposition = decompose(result.graph);
  apply_decomposition(result.grid, result.graph, result.decomposition);

  for (auto& [id, tree] : result.routes) {
    for (auto& [v, c] : tree.vertex_colors) c = result.grid.cell(v).color;
    tree.stitches = stitch_pairs(tree.vertex_colors);
    tree.cost = NetRouter::evaluate_cost(result.grid, detail::net_by_id(layout, id), tree);
  }
  return result;
}

}  // namespace tplroute
