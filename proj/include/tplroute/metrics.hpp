#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tplroute/grid.hpp"
#include "tplroute/layout.hpp"
#include "tplroute/negotiation.hpp"
#include "tplroute/router.hpp"

namespace tplroute {

struct NetScore {
  int id = 0;
  double trad = 0.0;  // unweighted wire cost: length + wrong-way + via terms
  int stitches = 0;
  int conflicts = 0;  // conflicts this net takes part in
};

struct ScoreReport {
  int conflicts = 0;
  int stitches = 0;
  double weighted_cost = 0.0;
  std::vector<NetScore> per_net;
  double wall_time_ms = 0.0;
};

/// alpha * sum(trad) + beta * stitch_cost * stitches + gamma * conflicts.
inline double weighted_cost(const std::vector<NetScore>& per_net, int stitches, int conflicts, const DesignRules& rules) {
  double trad = 0.0;
  for (const NetScore& n : per_net) trad += n.trad;
  return rules.alpha * trad + rules.beta * rules.stitch_cost * stitches + rules.gamma * conflicts;
}

/// Wire cost of the routed edges; history and guide penalties are search
/// aids and are left out of the score.
inline double route_trad(const Grid& grid, const RouteTree& tree) {
  double trad = 0.0;
  for (const auto& path : tree.paths)
    for (std::size_t i = 1; i < path.size(); ++i) trad += grid.wire_cost(path[i], *direction_between(grid, path[i - 1], path[i]));
  return trad;
}

inline ScoreReport score(const Grid& grid, const std::map<int, RouteTree>& routes, const DesignRules& rules) {
  ScoreReport r;
  const auto conflicts = detect_conflicts(grid, rules);
  r.conflicts = static_cast<int>(conflicts.size());
  std::map<int, int> per_net_conflicts;
  for (const Conflict& c : conflicts) {
    ++per_net_conflicts[c.net_a];
    ++per_net_conflicts[c.net_b];
  }
  for (const auto& [id, tree] : routes) {
    NetScore n;
    n.id = id;
    n.trad = route_trad(grid, tree);
    n.stitches = static_cast<int>(tree.stitches.size());
    n.conflicts = per_net_conflicts[id];
    r.stitches += n.stitches;
    r.per_net.push_back(n);
  }
  r.weighted_cost = weighted_cost(r.per_net, r.stitches, r.conflicts, rules);
  return r;
}

/// Stitches read straight off the grid: same-net, same-layer neighbours with different masks.
inline int recount_stitches(const Grid& grid) {
  int n = 0;
  for (std::size_t i = 0; i < grid.num_vertices(); ++i) {
    const Cell& a = grid.cells()[i];
    if (a.state != CellState::Committed) continue;
    const Vertex v = grid.vertex(i);
    for (const Vertex& u : {Vertex{v.x + 1, v.y, v.layer}, Vertex{v.x, v.y + 1, v.layer}}) {
      if (!grid.in_bounds(u)) continue;
      const Cell& b = grid.cell(u);
      if (b.state == CellState::Committed && b.net == a.net && b.color != a.color) ++n;
    }
  }
  return n;
}

struct ComparisonRow {
  std::string metric;
  double base = 0.0;
  double ours = 0.0;
  std::optional<double> improvement;  // percent reduction vs base; empty when base is 0
};

/// Percent reduction of each metric relative to `base`.
inline std::vector<ComparisonRow> compare(const ScoreReport& base, const ScoreReport& ours) {
  auto row = [](const char* name, double a, double b) {
    ComparisonRow r{name, a, b, std::nullopt};
    if (a != 0.0) r.improvement = (a - b) / a * 100.0;
    return r;
  };
  return {row("conflicts", base.conflicts, ours.conflicts), row("stitches", base.stitches, ours.stitches),
          row("weighted_cost", base.weighted_cost, ours.weighted_cost)};
}

inline Json report_json(const ScoreReport& r) {
  using detail::number;
  Json per_net = Json::array();
  for (const NetScore& n : r.per_net)
    per_net.push_back({{"id", n.id}, {"trad", number(n.trad)}, {"stitches", n.stitches}, {"conflicts", n.conflicts}});
  return {{"conflicts", r.conflicts},
          {"stitches", r.stitches},
          {"weighted_cost", number(r.weighted_cost)},
          {"weighted_cost_label", "simplified score"},
          {"per_net", std::move(per_net)},
          {"wall_time_ms", number(r.wall_time_ms)}};
}

inline Json comparison_json(const std::vector<ComparisonRow>& rows) {
  using detail::number;
  Json out = Json::array();
  for (const ComparisonRow& r : rows) {
    Json imp = r.improvement ? number(*r.improvement) : Json("zero");
    out.push_back({{"metric", r.metric}, {"base", number(r.base)}, {"ours", number(r.ours)}, {"improvement", imp}});
  }
  return out;
}

inline Json iteration_json(const IterationReport& it) {
  return {{"iter", it.iteration},
          {"conflicts", static_cast<int>(it.conflicts.size())},
          {"stitches", it.stitch_count},
          {"rerouted", it.nets_rerouted}};
}

}  // namespace tplroute
