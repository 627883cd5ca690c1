#pragma once

#include <algorithm>
#include <climits>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tplroute/conflict.hpp"
#include "tplroute/grid.hpp"
#include "tplroute/layout.hpp"
#include "tplroute/router.hpp"

namespace tplroute {

/// Cross-net, same-layer, same-color vertex pairs closer than d_color.
/// Each unordered pair appears once, ordered by the grid index of vertex_a.
inline std::vector<Conflict> detect_conflicts(const Grid& grid, const DesignRules& rules) {
  std::vector<Conflict> out;
  const int r = rules.d_color - 1;
  for (std::size_t i = 0; i < grid.num_vertices(); ++i) {
    const Cell& a = grid.cells()[i];
    if (a.state != CellState::Committed) continue;
    const Vertex va = grid.vertex(i);
    for (int dy = -r; dy <= r; ++dy) {
      const int span = r - std::abs(dy);
      for (int dx = -span; dx <= span; ++dx) {
        const Vertex vb{va.x + dx, va.y + dy, va.layer};
        if (!grid.in_bounds(vb)) continue;
        const std::size_t j = grid.index(vb);
        if (j <= i) continue;
        const Cell& b = grid.cells()[j];
        if (b.state == CellState::Committed && b.net != a.net && b.color == a.color)
          out.push_back({va, vb, a.net, b.net, a.color, std::abs(dx) + std::abs(dy)});
      }
    }
  }
  return out;
}

struct IterationReport {
  int iteration = 0;
  std::vector<Conflict> conflicts;
  int stitch_count = 0;
  std::vector<int> nets_rerouted;  // in the order they were rerouted
  bool rolled_back = false;        // reroute was unroutable; previous routes kept
};

struct RoutingResult {
  Grid grid;
  std::map<int, RouteTree> routes;
  std::vector<IterationReport> iterations;
  std::vector<int> order;
  std::map<int, Net> nets;  // nets as last routed (source pin may have moved)
};

inline int half_perimeter(const Net& net) {
  int x0 = INT_MAX, y0 = INT_MAX, x1 = INT_MIN, y1 = INT_MIN;
  for (const Pin& p : net.pins)
    for (const Vertex& v : p.covered) {
      x0 = std::min(x0, v.x);
      y0 = std::min(y0, v.y);
      x1 = std::max(x1, v.x);
      y1 = std::max(y1, v.y);
    }
  return x0 > x1 ? 0 : (x1 - x0) + (y1 - y0);
}

/// Routing order: ascending (pin count, bounding-box half perimeter, id).
inline std::vector<int> net_order(const Layout& layout) {
  std::vector<const Net*> nets;
  for (const Net& n : layout.nets) nets.push_back(&n);
  std::sort(nets.begin(), nets.end(), [](const Net* a, const Net* b) {
    const auto ka = std::make_tuple(a->pins.size(), half_perimeter(*a), a->id);
    const auto kb = std::make_tuple(b->pins.size(), half_perimeter(*b), b->id);
    return ka < kb;
  });
  std::vector<int> out;
  for (const Net* n : nets) out.push_back(n->id);
  return out;
}

inline int total_stitches(const std::map<int, RouteTree>& routes) {
  int n = 0;
  for (const auto& [id, tree] : routes) n += static_cast<int>(tree.stitches.size());
  return n;
}

namespace detail {

inline const Net& net_by_id(const Layout& layout, int id) {
  for (const Net& n : layout.nets)
    if (n.id == id) return n;
  throw Error(ErrorKind::Validation, "unknown net id " + std::to_string(id));
}

inline RouteTree route_and_commit(Grid& grid, const Net& net, int iteration) {
  try {
    RouteTree tree = route_net(grid, net);
    const auto colored = tree.colored_vertices();
    grid.commit_route(net.id, colored);
    return tree;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Unroutable) throw;
    throw Error(ErrorKind::Unroutable, std::string(e.what()) + " (iteration " + std::to_string(iteration) + ")");
  }
}

// Moves the first pin that is not on a conflict vertex to the front, when
// the current source pin is on one. The source pin takes its mask from the
// wire leaving it, so a conflicting source tends to repeat.
inline void rotate_source_pin(Net& net, const std::set<Vertex>& hot) {
  auto is_hot = [&](const Pin& p) {
    return std::any_of(p.covered.begin(), p.covered.end(), [&](const Vertex& v) { return hot.count(v) > 0; });
  };
  if (net.pins.empty() || !is_hot(net.pins[0])) return;
  for (std::size_t k = 1; k < net.pins.size(); ++k)
    if (!is_hot(net.pins[k])) {
      std::rotate(net.pins.begin(), net.pins.begin() + static_cast<std::ptrdiff_t>(k),
                  net.pins.begin() + static_cast<std::ptrdiff_t>(k) + 1);
      return;
    }
}

}  // namespace detail

/// Routes every net, then rips up and reroutes the nets involved in color
/// conflicts with escalating history cost until the layout is clean or the
/// iteration limit is reached.
///
/// Reroutes run in reverse routing order on odd iterations and in routing
/// order otherwise; if the reverse order leaves a net unroutable the forward
/// order is tried, and if that fails too the iteration keeps the previous
/// routes. Only iteration 0 propagates unroutable errors. `on_iteration`,
/// when set, sees the result after each iteration's report is appended.
inline RoutingResult route_all(const Layout& layout,
                               const std::function<void(const RoutingResult&)>& on_iteration = {}) {
  RoutingResult result{Grid(layout), {}, {}, net_order(layout), {}};
  Grid& grid = result.grid;
  const DesignRules& rules = layout.rules;
  for (const Net& n : layout.nets) result.nets.emplace(n.id, n);

  for (int iter = 0; iter < rules.max_iterations; ++iter) {
    IterationReport report;
    report.iteration = iter;
    if (iter == 0) {
      for (int id : result.order) result.routes[id] = detail::route_and_commit(grid, result.nets.at(id), iter);
      report.nets_rerouted = result.order;
    } else {
      const std::vector<Conflict>& previous = result.iterations.back().conflicts;
      std::set<Vertex> hot;
      std::set<int> offenders;
      for (const Conflict& c : previous) {
        hot.insert(c.vertex_a);
        hot.insert(c.vertex_b);
        offenders.insert(c.net_a);
        offenders.insert(c.net_b);
      }
      for (const Vertex& v : hot) grid.add_history(v, rules.history_increment);

      std::vector<int> forward;
      for (int id : result.order)
        if (offenders.count(id)) {
          forward.push_back(id);
          detail::rotate_source_pin(result.nets.at(id), hot);
        }
      std::vector<std::vector<int>> attempts;
      if (iter % 2 == 1) attempts.emplace_back(forward.rbegin(), forward.rend());
      attempts.push_back(forward);

      const Grid before = grid;
      const std::map<int, RouteTree> routes_before = result.routes;
      report.rolled_back = true;
      for (const std::vector<int>& order : attempts) {
        try {
          for (int id : order) grid.rip_up(id);
          for (int id : order) result.routes[id] = detail::route_and_commit(grid, result.nets.at(id), iter);
          report.nets_rerouted = order;
          report.rolled_back = false;
          break;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::Unroutable) throw;
          grid = before;
          result.routes = routes_before;
        }
      }
    }

    report.conflicts = detect_conflicts(grid, rules);
    report.stitch_count = total_stitches(result.routes);
    const bool clean = report.conflicts.empty();
    result.iterations.push_back(std::move(report));
    if (on_iteration) on_iteration(result);
    if (clean) break;
  }
  return result;
}

}  // namespace tplroute
