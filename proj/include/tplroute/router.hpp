#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tplroute/color_state.hpp"
#include "tplroute/error.hpp"
#include "tplroute/grid.hpp"
#include "tplroute/layout.hpp"

namespace tplroute {

struct SearchNode {
  Vertex vertex;
  double cost = 0.0;
  ColorState color_state = ColorState::all();
  int prev = -1;  // index into the router's node pool
  std::optional<Direction> arrival_dir;
  bool tree = false;  // source or re-seeded tree vertex
};

struct VerSet {
  std::vector<Vertex> members;
  ColorState color_state;
  int seg_set = -1;
};

struct SegSet {
  std::vector<int> ver_sets;
  ColorState color_state;
  std::optional<Color> final_color;
};

/// One traced connection: vertices from the tree attachment point to the reached pin.
struct TracedPath {
  std::vector<Vertex> vertices;
  double cost = 0.0;
};

/// Weighted cost terms of a finished, colored route.
struct CostBreakdown {
  double trad = 0.0;    // alpha * sum of trad_cost over path edges
  double stitch = 0.0;  // beta * stitch_cost * stitches
  double color = 0.0;   // sum of color_cost over colored vertices
  double total() const { return trad + stitch + color; }
};

struct RouteTree {
  int net_id = 0;
  std::vector<std::vector<Vertex>> paths;
  std::map<Vertex, Color> vertex_colors;
  std::vector<std::pair<Vertex, Vertex>> stitches;
  // Color state each vertex carried when it was traced.
  std::map<Vertex, ColorState> search_states;
  // Sum of the search costs of all paths (the objective the search minimised).
  double search_cost = 0.0;
  CostBreakdown cost;

  std::vector<std::pair<Vertex, Color>> colored_vertices() const {
    return {vertex_colors.begin(), vertex_colors.end()};
  }
};

/// Same-net, same-layer, grid-adjacent pairs with different colors.
inline std::vector<std::pair<Vertex, Vertex>> stitch_pairs(const std::map<Vertex, Color>& colors) {
  std::vector<std::pair<Vertex, Vertex>> out;
  for (const auto& [v, c] : colors) {
    for (const Vertex& u : {Vertex{v.x + 1, v.y, v.layer}, Vertex{v.x, v.y + 1, v.layer}}) {
      auto it = colors.find(u);
      if (it != colors.end() && it->second != c) out.emplace_back(v, u);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Direction of the grid edge a -> b, if they are adjacent.
inline std::optional<Direction> direction_between(const Grid& grid, const Vertex& a, const Vertex& b) {
  for (Direction d : kDirections) {
    auto t = grid.step(a, d);
    if (t && *t == b) return d;
  }
  return std::nullopt;
}

/// Routes one multi-pin net against a read-only grid. The usual entry point
/// is route_net(); the stepwise interface exists for tests and tools that
/// need to look at the sources or nodes between searches.
class NetRouter {
 public:
  NetRouter(const Grid& grid, const Net& net) : grid_(grid), net_(net), reached_(net.pins.size(), false) {
    for (std::size_t p = 0; p < net.pins.size(); ++p)
      for (const Vertex& v : net.pins[p].covered) pins_at_[grid.index(v)].push_back(static_cast<int>(p));
    if (!net.pins.empty()) {
      reached_[0] = true;
      for (const Vertex& v : net.pins[0].covered) add_seed(grid.index(v));
    }
  }

  bool done() const { return std::all_of(reached_.begin(), reached_.end(), [](bool r) { return r; }); }
  const std::vector<bool>& reached() const { return reached_; }

  /// Current multi-source set: each vertex with the state it is searched from.
  std::vector<std::pair<Vertex, ColorState>> seeds() const {
    std::vector<std::pair<Vertex, ColorState>> out;
    for (std::size_t idx : seeds_) out.emplace_back(grid_.vertex(idx), seed_state(idx));
    return out;
  }

  const SearchNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const std::vector<VerSet>& ver_sets() const { return ver_sets_; }
  const std::vector<SegSet>& seg_sets() const { return seg_sets_; }
  int seg_set_of(const Vertex& v) const {
    auto it = ver_set_of_.find(grid_.index(v));
    return it == ver_set_of_.end() ? -1 : find(ver_sets_[static_cast<std::size_t>(it->second)].seg_set);
  }

  /// Min-cost search from the current sources until a vertex of an unreached
  /// pin is popped. Returns that node's id.
  int search() {
    nodes_.clear();
    label_.assign(grid_.num_vertices(), -1);
    closed_.assign(grid_.num_vertices(), false);
    Queue queue;
    for (std::size_t idx : seeds_) {
      SearchNode s;
      s.vertex = grid_.vertex(idx);
      s.cost = 0.0;
      s.color_state = seed_state(idx);
      s.tree = true;
      label_[idx] = push_node(s);
      queue.push({0.0, idx, -1, label_[idx]});
    }

    const DesignRules& rules = grid_.rules();
    const double stitch = rules.beta * rules.stitch_cost;
    while (!queue.empty()) {
      const Entry top = queue.top();
      queue.pop();
      if (closed_[top.vidx] || label_[top.vidx] != top.node || top.cost > nodes_[top.node].cost) continue;
      closed_[top.vidx] = true;
      const SearchNode cur = nodes_[static_cast<std::size_t>(top.node)];

      if (covers_unreached_pin(top.vidx)) return top.node;

      for (Direction dir : kDirections) {
        const auto target = grid_.step(cur.vertex, dir);
        if (!target || grid_.blocked_for(*target, net_.id)) continue;
        const std::size_t tidx = grid_.index(*target);
        if (closed_[tidx]) continue;

        const double trad = rules.alpha * grid_.trad_cost(cur.vertex, dir, net_.guide);
        ColorCosts cost{};
        for (Color c : kColors) {
          cost[slot(c)] = trad + grid_.color_cost_at(*target, c, net_.id);
          if (!is_via(dir) && !cur.color_state.contains(c)) cost[slot(c)] += stitch;
        }
        const double min_cost = *std::min_element(cost.begin(), cost.end());
        ColorState state;
        for (Color c : kColors)
          if (cost[slot(c)] == min_cost) state = state.with(c);

        const double new_cost = cur.cost + min_cost;
        const int existing = label_[tidx];
        // Strictly better only: on ties the incumbent label stays.
        if (existing != -1 && !(new_cost < nodes_[static_cast<std::size_t>(existing)].cost)) continue;

        SearchNode next;
        next.vertex = *target;
        next.cost = new_cost;
        next.color_state = state;
        next.prev = top.node;
        next.arrival_dir = dir;
        int id = existing;
        if (id == -1) {
          id = push_node(next);
          label_[tidx] = id;
        } else {
          nodes_[static_cast<std::size_t>(id)] = next;
        }
        queue.push({new_cost, tidx, static_cast<int>(dir), id});
      }
    }

    std::string missing;
    for (std::size_t p = 0; p < reached_.size(); ++p)
      if (!reached_[p]) missing += (missing.empty() ? "" : ",") + std::to_string(p);
    throw Error(ErrorKind::Unroutable,
                "net " + std::to_string(net_.id) + " (" + net_.name + "): pins [" + missing + "] are unreachable");
  }

  /// Walks predecessor links from `dst` back to the tree, grouping vertices
  /// into verSets/segSets, then re-seeds the traced vertices as sources.
  TracedPath backtrace(int dst) {
    TracedPath out;
    out.cost = node(dst).cost;

    int cur = dst;
    {
      const SearchNode& d = node(cur);
      const std::size_t didx = grid_.index(d.vertex);
      if (!ver_set_of_.count(didx)) {
        const int seg = new_seg_set(d.color_state);
        attach(didx, new_ver_set(seg, d.color_state));
        search_states_.emplace(d.vertex, d.color_state);
      }
      for (int p : pins_covering(didx)) reached_[static_cast<std::size_t>(p)] = true;
    }

    std::vector<Vertex> reversed{node(cur).vertex};
    while (!node(cur).tree) {
      const SearchNode& here = node(cur);
      const int prev = here.prev;
      if (prev < 0) throw Error(ErrorKind::DeadState, "backtrace reached a non-tree node without predecessor");
      const SearchNode& before = node(prev);
      const std::size_t hidx = grid_.index(here.vertex);
      const std::size_t pidx = grid_.index(before.vertex);
      const int vs = ver_set_of_.at(hidx);
      const int seg = find(ver_sets_[static_cast<std::size_t>(vs)].seg_set);
      const bool planar = !is_via(*here.arrival_dir);

      auto pv = ver_set_of_.find(pidx);
      if (pv == ver_set_of_.end()) {
        const ColorState shared = intersect(seg_sets_[static_cast<std::size_t>(seg)].color_state, before.color_state);
        if (planar && !shared.empty()) {
          seg_sets_[static_cast<std::size_t>(seg)].color_state = shared;
          if (before.color_state == ver_sets_[static_cast<std::size_t>(vs)].color_state)
            attach(pidx, vs);
          else
            attach(pidx, new_ver_set(seg, before.color_state));
        } else {
          // No common mask (stitch) or a layer change: a new segSet starts here.
          const int ps = new_seg_set(before.color_state);
          attach(pidx, new_ver_set(ps, before.color_state));
        }
        search_states_.emplace(before.vertex, before.color_state);
      } else if (planar) {
        const int pseg = find(ver_sets_[static_cast<std::size_t>(pv->second)].seg_set);
        const ColorState shared = intersect(seg_sets_[static_cast<std::size_t>(seg)].color_state,
                                            seg_sets_[static_cast<std::size_t>(pseg)].color_state);
        if (pseg != seg && !shared.empty()) unite(seg, pseg, shared);
      }
      reversed.push_back(before.vertex);
      cur = prev;
    }

    out.vertices.assign(reversed.rbegin(), reversed.rend());
    for (const Vertex& v : out.vertices) add_seed(grid_.index(v));
    paths_.push_back(out.vertices);
    search_cost_ += out.cost;
    return out;
  }

  /// Collapses every segSet to one mask and assembles the RouteTree.
  RouteTree finalize() {
    RouteTree tree;
    tree.net_id = net_.id;
    tree.paths = paths_;
    tree.search_states = search_states_;
    tree.search_cost = search_cost_;

    std::map<int, std::vector<Vertex>> members;
    for (const auto& [vidx, vs] : ver_set_of_)
      members[find(ver_sets_[static_cast<std::size_t>(vs)].seg_set)].push_back(grid_.vertex(vidx));

    for (auto& [seg, verts] : members) {
      SegSet& s = seg_sets_[static_cast<std::size_t>(seg)];
      if (s.color_state.empty())
        throw Error(ErrorKind::DeadState, "net " + std::to_string(net_.id) + ": a segSet reached state 000");
      ColorCosts cost{};
      for (const Vertex& v : verts)
        for (Color c : kColors) cost[slot(c)] += grid_.color_cost_at(v, c, net_.id);
      s.final_color = pick_final(s.color_state, cost);
      for (const Vertex& v : verts) tree.vertex_colors[v] = *s.final_color;
    }

    tree.stitches = stitch_pairs(tree.vertex_colors);
    tree.cost = evaluate_cost(grid_, net_, tree);
    return tree;
  }

  /// Weighted terms of a colored tree (history included in trad, as searched).
  static CostBreakdown evaluate_cost(const Grid& grid, const Net& net, const RouteTree& tree) {
    const DesignRules& rules = grid.rules();
    CostBreakdown cost;
    for (const auto& path : tree.paths)
      for (std::size_t i = 1; i < path.size(); ++i)
        cost.trad += rules.alpha * grid.trad_cost(path[i - 1], *direction_between(grid, path[i - 1], path[i]), net.guide);
    cost.stitch = rules.beta * rules.stitch_cost * static_cast<double>(tree.stitches.size());
    for (const auto& [v, c] : tree.vertex_colors) cost.color += grid.color_cost_at(v, c, net.id);
    return cost;
  }

 private:
  struct Entry {
    double cost;
    std::size_t vidx;
    int dir_rank;
    int node;
  };
  struct EntryAfter {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.cost != b.cost) return a.cost > b.cost;
      if (a.vidx != b.vidx) return a.vidx > b.vidx;
      return a.dir_rank > b.dir_rank;
    }
  };
  using Queue = std::priority_queue<Entry, std::vector<Entry>, EntryAfter>;

  int push_node(const SearchNode& n) {
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }

  void add_seed(std::size_t idx) {
    if (std::find(seeds_.begin(), seeds_.end(), idx) == seeds_.end()) seeds_.push_back(idx);
  }

  // Tree vertices are searched from their (possibly narrowed) segSet state.
  ColorState seed_state(std::size_t idx) const {
    auto it = ver_set_of_.find(idx);
    if (it == ver_set_of_.end()) return ColorState::all();
    return seg_sets_[static_cast<std::size_t>(find(ver_sets_[static_cast<std::size_t>(it->second)].seg_set))]
        .color_state;
  }

  std::span<const int> pins_covering(std::size_t idx) const {
    auto it = pins_at_.find(idx);
    if (it == pins_at_.end()) return {};
    return it->second;
  }

  bool covers_unreached_pin(std::size_t idx) const {
    for (int p : pins_covering(idx))
      if (!reached_[static_cast<std::size_t>(p)]) return true;
    return false;
  }

  int new_seg_set(ColorState state) {
    seg_sets_.push_back(SegSet{{}, state, std::nullopt});
    parent_.push_back(static_cast<int>(seg_sets_.size()) - 1);
    return static_cast<int>(seg_sets_.size()) - 1;
  }

  int new_ver_set(int seg, ColorState state) {
    ver_sets_.push_back(VerSet{{}, state, seg});
    const int id = static_cast<int>(ver_sets_.size()) - 1;
    seg_sets_[static_cast<std::size_t>(seg)].ver_sets.push_back(id);
    return id;
  }

  void attach(std::size_t vidx, int vs) {
    ver_set_of_[vidx] = vs;
    ver_sets_[static_cast<std::size_t>(vs)].members.push_back(grid_.vertex(vidx));
  }

  int find(int seg) const {
    while (parent_[static_cast<std::size_t>(seg)] != seg) seg = parent_[static_cast<std::size_t>(seg)];
    return seg;
  }

  void unite(int keep, int other, ColorState state) {
    parent_[static_cast<std::size_t>(other)] = keep;
    SegSet& k = seg_sets_[static_cast<std::size_t>(keep)];
    SegSet& o = seg_sets_[static_cast<std::size_t>(other)];
    k.ver_sets.insert(k.ver_sets.end(), o.ver_sets.begin(), o.ver_sets.end());
    o.ver_sets.clear();
    k.color_state = state;
  }

  const Grid& grid_;
  const Net& net_;
  std::vector<bool> reached_;
  std::unordered_map<std::size_t, std::vector<int>> pins_at_;
  std::vector<std::size_t> seeds_;

  std::vector<SearchNode> nodes_;
  std::vector<int> label_;
  std::vector<bool> closed_;

  std::vector<VerSet> ver_sets_;
  std::vector<SegSet> seg_sets_;
  std::vector<int> parent_;
  std::unordered_map<std::size_t, int> ver_set_of_;
  std::map<Vertex, ColorState> search_states_;
  std::vector<std::vector<Vertex>> paths_;
  double search_cost_ = 0.0;
};

/// Routes all pins of `net` as one tree: the first search starts from
/// pins[0], each later search starts from every vertex already in the tree.
/// The grid is not modified.
inline RouteTree route_net(const Grid& grid, const Net& net) {
  NetRouter router(grid, net);
  while (!router.done()) router.backtrace(router.search());
  return router.finalize();
}

}  // namespace tplroute
