#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "tplroute/oracle.hpp"
#include "tplroute/router.hpp"

using namespace tplroute;

namespace {

using Colored = std::vector<std::pair<Vertex, Color>>;

Grid make(int w, int h, int layers, DesignRules r = {}) {
  std::vector<Preferred> ls;
  for (int l = 0; l < layers; ++l) ls.push_back(l % 2 == 0 ? Preferred::Horizontal : Preferred::Vertical);
  return Grid(w, h, ls, r);
}

Net two_pin(int id, Vertex a, Vertex b) { return Net{id, "n" + std::to_string(id), {Pin{id, {a}}, Pin{id, {b}}}, {}}; }

void own_pins(Grid& g, const Net& n) {
  for (const Pin& p : n.pins)
    for (const Vertex& v : p.covered) g.set_pin_owner(v, n.id);
}

// Foreign colored run on row y, x in [x0, x1].
void foreign_run(Grid& g, int net, int y, int x0, int x1, Color c) {
  Colored run;
  for (int x = x0; x <= x1; ++x) run.push_back({{x, y, 0}, c});
  g.commit_route(net, run);
}

}  // namespace

TEST(RouteNet, SinglePinNet) {
  const Grid g = make(4, 4, 1);
  const Net n{1, "a", {Pin{1, {{1, 1, 0}}}}, {}};
  const RouteTree t = route_net(g, n);
  EXPECT_TRUE(t.paths.empty());
  EXPECT_TRUE(t.stitches.empty());
  EXPECT_TRUE(t.vertex_colors.empty());
  EXPECT_DOUBLE_EQ(t.cost.total(), 0.0);
}

TEST(RouteNet, StraightCorridor) {
  Grid g = make(5, 1, 1);
  const Net n = two_pin(1, {0, 0, 0}, {4, 0, 0});
  own_pins(g, n);
  const RouteTree t = route_net(g, n);
  ASSERT_EQ(t.paths.size(), 1u);
  EXPECT_EQ(t.paths[0].size(), 5u);
  EXPECT_TRUE(t.stitches.empty());
  for (const auto& [v, c] : t.vertex_colors) EXPECT_EQ(c, Color::Red);
  EXPECT_DOUBLE_EQ(t.cost.total(), 4.0 * g.rules().alpha);
  EXPECT_DOUBLE_EQ(t.search_cost, 4.0);
  for (const auto& [v, s] : t.search_states) EXPECT_EQ(s, ColorState::all());
}

TEST(RouteNet, ThreePinReseedsFromTree) {
  Grid g = make(7, 5, 1);
  const Net n{1, "t", {Pin{1, {{0, 0, 0}}}, Pin{1, {{6, 0, 0}}}, Pin{1, {{3, 4, 0}}}}, {}};
  own_pins(g, n);
  NetRouter router(g, n);
  ASSERT_EQ(router.seeds().size(), 1u);
  const TracedPath first = router.backtrace(router.search());
  std::set<Vertex> seeds;
  for (const auto& [v, s] : router.seeds()) seeds.insert(v);
  EXPECT_EQ(seeds, std::set<Vertex>(first.vertices.begin(), first.vertices.end()));
  const TracedPath second = router.backtrace(router.search());
  EXPECT_TRUE(router.done());
  EXPECT_TRUE(seeds.count(second.vertices.front()));
  EXPECT_NE(second.vertices.front(), (Vertex{0, 0, 0}));
  EXPECT_EQ(second.vertices.back(), (Vertex{3, 4, 0}));
  const RouteTree t = router.finalize();
  EXPECT_EQ(t.paths.size(), 2u);
  EXPECT_EQ(t.vertex_colors.size(), first.vertices.size() + second.vertices.size() - 1);
}

TEST(RouteNet, RedExcludedNearForeignRed) {
  DesignRules r;
  r.gamma = 100;
  Grid g = make(7, 3, 1, r);
  foreign_run(g, 2, 0, 2, 4, Color::Red);
  foreign_run(g, 3, 2, 2, 4, Color::Red);
  const Net n = two_pin(1, {0, 1, 0}, {6, 1, 0});
  own_pins(g, n);
  const RouteTree t = route_net(g, n);
  for (int x = 2; x <= 4; ++x) EXPECT_FALSE(t.search_states.at({x, 1, 0}).contains(Color::Red));
  for (const auto& [v, c] : t.vertex_colors) EXPECT_NE(c, Color::Red);
  EXPECT_DOUBLE_EQ(t.cost.color, 0.0);
  EXPECT_TRUE(t.stitches.empty());
}

TEST(RouteNet, ForcedStitchBetweenCorridors) {
  Grid g = make(9, 3, 1);
  foreign_run(g, 2, 0, 1, 3, Color::Red);
  foreign_run(g, 3, 2, 1, 3, Color::Red);
  foreign_run(g, 4, 0, 5, 7, Color::Green);
  foreign_run(g, 5, 2, 5, 7, Color::Blue);
  const Net n = two_pin(1, {0, 1, 0}, {8, 1, 0});
  own_pins(g, n);
  NetRouter router(g, n);
  router.backtrace(router.search());
  EXPECT_NE(router.seg_set_of({3, 1, 0}), router.seg_set_of({5, 1, 0}));
  const RouteTree t = router.finalize();
  ASSERT_EQ(t.stitches.size(), 1u);
  EXPECT_EQ(t.vertex_colors.at({6, 1, 0}), Color::Red);
  EXPECT_NE(t.vertex_colors.at({2, 1, 0}), Color::Red);
  EXPECT_DOUBLE_EQ(t.cost.stitch, g.rules().beta * g.rules().stitch_cost);
  EXPECT_DOUBLE_EQ(t.cost.color, 0.0);
  const auto o = oracle::optimal_colored_path(g, std::vector<Vertex>{{0, 1, 0}}, std::vector<Vertex>{{8, 1, 0}}, 1);
  EXPECT_DOUBLE_EQ(t.search_cost, o.best_cost);
}

TEST(Backtrace, OverlappingStatesMerge) {
  // first half penalises BLUE (state 110), second half RED (state 011)
  Grid g = make(9, 3, 1);
  foreign_run(g, 2, 0, 1, 3, Color::Blue);
  foreign_run(g, 3, 2, 1, 3, Color::Blue);
  foreign_run(g, 4, 0, 5, 7, Color::Red);
  foreign_run(g, 5, 2, 5, 7, Color::Red);
  const Net n = two_pin(1, {0, 1, 0}, {8, 1, 0});
  own_pins(g, n);
  NetRouter router(g, n);
  router.backtrace(router.search());
  EXPECT_EQ(router.node(0).color_state, ColorState::all());
  const int seg = router.seg_set_of({0, 1, 0});
  for (int x = 0; x <= 8; ++x) EXPECT_EQ(router.seg_set_of({x, 1, 0}), seg) << x;
  EXPECT_EQ(router.seg_sets()[static_cast<std::size_t>(seg)].color_state, parse_color_state("010"));
  const RouteTree t = router.finalize();
  EXPECT_TRUE(t.stitches.empty());
  for (const auto& [v, c] : t.vertex_colors) EXPECT_EQ(c, Color::Green);
}

TEST(Backtrace, DisjointStatesStitch) {
  // prefix only RED is free (100), suffix RED is penalised (011)
  Grid g = make(9, 3, 1);
  foreign_run(g, 2, 0, 1, 3, Color::Green);
  foreign_run(g, 3, 2, 1, 3, Color::Blue);
  foreign_run(g, 4, 0, 5, 7, Color::Red);
  foreign_run(g, 5, 2, 5, 7, Color::Red);
  const Net n = two_pin(1, {0, 1, 0}, {8, 1, 0});
  own_pins(g, n);
  NetRouter router(g, n);
  router.backtrace(router.search());
  const int a = router.seg_set_of({2, 1, 0});
  const int b = router.seg_set_of({6, 1, 0});
  EXPECT_NE(a, b);
  EXPECT_EQ(router.seg_sets()[static_cast<std::size_t>(a)].color_state, parse_color_state("100"));
  EXPECT_FALSE(router.seg_sets()[static_cast<std::size_t>(b)].color_state.contains(Color::Red));
  EXPECT_EQ(router.finalize().stitches.size(), 1u);
}

TEST(Finalize, SingletonStateGivesThatColor) {
  Grid g = make(5, 3, 1);
  foreign_run(g, 2, 0, 0, 4, Color::Red);
  foreign_run(g, 3, 2, 0, 4, Color::Green);
  const Net n = two_pin(1, {0, 1, 0}, {4, 1, 0});
  own_pins(g, n);
  const RouteTree t = route_net(g, n);
  for (const auto& [v, c] : t.vertex_colors) EXPECT_EQ(c, Color::Blue);
}

TEST(Finalize, StitchesMatchRecount) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    Grid g = make(8, 8, 2);
    for (int k = 0; k < 12; ++k) {
      const Vertex v{static_cast<int>(rng() % 8), static_cast<int>(rng() % 8), static_cast<int>(rng() % 2)};
      if (g.cell(v).state == CellState::Free) {
        const Colored one{{v, kColors[rng() % 3]}};
        g.commit_route(10 + k, one);
      }
    }
    Net n{1, "m", {}, {}};
    std::set<Vertex> used;
    while (n.pins.size() < 4) {
      const Vertex v{static_cast<int>(rng() % 8), static_cast<int>(rng() % 8), static_cast<int>(rng() % 2)};
      if (g.cell(v).state == CellState::Free && used.insert(v).second) n.pins.push_back(Pin{1, {v}});
    }
    own_pins(g, n);
    RouteTree t;
    try {
      t = route_net(g, n);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Unroutable);
      continue;
    }
    int recount = 0;
    for (const auto& [v, c] : t.vertex_colors)
      for (const auto& [u, d] : t.vertex_colors)
        if (v < u && v.layer == u.layer && std::abs(v.x - u.x) + std::abs(v.y - u.y) == 1 && c != d) ++recount;
    EXPECT_EQ(static_cast<int>(t.stitches.size()), recount);
    for (const Pin& p : n.pins) EXPECT_TRUE(t.vertex_colors.count(p.covered[0]));
    for (const auto& [v, c] : t.vertex_colors) {
      EXPECT_FALSE(g.blocked_for(v, 1));
      EXPECT_TRUE(t.search_states.at(v).contains(c)) << to_string(v);
    }
    // one connected component
    std::set<Vertex> seen{t.vertex_colors.begin()->first};
    std::vector<Vertex> stack{t.vertex_colors.begin()->first};
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (const Step& s : g.neighbors(v))
        if (t.vertex_colors.count(s.to) && seen.insert(s.to).second) stack.push_back(s.to);
    }
    EXPECT_EQ(seen.size(), t.vertex_colors.size());
  }
}

TEST(RouteNet, ColorlessEqualsShortestPath) {
  DesignRules r;
  r.gamma = 0;
  r.stitch_cost = 0;
  std::mt19937 rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    Grid g = make(7, 7, 2, r);
    for (int k = 0; k < 14; ++k)
      g.set_obstacle({static_cast<int>(rng() % 7), static_cast<int>(rng() % 7), static_cast<int>(rng() % 2)});
    Vertex s{static_cast<int>(rng() % 7), static_cast<int>(rng() % 7), 0};
    Vertex t{static_cast<int>(rng() % 7), static_cast<int>(rng() % 7), 1};
    if (g.is_obstacle(s) || g.is_obstacle(t)) continue;
    // Bellman-Ford style relaxation over unit/wrong-way/via edge weights
    std::vector<double> dist(g.num_vertices(), 1e18);
    dist[g.index(s)] = 0;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < g.num_vertices(); ++i) {
        const Vertex v = g.vertex(i);
        if (dist[i] >= 1e18 || g.is_obstacle(v)) continue;
        for (const Step& st : g.neighbors(v)) {
          double w = 1;
          if (st.to.layer != v.layer) w += r.via_cost;
          else if ((st.to.y == v.y) != (g.preferred(v.layer) == Preferred::Horizontal)) w += r.wrong_way_cost;
          if (dist[i] + w < dist[g.index(st.to)]) {
            dist[g.index(st.to)] = dist[i] + w;
            changed = true;
          }
        }
      }
    }
    const Net n = two_pin(1, s, t);
    if (dist[g.index(t)] >= 1e18) {
      EXPECT_THROW(route_net(g, n), Error);
      continue;
    }
    EXPECT_DOUBLE_EQ(route_net(g, n).search_cost, dist[g.index(t)]);
  }
}

TEST(RouteNet, UnreachablePin) {
  Grid g = make(5, 1, 1);
  g.set_obstacle({2, 0, 0});
  const Net n = two_pin(1, {0, 0, 0}, {4, 0, 0});
  try {
    route_net(g, n);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unroutable);
  }
}

TEST(RouteNet, GridUnchanged) {
  Grid g = make(6, 6, 2);
  foreign_run(g, 2, 2, 1, 4, Color::Green);
  const Net n = two_pin(1, {0, 0, 0}, {5, 5, 1});
  const std::string before = g.dump();
  route_net(g, n);
  EXPECT_EQ(g.dump(), before);
}

TEST(RouteNet, Deterministic) {
  Grid g = make(6, 6, 2);
  foreign_run(g, 2, 3, 0, 3, Color::Red);
  const Net n{1, "d", {Pin{1, {{0, 0, 0}}}, Pin{1, {{5, 5, 0}}}, Pin{1, {{5, 0, 1}}}}, {}};
  const RouteTree a = route_net(g, n);
  const RouteTree b = route_net(g, n);
  EXPECT_EQ(a.paths, b.paths);
  EXPECT_EQ(a.vertex_colors, b.vertex_colors);
}

// Same instance family as the acceptance run: one 2-pin net against random foreign blobs.
TEST(RouteNet, MatchesOracleOnSmallGrids) {
  int compared = 0;
  for (int seed = 0; compared < 40; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    auto u = [&](int k) { return static_cast<int>(rng() % static_cast<std::uint64_t>(k)); };
    const int w = 3 + u(4), h = 3 + u(4), layers = 1 + u(2);
    Grid g = make(w, h, layers);
    const int blobs = u(4);
    for (int b = 0; b < blobs; ++b) {
      const Color c = kColors[static_cast<std::size_t>(u(3))];
      Vertex v{u(w), u(h), u(layers)};
      std::set<Vertex> cells;
      const int size = 1 + u(8);
      for (int k = 0; k < size; ++k) {
        if (g.cell(v).state == CellState::Free) cells.insert(v);
        Vertex nv = v;
        (u(2) ? nv.x : nv.y) += u(2) ? 1 : -1;
        if (g.in_bounds(nv)) v = nv;
      }
      Colored blob;
      for (const Vertex& x : cells) blob.push_back({x, c});
      g.commit_route(100 + b, blob);
    }
    Vertex s, t;
    int tries = 0;
    do {
      s = {u(w), u(h), u(layers)};
      t = {u(w), u(h), u(layers)};
      ++tries;
    } while ((g.cell(s).state != CellState::Free || g.cell(t).state != CellState::Free || s == t ||
              std::abs(s.x - t.x) + std::abs(s.y - t.y) + std::abs(s.layer - t.layer) > 6) &&
             tries < 1000);
    if (tries >= 1000) continue;
    const Net n = two_pin(1, s, t);
    own_pins(g, n);
    RouteTree tree;
    try {
      tree = route_net(g, n);
    } catch (const Error&) {
      EXPECT_THROW(oracle::optimal_colored_path(g, std::vector<Vertex>{s}, std::vector<Vertex>{t}, 1), Error);
      continue;
    }
    const auto o = oracle::optimal_colored_path(g, std::vector<Vertex>{s}, std::vector<Vertex>{t}, 1);
    std::vector<Color> colors;
    for (const Vertex& v : tree.paths[0]) colors.push_back(tree.vertex_colors.at(v));
    EXPECT_NEAR(tree.search_cost, o.best_cost, 1e-9 * std::max(1.0, o.best_cost)) << "seed " << seed;
    EXPECT_NEAR(oracle::objective(g, 1, tree.paths[0], colors), tree.search_cost, 1e-9 * std::max(1.0, o.best_cost))
        << "seed " << seed;
    ++compared;
  }
}

TEST(StitchPairs, CountsDifferingNeighbours) {
  std::map<Vertex, Color> colors{{{0, 0, 0}, Color::Red},
                                 {{1, 0, 0}, Color::Green},
                                 {{1, 1, 0}, Color::Green},
                                 {{1, 1, 1}, Color::Blue},
                                 {{2, 0, 0}, Color::Green}};
  const auto pairs = stitch_pairs(colors);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0], (std::pair<Vertex, Vertex>{{0, 0, 0}, {1, 0, 0}}));
}
