#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>

#include "tplroute/error.hpp"
#include "tplroute/grid.hpp"
#include "tplroute/layout.hpp"
#include "tplroute/negotiation.hpp"
#include "tplroute/router.hpp"

namespace tplroute {

struct GenerateParams {
  std::uint64_t seed = 0;
  int width = 8;
  int height = 8;
  int layers = 2;
  int nets = 4;
  int pins_per_net = 3;
  double congestion = 0.5;
  bool require_routable = true;
};

/// True when every net routes, in routing order, with color costs switched off.
inline bool routable_colorless(const Layout& layout) {
  Layout colorless = layout;
  colorless.rules.gamma = 0.0;
  colorless.rules.stitch_cost = 0.0;
  Grid grid(colorless);
  try {
    for (int id : net_order(colorless)) {
      const RouteTree tree = route_net(grid, detail::net_by_id(colorless, id));
      grid.commit_route(id, tree.colored_vertices());
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Unroutable) throw;
    return false;
  }
  return true;
}

namespace detail {

// One placement draw; empty optional when some pin found no free vertex.
inline std::optional<Layout> draw_instance(const GenerateParams& p, std::mt19937_64& rng) {
  auto uniform = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };

  Layout layout;
  layout.width = p.width;
  layout.height = p.height;
  for (int l = 0; l < p.layers; ++l) layout.layers.push_back(l % 2 == 0 ? Preferred::Horizontal : Preferred::Vertical);

  const long long cells = static_cast<long long>(p.width) * p.height * p.layers;
  std::set<Vertex> taken;
  const auto obstacles = static_cast<long long>(std::llround(p.congestion * 0.12 * static_cast<double>(cells)));
  for (long long i = 0; i < obstacles; ++i) {
    const Vertex v{uniform(p.width), uniform(p.height), uniform(p.layers)};
    if (taken.insert(v).second) layout.obstacles.push_back(v);
  }
  std::sort(layout.obstacles.begin(), layout.obstacles.end());

  const int span = std::max(2, static_cast<int>(std::lround((1.0 - 0.5 * p.congestion) * std::max(p.width, p.height))));
  constexpr int kPinRetries = 1000;
  for (int n = 0; n < p.nets; ++n) {
    Net net;
    net.id = n + 1;
    net.name = "n" + std::to_string(n + 1);
    const int x0 = uniform(std::max(1, p.width - span + 1));
    const int y0 = uniform(std::max(1, p.height - span + 1));
    for (int k = 0; k < p.pins_per_net; ++k) {
      bool placed = false;
      for (int attempt = 0; attempt < kPinRetries && !placed; ++attempt) {
        const Vertex v{std::min(p.width - 1, x0 + uniform(span)), std::min(p.height - 1, y0 + uniform(span)),
                       uniform(p.layers)};
        if (!taken.insert(v).second) continue;
        net.pins.push_back(Pin{net.id, {v}});
        placed = true;
      }
      if (!placed) return std::nullopt;
    }
    layout.nets.push_back(std::move(net));
  }
  return layout;
}

}  // namespace detail

inline constexpr int kGenerateAttempts = 256;

/// Seeded random instance. Layers alternate H/V starting with H. Obstacle
/// count grows with congestion; higher congestion also packs each net's pins
/// into a smaller window. With require_routable, draws repeat until the nets
/// route one after another without color costs.
inline Layout generate_instance(const GenerateParams& p) {
  if (p.width <= 0 || p.height <= 0 || p.layers <= 0 || p.nets <= 0 || p.pins_per_net <= 0)
    throw Error(ErrorKind::Config, "generate: sizes and counts must be positive");
  if (!(p.congestion >= 0.0 && p.congestion <= 1.0)) throw Error(ErrorKind::Config, "generate: congestion must be in [0,1]");
  const long long cells = static_cast<long long>(p.width) * p.height * p.layers;
  if (static_cast<long long>(p.nets) * p.pins_per_net > cells)
    throw Error(ErrorKind::InfeasiblePlacement, "generate: more pins than grid vertices");

  std::mt19937_64 rng(p.seed);
  for (int attempt = 0; attempt < kGenerateAttempts; ++attempt) {
    std::optional<Layout> layout = detail::draw_instance(p, rng);
    if (layout && (!p.require_routable || routable_colorless(*layout))) return *layout;
  }
  throw Error(ErrorKind::InfeasiblePlacement, "generate: no placement found after " +
                                                  std::to_string(kGenerateAttempts) + " attempts (seed " +
                                                  std::to_string(p.seed) + ")");
}

}  // namespace tplroute
