#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tplroute/color_state.hpp"
#include "tplroute/error.hpp"
#include "tplroute/layout.hpp"

namespace tplroute {

// F/B run along the layer's preferred direction, R/L across it, U/D change layer.
enum class Direction : std::uint8_t { F, B, R, L, U, D };

inline constexpr std::array<Direction, 6> kDirections{Direction::F, Direction::B, Direction::R,
                                                      Direction::L, Direction::U, Direction::D};

constexpr bool is_via(Direction d) { return d == Direction::U || d == Direction::D; }
constexpr bool is_wrong_way(Direction d) { return d == Direction::R || d == Direction::L; }

constexpr char direction_letter(Direction d) { return "FBRLUD"[static_cast<int>(d)]; }

enum class CellState : std::uint8_t { Free, Obstacle, Committed };

struct Cell {
  CellState state = CellState::Free;
  int net = -1;
  Color color = Color::Red;
};

struct Step {
  Direction dir;
  Vertex to;
};

/// Edge cost split into its three weighted terms.
struct EdgeCost {
  double trad = 0.0;    // alpha * trad_cost
  double stitch = 0.0;  // beta * stitch_cost, or 0
  double color = 0.0;   // gamma-weighted conflict count
  double total() const { return trad + stitch + color; }
};

class Grid {
 public:
  Grid(int width, int height, std::vector<Preferred> layers, DesignRules rules)
      : width_(width), height_(height), layers_(std::move(layers)), rules_(rules) {
    const std::size_t n = static_cast<std::size_t>(width_) * height_ * layers_.size();
    cells_.resize(n);
    history_.assign(n, 0.0);
    pin_owner_.assign(n, -1);
  }

  explicit Grid(const Layout& layout) : Grid(layout.width, layout.height, layout.layers, layout.rules) {
    for (const Vertex& o : layout.obstacles) set_obstacle(o);
    for (const Net& net : layout.nets)
      for (const Pin& pin : net.pins)
        for (const Vertex& v : pin.covered) pin_owner_[index(v)] = net.id;
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int num_layers() const { return static_cast<int>(layers_.size()); }
  std::size_t num_vertices() const { return cells_.size(); }
  Preferred preferred(int layer) const { return layers_[static_cast<std::size_t>(layer)]; }
  const std::vector<Preferred>& layers() const { return layers_; }
  const DesignRules& rules() const { return rules_; }
  void set_rules(const DesignRules& rules) { rules_ = rules; }

  bool in_bounds(const Vertex& v) const {
    return v.x >= 0 && v.x < width_ && v.y >= 0 && v.y < height_ && v.layer >= 0 && v.layer < num_layers();
  }
  // Row-major within a layer, layers stacked.
  std::size_t index(const Vertex& v) const {
    return (static_cast<std::size_t>(v.layer) * height_ + v.y) * width_ + v.x;
  }
  Vertex vertex(std::size_t idx) const {
    const int x = static_cast<int>(idx % width_);
    const int y = static_cast<int>((idx / width_) % height_);
    const int l = static_cast<int>(idx / (static_cast<std::size_t>(width_) * height_));
    return {x, y, l};
  }

  const Cell& cell(const Vertex& v) const { return cells_[index(v)]; }
  const std::vector<Cell>& cells() const { return cells_; }
  bool is_obstacle(const Vertex& v) const { return cell(v).state == CellState::Obstacle; }
  void set_obstacle(const Vertex& v) { cells_[index(v)] = Cell{CellState::Obstacle, -1, Color::Red}; }

  double history(const Vertex& v) const { return history_[index(v)]; }
  void add_history(const Vertex& v, double amount) { history_[index(v)] += amount; }

  int pin_owner(const Vertex& v) const { return pin_owner_[index(v)]; }
  void set_pin_owner(const Vertex& v, int net) { pin_owner_[index(v)] = net; }

  /// True when `net` may not occupy `v` (obstacle, another net's wire or pin).
  bool blocked_for(const Vertex& v, int net) const {
    const Cell& c = cell(v);
    if (c.state == CellState::Obstacle) return true;
    if (c.state == CellState::Committed && c.net != net) return true;
    const int owner = pin_owner(v);
    return owner != -1 && owner != net;
  }

  std::optional<Vertex> step(const Vertex& v, Direction dir) const {
    Vertex t = v;
    const bool horizontal = preferred(v.layer) == Preferred::Horizontal;
    switch (dir) {
      case Direction::F: (horizontal ? t.x : t.y) += 1; break;
      case Direction::B: (horizontal ? t.x : t.y) -= 1; break;
      case Direction::R: (horizontal ? t.y : t.x) += 1; break;
      case Direction::L: (horizontal ? t.y : t.x) -= 1; break;
      case Direction::U: t.layer += 1; break;
      case Direction::D: t.layer -= 1; break;
    }
    if (!in_bounds(t)) return std::nullopt;
    return t;
  }

  /// In-bounds, non-obstacle neighbours in F,B,R,L,U,D order.
  std::vector<Step> neighbors(const Vertex& v) const {
    std::vector<Step> out;
    for (Direction d : kDirections) {
      auto t = step(v, d);
      if (t && !is_obstacle(*t)) out.push_back({d, *t});
    }
    return out;
  }

  /// Unit length, plus wrong-way / via penalties, plus the target's history
  /// and an off-guide penalty when a guide is supplied and the target is outside it.
  double trad_cost(const Vertex& v, Direction dir, std::span<const GuideBox> guide = {}) const {
    const auto target = step(v, dir);
    if (!target) throw Error(ErrorKind::Validation, "trad_cost on an edge leaving the grid at " + to_string(v));
    return wire_cost(*target, dir, guide) + history(*target);
  }

  /// trad_cost without the negotiation history term.
  double wire_cost(const Vertex& target, Direction dir, std::span<const GuideBox> guide = {}) const {
    double cost = 1.0;
    if (is_wrong_way(dir)) cost += rules_.wrong_way_cost;
    if (is_via(dir)) cost += rules_.via_cost;
    if (!guide.empty() && !inside_guide(target, guide)) cost += rules_.off_guide_cost;
    return cost;
  }

  static bool inside_guide(const Vertex& v, std::span<const GuideBox> guide) {
    for (const GuideBox& g : guide)
      if (g.contains(v)) return true;
    return false;
  }

  /// Number of vertices of other nets committed to `c` within Manhattan
  /// distance < d_color of `target` on its own layer.
  int conflict_count(const Vertex& target, Color c, int net) const {
    const int r = rules_.d_color - 1;
    int count = 0;
    for (int dy = -r; dy <= r; ++dy) {
      const int span = r - std::abs(dy);
      for (int dx = -span; dx <= span; ++dx) {
        const Vertex u{target.x + dx, target.y + dy, target.layer};
        if (!in_bounds(u)) continue;
        const Cell& cu = cell(u);
        if (cu.state == CellState::Committed && cu.net != net && cu.color == c) ++count;
      }
    }
    return count;
  }

  double color_cost_at(const Vertex& target, Color c, int net) const {
    return rules_.gamma * conflict_count(target, c, net);
  }

  double color_cost(const Vertex& v, Direction dir, Color c, int net) const {
    const auto target = step(v, dir);
    if (!target) throw Error(ErrorKind::Validation, "color_cost on an edge leaving the grid at " + to_string(v));
    return color_cost_at(*target, c, net);
  }

  /// Full cost of moving along (v, dir) in color `c` when the source node
  /// allows `from_state`. The stitch term applies only to planar moves.
  EdgeCost edge_cost(const Vertex& v, Direction dir, Color c, ColorState from_state, int net,
                     std::span<const GuideBox> guide = {}) const {
    EdgeCost e;
    e.trad = rules_.alpha * trad_cost(v, dir, guide);
    if (!is_via(dir) && !from_state.contains(c)) e.stitch = rules_.beta * rules_.stitch_cost;
    e.color = color_cost(v, dir, c, net);
    return e;
  }

  void commit_route(int net, std::span<const std::pair<Vertex, Color>> path) {
    for (const auto& [v, c] : path) {
      if (!in_bounds(v)) throw Error(ErrorKind::Collision, "commit of net " + std::to_string(net) + " leaves the grid at " + to_string(v));
      const Cell& cell_v = cell(v);
      if (cell_v.state == CellState::Obstacle)
        throw Error(ErrorKind::Collision, "net " + std::to_string(net) + " commits onto obstacle " + to_string(v));
      if (cell_v.state == CellState::Committed && cell_v.net != net)
        throw Error(ErrorKind::Collision, "net " + std::to_string(net) + " collides with net " +
                                              std::to_string(cell_v.net) + " at " + to_string(v));
      if (cell_v.state == CellState::Committed && cell_v.color != c)
        throw Error(ErrorKind::Collision, "net " + std::to_string(net) + " recommits " + to_string(v) +
                                              " with a different color");
    }
    for (const auto& [v, c] : path) cells_[index(v)] = Cell{CellState::Committed, net, c};
  }

  /// Changes the mask of an already committed vertex.
  void recolor(const Vertex& v, Color c) {
    Cell& cell_v = cells_[index(v)];
    if (cell_v.state != CellState::Committed)
      throw Error(ErrorKind::Collision, "recolor of uncommitted vertex " + to_string(v));
    cell_v.color = c;
  }

  void rip_up(int net) {
    for (Cell& c : cells_)
      if (c.state == CellState::Committed && c.net == net) c = Cell{};
  }

  std::vector<std::pair<Vertex, Color>> committed(int net) const {
    std::vector<std::pair<Vertex, Color>> out;
    for (std::size_t i = 0; i < cells_.size(); ++i)
      if (cells_[i].state == CellState::Committed && cells_[i].net == net) out.emplace_back(vertex(i), cells_[i].color);
    return out;
  }

  /// Text matrix per layer: '.' free, '#' obstacle, R/G/B committed color.
  std::string dump() const {
    std::string out;
    for (int l = 0; l < num_layers(); ++l) {
      out += "layer " + std::to_string(l) + (preferred(l) == Preferred::Horizontal ? " H\n" : " V\n");
      for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
          const Cell& c = cell({x, y, l});
          out += c.state == CellState::Free ? '.' : c.state == CellState::Obstacle ? '#' : color_letter(c.color);
        }
        out += '\n';
      }
    }
    return out;
  }

 private:
  int width_;
  int height_;
  std::vector<Preferred> layers_;
  DesignRules rules_;
  std::vector<Cell> cells_;
  std::vector<double> history_;
  std::vector<int> pin_owner_;
};

}  // namespace tplroute
