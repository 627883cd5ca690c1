#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tplroute/error.hpp"

namespace tplroute {

using Json = nlohmann::json;

struct Vertex {
  int x = 0;
  int y = 0;
  int layer = 0;

  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

inline std::string to_string(const Vertex& v) {
  return "(" + std::to_string(v.x) + "," + std::to_string(v.y) + "," + std::to_string(v.layer) + ")";
}

enum class Preferred { Horizontal, Vertical };

struct DesignRules {
  int d_color = 2;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 50.0;
  double stitch_cost = 5.0;
  double via_cost = 4.0;
  double wrong_way_cost = 2.0;
  double history_increment = 10.0;
  int max_iterations = 10;
  // Penalty for stepping outside a net's guide region. Optional in files.
  double off_guide_cost = 1.0;

  friend bool operator==(const DesignRules&, const DesignRules&) = default;
};

struct GuideBox {
  int layer = 0;
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  bool contains(const Vertex& v) const {
    return v.layer == layer && v.x >= std::min(x0, x1) && v.x <= std::max(x0, x1) && v.y >= std::min(y0, y1) &&
           v.y <= std::max(y0, y1);
  }
  friend bool operator==(const GuideBox&, const GuideBox&) = default;
};

struct Pin {
  int net_id = 0;
  std::vector<Vertex> covered;

  friend bool operator==(const Pin&, const Pin&) = default;
};

struct Net {
  int id = 0;
  std::string name;
  std::vector<Pin> pins;
  std::vector<GuideBox> guide;

  friend bool operator==(const Net&, const Net&) = default;
};

struct Layout {
  int width = 0;
  int height = 0;
  std::vector<Preferred> layers;
  std::vector<Vertex> obstacles;
  std::vector<Net> nets;
  DesignRules rules;

  int num_layers() const { return static_cast<int>(layers.size()); }
  bool in_bounds(const Vertex& v) const {
    return v.x >= 0 && v.x < width && v.y >= 0 && v.y < height && v.layer >= 0 && v.layer < num_layers();
  }
  friend bool operator==(const Layout&, const Layout&) = default;
};

enum class ViolationKind {
  BadGrid,
  BadRule,
  LayerDirection,
  ObstacleOutOfBounds,
  EmptyPinList,
  EmptyPin,
  PinOutOfBounds,
  PinOnObstacle,
  PinSharedAcrossNets,
  DuplicateNetId,
  BadGuide,
};

struct Violation {
  ViolationKind kind;
  std::string message;
};

inline std::vector<Violation> validate(const Layout& layout) {
  std::vector<Violation> out;
  auto add = [&](ViolationKind k, std::string msg) { out.push_back({k, std::move(msg)}); };

  if (layout.width < 1 || layout.height < 1 || layout.layers.empty())
    add(ViolationKind::BadGrid, "grid must have positive width, height and at least one layer");
  for (std::size_t l = 1; l < layout.layers.size(); ++l)
    if (layout.layers[l] == layout.layers[l - 1])
      add(ViolationKind::LayerDirection,
          "layers " + std::to_string(l - 1) + " and " + std::to_string(l) + " share a preferred direction");

  const DesignRules& r = layout.rules;
  if (r.d_color < 1) add(ViolationKind::BadRule, "rule d_color must be >= 1");
  if (r.max_iterations < 1) add(ViolationKind::BadRule, "rule max_iterations must be >= 1");
  const std::pair<const char*, double> costs[] = {
      {"alpha", r.alpha},           {"beta", r.beta},
      {"gamma", r.gamma},           {"stitch_cost", r.stitch_cost},
      {"via_cost", r.via_cost},     {"wrong_way_cost", r.wrong_way_cost},
      {"history_increment", r.history_increment}, {"off_guide_cost", r.off_guide_cost}};
  for (const auto& [name, value] : costs)
    if (!(value >= 0.0) || !std::isfinite(value))
      add(ViolationKind::BadRule, std::string("rule ") + name + " must be a finite non-negative number");

  std::set<Vertex> blocked;
  for (const Vertex& o : layout.obstacles) {
    if (!layout.in_bounds(o))
      add(ViolationKind::ObstacleOutOfBounds, "obstacle " + to_string(o) + " is out of bounds");
    blocked.insert(o);
  }

  std::set<int> ids;
  std::map<Vertex, int> pin_owner;
  for (const Net& net : layout.nets) {
    const std::string tag = "net " + std::to_string(net.id) + " (" + net.name + ")";
    if (!ids.insert(net.id).second) add(ViolationKind::DuplicateNetId, "duplicate net id " + std::to_string(net.id));
    if (net.pins.empty()) add(ViolationKind::EmptyPinList, tag + " has no pins");
    for (std::size_t p = 0; p < net.pins.size(); ++p) {
      const Pin& pin = net.pins[p];
      if (pin.covered.empty()) add(ViolationKind::EmptyPin, tag + " pin " + std::to_string(p) + " covers no vertex");
      for (const Vertex& v : pin.covered) {
        if (!layout.in_bounds(v)) {
          add(ViolationKind::PinOutOfBounds, tag + " pin " + std::to_string(p) + " vertex " + to_string(v) +
                                                 " is out of bounds");
          continue;
        }
        if (blocked.count(v))
          add(ViolationKind::PinOnObstacle,
              tag + " pin " + std::to_string(p) + " vertex " + to_string(v) + " lies on an obstacle");
        auto [it, inserted] = pin_owner.emplace(v, net.id);
        if (!inserted && it->second != net.id)
          add(ViolationKind::PinSharedAcrossNets, tag + " pin vertex " + to_string(v) + " also belongs to net " +
                                                      std::to_string(it->second));
      }
    }
    for (const GuideBox& g : net.guide)
      if (g.layer < 0 || g.layer >= layout.num_layers())
        add(ViolationKind::BadGuide, tag + " guide box refers to missing layer " + std::to_string(g.layer));
  }
  return out;
}

namespace detail {

inline const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    throw Error(ErrorKind::Parse, "missing field '" + std::string(key) + "' in " + where);
  return obj.at(key);
}

inline int as_int(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) throw Error(ErrorKind::Parse, what + " must be an integer");
  return j.get<int>();
}

inline double as_number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw Error(ErrorKind::Parse, what + " must be a number");
  return j.get<double>();
}

inline Vertex as_vertex(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::Parse, what + " must be an [x,y,layer] triple");
  return {as_int(j[0], what + ".x"), as_int(j[1], what + ".y"), as_int(j[2], what + ".layer")};
}

// Integral values are written as integers so files stay in the all-integer
// form and re-serialize byte-identically.
inline Json number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 9.0e15) return Json(static_cast<std::int64_t>(v));
  return Json(v);
}

inline Json vertex_json(const Vertex& v) { return Json::array({v.x, v.y, v.layer}); }

}  // namespace detail

inline DesignRules parse_rules(const Json& j) {
  using detail::as_int;
  using detail::as_number;
  using detail::require;
  DesignRules r;
  r.d_color = as_int(require(j, "d_color", "rules"), "rules.d_color");
  r.alpha = as_number(require(j, "alpha", "rules"), "rules.alpha");
  r.beta = as_number(require(j, "beta", "rules"), "rules.beta");
  r.gamma = as_number(require(j, "gamma", "rules"), "rules.gamma");
  r.stitch_cost = as_number(require(j, "stitch_cost", "rules"), "rules.stitch_cost");
  r.via_cost = as_number(require(j, "via_cost", "rules"), "rules.via_cost");
  r.wrong_way_cost = as_number(require(j, "wrong_way_cost", "rules"), "rules.wrong_way_cost");
  r.history_increment = as_number(require(j, "history_increment", "rules"), "rules.history_increment");
  r.max_iterations = as_int(require(j, "max_iterations", "rules"), "rules.max_iterations");
  if (j.contains("off_guide_cost")) r.off_guide_cost = as_number(j.at("off_guide_cost"), "rules.off_guide_cost");
  return r;
}

inline Json rules_to_json(const DesignRules& r) {
  using detail::number;
  Json j = {{"d_color", r.d_color},
            {"alpha", number(r.alpha)},
            {"beta", number(r.beta)},
            {"gamma", number(r.gamma)},
            {"stitch_cost", number(r.stitch_cost)},
            {"via_cost", number(r.via_cost)},
            {"wrong_way_cost", number(r.wrong_way_cost)},
            {"history_increment", number(r.history_increment)},
            {"max_iterations", r.max_iterations}};
  if (r.off_guide_cost != DesignRules{}.off_guide_cost) j["off_guide_cost"] = number(r.off_guide_cost);
  return j;
}

/// Builds a Layout from parsed JSON without validating it.
inline Layout layout_from_json(const Json& root) {
  using detail::as_int;
  using detail::as_vertex;
  using detail::require;

  Layout out;
  const Json& grid = require(root, "grid", "layout");
  out.width = as_int(require(grid, "width", "grid"), "grid.width");
  out.height = as_int(require(grid, "height", "grid"), "grid.height");
  const Json& layers = require(grid, "layers", "grid");
  if (!layers.is_array()) throw Error(ErrorKind::Parse, "grid.layers must be an array");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Json& dir = require(layers[l], "dir", "grid.layers[" + std::to_string(l) + "]");
    if (dir == "H")
      out.layers.push_back(Preferred::Horizontal);
    else if (dir == "V")
      out.layers.push_back(Preferred::Vertical);
    else
      throw Error(ErrorKind::Parse, "grid.layers[" + std::to_string(l) + "].dir must be \"H\" or \"V\"");
  }

  out.rules = parse_rules(require(root, "rules", "layout"));

  if (root.contains("obstacles")) {
    const Json& obs = root.at("obstacles");
    if (!obs.is_array()) throw Error(ErrorKind::Parse, "obstacles must be an array");
    for (std::size_t i = 0; i < obs.size(); ++i)
      out.obstacles.push_back(as_vertex(obs[i], "obstacles[" + std::to_string(i) + "]"));
  }

  const Json& nets = require(root, "nets", "layout");
  if (!nets.is_array()) throw Error(ErrorKind::Parse, "nets must be an array");
  for (std::size_t n = 0; n < nets.size(); ++n) {
    const std::string where = "nets[" + std::to_string(n) + "]";
    const Json& jn = nets[n];
    Net net;
    net.id = as_int(require(jn, "id", where), where + ".id");
    const Json& name = require(jn, "name", where);
    if (!name.is_string()) throw Error(ErrorKind::Parse, where + ".name must be a string");
    net.name = name.get<std::string>();
    const Json& pins = require(jn, "pins", where);
    if (!pins.is_array()) throw Error(ErrorKind::Parse, where + ".pins must be an array");
    for (std::size_t p = 0; p < pins.size(); ++p) {
      const std::string pw = where + ".pins[" + std::to_string(p) + "]";
      if (!pins[p].is_array()) throw Error(ErrorKind::Parse, pw + " must be an array of vertices");
      Pin pin;
      pin.net_id = net.id;
      for (std::size_t k = 0; k < pins[p].size(); ++k)
        pin.covered.push_back(as_vertex(pins[p][k], pw + "[" + std::to_string(k) + "]"));
      net.pins.push_back(std::move(pin));
    }
    if (jn.contains("guide")) {
      const Json& guide = jn.at("guide");
      if (!guide.is_array()) throw Error(ErrorKind::Parse, where + ".guide must be an array");
      for (std::size_t g = 0; g < guide.size(); ++g) {
        const std::string gw = where + ".guide[" + std::to_string(g) + "]";
        GuideBox box;
        box.layer = as_int(require(guide[g], "layer", gw), gw + ".layer");
        box.x0 = as_int(require(guide[g], "x0", gw), gw + ".x0");
        box.y0 = as_int(require(guide[g], "y0", gw), gw + ".y0");
        box.x1 = as_int(require(guide[g], "x1", gw), gw + ".x1");
        box.y1 = as_int(require(guide[g], "y1", gw), gw + ".y1");
        net.guide.push_back(box);
      }
    }
    out.nets.push_back(std::move(net));
  }
  return out;
}

inline Json layout_to_json(const Layout& layout) {
  using detail::vertex_json;
  Json layers = Json::array();
  for (Preferred p : layout.layers) layers.push_back({{"dir", p == Preferred::Horizontal ? "H" : "V"}});
  Json obstacles = Json::array();
  for (const Vertex& o : layout.obstacles) obstacles.push_back(vertex_json(o));
  Json nets = Json::array();
  for (const Net& net : layout.nets) {
    Json pins = Json::array();
    for (const Pin& pin : net.pins) {
      Json cov = Json::array();
      for (const Vertex& v : pin.covered) cov.push_back(vertex_json(v));
      pins.push_back(std::move(cov));
    }
    Json jn = {{"id", net.id}, {"name", net.name}, {"pins", std::move(pins)}};
    if (!net.guide.empty()) {
      Json guide = Json::array();
      for (const GuideBox& g : net.guide)
        guide.push_back({{"layer", g.layer}, {"x0", g.x0}, {"y0", g.y0}, {"x1", g.x1}, {"y1", g.y1}});
      jn["guide"] = std::move(guide);
    }
    nets.push_back(std::move(jn));
  }
  return {{"grid", {{"width", layout.width}, {"height", layout.height}, {"layers", std::move(layers)}}},
          {"rules", rules_to_json(layout.rules)},
          {"obstacles", std::move(obstacles)},
          {"nets", std::move(nets)}};
}

/// Parses and validates; validation failures throw with every violation listed.
inline Layout parse_layout(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("malformed layout JSON: ") + e.what());
  }
  Layout layout = layout_from_json(root);
  const auto violations = validate(layout);
  if (!violations.empty()) {
    std::string msg = "invalid layout:";
    for (const Violation& v : violations) msg += "\n  " + v.message;
    throw Error(ErrorKind::Validation, msg);
  }
  return layout;
}

inline Layout load_layout(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open layout file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_layout(buf.str());
}

inline std::string serialize_layout(const Layout& layout) { return layout_to_json(layout).dump(1) + "\n"; }

}  // namespace tplroute
