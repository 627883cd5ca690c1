#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tplroute/baseline.hpp"
#include "tplroute/error.hpp"
#include "tplroute/generate.hpp"
#include "tplroute/layout.hpp"
#include "tplroute/metrics.hpp"
#include "tplroute/negotiation.hpp"
#include "tplroute/render.hpp"

namespace tplroute {

enum class Mode { Route, Baseline, Compare, Generate };

inline std::optional<Mode> parse_mode(const std::string& s) {
  if (s == "route") return Mode::Route;
  if (s == "baseline") return Mode::Baseline;
  if (s == "compare") return Mode::Compare;
  if (s == "generate") return Mode::Generate;
  return std::nullopt;
}

struct RuleOverrides {
  std::optional<int> d_color;
  std::optional<double> alpha, beta, gamma, stitch_cost, via_cost, wrong_way_cost, history_increment;
  std::optional<int> max_iterations;
};

struct RunConfig {
  Mode mode = Mode::Route;
  std::string input;
  std::string output;  // directory; a file path in generate mode
  std::uint64_t seed = 0;
  RuleOverrides overrides;
  bool render = false;
  bool timing = false;  // record wall time; off keeps reports byte-stable
  int width = 12, height = 12, layers = 2, nets = 6, pins = 3;
  double congestion = 0.5;
};

inline void apply_overrides(DesignRules& r, const RuleOverrides& o) {
  if (o.d_color) r.d_color = *o.d_color;
  if (o.alpha) r.alpha = *o.alpha;
  if (o.beta) r.beta = *o.beta;
  if (o.gamma) r.gamma = *o.gamma;
  if (o.stitch_cost) r.stitch_cost = *o.stitch_cost;
  if (o.via_cost) r.via_cost = *o.via_cost;
  if (o.wrong_way_cost) r.wrong_way_cost = *o.wrong_way_cost;
  if (o.history_increment) r.history_increment = *o.history_increment;
  if (o.max_iterations) r.max_iterations = *o.max_iterations;
}

// ---- JSON writers ----------------------------------------------------------

inline Json route_dump_json(const std::string& method, const Layout& layout, const std::map<int, RouteTree>& routes) {
  using detail::vertex_json;
  Json nets = Json::array();
  for (const auto& [id, tree] : routes) {
    Json vertices = Json::array();
    for (const auto& [v, c] : tree.vertex_colors) vertices.push_back({v.x, v.y, v.layer, std::string(1, color_letter(c))});
    Json paths = Json::array();
    for (const auto& path : tree.paths) {
      Json p = Json::array();
      for (const Vertex& v : path) p.push_back(vertex_json(v));
      paths.push_back(std::move(p));
    }
    Json stitches = Json::array();
    for (const auto& [a, b] : tree.stitches) stitches.push_back({vertex_json(a), vertex_json(b)});
    nets.push_back({{"id", id},
                    {"name", detail::net_by_id(layout, id).name},
                    {"vertices", std::move(vertices)},
                    {"paths", std::move(paths)},
                    {"stitches", std::move(stitches)},
                    {"cost",
                     {{"trad", detail::number(tree.cost.trad)},
                      {"stitch", detail::number(tree.cost.stitch)},
                      {"color", detail::number(tree.cost.color)}}}});
  }
  return {{"method", method},
          {"grid", {{"width", layout.width}, {"height", layout.height}, {"layers", layout.num_layers()}}},
          {"nets", std::move(nets)}};
}

inline Json conflicts_json(const std::vector<Conflict>& conflicts) {
  using detail::vertex_json;
  Json out = Json::array();
  for (const Conflict& c : conflicts)
    out.push_back({{"a", vertex_json(c.vertex_a)},
                   {"b", vertex_json(c.vertex_b)},
                   {"net_a", c.net_a},
                   {"net_b", c.net_b},
                   {"color", std::string(1, color_letter(c.color))},
                   {"distance", c.distance}});
  return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

inline std::string pretty(const Json& j) { return j.dump(1) + "\n"; }

inline Json error_json(const std::string& kind, const std::string& message) {
  return {{"error", kind}, {"message", message}};
}

// ---- run -------------------------------------------------------------------

namespace detail {

struct FlowOutcome {
  ScoreReport report;
  Grid grid;
  std::map<int, RouteTree> routes;
  std::vector<IterationReport> iterations;  // empty for the baseline
};

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

inline FlowOutcome run_ours(const Layout& layout, bool timing) {
  const auto start = std::chrono::steady_clock::now();
  RoutingResult r = route_all(layout);
  ScoreReport report = score(r.grid, r.routes, layout.rules);
  if (timing) report.wall_time_ms = elapsed_ms(start);
  return {std::move(report), std::move(r.grid), std::move(r.routes), std::move(r.iterations)};
}

inline FlowOutcome run_base(const Layout& layout, bool timing) {
  const auto start = std::chrono::steady_clock::now();
  BaselineResult b = run_baseline(layout);
  ScoreReport report = score(b.grid, b.routes, layout.rules);
  if (timing) report.wall_time_ms = elapsed_ms(start);
  return {std::move(report), std::move(b.grid), std::move(b.routes), {}};
}

inline Json flow_report(const FlowOutcome& f, const std::string& method, std::uint64_t seed, const Layout& layout) {
  Json j = report_json(f.report);
  j["method"] = method;
  j["seed"] = seed;
  j["rules"] = rules_to_json(layout.rules);
  j["conflict_list"] = conflicts_json(detect_conflicts(f.grid, layout.rules));
  if (!f.iterations.empty()) {
    Json its = Json::array();
    for (const IterationReport& it : f.iterations) its.push_back(iteration_json(it));
    j["iterations"] = std::move(its);
  }
  return j;
}

inline void render_all(const std::filesystem::path& dir, const std::string& prefix, const FlowOutcome& f,
                       const Layout& layout) {
  std::vector<Vertex> pins;
  for (const Net& n : layout.nets)
    for (const Pin& p : n.pins) pins.insert(pins.end(), p.covered.begin(), p.covered.end());
  const auto conflicts = detect_conflicts(f.grid, layout.rules);
  for (int l = 0; l < layout.num_layers(); ++l)
    write_text(dir / (prefix + "layer" + std::to_string(l) + ".svg"), render_layer_svg(f.grid, f.routes, conflicts, pins, l));
}

inline Layout load_with_overrides(const RunConfig& config) {
  if (config.input.empty()) throw Error(ErrorKind::Config, "--input is required for this mode");
  Layout layout = load_layout(config.input);
  apply_overrides(layout.rules, config.overrides);
  const auto violations = validate(layout);
  if (!violations.empty()) {
    std::string msg = "invalid rule overrides:";
    for (const Violation& v : violations) msg += "\n  " + v.message;
    throw Error(ErrorKind::Config, msg);
  }
  return layout;
}

inline std::filesystem::path prepare_dir(const std::string& output) {
  if (output.empty()) throw Error(ErrorKind::Config, "--output is required");
  std::filesystem::path dir(output);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create output directory '" + output + "': " + ec.message());
  return dir;
}

}  // namespace detail

/// Executes one CLI invocation. Module errors propagate as tplroute::Error.
inline void run(const RunConfig& config) {
  if (config.mode == Mode::Generate) {
    GenerateParams p;
    p.seed = config.seed;
    p.width = config.width;
    p.height = config.height;
    p.layers = config.layers;
    p.nets = config.nets;
    p.pins_per_net = config.pins;
    p.congestion = config.congestion;
    Layout layout = generate_instance(p);
    apply_overrides(layout.rules, config.overrides);
    const auto violations = validate(layout);
    if (!violations.empty()) throw Error(ErrorKind::Config, "invalid rule overrides: " + violations.front().message);
    if (config.output.empty()) throw Error(ErrorKind::Config, "--output is required");
    const std::filesystem::path out(config.output);
    if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
    write_text(out, serialize_layout(layout));
    return;
  }

  const Layout layout = detail::load_with_overrides(config);
  const std::filesystem::path dir = detail::prepare_dir(config.output);

  if (config.mode == Mode::Route) {
    const detail::FlowOutcome ours = detail::run_ours(layout, config.timing);
    write_text(dir / "report.json", pretty(detail::flow_report(ours, "tplroute", config.seed, layout)));
    write_text(dir / "routes.json", pretty(route_dump_json("tplroute", layout, ours.routes)));
    std::string log;
    for (const IterationReport& it : ours.iterations) log += iteration_json(it).dump() + "\n";
    write_text(dir / "iterations.jsonl", log);
    if (config.render) detail::render_all(dir, "", ours, layout);
  } else if (config.mode == Mode::Baseline) {
    const detail::FlowOutcome base = detail::run_base(layout, config.timing);
    write_text(dir / "report.json", pretty(detail::flow_report(base, "baseline", config.seed, layout)));
    write_text(dir / "routes.json", pretty(route_dump_json("baseline", layout, base.routes)));
    if (config.render) detail::render_all(dir, "", base, layout);
  } else {
    const detail::FlowOutcome base = detail::run_base(layout, config.timing);
    const detail::FlowOutcome ours = detail::run_ours(layout, config.timing);
    Json j = {{"base", detail::flow_report(base, "baseline", config.seed, layout)},
              {"ours", detail::flow_report(ours, "tplroute", config.seed, layout)},
              {"rows", comparison_json(compare(base.report, ours.report))}};
    write_text(dir / "comparison.json", pretty(j));
    if (config.render) {
      detail::render_all(dir, "baseline_", base, layout);
      detail::render_all(dir, "tplroute_", ours, layout);
    }
  }
}

}  // namespace tplroute
