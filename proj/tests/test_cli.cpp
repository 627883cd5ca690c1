#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tplroute/cli.hpp"

using namespace tplroute;
namespace fs = std::filesystem;

namespace {

const std::string kDemo = std::string(TPLROUTE_DATA_DIR) + "/demo.json";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("tplroute_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

int density(const Layout& l) {
  int pins = 0;
  for (const Net& n : l.nets) pins += static_cast<int>(n.pins.size());
  return static_cast<int>(l.obstacles.size()) + pins;
}

}  // namespace

TEST(Generate, SeedOneValidates) {
  GenerateParams p;
  p.seed = 1;
  const Layout l = generate_instance(p);
  EXPECT_EQ(l.width, 8);
  EXPECT_EQ(l.num_layers(), 2);
  EXPECT_EQ(l.nets.size(), 4u);
  EXPECT_TRUE(validate(l).empty());
  for (const Net& n : l.nets) EXPECT_EQ(n.pins.size(), 3u);
}

TEST(Generate, CongestionRaisesDensity) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    GenerateParams lo, hi;
    lo.seed = hi.seed = seed;
    lo.congestion = 0.1;
    hi.congestion = 0.9;
    EXPECT_GT(density(generate_instance(hi)), density(generate_instance(lo))) << seed;
  }
}

TEST(Generate, TwoPinsPerNet) {
  GenerateParams p;
  p.seed = 5;
  p.pins_per_net = 2;
  p.nets = 6;
  for (const Net& n : generate_instance(p).nets) EXPECT_EQ(n.pins.size(), 2u);
}

TEST(Generate, RoundTripsAndIsDeterministic) {
  GenerateParams p;
  p.seed = 7;
  p.width = 10;
  p.height = 10;
  const std::string text = serialize_layout(generate_instance(p));
  EXPECT_EQ(serialize_layout(generate_instance(p)), text);
  EXPECT_EQ(serialize_layout(parse_layout(text)), text);
}

TEST(Generate, BadParameters) {
  GenerateParams p;
  p.congestion = 1.5;
  EXPECT_THROW(generate_instance(p), Error);
  p.congestion = 0.5;
  p.width = 2;
  p.height = 2;
  p.layers = 1;
  p.nets = 3;
  p.pins_per_net = 2;
  try {
    generate_instance(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InfeasiblePlacement);
  }
}

TEST(Run, RouteModeOnDemo) {
  const fs::path out = scratch("route");
  RunConfig c;
  c.mode = Mode::Route;
  c.input = kDemo;
  c.output = out.string();
  c.render = true;
  run(c);
  const Json report = Json::parse(slurp(out / "report.json"));
  EXPECT_EQ(report["method"], "tplroute");
  EXPECT_EQ(report["wall_time_ms"], 0);
  const Json routes = Json::parse(slurp(out / "routes.json"));
  EXPECT_EQ(routes["nets"].size(), 2u);
  EXPECT_TRUE(routes["nets"][0].contains("cost"));
  EXPECT_TRUE(fs::exists(out / "iterations.jsonl"));
  EXPECT_TRUE(fs::exists(out / "layer0.svg"));
  EXPECT_TRUE(fs::exists(out / "layer1.svg"));

  const std::string first = slurp(out / "report.json") + slurp(out / "routes.json") + slurp(out / "layer0.svg");
  run(c);
  EXPECT_EQ(slurp(out / "report.json") + slurp(out / "routes.json") + slurp(out / "layer0.svg"), first);
}

TEST(Run, CompareModeHasBothReports) {
  const fs::path out = scratch("compare");
  RunConfig c;
  c.mode = Mode::Compare;
  c.input = kDemo;
  c.output = out.string();
  run(c);
  const Json j = Json::parse(slurp(out / "comparison.json"));
  EXPECT_EQ(j["base"]["method"], "baseline");
  EXPECT_EQ(j["ours"]["method"], "tplroute");
  ASSERT_EQ(j["rows"].size(), 3u);
  for (const Json& r : j["rows"])
    for (const char* k : {"metric", "base", "ours", "improvement"}) EXPECT_TRUE(r.contains(k));
}

TEST(Run, BaselineModeOutputsReload) {
  const fs::path out = scratch("baseline");
  RunConfig c;
  c.mode = Mode::Baseline;
  c.input = kDemo;
  c.output = out.string();
  run(c);
  const Json routes = Json::parse(slurp(out / "routes.json"));
  EXPECT_EQ(routes["method"], "baseline");
  const Json report = Json::parse(slurp(out / "report.json"));
  EXPECT_EQ(report["conflict_list"].size(), report["conflicts"].get<std::size_t>());
}

TEST(Run, GenerateWritesLoadableLayout) {
  const fs::path out = scratch("generate") / "inst.json";
  RunConfig c;
  c.mode = Mode::Generate;
  c.seed = 7;
  c.output = out.string();
  c.overrides.gamma = 20;
  run(c);
  const Layout l = load_layout(out.string());
  EXPECT_EQ(l.width, 12);
  EXPECT_EQ(l.nets.size(), 6u);
  EXPECT_DOUBLE_EQ(l.rules.gamma, 20.0);
}

TEST(Run, OverridesApplied) {
  const fs::path out = scratch("override");
  RunConfig c;
  c.mode = Mode::Route;
  c.input = kDemo;
  c.output = out.string();
  c.overrides.max_iterations = 1;
  c.overrides.d_color = 3;
  run(c);
  const Json report = Json::parse(slurp(out / "report.json"));
  EXPECT_EQ(report["rules"]["d_color"], 3);
  EXPECT_EQ(report["rules"]["max_iterations"], 1);
  EXPECT_LE(report["iterations"].size(), 1u);
}

TEST(Run, Errors) {
  RunConfig c;
  c.mode = Mode::Route;
  c.input = "/nonexistent/layout.json";
  c.output = scratch("err").string();
  try {
    run(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
  c.input = kDemo;
  c.overrides.d_color = 0;
  try {
    run(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }
  c.overrides = {};
  c.input.clear();
  EXPECT_THROW(run(c), Error);
}

TEST(Run, ParseMode) {
  EXPECT_EQ(parse_mode("route"), Mode::Route);
  EXPECT_EQ(parse_mode("generate"), Mode::Generate);
  EXPECT_FALSE(parse_mode("decompose"));
  EXPECT_EQ(error_json("io", "x").dump(), R"({"error":"io","message":"x"})");
}
