#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tplroute/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Triple-patterning-aware detailed router"};
  tplroute::RunConfig config;
  std::string mode = "route";

  app.add_option("--mode", mode, "route | baseline | compare | generate")
      ->check(CLI::IsMember({"route", "baseline", "compare", "generate"}));
  app.add_option("--input", config.input, "layout JSON");
  app.add_option("--output", config.output, "output directory (layout file in generate mode)");
  app.add_option("--seed", config.seed, "64-bit seed");
  app.add_flag("--render", config.render, "also write one SVG per layer");
  app.add_flag("--timing", config.timing, "record wall time in reports");

  auto& o = config.overrides;
  app.add_option("--max-iters", o.max_iterations, "negotiation iteration limit");
  app.add_option("--d-color", o.d_color, "same-mask spacing threshold");
  app.add_option("--alpha", o.alpha);
  app.add_option("--beta", o.beta);
  app.add_option("--gamma", o.gamma);
  app.add_option("--stitch-cost", o.stitch_cost);
  app.add_option("--via-cost", o.via_cost);
  app.add_option("--wrong-way-cost", o.wrong_way_cost);
  app.add_option("--history-increment", o.history_increment);

  app.add_option("--width", config.width, "generate: grid width");
  app.add_option("--height", config.height, "generate: grid height");
  app.add_option("--layers", config.layers, "generate: layer count");
  app.add_option("--nets", config.nets, "generate: net count");
  app.add_option("--pins", config.pins, "generate: pins per net");
  app.add_option("--congestion", config.congestion, "generate: congestion in [0,1]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << tplroute::error_json("usage", e.what()).dump() << "\n";
    return 2;
  }
  config.mode = *tplroute::parse_mode(mode);

  try {
    tplroute::run(config);
  } catch (const tplroute::Error& e) {
    std::cerr << tplroute::error_json(tplroute::to_string(e.kind()), e.what()).dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << tplroute::error_json("internal", e.what()).dump() << "\n";
    return 1;
  }
  return 0;
}
