#include <iostream>

#include <CLI11.hpp>

#include "soficlab/cli.hpp"

int main(int argc, char** argv) {
  using namespace soficlab::cli;
  CLI::App app{"soficlab: sofic entropy and Betti number experiments"};
  std::string kind;
  Options opts;
  app.add_option("kind", kind, "entropy | betti | defect | luck | oracle-check | chain-info")->required();
  app.add_option("--config", opts.config, "experiment TOML file")->required();
  app.add_option("--jobs", opts.jobs, "worker threads for independent levels")->check(CLI::PositiveNumber);
  app.add_option("--out", opts.out, "output directory");
  app.add_flag("--plot", opts.plot, "also write an SVG convergence plot");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }
  const auto k = parse_kind(kind);
  if (!k) {
    std::cerr << "config error: unknown experiment kind \"" << kind << "\"\n";
    return kConfigError;
  }
  opts.kind = *k;
  return run(opts, std::cout, std::cerr);
}
