#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "nchodge/config.hpp"
#include "nchodge/runner.hpp"

int main(int argc, char** argv) {
  {
    const char* th = std::getenv("NCHODGE_THREADS");
    int n = 1;
    if (th != nullptr) {
      n = std::atoi(th);
      if (n < 1) n = 1;
    }
    Eigen::setNbThreads(n);
  }

  CLI::App app{"Graded Hodge laboratory for matrix C*-dynamical systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  long long seed = -1;
  for (const std::string& name : nchodge::known_subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "path to a JSON run configuration")
        ->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--seed", seed, "probe seed (overrides config)")
        ->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    nchodge::RunConfig cfg = nchodge::load_config(config_path);
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    for (const std::string& w : cfg.warnings)
      std::fprintf(stderr, "warning: %s\n", w.c_str());
    const std::string sub = app.get_subcommands().front()->get_name();
    nchodge::RunOutcome out = nchodge::run_pipeline(cfg, sub, out_dir);
    std::printf("%s/report.json\n", out.run_dir.c_str());
    if (!out.invariants_pass) {
      std::fprintf(stderr, "invariant failed: %s\n", out.first_failure.c_str());
      return 1;
    }
    return 0;
  } catch (const nchodge::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
