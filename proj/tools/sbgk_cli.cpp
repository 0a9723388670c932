// Command line driver: simulate, convergence, counterexample, audit, paths.
#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "sbgk/errors.hpp"
#include "sbgk/experiment.hpp"
#include "sbgk/parallel.hpp"

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  int workers = 0;
};

void add_common(CLI::App* cmd, Common& c, bool needs_config) {
  auto* opt = cmd->add_option("--config", c.config, "JSON run configuration");
  if (needs_config) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Master seed, overrides monte_carlo.seed");
  cmd->add_option("--out", c.out, "Output bundle directory")->required(needs_config);
  cmd->add_option("--workers", c.workers, "Worker threads (0: hardware concurrency)")->check(CLI::NonNegativeNumber);
}

sbgk::RunConfig resolve(const Common& c) {
  sbgk::RunConfig cfg = sbgk::load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic BGK experiments for scalar conservation laws with transport noise"};
  app.set_version_flag("--version", sbgk::kVersionStamp);
  app.require_subcommand(1);

  Common sim, conv, cex, paths, aud;
  std::string bundle;
  auto* c_sim = app.add_subcommand("simulate", "Run one path and audit the trajectory");
  add_common(c_sim, sim, true);
  auto* c_conv = app.add_subcommand("convergence", "Refinement study against an oracle");
  add_common(c_conv, conv, true);
  auto* c_cex = app.add_subcommand("counterexample", "BV growth with and without noise");
  add_common(c_cex, cex, true);
  auto* c_paths = app.add_subcommand("paths", "Brownian path statistics");
  add_common(c_paths, paths, true);
  auto* c_aud = app.add_subcommand("audit", "Re-audit a stored simulate bundle");
  add_common(c_aud, aud, false);
  c_aud->add_option("--bundle", bundle, "Bundle directory written by simulate")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    sbgk::CommandResult res;
    auto workers = [](const Common& c) {
      if (c.workers > 0) sbgk::set_worker_count(c.workers);
    };
    if (*c_sim) {
      workers(sim);
      res = sbgk::cmd_simulate(resolve(sim), sim.out);
    } else if (*c_conv) {
      workers(conv);
      res = sbgk::cmd_convergence(resolve(conv), conv.out);
    } else if (*c_cex) {
      workers(cex);
      res = sbgk::cmd_counterexample(resolve(cex), cex.out);
    } else if (*c_paths) {
      workers(paths);
      res = sbgk::cmd_paths(resolve(paths), paths.out);
    } else {
      workers(aud);
      res = sbgk::cmd_audit(bundle, aud.out);
    }
    std::cout << res.report.table();
    return res.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return sbgk::exit_code_for(e);
  }
}
