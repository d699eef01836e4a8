// lcalim <verify|sample|conditions|selftest> --config <path> [--out <dir>] [--seed <u64>]

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lcalim/acceptance.hpp"
#include "lcalim/config.hpp"
#include "lcalim/error.hpp"
#include "lcalim/report.hpp"

namespace {

struct Options {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Options& opts, bool config_required) {
  auto* c = cmd->add_option("--config", opts.config, "experiment description (JSON)");
  if (config_required) c->required();
  cmd->add_option("--out", opts.out, "output directory (overrides output.dir)");
  cmd->add_option("--seed", opts.seed, "master seed (overrides monte_carlo.seed)");
}

lcalim::ExperimentConfig load(const Options& opts) {
  auto cfg = lcalim::load_config(opts.config);
  if (opts.out) cfg.out_dir = *opts.out;
  if (opts.seed) cfg.monte_carlo.seed = *opts.seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Limit theorems for triangular arrays on the circle, the p-adic integers and the "
               "p-adic solenoid"};
  app.require_subcommand(1);
  Options opts;
  auto* verify = app.add_subcommand("verify", "exact engine and theorem verdicts");
  auto* sample = app.add_subcommand("sample", "Monte Carlo cross-check of the exact row FT");
  auto* conditions = app.add_subcommand("conditions", "hypothesis sequences only");
  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  add_common(verify, opts, true);
  add_common(sample, opts, true);
  add_common(conditions, opts, true);
  add_common(selftest, opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : lcalim::kExitInvalidConfig;
  }

  try {
    if (*selftest) {
      const auto results = lcalim::run_acceptance(std::cout);
      for (const auto& r : results)
        if (!r.pass) return lcalim::kExitFail;
      return lcalim::kExitPass;
    }
    const auto cfg = load(opts);
    if (*verify) return lcalim::run_experiment(cfg, std::cout);
    if (*sample) return lcalim::run_sample(cfg, std::cout);
    return lcalim::run_conditions(cfg, std::cout);
  } catch (const lcalim::IoError& e) {
    std::cerr << "lcalim: " << e.what() << '\n';
    return lcalim::kExitIo;
  } catch (const lcalim::Error& e) {
    std::cerr << "lcalim: invalid configuration: " << e.what() << '\n';
    return lcalim::kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "lcalim: " << e.what() << '\n';
    return lcalim::kExitIo;
  }
}
