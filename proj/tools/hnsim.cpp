#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hn/config.hpp"
#include "hn/error.hpp"
#include "hn/experiments.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = "out";
  bool out_set = false;
  std::string seed;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "flat key = value config file")->required();
  cmd->add_option("--set", opts.overrides, "override key=value (repeatable)");
  cmd->add_option("--out", opts.out_dir, "output directory")
      ->each([&](const std::string&) { opts.out_set = true; });
  cmd->add_option("--seed", opts.seed, "override the root seed");
  cmd->add_option("--jobs", opts.jobs, "worker threads for independent trials")
      ->check(CLI::PositiveNumber);
}

int run_from(CommonOpts& opts, const std::string& forced_experiment) {
  hn::Config cfg = hn::Config::parse_file(opts.config_path);
  for (const std::string& kv : opts.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw hn::ParameterError("--set expects key=value, got '" + kv + "'");
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!opts.seed.empty()) cfg.set("seed", opts.seed);
  if (!forced_experiment.empty()) cfg.set("experiment", forced_experiment);
  std::string out_dir = opts.out_dir;
  if (!opts.out_set) {
    if (const char* env = std::getenv("HNSIM_OUT_DIR")) out_dir = env;
  }
  const std::vector<std::string> artifacts = hn::run_experiment(cfg, out_dir, opts.jobs);
  for (const std::string& a : artifacts) std::cout << a << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hierarchical neighbor graph simulator"};
  app.require_subcommand(1);

  CommonOpts run_opts, dump_opts, replay_opts;
  CLI::App* run_cmd = app.add_subcommand("run", "run an experiment from a config file");
  add_common(run_cmd, run_opts);
  CLI::App* dump_cmd =
      app.add_subcommand("graph-dump", "build a graph and write its serialized form");
  add_common(dump_cmd, dump_opts);
  CLI::App* replay_cmd =
      app.add_subcommand("replay", "replay a dynamics event trace over a built graph");
  add_common(replay_cmd, replay_opts);

  std::string suite;
  CLI::App* verify_cmd = app.add_subcommand("verify", "run a named verification suite");
  verify_cmd->add_option("suite", suite, "one of: degree-bounds, height-tail, lambda-min, "
                                         "repair-oracle, routing-oracle, energy-conservation")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return run_from(run_opts, "");
    if (dump_cmd->parsed()) return run_from(dump_opts, "build");
    if (replay_cmd->parsed()) return run_from(replay_opts, "dynamics");
    if (verify_cmd->parsed()) return hn::run_verify_suite(suite, std::cout) ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
