#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>

#include "dsfolio/config.hpp"
#include "dsfolio/errors.hpp"
#include "dsfolio/pipeline.hpp"

namespace {

struct GlobalOptions {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool clamp_inputs = false;
};

dsfolio::RunConfig make_config(const GlobalOptions& opts) {
  dsfolio::RunConfig cfg = opts.config_path.empty()
                               ? dsfolio::RunConfig()
                               : dsfolio::load_config(opts.config_path);
  if (!opts.out_dir.empty()) cfg.paths.out_dir = opts.out_dir;
  if (opts.seed_set) cfg.aco.seed = opts.seed;
  if (opts.clamp_inputs) cfg.inference.clamp_inputs = true;
  return cfg;
}

// Summaries mix warnings and results; warnings go to stderr.
void print_summary(const std::string& summary) {
  std::istringstream in(summary);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("warning:", 0) == 0) {
      std::cerr << line << '\n';
    } else {
      std::cout << line << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evidence-driven fuzzy stock ranking and ant-colony portfolio "
               "allocation"};
  app.require_subcommand(0, 1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOptions opts;
  app.add_option("--config", opts.config_path,
                 "JSON configuration file; omitted fields keep the built-in "
                 "reference defaults");
  app.add_option("--out", opts.out_dir, "output directory (overrides paths.out_dir)");
  auto* seed_opt = app.add_option("--seed", opts.seed,
                                  "RNG seed for the optimizer (overrides aco.seed)");
  app.add_flag("--clamp-inputs", opts.clamp_inputs,
               "clamp normalized factor values into the variable range instead "
               "of excluding the stock");
  bool dump_config = false;
  app.add_flag("--dump-config", dump_config,
               "print the built-in default configuration as JSON and exit");

  auto* rules_cmd =
      app.add_subcommand("rules", "induce the fuzzy rule base from the evidence table");
  auto* rank_cmd =
      app.add_subcommand("rank", "score and rank every stock for the test year");
  auto* optimize_cmd = app.add_subcommand(
      "optimize", "allocate investment weights over the top-ranked stocks");
  auto* evaluate_cmd = app.add_subcommand(
      "evaluate", "report portfolio metrics for an existing weights file");
  std::string weights_path;
  evaluate_cmd->add_option("weights", weights_path, "allocation CSV (rank,stock,weight)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // 1 = validation error; help/version exit 0
  }
  opts.seed_set = seed_opt->count() > 0;

  try {
    if (dump_config) {
      std::cout << dsfolio::default_config_json();
      return 0;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return 1;
    }
    const dsfolio::RunConfig config = make_config(opts);
    if (rules_cmd->parsed()) {
      print_summary(dsfolio::cmd_rules(config));
    } else if (rank_cmd->parsed()) {
      print_summary(dsfolio::cmd_rank(config));
    } else if (optimize_cmd->parsed()) {
      print_summary(dsfolio::cmd_optimize(config));
    } else if (evaluate_cmd->parsed()) {
      print_summary(dsfolio::cmd_evaluate(config, weights_path));
    }
    return 0;
  } catch (const dsfolio::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const dsfolio::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
