#include <cstdlib>
#include <iostream>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "beliefplan_cli/run.hpp"

namespace {

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("beliefplan");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("BELIEFPLAN_LOG");
  const std::string level = env ? env : "info";
  if (level == "error") spdlog::set_level(spdlog::level::err);
  else if (level == "debug") spdlog::set_level(spdlog::level::debug);
  else spdlog::set_level(spdlog::level::info);
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  namespace cli = beliefplan::cli;

  CLI::App app{"Belief-space planning from probabilistic temporal logic"};
  app.require_subcommand(1);
  cli::RunOptions opts;
  std::uint64_t seed = 0;
  long cap = 0;
  int k_max = 0;

  auto* run = app.add_subcommand("run", "Solve a problem file and write the results");
  run->add_option("--problem", opts.problem, "Problem JSON file")->required();
  run->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
  auto* seed_opt = run->add_option("--seed", seed, "Random seed (default 0)");
  auto* cap_opt = run->add_option("--iteration-cap", cap, "RRT iterations per segment")
                      ->check(CLI::PositiveNumber);
  auto* k_opt = run->add_option("--k-max", k_max, "Maximum plan segments")->check(CLI::PositiveNumber);
  run->add_flag("--validate-only", opts.validate_only, "Load and validate, then stop");
  run->add_flag("--no-simulation", opts.no_simulation, "Skip the tracked execution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kSchemaError;
  }
  if (*seed_opt) opts.seed = seed;
  if (*cap_opt) opts.iteration_cap = cap;
  if (*k_opt) opts.k_max = k_max;

  try {
    return cli::run(opts);
  } catch (const cli::LoadError& e) {
    spdlog::error("{}", e.what());
    return e.code();
  } catch (const beliefplan::FormulaError& e) {
    spdlog::error("{}", e.what());
    return cli::kFormulaError;
  } catch (const beliefplan::Error& e) {
    spdlog::error("{}", e.what());
    return cli::kNumericError;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return cli::kNumericError;
  }
}
