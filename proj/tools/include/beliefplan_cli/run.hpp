#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "beliefplan_cli/problem_file.hpp"

namespace beliefplan::cli {

struct RunOptions {
  std::string problem;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<long> iteration_cap;
  std::optional<int> k_max;
  bool validate_only = false;
  bool no_simulation = false;
};

/// Loads, solves, optionally simulates and writes the output files.
/// Returns the process exit code; load failures surface as LoadError.
int run(const RunOptions& opts);

/// Output writers, exposed for tests.
nlohmann::json plan_report(const SynthesisResult& result, std::uint64_t seed);
std::string trajectory_csv(const SolutionTrajectory& t);
std::string simulation_csv(const SimulationResult& sim, bool satisfied);

}  // namespace beliefplan::cli
