#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <beliefplan/belief_rrt.hpp>
#include <beliefplan/error.hpp>
#include <beliefplan/synthesis.hpp>
#include <beliefplan/tracking.hpp>

#include "json.hpp"

namespace beliefplan::cli {

enum ExitCode : int {
  kSolved = 0,
  kNoSolution = 1,
  kSchemaError = 2,
  kFormulaError = 3,
  kNumericError = 4,
};

/// Problem-file failure carrying the exit code and the offending JSON path.
class LoadError : public Error {
 public:
  LoadError(int code, const std::string& path, const std::string& reason)
      : Error(path.empty() ? reason : path + ": " + reason), code_(code), path_(path) {}
  int code() const noexcept { return code_; }
  const std::string& path() const noexcept { return path_; }

 private:
  int code_;
  std::string path_;
};

struct LqrConfig {
  int horizon = 1;
  Matrix Q_final, Q, R;
};

struct SimulationConfig {
  std::vector<SystemMode> real_modes;
  Vector real_x0;
  std::optional<std::size_t> num_steps;
  LqrConfig lqr;
};

struct ProblemFile {
  Problem problem;
  RrtParams params;
  std::optional<int> k_max;
  std::optional<std::uint64_t> seed;
  std::optional<SimulationConfig> simulation;
};

/// Validates the schema, then builds every object. Throws LoadError.
ProblemFile parse_problem(const nlohmann::json& doc);
ProblemFile load_problem(const std::string& path);

}  // namespace beliefplan::cli
