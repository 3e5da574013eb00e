#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "beliefplan/belief_dynamics.hpp"
#include "beliefplan/belief_rrt.hpp"
#include "beliefplan/discrete_planner.hpp"
#include "beliefplan/formula.hpp"

namespace beliefplan {

struct Problem {
  SwitchedSystem system;
  BeliefState initial_belief;
  Formula formula;

  /// Throws DimensionError or FormulaError.
  void validate() const;
};

struct SolutionTrajectory {
  std::vector<BeliefState> beliefs;  // T + 1
  std::vector<int> modes;            // T
  std::vector<Vector> controls;      // T
  /// First belief index of each plan segment.
  std::vector<std::size_t> segment_boundaries;

  std::size_t num_steps() const noexcept { return controls.size(); }
  Trace trace() const { return Trace{beliefs, modes}; }
};

/// One proposal of the CEGIS loop and the teacher's answer.
struct CegisIteration {
  DiscretePlan candidate;
  bool feasible = false;
  /// Segment whose search failed, with the reason.
  std::optional<std::size_t> failed_segment;
  SegmentStatus failure = SegmentStatus::Success;
  std::vector<int> realized_dwells;
  long rrt_iterations = 0;
};

struct SynthesisResult {
  std::optional<SolutionTrajectory> solution;
  std::optional<DiscretePlan> plan;
  std::vector<CegisIteration> iterations;
  CounterexampleStore counterexamples;
  int k_max = 0;
  std::vector<std::string> warnings;

  bool solved() const noexcept { return solution.has_value(); }
};

inline constexpr int kDefaultKMax = 6;

/// Counterexample-guided loop over discrete candidates. Throws
/// InternalConsistencyError when an assembled trajectory fails the formula.
SynthesisResult solve(const Problem& p, const RrtParams& params, int k_max, Rng& rng);

enum class QueryKind { Mean, Cov, Control, Action };
using QueryValue = std::variant<Vector, Matrix, int>;

/// Throws IndexError outside [0, T] (mean, cov) or [0, T) (control, action).
QueryValue trajectory_query(const SolutionTrajectory& t, QueryKind kind, std::size_t k);

}  // namespace beliefplan
