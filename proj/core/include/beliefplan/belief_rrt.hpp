#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "beliefplan/belief_dynamics.hpp"
#include "beliefplan/geometry.hpp"

namespace beliefplan {

struct RrtParams {
  double rrt_timeout = 60.0;
  double delta_near = 2.0;
  double delta_drain = 0.5;
  double goal_bias = 0.25;
  int min_num_of_steps = 3;
  int max_num_of_steps = 15;
  /// When set, replaces the wall-clock timeout by a fixed iteration count.
  std::optional<long> iteration_cap;

  /// Throws DomainError on inconsistent values.
  void validate() const;
};

/// Tree vertex. `path` holds the beliefs after each step from the parent, so
/// path.back() is the node belief (empty for the root).
struct RrtNode {
  BeliefState belief;
  std::optional<std::size_t> parent;
  Vector control;
  int steps_from_parent = 0;
  int depth = 0;
  bool active = true;
  std::vector<BeliefState> path;
};

using RrtTree = std::vector<RrtNode>;

/// One plan segment handed to the continuous layer.
struct SegmentTask {
  int mode = 0;
  BeliefCone stay;
  BeliefCone goal;
  int min_dwell_in_goal = 0;
  int max_total_steps = 1;
  /// Goal entry only counts after this many steps.
  int min_steps_before_goal = 0;
};

/// Active node minimizing trace among those within delta_near of the point;
/// otherwise the nearest active node. Ties go to the lowest id.
std::size_t rrt_select(const RrtTree& tree, const Vector& point, double delta_near);

struct RrtBranch {
  Vector control;
  std::vector<BeliefState> beliefs;  // one per step, excluding the start
  bool reached_goal = false;
};

/// Goal handling during extension: the branch stops at the first step s >=
/// earliest_step whose belief lies in the cone.
struct GoalCut {
  const BeliefCone* cone = nullptr;
  int earliest_step = 1;
};

/// Tries 7 sampled controls and one greedy control for `horizon` steps and
/// returns the survivor ending closest to target, or nullopt.
std::optional<RrtBranch> rrt_extend(const SystemMode& mode, const BeliefState& start,
                                    const Vector& target, int horizon, const BeliefCone& stay,
                                    const Polytope& control_domain, Rng& rng,
                                    const GoalCut& goal = {});

/// Deactivates non-ancestor nodes within delta_drain of the new node whose
/// trace is strictly larger.
void rrt_drain(RrtTree& tree, std::size_t new_node, double delta_drain);

/// Axis-aligned sampling box of a cone in mean space; unbounded sides are
/// clipped to +-10 around center.
std::pair<Vector, Vector> sampling_box(const BeliefCone& cone, const Vector& center);

enum class SegmentStatus { Success, Exhausted, InfeasibleStart };

struct SegmentResult {
  SegmentStatus status = SegmentStatus::Exhausted;
  std::vector<BeliefState> beliefs;  // length controls.size() + 1
  std::vector<Vector> controls;
  int steps_before_goal = 0;
  long iterations = 0;
  std::size_t tree_size = 0;
};

SegmentResult solve_segment(const SwitchedSystem& sys, const SegmentTask& task,
                            const BeliefState& start, const RrtParams& params, Rng& rng);

}  // namespace beliefplan
