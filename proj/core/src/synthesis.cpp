#include "beliefplan/synthesis.hpp"

#include <string>

#include "beliefplan/error.hpp"

namespace beliefplan {
namespace {

constexpr int kGrowthThreshold = 50;

SegmentTask task_for(const DiscretePlan& plan, std::size_t i, std::pair<int, int> window) {
  const auto& seg = plan.segments[i];
  SegmentTask task;
  task.mode = seg.mode;
  task.stay = seg.atomic.cone;
  if (i + 1 < plan.size()) {
    task.goal = plan.segments[i + 1].atomic.cone;
    task.min_dwell_in_goal = 0;
    task.min_steps_before_goal = window.first;
    task.max_total_steps = window.second;
  } else {
    // The final word segment counts its entry step too.
    task.goal = seg.atomic.cone;
    task.min_dwell_in_goal = window.first - 1;
    task.min_steps_before_goal = 0;
    task.max_total_steps = window.second - 1;
  }
  return task;
}

}  // namespace

void Problem::validate() const {
  if (initial_belief.dim() != system.state_dim()) {
    throw DimensionError("initial belief has dimension " + std::to_string(initial_belief.dim()) +
                         ", system state has " + std::to_string(system.state_dim()));
  }
  for (const auto& at : atomic_propositions(formula)) {
    if (!at.cone.empty() && at.cone.dim() != system.state_dim()) {
      throw DimensionError("atomic '" + at.name + "' has the wrong state dimension");
    }
  }
  abstract(formula, system);
}

SynthesisResult solve(const Problem& p, const RrtParams& params, int k_max, Rng& rng) {
  p.validate();
  params.validate();
  SynthesisResult out;
  out.k_max = k_max;
  const Abstraction abs = abstract(p.formula, p.system);

  while (auto candidate = bmc_next_candidate(abs, p.formula, out.counterexamples, k_max)) {
    CegisIteration it;
    it.candidate = *candidate;
    const auto& plan = *candidate;

    SolutionTrajectory traj;
    traj.beliefs.push_back(p.initial_belief);
    std::vector<int> realized;
    bool ok = true;
    for (std::size_t i = 0; i < plan.size() && ok; ++i) {
      const auto windows = dwell_windows(p.formula, plan.segments, realized);
      if (!windows) {
        ok = false;
        it.failed_segment = i;
        it.failure = SegmentStatus::Exhausted;
        break;
      }
      const SegmentTask task = task_for(plan, i, (*windows)[i]);
      const SegmentResult res = solve_segment(p.system, task, traj.beliefs.back(), params, rng);
      it.rrt_iterations += res.iterations;
      if (res.status != SegmentStatus::Success) {
        ok = false;
        it.failed_segment = i;
        it.failure = res.status;
        break;
      }
      const bool last = i + 1 == plan.size();
      const int steps = static_cast<int>(res.controls.size());
      realized.push_back(last ? steps + 1 : steps);
      if (!dwell_windows(p.formula, plan.segments, realized)) {
        ok = false;
        it.failed_segment = i;
        it.failure = SegmentStatus::Exhausted;
        break;
      }
      traj.segment_boundaries.push_back(traj.beliefs.size() - 1);
      traj.beliefs.insert(traj.beliefs.end(), res.beliefs.begin() + 1, res.beliefs.end());
      traj.controls.insert(traj.controls.end(), res.controls.begin(), res.controls.end());
      traj.modes.insert(traj.modes.end(), res.controls.size(), plan.segments[i].mode);
    }
    it.realized_dwells = realized;

    if (!ok) {
      const LabelSequence labels = labels_of(plan);
      const auto end = labels.begin() + static_cast<long>(*it.failed_segment) + 1;
      out.counterexamples.add(LabelSequence(labels.begin(), end));
      out.iterations.push_back(std::move(it));
      continue;
    }

    if (!satisfies(p.formula, traj.trace())) {
      throw InternalConsistencyError("assembled trajectory violates the formula");
    }
    UncertaintyGrowthWatch watch(kGrowthThreshold);
    for (const auto& b : traj.beliefs) {
      if (watch.observe(b)) {
        out.warnings.push_back("uncertainty grew for " + std::to_string(kGrowthThreshold) +
                               " consecutive steps");
        break;
      }
    }
    it.feasible = true;
    out.iterations.push_back(std::move(it));
    out.plan = plan;
    out.solution = std::move(traj);
    return out;
  }
  return out;
}

QueryValue trajectory_query(const SolutionTrajectory& t, QueryKind kind, std::size_t k) {
  const std::size_t T = t.num_steps();
  const bool per_step = kind == QueryKind::Control || kind == QueryKind::Action;
  if (per_step ? k >= T : k > T) {
    throw IndexError("index " + std::to_string(k) + " out of range for a trajectory of " +
                     std::to_string(T) + " steps");
  }
  switch (kind) {
    case QueryKind::Mean: return t.beliefs[k].mean();
    case QueryKind::Cov: return t.beliefs[k].cov();
    case QueryKind::Control: return t.controls[k];
    case QueryKind::Action: return t.modes[k];
  }
  throw IndexError("unknown query kind");
}

}  // namespace beliefplan
