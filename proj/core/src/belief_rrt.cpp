#include "beliefplan/belief_rrt.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "beliefplan/error.hpp"

namespace beliefplan {
namespace {

constexpr int kRandomCandidates = 7;
constexpr double kBoxMargin = 10.0;

bool is_ancestor(const RrtTree& tree, std::size_t candidate, std::size_t node) {
  for (auto cur = tree[node].parent; cur; cur = tree[*cur].parent) {
    if (*cur == candidate) return true;
  }
  return false;
}

Vector greedy_control(const SystemMode& mode, const BeliefState& start, const Vector& target,
                      int horizon) {
  // mean_h = A^h mean + (sum_j A^j B) u for a constant u.
  const auto n = mode.state_dim();
  Matrix power = Matrix::Identity(n, n);
  Matrix gain = Matrix::Zero(n, mode.control_dim());
  for (int j = 0; j < horizon; ++j) {
    gain += power * mode.B();
    power = mode.A() * power;
  }
  const Vector rhs = target - power * start.mean();
  return gain.completeOrthogonalDecomposition().solve(rhs);
}

Vector dwell_control(const Polytope& domain) {
  const Vector zero = Vector::Zero(domain.dim());
  if (polytope_contains(domain, zero)) return zero;
  const auto& verts = *domain.vertices();
  Vector centroid = Vector::Zero(domain.dim());
  for (const auto& v : verts) centroid += v;
  return centroid / static_cast<double>(verts.size());
}

Vector uniform_in_box(const std::pair<Vector, Vector>& box, Rng& rng) {
  Vector x(box.first.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    std::uniform_real_distribution<double> dist(box.first(i), box.second(i));
    x(i) = dist(rng);
  }
  return x;
}

}  // namespace

void RrtParams::validate() const {
  if (!iteration_cap && !(rrt_timeout > 0.0)) throw DomainError("rrt_timeout must be positive");
  if (iteration_cap && *iteration_cap < 1) throw DomainError("iteration_cap must be positive");
  if (!(delta_near >= 0.0) || !(delta_drain >= 0.0) || delta_drain > delta_near) {
    throw DomainError("need 0 <= delta_drain <= delta_near");
  }
  if (!(goal_bias >= 0.0 && goal_bias <= 1.0)) throw DomainError("goal_bias must lie in [0, 1]");
  if (min_num_of_steps < 1 || max_num_of_steps < min_num_of_steps) {
    throw DomainError("need 1 <= min_num_of_steps <= max_num_of_steps");
  }
}

std::size_t rrt_select(const RrtTree& tree, const Vector& point, double delta_near) {
  std::optional<std::size_t> near, nearest;
  double near_trace = std::numeric_limits<double>::infinity();
  double nearest_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (!tree[i].active) continue;
    const double dist = (tree[i].belief.mean() - point).norm();
    if (dist <= delta_near) {
      const double tr = uncertainty_measure(tree[i].belief);
      if (tr < near_trace) {
        near_trace = tr;
        near = i;
      }
    }
    if (dist < nearest_dist) {
      nearest_dist = dist;
      nearest = i;
    }
  }
  if (near) return *near;
  if (nearest) return *nearest;
  return 0;
}

std::optional<RrtBranch> rrt_extend(const SystemMode& mode, const BeliefState& start,
                                    const Vector& target, int horizon, const BeliefCone& stay,
                                    const Polytope& control_domain, Rng& rng, const GoalCut& goal) {
  std::vector<Vector> controls;
  controls.reserve(kRandomCandidates + 1);
  for (int i = 0; i < kRandomCandidates; ++i) controls.push_back(polytope_sample(control_domain, rng));
  Vector greedy = clamp_to_bounds(control_domain, greedy_control(mode, start, target, horizon));
  if (polytope_contains(control_domain, greedy)) controls.push_back(std::move(greedy));

  std::optional<RrtBranch> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& u : controls) {
    RrtBranch branch{u, {}, false};
    BeliefState b = start;
    bool ok = true;
    for (int s = 1; s <= horizon; ++s) {
      b = propagate_mlo(mode, b, u);
      branch.beliefs.push_back(b);
      if (goal.cone && s >= goal.earliest_step && cone_contains(*goal.cone, b)) {
        branch.reached_goal = true;
        break;
      }
      if (!cone_contains(stay, b)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    const double dist = (branch.beliefs.back().mean() - target).norm();
    // A branch that reaches the goal beats any that does not.
    const bool better = !best || (branch.reached_goal && !best->reached_goal) ||
                        (branch.reached_goal == best->reached_goal && dist < best_dist);
    if (better) {
      best_dist = dist;
      best = std::move(branch);
    }
  }
  return best;
}

void rrt_drain(RrtTree& tree, std::size_t new_node, double delta_drain) {
  const auto& fresh = tree[new_node];
  const double tr = uncertainty_measure(fresh.belief);
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (i == new_node || !tree[i].active) continue;
    if ((tree[i].belief.mean() - fresh.belief.mean()).norm() > delta_drain) continue;
    if (!(uncertainty_measure(tree[i].belief) > tr)) continue;
    if (is_ancestor(tree, i, new_node)) continue;
    tree[i].active = false;
  }
}

std::pair<Vector, Vector> sampling_box(const BeliefCone& cone, const Vector& center) {
  const auto n = center.size();
  Vector lo = center.array() - kBoxMargin;
  Vector hi = center.array() + kBoxMargin;
  Vector tight_lo = Vector::Constant(n, -std::numeric_limits<double>::infinity());
  Vector tight_hi = Vector::Constant(n, std::numeric_limits<double>::infinity());
  for (const auto& pred : cone.constraints()) {
    const auto& h = pred.expr.h;
    Eigen::Index axis = -1;
    int nonzero = 0;
    for (Eigen::Index i = 0; i < h.size(); ++i) {
      if (h(i) != 0.0) {
        ++nonzero;
        axis = i;
      }
    }
    if (nonzero != 1) continue;
    const double bound = -pred.expr.c / h(axis);
    if (h(axis) > 0.0) {
      tight_hi(axis) = std::min(tight_hi(axis), bound);
    } else {
      tight_lo(axis) = std::max(tight_lo(axis), bound);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::isfinite(tight_lo(i))) lo(i) = tight_lo(i);
    if (std::isfinite(tight_hi(i))) hi(i) = tight_hi(i);
    if (lo(i) > hi(i)) {
      lo(i) = center(i) - kBoxMargin;
      hi(i) = center(i) + kBoxMargin;
    }
  }
  return {lo, hi};
}

SegmentResult solve_segment(const SwitchedSystem& sys, const SegmentTask& task,
                            const BeliefState& start, const RrtParams& params, Rng& rng) {
  params.validate();
  if (task.max_total_steps < 0) throw DomainError("max_total_steps must be nonnegative");
  const SystemMode& mode = sys.mode(task.mode);
  const Polytope& domain = sys.control_domain();
  SegmentResult result;

  const bool start_in_stay = cone_contains(task.stay, start);
  const bool start_in_goal = cone_contains(task.goal, start);
  // Without an immediate goal hit the start belief is part of the stay phase.
  const bool goal_usable = start_in_goal && task.min_steps_before_goal == 0;
  if (!start_in_stay && !goal_usable) {
    result.status = SegmentStatus::InfeasibleStart;
    return result;
  }

  const Vector hold = dwell_control(domain);
  // Zero-control dwell from a node in the goal; nullopt if it leaves the goal.
  auto try_dwell = [&](const BeliefState& b) -> std::optional<std::vector<BeliefState>> {
    std::vector<BeliefState> out;
    BeliefState cur = b;
    for (int s = 0; s < task.min_dwell_in_goal; ++s) {
      cur = propagate_mlo(mode, cur, hold);
      if (!cone_contains(task.goal, cur)) return std::nullopt;
      out.push_back(cur);
    }
    return out;
  };

  RrtTree tree;
  tree.push_back(RrtNode{start, std::nullopt, Vector::Zero(sys.control_dim()), 0, 0, true, {}});

  auto finish = [&](std::size_t node, std::vector<BeliefState> dwell) {
    std::vector<std::size_t> chain;
    for (std::optional<std::size_t> cur = node; cur; cur = tree[*cur].parent) chain.push_back(*cur);
    result.beliefs.push_back(start);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const auto& nd = tree[*it];
      for (const auto& b : nd.path) {
        result.beliefs.push_back(b);
        result.controls.push_back(nd.control);
      }
    }
    result.steps_before_goal = tree[node].depth;
    for (auto& b : dwell) {
      result.beliefs.push_back(std::move(b));
      result.controls.push_back(hold);
    }
    result.status = SegmentStatus::Success;
    result.tree_size = tree.size();
  };

  auto success_from = [&](std::size_t node) {
    const auto& nd = tree[node];
    if (nd.depth < task.min_steps_before_goal) return false;
    if (nd.depth + task.min_dwell_in_goal > task.max_total_steps) return false;
    if (!cone_contains(task.goal, nd.belief)) return false;
    auto dwell = try_dwell(nd.belief);
    if (!dwell) return false;
    finish(node, std::move(*dwell));
    return true;
  };

  if (success_from(0)) return result;

  const auto stay_box = sampling_box(task.stay, start.mean());
  const auto goal_box = sampling_box(task.goal, start.mean());
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> horizon_dist(params.min_num_of_steps, params.max_num_of_steps);
  const int move_budget = task.max_total_steps - task.min_dwell_in_goal;

  const auto t0 = std::chrono::steady_clock::now();
  auto keep_going = [&]() {
    if (params.iteration_cap) return result.iterations < *params.iteration_cap;
    const std::chrono::duration<double> spent = std::chrono::steady_clock::now() - t0;
    return spent.count() < params.rrt_timeout;
  };

  while (keep_going()) {
    ++result.iterations;
    const bool to_goal = coin(rng) < params.goal_bias;
    const Vector target = uniform_in_box(to_goal ? goal_box : stay_box, rng);
    const std::size_t from = rrt_select(tree, target, params.delta_near);
    const int horizon = std::min(horizon_dist(rng), move_budget - tree[from].depth);
    if (horizon < 1) continue;
    const GoalCut cut{&task.goal, std::max(1, task.min_steps_before_goal - tree[from].depth)};
    auto branch = rrt_extend(mode, tree[from].belief, target, horizon, task.stay, domain, rng, cut);
    if (!branch) continue;
    RrtNode node{branch->beliefs.back(), from, branch->control,
                 static_cast<int>(branch->beliefs.size()),
                 tree[from].depth + static_cast<int>(branch->beliefs.size()), true,
                 std::move(branch->beliefs)};
    tree.push_back(std::move(node));
    const std::size_t id = tree.size() - 1;
    rrt_drain(tree, id, params.delta_drain);
    if (branch->reached_goal && success_from(id)) return result;
  }
  result.tree_size = tree.size();
  result.status = SegmentStatus::Exhausted;
  return result;
}

}  // namespace beliefplan
