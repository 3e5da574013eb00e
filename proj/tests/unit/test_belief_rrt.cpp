#include <gtest/gtest.h>

#include <beliefplan/belief_rrt.hpp>
#include <beliefplan/error.hpp>

#include "lightdark.hpp"

using namespace beliefplan;

namespace {

RrtNode node_at(double x, double y, double var, std::optional<std::size_t> parent = std::nullopt) {
  return RrtNode{make_belief(Vector{{x, y}}, var * Matrix::Identity(2, 2)), parent, Vector::Zero(2), 0, 0,
                 true, {}};
}

SegmentTask lightdark_segment() {
  SegmentTask task;
  task.mode = 0;
  task.stay = lightdark::free_space().atomic().cone;
  task.goal = lightdark::target().atomic().cone;
  task.min_dwell_in_goal = 40;
  task.max_total_steps = 240;
  return task;
}

// Checks the returned trajectory with the geometry module only.
void expect_valid(const SegmentResult& res, const SegmentTask& task, const BeliefState& start) {
  ASSERT_EQ(res.status, SegmentStatus::Success);
  ASSERT_EQ(res.beliefs.size(), res.controls.size() + 1);
  EXPECT_LE(static_cast<int>(res.controls.size()), task.max_total_steps);
  EXPECT_EQ(res.beliefs.front().mean(), start.mean());
  const std::size_t entry = static_cast<std::size_t>(res.steps_before_goal);
  for (std::size_t k = 0; k < entry; ++k) EXPECT_TRUE(cone_contains(task.stay, res.beliefs[k])) << k;
  EXPECT_EQ(res.beliefs.size() - entry, static_cast<std::size_t>(task.min_dwell_in_goal) + 1);
  for (std::size_t k = entry; k < res.beliefs.size(); ++k) EXPECT_TRUE(cone_contains(task.goal, res.beliefs[k])) << k;
  const auto sys = lightdark::system();
  BeliefState b = start;
  for (std::size_t k = 0; k < res.controls.size(); ++k) {
    ASSERT_TRUE(polytope_contains(sys.control_domain(), res.controls[k]));
    b = propagate_mlo(sys.mode(task.mode), b, res.controls[k]);
    EXPECT_LE((b.mean() - res.beliefs[k + 1].mean()).norm(), 1e-9);
    EXPECT_LE((b.cov() - res.beliefs[k + 1].cov()).norm(), 1e-9);
  }
}

}  // namespace

TEST(RrtParams, Validation) {
  RrtParams p = lightdark::params();
  EXPECT_NO_THROW(p.validate());
  p.delta_drain = 3.0;
  EXPECT_THROW(p.validate(), DomainError);
  p = lightdark::params();
  p.goal_bias = 1.5;
  EXPECT_THROW(p.validate(), DomainError);
  p = lightdark::params();
  p.min_num_of_steps = 20;
  EXPECT_THROW(p.validate(), DomainError);
  p = lightdark::params();
  p.iteration_cap.reset();
  p.rrt_timeout = 0.0;
  EXPECT_THROW(p.validate(), DomainError);
}

TEST(RrtSelect, PrefersLowUncertaintyWithinNear) {
  RrtTree tree{node_at(0.1, 0.0, 0.1), node_at(-0.1, 0.0, 0.025)};
  EXPECT_EQ(rrt_select(tree, Vector::Zero(2), 2.0), 1u);
}

TEST(RrtSelect, FallsBackToNearest) {
  RrtTree tree{node_at(5.0, 0.0, 0.01), node_at(3.0, 0.0, 0.2)};
  EXPECT_EQ(rrt_select(tree, Vector::Zero(2), 2.0), 1u);
  EXPECT_EQ(rrt_select({node_at(9.0, 9.0, 1.0)}, Vector::Zero(2), 2.0), 0u);
}

TEST(RrtSelect, TiesAndInactive) {
  RrtTree tree{node_at(1.0, 0.0, 0.1), node_at(-1.0, 0.0, 0.1), node_at(0.0, 0.5, 0.01)};
  tree[2].active = false;
  EXPECT_EQ(rrt_select(tree, Vector::Zero(2), 2.0), 0u);
}

TEST(RrtExtend, TargetAtStartStaysReachable) {
  Rng rng(1);
  const auto mode = lightdark::mode();
  const auto start = lightdark::initial();
  const auto branch = rrt_extend(mode, start, start.mean(), 6, lightdark::free_space().atomic().cone,
                                 lightdark::unit_box(), rng);
  ASSERT_TRUE(branch);
  EXPECT_EQ(branch->beliefs.size(), 6u);
  EXPECT_LE((branch->beliefs.back().mean() - start.mean()).norm(), 6 * 0.25 * std::sqrt(2.0) + 1e-12);
}

TEST(RrtExtend, ForcedViolationRejects) {
  Rng rng(2);
  const BeliefCone stay({ProbabilisticLinearPredicate(LinearExpression(Vector{{1.0, 0.0}}, 0.0), 0.5)});
  const auto outward = Polytope::box(Vector{{0.5, -1.0}}, Vector{{1.0, 1.0}});
  const auto start = make_belief(Vector::Zero(2), Matrix::Zero(2, 2));
  const SystemMode lbs(Matrix::Identity(2, 2), 0.25 * Matrix::Identity(2, 2), Matrix::Zero(2, 2));
  EXPECT_FALSE(rrt_extend(lbs, start, Vector{{-3.0, 0.0}}, 5, stay, outward, rng));
}

TEST(RrtExtend, GreedyReachesTheLight) {
  Rng rng(3);
  const auto start = make_belief(Vector{{2.5, 1.5}}, 0.05 * Matrix::Identity(2, 2));
  const auto branch = rrt_extend(lightdark::mode(), start, Vector{{5.0, 1.5}}, 10, BeliefCone{},
                                 lightdark::unit_box(), rng);
  ASSERT_TRUE(branch);
  EXPECT_NEAR(branch->beliefs.back().mean()(0), 5.0, 1e-12);
  EXPECT_LT(uncertainty_measure(branch->beliefs.back()), 1e-3);
}

TEST(RrtExtend, StopsAtGoalEntry) {
  Rng rng(4);
  const BeliefCone goal({ProbabilisticLinearPredicate(LinearExpression(Vector{{-1.0, 0.0}}, 1.0), 0.5)});
  const auto start = make_belief(Vector::Zero(2), Matrix::Zero(2, 2));
  const SystemMode lbs(Matrix::Identity(2, 2), 0.25 * Matrix::Identity(2, 2), Matrix::Zero(2, 2));
  const auto branch = rrt_extend(lbs, start, Vector{{5.0, 0.0}}, 10, BeliefCone{}, lightdark::unit_box(), rng,
                                 GoalCut{&goal, 1});
  ASSERT_TRUE(branch);
  EXPECT_TRUE(branch->reached_goal);
  const auto& bs = branch->beliefs;
  EXPECT_TRUE(cone_contains(goal, bs.back()));
  for (std::size_t s = 0; s + 1 < bs.size(); ++s) EXPECT_FALSE(cone_contains(goal, bs[s]));
}

TEST(RrtDrain, DeactivatesDominatedNeighbours) {
  RrtTree tree{node_at(0.0, 0.0, 0.1), node_at(1.0, 0.0, 0.1, 0), node_at(1.1, 0.0, 0.01, 0)};
  rrt_drain(tree, 2, 0.5);
  EXPECT_FALSE(tree[1].active);
  EXPECT_TRUE(tree[0].active);
  EXPECT_TRUE(tree[2].active);
}

TEST(RrtDrain, KeepsLowerUncertaintyAndAncestors) {
  RrtTree tree{node_at(0.0, 0.0, 0.1), node_at(0.1, 0.0, 0.001, 0), node_at(0.05, 0.0, 0.01, 0)};
  rrt_drain(tree, 2, 0.5);
  EXPECT_TRUE(tree[1].active);
  // Node 0 is the parent: dominated but on the path.
  EXPECT_TRUE(tree[0].active);
}

TEST(SamplingBox, FreeSpace) {
  const auto [lo, hi] = sampling_box(lightdark::free_space().atomic().cone, Vector{{0.0, 2.5}});
  EXPECT_TRUE(lo.isApprox(Vector{{-1.0, -1.0}}));
  EXPECT_TRUE(hi.isApprox(Vector{{5.0, 4.0}}));
}

TEST(SamplingBox, UnboundedAndOblique) {
  const BeliefCone cone({ProbabilisticLinearPredicate(LinearExpression(Vector{{1.0, 1.0}}, -1.0), 0.1),
                         ProbabilisticLinearPredicate(LinearExpression(Vector{{0.0, 2.0}}, -4.0), 0.1)});
  const auto [lo, hi] = sampling_box(cone, Vector{{1.0, 1.0}});
  EXPECT_TRUE(lo.isApprox(Vector{{-9.0, -9.0}}));
  EXPECT_TRUE(hi.isApprox(Vector{{11.0, 2.0}}));
}

TEST(SolveSegment, StartInGoalIsZeroSteps) {
  Rng rng(1);
  SegmentTask task = lightdark_segment();
  task.min_dwell_in_goal = 0;
  const auto start = make_belief(Vector::Zero(2), 1e-4 * Matrix::Identity(2, 2));
  const auto res = solve_segment(lightdark::system(), task, start, lightdark::params(), rng);
  ASSERT_EQ(res.status, SegmentStatus::Success);
  EXPECT_TRUE(res.controls.empty());
  EXPECT_EQ(res.beliefs.size(), 1u);
}

TEST(SolveSegment, LightDarkSucceeds) {
  Rng rng(42);
  const SegmentTask task = lightdark_segment();
  const auto res = solve_segment(lightdark::system(), task, lightdark::initial(), lightdark::params(), rng);
  expect_valid(res, task, lightdark::initial());
  const auto& last = res.beliefs.back();
  for (const auto& p : task.goal.constraints()) EXPECT_LE(cone_margin(p, last), 0.0);
}

TEST(SolveSegment, Deterministic) {
  Rng a(9), b(9);
  const SegmentTask task = lightdark_segment();
  const auto r1 = solve_segment(lightdark::system(), task, lightdark::initial(), lightdark::params(), a);
  const auto r2 = solve_segment(lightdark::system(), task, lightdark::initial(), lightdark::params(), b);
  ASSERT_EQ(r1.status, r2.status);
  ASSERT_EQ(r1.controls.size(), r2.controls.size());
  for (std::size_t k = 0; k < r1.controls.size(); ++k) EXPECT_EQ(r1.controls[k], r2.controls[k]);
  EXPECT_EQ(r1.iterations, r2.iterations);
}

TEST(SolveSegment, UnreachableGoalFails) {
  Rng rng(5);
  SegmentTask task;
  task.stay = BeliefCone{};
  task.goal = BeliefCone({ProbabilisticLinearPredicate(LinearExpression(Vector{{-1.0, 0.0}}, 99.0), 0.01),
                          ProbabilisticLinearPredicate(LinearExpression(Vector{{0.0, -1.0}}, 99.0), 0.01)});
  task.max_total_steps = 240;
  const auto res = solve_segment(lightdark::system(), task, lightdark::initial(), lightdark::params(2000), rng);
  EXPECT_EQ(res.status, SegmentStatus::Exhausted);
  EXPECT_EQ(res.iterations, 2000);
}

TEST(SolveSegment, InfeasibleStart) {
  Rng rng(6);
  SegmentTask task = lightdark_segment();
  task.stay = task.goal;
  const auto res = solve_segment(lightdark::system(), task, lightdark::initial(), lightdark::params(), rng);
  EXPECT_EQ(res.status, SegmentStatus::InfeasibleStart);
  EXPECT_EQ(res.iterations, 0);
}
