#pragma once

#include <map>
#include <vector>

#include "beliefplan/belief_dynamics.hpp"
#include "beliefplan/formula.hpp"
#include "beliefplan/synthesis.hpp"

namespace beliefplan {

/// Finite-horizon LQR gains K_0..K_{h-1} and cost-to-go P_0..P_h.
struct LqrGains {
  int horizon = 0;
  std::vector<Matrix> K;
  std::vector<Matrix> P;
  Matrix Q_final, Q, R;
};

/// Backward Riccati recursion. Throws DomainError unless R is positive
/// definite and h >= 1, DimensionError on shape mismatch.
LqrGains lqr_gains(const SystemMode& mode, int h, const Matrix& Q_final, const Matrix& Q,
                   const Matrix& R);

/// u = ref_control - K_0 (est.mean - ref_mean), clamped into the domain box.
Vector track_step(const LqrGains& gains, const Vector& ref_mean, const Vector& ref_control,
                  const BeliefState& est, const Polytope& control_domain);

struct SimulationResult {
  Trace estimated;
  std::vector<Vector> real_states;  // num_steps + 1
  std::vector<Vector> controls;     // num_steps
};

/// Closed-loop execution of ref on real_sys using the sys observation model.
/// Throws MissingGains when a used mode has no gains, DomainError when
/// num_steps exceeds the reference length.
SimulationResult simulate(const SwitchedSystem& sys, const SwitchedSystem& real_sys,
                          const SolutionTrajectory& ref, const Vector& real_x0,
                          std::size_t num_steps, const std::map<int, LqrGains>& gains, Rng& rng);

}  // namespace beliefplan
