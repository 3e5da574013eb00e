#include "beliefplan/tracking.hpp"

#include <string>

#include "beliefplan/error.hpp"

namespace beliefplan {

LqrGains lqr_gains(const SystemMode& mode, int h, const Matrix& Q_final, const Matrix& Q,
                   const Matrix& R) {
  if (h < 1) throw DomainError("LQR horizon must be at least 1");
  const auto n = mode.state_dim();
  const auto m = mode.control_dim();
  if (Q_final.rows() != n || Q_final.cols() != n || Q.rows() != n || Q.cols() != n) {
    throw DimensionError("Q and Q_final must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (R.rows() != m || R.cols() != m) {
    throw DimensionError("R must be " + std::to_string(m) + "x" + std::to_string(m));
  }
  Eigen::LLT<Matrix> r_llt(0.5 * (R + R.transpose()));
  if (r_llt.info() != Eigen::Success) throw DomainError("R must be positive definite");

  // The recursion runs in extended precision: P grows quickly for unstable A and
  // A'PA - A'PBK cancels, so a double step loses several digits.
  using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const MatrixL A = mode.A().cast<long double>();
  const MatrixL B = mode.B().cast<long double>();
  const MatrixL QL = Q.cast<long double>();
  const MatrixL RL = R.cast<long double>();
  LqrGains g;
  g.horizon = h;
  g.Q_final = Q_final;
  g.Q = Q;
  g.R = R;
  g.K.resize(static_cast<std::size_t>(h));
  g.P.resize(static_cast<std::size_t>(h) + 1);
  g.P[static_cast<std::size_t>(h)] = Q_final;
  for (int k = h - 1; k >= 0; --k) {
    // Each step starts from the stored P so consecutive stored values satisfy the recursion.
    const MatrixL next = g.P[static_cast<std::size_t>(k) + 1].cast<long double>();
    const MatrixL S = RL + B.transpose() * next * B;
    const MatrixL K = S.ldlt().solve(B.transpose() * next * A);
    g.K[static_cast<std::size_t>(k)] = K.cast<double>();
    g.P[static_cast<std::size_t>(k)] = (QL + A.transpose() * next * (A - B * K)).cast<double>();
  }
  return g;
}

Vector track_step(const LqrGains& gains, const Vector& ref_mean, const Vector& ref_control,
                  const BeliefState& est, const Polytope& control_domain) {
  if (gains.K.empty()) throw MissingGains("empty gain sequence");
  const Matrix& K0 = gains.K.front();
  if (ref_mean.size() != K0.cols() || est.dim() != K0.cols() || ref_control.size() != K0.rows()) {
    throw DimensionError("tracking inputs disagree with the gain dimensions");
  }
  Vector u = ref_control - K0 * (est.mean() - ref_mean);
  u = clamp_to_bounds(control_domain, u);
  if (!polytope_contains(control_domain, u)) {
    throw DomainError("clamped tracking control lies outside the control domain");
  }
  return u;
}

SimulationResult simulate(const SwitchedSystem& sys, const SwitchedSystem& real_sys,
                          const SolutionTrajectory& ref, const Vector& real_x0,
                          std::size_t num_steps, const std::map<int, LqrGains>& gains, Rng& rng) {
  if (num_steps > ref.num_steps()) {
    throw DomainError("num_steps " + std::to_string(num_steps) + " exceeds the reference length " +
                      std::to_string(ref.num_steps()));
  }
  if (real_x0.size() != real_sys.state_dim()) {
    throw DimensionError("real initial state has the wrong dimension");
  }
  for (std::size_t k = 0; k < num_steps; ++k) {
    if (!gains.count(ref.modes[k])) {
      throw MissingGains("no LQR gains for mode " + std::to_string(ref.modes[k]));
    }
  }

  SimulationResult out;
  BeliefState est = ref.beliefs.front();
  Vector x = real_x0;
  out.estimated.beliefs.push_back(est);
  out.real_states.push_back(x);
  for (std::size_t k = 0; k < num_steps; ++k) {
    const int q = ref.modes[k];
    const Vector u = track_step(gains.at(q), ref.beliefs[k].mean(), ref.controls[k], est,
                                sys.control_domain());
    x = step_truth(real_sys.mode(q), x, u, rng);
    const SystemMode& model = sys.mode(q);
    est = predict(model, est, u);
    if (model.observed()) est = kalman_update(model, est, sample_observation(model, x, rng));
    out.estimated.beliefs.push_back(est);
    out.estimated.modes.push_back(q);
    out.real_states.push_back(x);
    out.controls.push_back(u);
  }
  return out;
}

}  // namespace beliefplan
