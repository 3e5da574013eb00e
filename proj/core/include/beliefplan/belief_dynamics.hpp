#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "beliefplan/gaussian.hpp"
#include "beliefplan/geometry.hpp"
#include "beliefplan/noise_expression.hpp"
#include "beliefplan/types.hpp"

namespace beliefplan {

/// How a mode's measurement noise scales: a constant p x p gain V, or a
/// state-dependent scalar n(x) times the identity.
using NoiseModel = std::variant<Matrix, ScalarExpression>;

enum class BehaviorKind { LinearBelief, ObservedLinearNoise, ObservedNonlinearNoise };

/// One location of the switched system:
///   x' = A x + B u + W w,   y = C x + n(x) v,   w, v ~ N(0, I).
class SystemMode {
 public:
  /// Unobserved mode (p = 0).
  SystemMode(Matrix A, Matrix B, Matrix W);
  /// Observed mode; throws DimensionError on inconsistent shapes.
  SystemMode(Matrix A, Matrix B, Matrix W, Matrix C, NoiseModel noise);

  const Matrix& A() const noexcept { return A_; }
  const Matrix& B() const noexcept { return B_; }
  const Matrix& W() const noexcept { return W_; }
  const Matrix& C() const noexcept { return C_; }
  const NoiseModel& noise() const noexcept { return noise_; }

  Eigen::Index state_dim() const noexcept { return A_.rows(); }
  Eigen::Index control_dim() const noexcept { return B_.cols(); }
  Eigen::Index output_dim() const noexcept { return C_.rows(); }
  bool observed() const noexcept { return C_.rows() > 0; }
  BehaviorKind behavior() const;

  /// n(x) as a p x p matrix (the gain applied to v).
  Matrix noise_gain(const Vector& x) const;

 private:
  void validate() const;

  Matrix A_, B_, W_, C_;
  NoiseModel noise_;
};

/// Modes sharing state/control dimensions plus the control polytope.
class SwitchedSystem {
 public:
  /// Throws DimensionError for empty or incompatible modes, DomainError when
  /// the control domain lacks vertices.
  SwitchedSystem(std::vector<SystemMode> modes, Polytope control_domain,
                 std::optional<double> sampling_period = std::nullopt);

  const std::vector<SystemMode>& modes() const noexcept { return modes_; }
  const SystemMode& mode(int q) const;
  int mode_count() const noexcept { return static_cast<int>(modes_.size()); }
  const Polytope& control_domain() const noexcept { return control_domain_; }
  std::optional<double> sampling_period() const noexcept { return sampling_period_; }
  Eigen::Index state_dim() const noexcept { return modes_.front().state_dim(); }
  Eigen::Index control_dim() const noexcept { return modes_.front().control_dim(); }

 private:
  std::vector<SystemMode> modes_;
  Polytope control_domain_;
  std::optional<double> sampling_period_;
};

/// Measurement covariance R(x) = n(x) n(x)'. Throws NoObservation for p = 0.
Matrix noise_cov(const SystemMode& mode, const Vector& x);

/// mean' = A mean + B u, cov' = A cov A' + W W'.
BeliefState predict(const SystemMode& mode, const BeliefState& b, const Vector& u);

/// Joseph-form Kalman update with R evaluated at b.mean().
/// Throws IllConditionedUpdate when the innovation covariance has condition
/// number above 1e12 (or is singular).
BeliefState kalman_update(const SystemMode& mode, const BeliefState& b, const Vector& y);

/// Prediction followed by the maximum-likelihood observation y = C mean'.
BeliefState propagate_mlo(const SystemMode& mode, const BeliefState& b, const Vector& u);

/// y = C x + n(x) v with v ~ N(0, I_p).
Vector sample_observation(const SystemMode& mode, const Vector& x_true, Rng& rng);

/// A x + B u + W w with w ~ N(0, I_n).
Vector step_truth(const SystemMode& mode, const Vector& x_true, const Vector& u, Rng& rng);

/// Standard-normal vector drawn from rng.
Vector standard_normal(Eigen::Index n, Rng& rng);

/// Counts consecutive uncertainty increases along a belief sequence.
class UncertaintyGrowthWatch {
 public:
  explicit UncertaintyGrowthWatch(int threshold = 50) : threshold_(threshold) {}

  /// Returns true once the run of strict trace increases reaches the threshold.
  bool observe(const BeliefState& b);
  int run_length() const noexcept { return run_; }

 private:
  int threshold_;
  int run_ = 0;
  std::optional<double> last_;
};

}  // namespace beliefplan
