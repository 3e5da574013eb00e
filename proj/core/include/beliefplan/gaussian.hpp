#pragma once

#include "beliefplan/types.hpp"

namespace beliefplan {

/// Standard normal CDF. Throws DomainError for non-finite input.
double std_normal_cdf(double v);

/// Standard normal quantile for p in (0, 1). Throws DomainError otherwise.
double std_normal_quantile(double p);

/// Gaussian belief N(mean, cov). Always holds a symmetric PSD covariance.
class BeliefState {
 public:
  /// Symmetrizes cov, then validates it. Throws DimensionError or
  /// InvalidCovariance.
  static BeliefState make(Vector mean, Matrix cov);

  const Vector& mean() const noexcept { return mean_; }
  const Matrix& cov() const noexcept { return cov_; }
  Eigen::Index dim() const noexcept { return mean_.size(); }

 private:
  BeliefState(Vector mean, Matrix cov) : mean_(std::move(mean)), cov_(std::move(cov)) {}

  Vector mean_;
  Matrix cov_;
};

inline BeliefState make_belief(Vector mean, Matrix cov) {
  return BeliefState::make(std::move(mean), std::move(cov));
}

/// Trace of the covariance; the order used to prefer low-uncertainty beliefs.
double uncertainty_measure(const BeliefState& b);

/// Smallest eigenvalue of a symmetric matrix (helper shared by validators).
double min_symmetric_eigenvalue(const Matrix& m);

}  // namespace beliefplan
