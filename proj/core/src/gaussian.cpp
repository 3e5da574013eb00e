#include "beliefplan/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "beliefplan/error.hpp"

namespace beliefplan {
namespace {

constexpr double kAsymmetryTolerance = 1e-6;
constexpr double kEigenTolerance = 1e-9;

// Wichura's AS241 (PPND16) rational approximation, ~1e-16 relative accuracy.
double quantile_as241(double p) {
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
              6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
            1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
          1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
    const double den =
        (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
              3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
            5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
          4.2313330701600911252e+1) * r + 1.0);
    return q * num / den;
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
            3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
          4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
          2.05319162663775882187e+0) * r + 1.0);
    val = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
          5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    val = num / den;
  }
  return q < 0.0 ? -val : val;
}

double std_normal_pdf(double v) {
  return std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

double std_normal_cdf(double v) {
  if (!std::isfinite(v)) {
    throw DomainError("std_normal_cdf: non-finite argument");
  }
  // erfc on the magnitude keeps both tails free of cancellation.
  const double tail = 0.5 * std::erfc(std::abs(v) / std::numbers::sqrt2);
  return v < 0.0 ? tail : 1.0 - tail;
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("std_normal_quantile: p must lie in (0, 1), got " + std::to_string(p));
  }
  double x = quantile_as241(p);
  const double density = std_normal_pdf(x);
  if (density > 0.0) {
    x -= (std_normal_cdf(x) - p) / density;
  }
  return x;
}

double min_symmetric_eigenvalue(const Matrix& m) {
  if (m.size() == 0) {
    return 0.0;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

BeliefState BeliefState::make(Vector mean, Matrix cov) {
  const auto n = mean.size();
  if (cov.rows() != n || cov.cols() != n) {
    throw DimensionError("belief: covariance is " + std::to_string(cov.rows()) + "x" +
                         std::to_string(cov.cols()) + " but mean has length " +
                         std::to_string(n));
  }
  if (!mean.allFinite() || !cov.allFinite()) {
    throw InvalidCovariance("belief: non-finite mean or covariance entries");
  }
  const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  if (n > 0 && asym > kAsymmetryTolerance) {
    throw InvalidCovariance("belief: covariance asymmetry " + std::to_string(asym) +
                            " exceeds tolerance");
  }
  Matrix sym = 0.5 * (cov + cov.transpose());
  const double lambda = min_symmetric_eigenvalue(sym);
  if (lambda < -kEigenTolerance) {
    throw InvalidCovariance("belief: covariance has negative eigenvalue " + std::to_string(lambda));
  }
  return BeliefState(std::move(mean), std::move(sym));
}

double uncertainty_measure(const BeliefState& b) { return b.cov().trace(); }

}  // namespace beliefplan
