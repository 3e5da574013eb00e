#include "beliefplan/belief_dynamics.hpp"

#include <string>

#include "beliefplan/error.hpp"

namespace beliefplan {
namespace {

constexpr double kMaxCondition = 1e12;

void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionError(std::string(what) + " must be " + std::to_string(rows) + "x" +
                         std::to_string(cols) + ", got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
}

void require_length(const Vector& v, Eigen::Index n, const char* what) {
  if (v.size() != n) {
    throw DimensionError(std::string(what) + " must have length " + std::to_string(n) + ", got " +
                         std::to_string(v.size()));
  }
}

}  // namespace

SystemMode::SystemMode(Matrix A, Matrix B, Matrix W)
    : A_(std::move(A)), B_(std::move(B)), W_(std::move(W)), C_(0, A_.cols()), noise_(Matrix(0, 0)) {
  validate();
}

SystemMode::SystemMode(Matrix A, Matrix B, Matrix W, Matrix C, NoiseModel noise)
    : A_(std::move(A)), B_(std::move(B)), W_(std::move(W)), C_(std::move(C)), noise_(std::move(noise)) {
  validate();
}

void SystemMode::validate() const {
  const auto n = A_.rows();
  require_shape(A_, n, n, "A");
  if (B_.rows() != n) throw DimensionError("B must have " + std::to_string(n) + " rows");
  require_shape(W_, n, n, "W");
  if (C_.cols() != n) throw DimensionError("C must have " + std::to_string(n) + " columns");
  const auto p = C_.rows();
  if (const auto* v = std::get_if<Matrix>(&noise_)) {
    if (p > 0) require_shape(*v, p, p, "V");
  } else {
    const auto& expr = std::get<ScalarExpression>(noise_);
    if (expr.state_dim() > n) throw DimensionError("noise expression refers beyond the state");
    if (p == 0) throw DimensionError("noise expression given for an unobserved mode");
  }
}

BehaviorKind SystemMode::behavior() const {
  if (!observed()) return BehaviorKind::LinearBelief;
  return std::holds_alternative<Matrix>(noise_) ? BehaviorKind::ObservedLinearNoise
                                                : BehaviorKind::ObservedNonlinearNoise;
}

Matrix SystemMode::noise_gain(const Vector& x) const {
  if (!observed()) throw NoObservation("mode has no observation");
  if (const auto* v = std::get_if<Matrix>(&noise_)) return *v;
  const double scale = std::get<ScalarExpression>(noise_)(x);
  return scale * Matrix::Identity(output_dim(), output_dim());
}

SwitchedSystem::SwitchedSystem(std::vector<SystemMode> modes, Polytope control_domain,
                               std::optional<double> sampling_period)
    : modes_(std::move(modes)),
      control_domain_(std::move(control_domain)),
      sampling_period_(sampling_period) {
  if (modes_.empty()) throw DimensionError("switched system needs at least one mode");
  for (const auto& m : modes_) {
    if (m.state_dim() != state_dim() || m.control_dim() != control_dim()) {
      throw DimensionError("modes disagree on state or control dimension");
    }
  }
  if (control_domain_.dim() != control_dim()) {
    throw DimensionError("control domain dimension differs from the control dimension");
  }
  if (!control_domain_.vertices() || control_domain_.vertices()->empty()) {
    throw DomainError("control domain needs a vertex representation");
  }
}

const SystemMode& SwitchedSystem::mode(int q) const {
  if (q < 0 || q >= mode_count()) {
    throw IndexError("mode index " + std::to_string(q) + " out of range");
  }
  return modes_[static_cast<std::size_t>(q)];
}

Matrix noise_cov(const SystemMode& mode, const Vector& x) {
  const Matrix gain = mode.noise_gain(x);
  return gain * gain.transpose();
}

BeliefState predict(const SystemMode& mode, const BeliefState& b, const Vector& u) {
  require_length(b.mean(), mode.state_dim(), "belief mean");
  require_length(u, mode.control_dim(), "control");
  Vector mean = mode.A() * b.mean() + mode.B() * u;
  Matrix cov = mode.A() * b.cov() * mode.A().transpose() + mode.W() * mode.W().transpose();
  return make_belief(std::move(mean), std::move(cov));
}

BeliefState kalman_update(const SystemMode& mode, const BeliefState& b, const Vector& y) {
  if (!mode.observed()) throw NoObservation("kalman_update on a mode without observation");
  require_length(b.mean(), mode.state_dim(), "belief mean");
  require_length(y, mode.output_dim(), "observation");
  const Matrix& C = mode.C();
  const Matrix R = noise_cov(mode, b.mean());
  Matrix S = C * b.cov() * C.transpose() + R;
  S = 0.5 * (S + S.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(S, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxCondition) {
    throw IllConditionedUpdate("innovation covariance is singular or ill-conditioned");
  }
  Eigen::LLT<Matrix> llt(S);
  // K = cov C' S^{-1}, solved as S K' = C cov.
  const Matrix gain = llt.solve(C * b.cov()).transpose();
  Vector mean = b.mean() + gain * (y - C * b.mean());
  const auto n = mode.state_dim();
  const Matrix I_KC = Matrix::Identity(n, n) - gain * C;
  Matrix cov = I_KC * b.cov() * I_KC.transpose() + gain * R * gain.transpose();
  return make_belief(std::move(mean), std::move(cov));
}

BeliefState propagate_mlo(const SystemMode& mode, const BeliefState& b, const Vector& u) {
  BeliefState prior = predict(mode, b, u);
  if (!mode.observed()) return prior;
  // The most likely measurement of a Gaussian prior is its mean, so the
  // innovation is zero and only the covariance is updated.
  BeliefState post = kalman_update(mode, prior, mode.C() * prior.mean());
  return make_belief(prior.mean(), post.cov());
}

Vector standard_normal(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

Vector sample_observation(const SystemMode& mode, const Vector& x_true, Rng& rng) {
  if (!mode.observed()) throw NoObservation("sample_observation on a mode without observation");
  require_length(x_true, mode.state_dim(), "state");
  const Matrix gain = mode.noise_gain(x_true);
  return mode.C() * x_true + gain * standard_normal(mode.output_dim(), rng);
}

Vector step_truth(const SystemMode& mode, const Vector& x_true, const Vector& u, Rng& rng) {
  require_length(x_true, mode.state_dim(), "state");
  require_length(u, mode.control_dim(), "control");
  return mode.A() * x_true + mode.B() * u + mode.W() * standard_normal(mode.state_dim(), rng);
}

bool UncertaintyGrowthWatch::observe(const BeliefState& b) {
  const double t = uncertainty_measure(b);
  if (last_ && t > *last_) {
    ++run_;
  } else {
    run_ = 0;
  }
  last_ = t;
  return run_ >= threshold_;
}

}  // namespace beliefplan
