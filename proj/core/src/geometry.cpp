#include "beliefplan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "beliefplan/error.hpp"

namespace beliefplan {
namespace {

constexpr double kVertexTolerance = 1e-9;
constexpr int kMaxRejections = 1'000'000;

void require_dim(Eigen::Index expected, Eigen::Index got, const char* what) {
  if (expected != got) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(expected) +
                         ", got " + std::to_string(got));
  }
}

}  // namespace

LinearExpression::LinearExpression(Vector h_in, double c_in) : h(std::move(h_in)), c(c_in) {
  if (h.size() == 0) {
    throw DomainError("linear expression needs at least one coefficient");
  }
  if (!h.allFinite() || !std::isfinite(c)) {
    throw DomainError("linear expression has non-finite coefficients");
  }
}

bool LinearExpression::operator==(const LinearExpression& other) const {
  return c == other.c && h.size() == other.h.size() && h == other.h;
}

double eval_linear(const LinearExpression& expr, const Vector& x) {
  require_dim(expr.dim(), x.size(), "eval_linear");
  return expr.h.dot(x) + expr.c;
}

ProbabilisticLinearPredicate::ProbabilisticLinearPredicate(LinearExpression e, double eps)
    : expr(std::move(e)), epsilon(eps) {
  if (!(epsilon >= 0.0 && epsilon <= 0.5)) {
    throw DomainError("chance-constraint tolerance must lie in [0, 0.5], got " +
                      std::to_string(epsilon));
  }
}

DiscretePredicate::DiscretePredicate(std::vector<int> modes, int mode_count)
    : modes_(std::move(modes)), mode_count_(mode_count) {
  std::sort(modes_.begin(), modes_.end());
  modes_.erase(std::unique(modes_.begin(), modes_.end()), modes_.end());
  for (int q : modes_) {
    if (q < 0 || q >= mode_count_) {
      throw DomainError("mode index " + std::to_string(q) + " outside 0.." +
                        std::to_string(mode_count_ - 1));
    }
  }
}

DiscretePredicate DiscretePredicate::all(int mode_count) {
  std::vector<int> modes(static_cast<std::size_t>(std::max(mode_count, 0)));
  std::iota(modes.begin(), modes.end(), 0);
  return DiscretePredicate(std::move(modes), mode_count);
}

bool DiscretePredicate::contains(int mode) const {
  return std::binary_search(modes_.begin(), modes_.end(), mode);
}

DiscretePredicate DiscretePredicate::intersect(const DiscretePredicate& other) const {
  std::vector<int> out;
  std::set_intersection(modes_.begin(), modes_.end(), other.modes_.begin(), other.modes_.end(),
                        std::back_inserter(out));
  return DiscretePredicate(std::move(out), std::max(mode_count_, other.mode_count_));
}

DiscretePredicate DiscretePredicate::unite(const DiscretePredicate& other) const {
  std::vector<int> out;
  std::set_union(modes_.begin(), modes_.end(), other.modes_.begin(), other.modes_.end(),
                 std::back_inserter(out));
  return DiscretePredicate(std::move(out), std::max(mode_count_, other.mode_count_));
}

Polytope::Polytope(std::vector<LinearExpression> halfspaces,
                   std::optional<std::vector<Vector>> vertices)
    : halfspaces_(std::move(halfspaces)), vertices_(std::move(vertices)) {
  if (!halfspaces_.empty()) {
    dim_ = halfspaces_.front().dim();
  } else if (vertices_ && !vertices_->empty()) {
    dim_ = vertices_->front().size();
  }
  for (const auto& hs : halfspaces_) {
    require_dim(dim_, hs.dim(), "polytope halfspace");
  }
  if (vertices_) {
    for (const auto& v : *vertices_) {
      require_dim(dim_, v.size(), "polytope vertex");
      for (const auto& hs : halfspaces_) {
        if (eval_linear(hs, v) > kVertexTolerance) {
          throw DomainError("polytope vertex violates its own halfspaces");
        }
      }
    }
  }
}

Polytope Polytope::box(const Vector& lo, const Vector& hi) {
  require_dim(lo.size(), hi.size(), "box bounds");
  const auto n = lo.size();
  std::vector<LinearExpression> hs;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lo(i) > hi(i)) {
      throw DomainError("box lower bound exceeds upper bound on axis " + std::to_string(i));
    }
    Vector e = Vector::Zero(n);
    e(i) = 1.0;
    hs.emplace_back(e, -hi(i));
    hs.emplace_back(-e, lo(i));
  }
  std::vector<Vector> verts;
  const std::size_t corners = std::size_t{1} << n;
  for (std::size_t mask = 0; mask < corners; ++mask) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      v(i) = (mask >> i) & 1U ? hi(i) : lo(i);
    }
    verts.push_back(std::move(v));
  }
  return Polytope(std::move(hs), std::move(verts));
}

Polytope Polytope::from_vertices(std::vector<Vector> vertices) {
  if (vertices.empty()) {
    throw DomainError("polytope needs at least one vertex");
  }
  const auto n = vertices.front().size();
  for (const auto& v : vertices) {
    require_dim(n, v.size(), "polytope vertex");
  }
  const auto count = static_cast<int>(vertices.size());
  if (count < n + 1) {
    throw DegeneratePolytope("vertex set cannot span a full-dimensional polytope");
  }
  // Every facet passes through n affinely independent vertices.
  std::vector<LinearExpression> hs;
  std::vector<int> pick(static_cast<std::size_t>(n));
  std::iota(pick.begin(), pick.end(), 0);
  const double scale = [&] {
    double s = 0.0;
    for (const auto& v : vertices) s = std::max(s, v.cwiseAbs().maxCoeff());
    return std::max(s, 1.0);
  }();
  while (true) {
    Matrix system(n, n + 1);
    for (Eigen::Index r = 0; r < n; ++r) {
      system.row(r).head(n) = vertices[static_cast<std::size_t>(pick[r])].transpose();
      system(r, n) = 1.0;
    }
    Eigen::FullPivLU<Matrix> lu(system);
    if (lu.rank() == n) {
      Vector kernel = lu.kernel().col(0);
      Vector h = kernel.head(n);
      double c = kernel(n);
      const double norm = h.norm();
      if (norm > 1e-12) {
        h /= norm;
        c /= norm;
        double max_side = -std::numeric_limits<double>::infinity();
        double min_side = std::numeric_limits<double>::infinity();
        for (const auto& v : vertices) {
          const double s = h.dot(v) + c;
          max_side = std::max(max_side, s);
          min_side = std::min(min_side, s);
        }
        const double tol = 1e-10 * scale;
        bool facet = false;
        if (max_side <= tol) {
          facet = true;
        } else if (min_side >= -tol) {
          h = -h;
          c = -c;
          facet = true;
        }
        if (facet) {
          LinearExpression candidate(h, c);
          const bool duplicate = std::any_of(hs.begin(), hs.end(), [&](const LinearExpression& e) {
            return (e.h - candidate.h).norm() < 1e-9 && std::abs(e.c - candidate.c) < 1e-9;
          });
          if (!duplicate) hs.push_back(std::move(candidate));
        }
      }
    }
    // next combination
    int i = static_cast<int>(n) - 1;
    while (i >= 0 && pick[i] == count - static_cast<int>(n) + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
  if (static_cast<Eigen::Index>(hs.size()) < n + 1) {
    throw DegeneratePolytope("vertex set is not full-dimensional");
  }
  return Polytope(std::move(hs), std::move(vertices));
}

std::pair<Vector, Vector> Polytope::vertex_bounds() const {
  if (!vertices_ || vertices_->empty()) {
    throw DomainError("polytope has no vertex representation");
  }
  Vector lo = vertices_->front();
  Vector hi = vertices_->front();
  for (const auto& v : *vertices_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return {lo, hi};
}

bool polytope_contains(const Polytope& p, const Vector& x) {
  if (p.dim() != 0) require_dim(p.dim(), x.size(), "polytope_contains");
  return std::all_of(p.halfspaces().begin(), p.halfspaces().end(), [&](const auto& hs) {
    return eval_linear(hs, x) <= kContainmentTolerance;
  });
}

Vector polytope_sample(const Polytope& p, Rng& rng) {
  const auto [lo, hi] = p.vertex_bounds();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector x(lo.size());
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x(i) = lo(i) + (hi(i) - lo(i)) * unit(rng);
    }
    if (polytope_contains(p, x)) return x;
  }
  throw DegeneratePolytope("polytope_sample: 10^6 consecutive rejections");
}

Vector clamp_to_bounds(const Polytope& p, const Vector& x) {
  const auto [lo, hi] = p.vertex_bounds();
  require_dim(lo.size(), x.size(), "clamp_to_bounds");
  return x.cwiseMax(lo).cwiseMin(hi);
}

BeliefCone::BeliefCone(std::vector<ProbabilisticLinearPredicate> constraints)
    : constraints_(std::move(constraints)) {
  for (const auto& c : constraints_) {
    require_dim(constraints_.front().expr.dim(), c.expr.dim(), "belief cone");
  }
}

Eigen::Index BeliefCone::dim() const noexcept {
  return constraints_.empty() ? 0 : constraints_.front().expr.dim();
}

double cone_margin(const ProbabilisticLinearPredicate& pred, const BeliefState& b) {
  require_dim(pred.expr.dim(), b.dim(), "cone_margin");
  if (!(pred.epsilon >= 0.0 && pred.epsilon <= 0.5)) {
    throw DomainError("cone_margin: tolerance outside [0, 0.5]");
  }
  const double mean_part = pred.expr.h.dot(b.mean()) + pred.expr.c;
  const double variance = std::max(0.0, pred.expr.h.dot(b.cov() * pred.expr.h));
  if (variance == 0.0 || pred.epsilon == 0.5) {
    return mean_part;
  }
  if (pred.epsilon == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return mean_part + std_normal_quantile(1.0 - pred.epsilon) * std::sqrt(variance);
}

bool cone_contains(const BeliefCone& cone, const BeliefState& b) {
  return std::all_of(cone.constraints().begin(), cone.constraints().end(), [&](const auto& c) {
    return cone_margin(c, b) <= kContainmentTolerance;
  });
}

BeliefCone region_from_predicates(std::vector<ProbabilisticLinearPredicate> preds) {
  return BeliefCone(std::move(preds));
}

}  // namespace beliefplan
