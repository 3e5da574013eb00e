#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "beliefplan/gaussian.hpp"
#include "beliefplan/types.hpp"

namespace beliefplan {

/// Containment tolerance applied to every halfspace and cone margin.
inline constexpr double kContainmentTolerance = 1e-12;

/// mu(x) = h.x + c
struct LinearExpression {
  Vector h;
  double c = 0.0;

  /// Throws DomainError when h is empty or any entry is non-finite.
  LinearExpression(Vector h, double c);

  Eigen::Index dim() const noexcept { return h.size(); }
  bool operator==(const LinearExpression& other) const;
};

double eval_linear(const LinearExpression& expr, const Vector& x);

/// Chance constraint p(mu(x) <= 0) >= 1 - epsilon with epsilon in [0, 0.5].
struct ProbabilisticLinearPredicate {
  LinearExpression expr;
  double epsilon;

  ProbabilisticLinearPredicate(LinearExpression expr, double epsilon);

  bool operator==(const ProbabilisticLinearPredicate& other) const = default;
};

/// Set of admissible mode indices out of {0..mode_count-1}.
class DiscretePredicate {
 public:
  DiscretePredicate() = default;
  /// Throws DomainError for indices outside the declared range.
  DiscretePredicate(std::vector<int> modes, int mode_count);

  static DiscretePredicate all(int mode_count);
  static DiscretePredicate none(int mode_count) { return DiscretePredicate({}, mode_count); }

  bool contains(int mode) const;
  bool is_full() const { return static_cast<int>(modes_.size()) == mode_count_; }
  bool is_empty() const { return modes_.empty(); }
  const std::vector<int>& modes() const noexcept { return modes_; }
  int mode_count() const noexcept { return mode_count_; }

  DiscretePredicate intersect(const DiscretePredicate& other) const;
  DiscretePredicate unite(const DiscretePredicate& other) const;

  bool operator==(const DiscretePredicate& other) const = default;

 private:
  std::vector<int> modes_;  // sorted, unique
  int mode_count_ = 0;
};

/// Intersection of halfspaces mu_i(x) <= 0, optionally with its vertices.
class Polytope {
 public:
  /// Throws DimensionError on mixed dimensions, DomainError when a stored
  /// vertex violates a halfspace by more than 1e-9.
  explicit Polytope(std::vector<LinearExpression> halfspaces,
                    std::optional<std::vector<Vector>> vertices = std::nullopt);

  /// Axis-aligned box [lo_i, hi_i] with both representations.
  static Polytope box(const Vector& lo, const Vector& hi);

  /// H-representation by brute-force facet enumeration of a full-dimensional
  /// convex hull. Fine for the handful of vertices a control domain has.
  static Polytope from_vertices(std::vector<Vector> vertices);

  const std::vector<LinearExpression>& halfspaces() const noexcept { return halfspaces_; }
  const std::optional<std::vector<Vector>>& vertices() const noexcept { return vertices_; }
  Eigen::Index dim() const noexcept { return dim_; }

  /// Bounding box of the vertices. Throws DomainError without V-rep.
  std::pair<Vector, Vector> vertex_bounds() const;

 private:
  std::vector<LinearExpression> halfspaces_;
  std::optional<std::vector<Vector>> vertices_;
  Eigen::Index dim_ = 0;
};

bool polytope_contains(const Polytope& p, const Vector& x);

/// Uniform sample by rejection from the vertex bounding box.
/// Throws DomainError without V-rep, DegeneratePolytope after 10^6 rejections.
Vector polytope_sample(const Polytope& p, Rng& rng);

/// Componentwise clamp into the vertex bounding box.
Vector clamp_to_bounds(const Polytope& p, const Vector& x);

/// Intersection of chance constraints, convex in (mean, sqrt-cov) space.
class BeliefCone {
 public:
  BeliefCone() = default;
  explicit BeliefCone(std::vector<ProbabilisticLinearPredicate> constraints);

  const std::vector<ProbabilisticLinearPredicate>& constraints() const noexcept {
    return constraints_;
  }
  bool empty() const noexcept { return constraints_.empty(); }
  /// Dimension of the constraints, 0 when the cone is unconstrained.
  Eigen::Index dim() const noexcept;

  bool operator==(const BeliefCone& other) const = default;

 private:
  std::vector<ProbabilisticLinearPredicate> constraints_;
};

/// h.mean + c + Phi^{-1}(1 - eps) * sqrt(h' cov h); satisfied iff <= 0.
/// eps = 0 yields +inf unless h' cov h = 0.
double cone_margin(const ProbabilisticLinearPredicate& pred, const BeliefState& b);

bool cone_contains(const BeliefCone& cone, const BeliefState& b);

/// Throws DimensionError when the predicates disagree on state dimension.
BeliefCone region_from_predicates(std::vector<ProbabilisticLinearPredicate> preds);

}  // namespace beliefplan
