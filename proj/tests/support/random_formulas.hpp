#pragma once

// Random small PrSTL instances and a brute-force evaluator written straight
// from the bounded semantics, sharing no code with the library monitor.

#include <random>
#include <string>
#include <vector>

#include <beliefplan/formula.hpp>

namespace random_formulas {

using beliefplan::Formula;

constexpr int kModes = 2;
constexpr int kAtoms = 3;

/// Atomic i holds exactly when the (1-D, zero-variance) mean lies in
/// [i - 0.5, i + 0.5].
inline beliefplan::BeliefCone band(int i) {
  using namespace beliefplan;
  return BeliefCone({ProbabilisticLinearPredicate(LinearExpression(Vector{{1.0}}, -(i + 0.5)), 0.5),
                     ProbabilisticLinearPredicate(LinearExpression(Vector{{-1.0}}, i - 0.5), 0.5)});
}

struct Generator {
  std::mt19937_64 rng;
  int modes;
  std::vector<beliefplan::DiscretePredicate> mode_sets;

  explicit Generator(std::uint64_t seed, int mode_count = kModes) : rng(seed), modes(mode_count) {
    for (int i = 0; i < kAtoms; ++i) {
      const int pick = modes == 1 ? 0 : pick_int(0, 2);
      mode_sets.push_back(pick == 0   ? beliefplan::DiscretePredicate::all(modes)
                          : pick == 1 ? beliefplan::DiscretePredicate({0}, modes)
                                      : beliefplan::DiscretePredicate({1}, modes));
    }
  }

  int pick_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  Formula leaf() {
    const int r = pick_int(0, 9);
    if (r == 0) return beliefplan::make_true(modes);
    if (r == 1) return beliefplan::make_false(modes);
    const int i = pick_int(0, kAtoms - 1);
    return beliefplan::make_atomic(band(i), mode_sets[static_cast<std::size_t>(i)], "a" + std::to_string(i));
  }

  Formula formula(int depth) {
    if (depth == 0 || pick_int(0, 4) == 0) return leaf();
    const int a = pick_int(0, 2);
    const int b = pick_int(a + 1, 3);
    switch (pick_int(0, 5)) {
      case 0: return beliefplan::make_and({formula(depth - 1), formula(depth - 1)});
      case 1: return beliefplan::make_or({formula(depth - 1), formula(depth - 1)});
      case 2: return beliefplan::make_until(formula(depth - 1), a, b, formula(depth - 1));
      case 3: return beliefplan::make_release(formula(depth - 1), a, b, formula(depth - 1));
      case 4: return beliefplan::make_always(a, b, formula(depth - 1));
      default: return beliefplan::make_eventually(a, b, formula(depth - 1));
    }
  }

  /// Trace whose step k satisfies exactly label[k] (-1 for none).
  beliefplan::Trace trace(std::size_t length, std::vector<int>& labels) {
    beliefplan::Trace tr;
    labels.clear();
    for (std::size_t k = 0; k < length; ++k) {
      const int label = pick_int(-1, kAtoms - 1);
      labels.push_back(label);
      const double x = label < 0 ? 7.0 : label;
      tr.beliefs.push_back(beliefplan::make_belief(beliefplan::Vector{{x}}, beliefplan::Matrix::Zero(1, 1)));
      if (k + 1 < length) tr.modes.push_back(pick_int(0, modes - 1));
    }
    return tr;
  }
};

/// Direct recursion over the semantics (exponential, fine for tiny traces).
inline bool brute_force(const Formula& f, const beliefplan::Trace& tr, std::size_t k) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atomic: {
      const auto& at = f.atomic();
      if (at.modes.is_empty()) return false;
      bool cone = true;
      for (const auto& p : at.cone.constraints()) {
        const auto& b = tr.beliefs.at(k);
        const double var = p.expr.h.dot(b.cov() * p.expr.h);
        const double margin = p.expr.h.dot(b.mean()) + p.expr.c +
                              (var > 0 ? beliefplan::std_normal_quantile(1 - p.epsilon) * std::sqrt(var) : 0.0);
        cone = cone && margin <= 1e-12;
      }
      return cone && (k == 0 || at.modes.contains(tr.modes.at(k - 1)));
    }
    case K::And: {
      for (const auto& c : f.children()) {
        if (!brute_force(c, tr, k)) return false;
      }
      return true;
    }
    case K::Or: {
      for (const auto& c : f.children()) {
        if (brute_force(c, tr, k)) return true;
      }
      return false;
    }
    case K::Until: {
      const std::size_t a = k + f.lower(), b = k + f.upper();
      for (std::size_t kp = a; kp <= b; ++kp) {
        if (!brute_force(f.right(), tr, kp)) continue;
        bool left = true;
        for (std::size_t kpp = a; kpp < kp; ++kpp) left = left && brute_force(f.left(), tr, kpp);
        if (left) return true;
      }
      return false;
    }
    case K::Release: {
      const std::size_t a = k + f.lower(), b = k + f.upper();
      bool always_right = true;
      for (std::size_t kp = a; kp <= b; ++kp) always_right = always_right && brute_force(f.right(), tr, kp);
      if (always_right) return true;
      for (std::size_t kp = a; kp <= b; ++kp) {
        if (!brute_force(f.left(), tr, kp)) continue;
        bool right = true;
        for (std::size_t kpp = a; kpp <= kp; ++kpp) right = right && brute_force(f.right(), tr, kpp);
        if (right) return true;
      }
      return false;
    }
  }
  return false;
}

/// Word whose label set at k is every atomic of f satisfied by beliefs[k].
inline beliefplan::Word word_for(const Formula& f, const beliefplan::Trace& tr) {
  const auto atoms = beliefplan::atomic_propositions(f);
  beliefplan::Word w;
  for (std::size_t k = 0; k < tr.beliefs.size(); ++k) {
    beliefplan::WordStep step;
    for (const auto& at : atoms) {
      if (beliefplan::cone_contains(at.cone, tr.beliefs[k])) step.labels.push_back(at.name);
    }
    step.mode = k < tr.modes.size() ? tr.modes[k] : 0;
    w.push_back(step);
  }
  return w;
}

}  // namespace random_formulas
