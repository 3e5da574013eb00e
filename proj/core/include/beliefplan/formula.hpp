#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "beliefplan/gaussian.hpp"
#include "beliefplan/geometry.hpp"

namespace beliefplan {

/// State formula: a belief cone together with the admissible arrival modes.
///
/// An empty cone with the full mode set is true; an empty mode set is
/// false at every index (including k = 0).
struct Atomic {
  BeliefCone cone;
  DiscretePredicate modes;
  std::string name;

  bool is_true() const { return cone.empty() && modes.is_full(); }
  bool is_false() const { return modes.is_empty(); }
  bool is_constant() const { return is_true() || is_false(); }
  /// Same constraints, ignoring the name.
  bool same_content(const Atomic& other) const {
    return cone == other.cone && modes == other.modes;
  }
};

/// Immutable PrSTL formula tree (shared, cheap to copy).
class Formula {
 public:
  enum class Kind { Atomic, And, Or, Until, Release };

  Kind kind() const;
  const Atomic& atomic() const;
  const std::vector<Formula>& children() const;
  const Formula& left() const;
  const Formula& right() const;
  int lower() const;
  int upper() const;

  /// Identity of the underlying node (for caches keyed by subformula).
  const void* id() const noexcept { return node_.get(); }

  struct Node;

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;

  friend Formula make_atomic(BeliefCone, DiscretePredicate, std::string);
  friend Formula make_and(std::vector<Formula>);
  friend Formula make_or(std::vector<Formula>);
  friend Formula make_until(Formula, int, int, Formula);
  friend Formula make_release(Formula, int, int, Formula);
};

/// Marks an unbounded deadline; rejected by every temporal constructor.
inline constexpr int kUnboundedDeadline = -1;

Formula make_atomic(BeliefCone cone, DiscretePredicate modes, std::string name = {});
Formula make_true(int mode_count);
Formula make_false(int mode_count);
/// Folds atomic conjuncts into a single atomic (cones concatenated, mode sets
/// intersected). Throws FormulaError on an empty list.
Formula make_and(std::vector<Formula> children);
/// Folds pure mode predicates into one atomic by mode-set union.
Formula make_or(std::vector<Formula> children);
/// Throws UnsupportedBound for b unbounded, FormulaError unless 0 <= a < b.
Formula make_until(Formula left, int a, int b, Formula right);
Formula make_release(Formula left, int a, int b, Formula right);
/// Release(false, f, a, b).
Formula make_always(int a, int b, Formula f);
/// Until(true, f, a, b).
Formula make_eventually(int a, int b, Formula f);

/// Renames an atomic formula; other kinds are returned unchanged.
Formula with_name(const Formula& f, std::string name);

/// Steps of lookahead the formula needs beyond the evaluation index.
int horizon(const Formula& f);

/// Atomic propositions in first-occurrence order, deduplicated by name,
/// constants excluded. Throws NameCollision for distinct atomics sharing a name.
std::vector<Atomic> atomic_propositions(const Formula& f);

/// Canonical text form that parses back to the same formula.
std::string to_string(const Formula& f);
std::string to_string(const Atomic& a);

/// Belief trajectory: beliefs[0..T] and modes[k] applied between k and k+1.
struct Trace {
  std::vector<BeliefState> beliefs;
  std::vector<int> modes;

  /// Throws DimensionError unless modes.size() + 1 == beliefs.size().
  void validate() const;
};

/// One step of a Boolean-level word: the labels assumed true and the mode
/// carried by the step.
struct WordStep {
  std::vector<std::string> labels;
  int mode = 0;
};
using Word = std::vector<WordStep>;

/// Three-valued verdict (Kleene order False < Unknown < True).
enum class Verdict : unsigned char { False = 0, Unknown = 1, True = 2 };

/// Truth of an atomic at index k. Constants are resolved before the call.
using AtomOracle = std::function<Verdict(const Atomic&, std::size_t)>;

/// Bounded Kleene evaluation at index k.
Verdict evaluate(const Formula& f, std::size_t k, const AtomOracle& atom);

/// Exact bounded semantics at index k; throws InsufficientTrace when the
/// trace is shorter than k + horizon(f) + 1.
bool monitor(const Formula& f, const Trace& tr, std::size_t k = 0);

/// Finite-prefix verdict at k = 0: atomics beyond the end are false. For this
/// negation-free logic a true verdict holds for every extension of the trace.
bool satisfies(const Formula& f, const Trace& tr);

/// Same recursion as monitor over labels; throws InsufficientTrace when the
/// word is shorter than horizon(f) + 1.
bool monitor_word(const Formula& f, const Word& word);

}  // namespace beliefplan
