#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "beliefplan/belief_dynamics.hpp"
#include "beliefplan/formula.hpp"

namespace beliefplan {

/// One label of a candidate plan. Dwell bounds count word positions, so the
/// final segment's dwell includes the terminal step.
struct PlanSegment {
  Atomic atomic;
  int mode = 0;
  int dwell_min = 1;
  int dwell_max = 1;
};

struct DiscretePlan {
  std::vector<PlanSegment> segments;

  std::size_t size() const noexcept { return segments.size(); }
};

/// (atomic name, mode) sequence.
using LabelSequence = std::vector<std::pair<std::string, int>>;

LabelSequence labels_of(const DiscretePlan& plan);

/// Prefixes of dynamically infeasible plans. Keeps only the shortest
/// representatives: no stored prefix extends another.
class CounterexampleStore {
 public:
  /// Throws FormulaError for an empty prefix.
  void add(const LabelSequence& prefix);
  /// True when some stored prefix is a prefix of seq.
  bool excludes(const LabelSequence& seq) const;
  const std::vector<LabelSequence>& prefixes() const noexcept { return prefixes_; }

 private:
  std::vector<LabelSequence> prefixes_;
};

CounterexampleStore add_counterexample(CounterexampleStore cex, const LabelSequence& prefix);

/// Label alphabet and mode universe; transitions form the complete graph.
struct Abstraction {
  std::vector<Atomic> atomics;
  int mode_count = 0;
  int horizon = 0;

  /// Every (atomic, mode) pair with mode in the atomic's mode set, in
  /// atomic-major declaration order.
  std::vector<std::pair<std::size_t, int>> letters() const;
};

/// Throws FormulaError when an atomic refers to a mode the system lacks.
Abstraction abstract(const Formula& f, const SwitchedSystem& sys);
Abstraction abstract(const Formula& f, int mode_count);

/// First satisfiable plan with at most k_max segments in canonical order,
/// skipping excluded prefixes; dwell windows tightened to witnessed values.
std::optional<DiscretePlan> bmc_next_candidate(const Abstraction& abs, const Formula& f,
                                               const CounterexampleStore& cex, int k_max);

/// Word of length sum(dwells): step t carries the active segment's label and
/// mode. Throws WindowViolation on a dwell outside its window.
Word word_of(const DiscretePlan& plan, const std::vector<int>& dwells);

/// Appends label-free steps (carrying the last mode) up to length.
Word pad_word(Word word, std::size_t length);

/// Tightened dwell windows of a label sequence whose first fixed.size()
/// dwells are already realized; nullopt when no completion satisfies f.
std::optional<std::vector<std::pair<int, int>>> dwell_windows(const Formula& f,
                                                              const std::vector<PlanSegment>& segs,
                                                              const std::vector<int>& fixed = {});

}  // namespace beliefplan
