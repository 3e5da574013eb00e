#include "beliefplan/discrete_planner.hpp"

#include <algorithm>
#include <climits>
#include <string>

#include "beliefplan/error.hpp"

namespace beliefplan {
namespace {

Verdict kleene_and(Verdict a, Verdict b) { return std::min(a, b); }

bool is_prefix(const LabelSequence& prefix, const LabelSequence& seq) {
  return prefix.size() <= seq.size() && std::equal(prefix.begin(), prefix.end(), seq.begin());
}

struct SearchResult {
  std::vector<std::pair<int, int>> windows;
  std::vector<int> witness;
};

// Depth-first search over dwell assignments. At a non-final level the
// positions after the realized prefix are unknown, except that labels and
// modes absent from the remaining segments are known not to occur there.
class DwellSearch {
 public:
  DwellSearch(const Formula& f, const std::vector<PlanSegment>& segs, const std::vector<int>& fixed)
      : f_(f), segs_(segs), fixed_(fixed), length_(horizon(f) + 1) {
    const std::size_t k = segs_.size();
    seg_at_.assign(static_cast<std::size_t>(length_), -1);
    dwell_.assign(k, 0);
    windows_.assign(k, {INT_MAX, INT_MIN});
    min_after_.assign(k + 1, 0);
    for (std::size_t i = k; i-- > 0;) {
      min_after_[i] = min_after_[i + 1] + std::max(1, segs_[i].dwell_min);
    }
  }

  std::optional<SearchResult> run() {
    if (segs_.empty() || fixed_.size() > segs_.size()) return std::nullopt;
    search(0, 0);
    if (!witness_) return std::nullopt;
    return SearchResult{windows_, *witness_};
  }

 private:
  Verdict atom(const Atomic& at, std::size_t p, std::size_t level, int elapsed) const {
    const int pos = static_cast<int>(p);
    if (pos >= length_) return Verdict::False;
    const bool last = level + 1 == segs_.size();
    Verdict label;
    if (pos < elapsed) {
      label = segs_[static_cast<std::size_t>(seg_at_[p])].atomic.name == at.name ? Verdict::True
                                                                                : Verdict::False;
    } else if (last) {
      return Verdict::False;
    } else {
      label = Verdict::False;
      for (std::size_t j = level + 1; j < segs_.size(); ++j) {
        if (segs_[j].atomic.name == at.name) label = Verdict::Unknown;
      }
    }
    if (label == Verdict::False || pos == 0) return label;
    Verdict mode;
    if (pos - 1 < elapsed) {
      mode = at.modes.contains(segs_[static_cast<std::size_t>(seg_at_[p - 1])].mode) ? Verdict::True
                                                                                      : Verdict::False;
    } else {
      mode = Verdict::False;
      for (std::size_t j = level + 1; j < segs_.size(); ++j) {
        if (at.modes.contains(segs_[j].mode)) mode = Verdict::Unknown;
      }
    }
    return kleene_and(label, mode);
  }

  void record(std::size_t level, int elapsed) {
    for (std::size_t j = 0; j <= level; ++j) {
      windows_[j].first = std::min(windows_[j].first, dwell_[j]);
      windows_[j].second = std::max(windows_[j].second, dwell_[j]);
    }
    std::vector<int> witness(dwell_.begin(), dwell_.begin() + static_cast<long>(level) + 1);
    for (std::size_t j = level + 1; j < segs_.size(); ++j) {
      const int lo = std::max(1, segs_[j].dwell_min);
      const int others = min_after_[level + 1] - lo;
      const int hi = std::min(segs_[j].dwell_max, length_ - elapsed - others);
      windows_[j].first = std::min(windows_[j].first, lo);
      windows_[j].second = std::max(windows_[j].second, hi);
      witness.push_back(lo);
    }
    if (!witness_) witness_ = std::move(witness);
  }

  void search(std::size_t level, int elapsed) {
    const auto& seg = segs_[level];
    int lo, hi;
    if (level < fixed_.size()) {
      lo = hi = fixed_[level];
      if (lo < 1 || elapsed + lo + min_after_[level + 1] > length_) return;
    } else {
      lo = std::max(1, seg.dwell_min);
      hi = std::min(seg.dwell_max, length_ - elapsed - min_after_[level + 1]);
    }
    for (int d = lo; d <= hi; ++d) {
      for (int p = elapsed; p < elapsed + d; ++p) seg_at_[static_cast<std::size_t>(p)] = static_cast<int>(level);
      dwell_[level] = d;
      const int next = elapsed + d;
      const Verdict v = evaluate(f_, 0, [&](const Atomic& at, std::size_t p) {
        return atom(at, p, level, next);
      });
      if (v == Verdict::True) {
        record(level, next);
      } else if (v == Verdict::Unknown && level + 1 < segs_.size()) {
        search(level + 1, next);
      }
    }
  }

  const Formula& f_;
  const std::vector<PlanSegment>& segs_;
  const std::vector<int>& fixed_;
  int length_;
  std::vector<int> seg_at_;
  std::vector<int> dwell_;
  std::vector<int> min_after_;
  std::vector<std::pair<int, int>> windows_;
  std::optional<std::vector<int>> witness_;
};

}  // namespace

LabelSequence labels_of(const DiscretePlan& plan) {
  LabelSequence out;
  out.reserve(plan.segments.size());
  for (const auto& s : plan.segments) out.emplace_back(s.atomic.name, s.mode);
  return out;
}

void CounterexampleStore::add(const LabelSequence& prefix) {
  if (prefix.empty()) throw FormulaError("counterexample prefix must be nonempty");
  if (excludes(prefix)) return;
  std::erase_if(prefixes_, [&](const LabelSequence& p) { return is_prefix(prefix, p); });
  prefixes_.push_back(prefix);
}

bool CounterexampleStore::excludes(const LabelSequence& seq) const {
  return std::any_of(prefixes_.begin(), prefixes_.end(),
                     [&](const LabelSequence& p) { return is_prefix(p, seq); });
}

CounterexampleStore add_counterexample(CounterexampleStore cex, const LabelSequence& prefix) {
  cex.add(prefix);
  return cex;
}

std::vector<std::pair<std::size_t, int>> Abstraction::letters() const {
  std::vector<std::pair<std::size_t, int>> out;
  for (std::size_t i = 0; i < atomics.size(); ++i) {
    for (int q : atomics[i].modes.modes()) out.emplace_back(i, q);
  }
  return out;
}

Abstraction abstract(const Formula& f, int mode_count) {
  Abstraction abs;
  abs.atomics = atomic_propositions(f);
  abs.mode_count = mode_count;
  abs.horizon = horizon(f);
  for (const auto& at : abs.atomics) {
    for (int q : at.modes.modes()) {
      if (q >= mode_count) {
        throw FormulaError("atomic '" + at.name + "' refers to mode " + std::to_string(q) +
                           " but the system has " + std::to_string(mode_count));
      }
    }
  }
  return abs;
}

Abstraction abstract(const Formula& f, const SwitchedSystem& sys) {
  return abstract(f, sys.mode_count());
}

std::optional<std::vector<std::pair<int, int>>> dwell_windows(const Formula& f,
                                                              const std::vector<PlanSegment>& segs,
                                                              const std::vector<int>& fixed) {
  auto res = DwellSearch(f, segs, fixed).run();
  if (!res) return std::nullopt;
  return res->windows;
}

Word word_of(const DiscretePlan& plan, const std::vector<int>& dwells) {
  if (dwells.size() != plan.segments.size()) {
    throw WindowViolation("expected " + std::to_string(plan.segments.size()) + " dwells, got " +
                          std::to_string(dwells.size()));
  }
  Word word;
  for (std::size_t i = 0; i < dwells.size(); ++i) {
    const auto& s = plan.segments[i];
    if (dwells[i] < s.dwell_min || dwells[i] > s.dwell_max) {
      throw WindowViolation("dwell " + std::to_string(dwells[i]) + " of segment " + std::to_string(i) +
                            " outside [" + std::to_string(s.dwell_min) + ", " +
                            std::to_string(s.dwell_max) + "]");
    }
    for (int t = 0; t < dwells[i]; ++t) word.push_back(WordStep{{s.atomic.name}, s.mode});
  }
  return word;
}

Word pad_word(Word word, std::size_t length) {
  const int mode = word.empty() ? 0 : word.back().mode;
  while (word.size() < length) word.push_back(WordStep{{}, mode});
  return word;
}

std::optional<DiscretePlan> bmc_next_candidate(const Abstraction& abs, const Formula& f,
                                               const CounterexampleStore& cex, int k_max) {
  const auto letters = abs.letters();
  if (letters.empty() || k_max < 1) return std::nullopt;
  const int length = abs.horizon + 1;

  std::vector<std::size_t> seq;
  LabelSequence labels;
  std::optional<DiscretePlan> found;

  auto try_plan = [&]() {
    DiscretePlan plan;
    for (std::size_t idx : seq) {
      const auto& [atom, mode] = letters[idx];
      plan.segments.push_back(PlanSegment{abs.atomics[atom], mode, 1, length});
    }
    auto res = DwellSearch(f, plan.segments, {}).run();
    if (!res) return false;
    for (std::size_t i = 0; i < plan.segments.size(); ++i) {
      plan.segments[i].dwell_min = res->windows[i].first;
      plan.segments[i].dwell_max = res->windows[i].second;
    }
    const Word word = pad_word(word_of(plan, res->witness), static_cast<std::size_t>(length));
    if (!monitor_word(f, word)) {
      throw InternalConsistencyError("dwell witness does not satisfy the formula");
    }
    found = std::move(plan);
    return true;
  };

  // Lexicographic enumeration of sequences of exactly k letters.
  auto extend = [&](auto&& self, std::size_t k) -> bool {
    if (seq.size() == k) return try_plan();
    for (std::size_t idx = 0; idx < letters.size(); ++idx) {
      if (!seq.empty() && seq.back() == idx) continue;
      const auto& [atom, mode] = letters[idx];
      seq.push_back(idx);
      labels.emplace_back(abs.atomics[atom].name, mode);
      const bool hit = !cex.excludes(labels) && self(self, k);
      seq.pop_back();
      labels.pop_back();
      if (hit) return true;
    }
    return false;
  };

  for (int k = 1; k <= k_max; ++k) {
    if (extend(extend, static_cast<std::size_t>(k))) return found;
  }
  return std::nullopt;
}

}  // namespace beliefplan
