#include <gtest/gtest.h>

#include <set>

#include <beliefplan/discrete_planner.hpp>
#include <beliefplan/error.hpp>

#include "lightdark.hpp"
#include "random_formulas.hpp"

using namespace beliefplan;

namespace {

struct SatisfyingSet {
  std::vector<LabelSequence> sequences;  // canonical order
  std::map<LabelSequence, std::vector<std::pair<int, int>>> windows;
};

// Exhaustive oracle: every letter sequence up to k_max and every dwell vector.
SatisfyingSet brute_force_plans(const Formula& f, const Abstraction& abs, int k_max) {
  SatisfyingSet out;
  const auto letters = abs.letters();
  const int length = abs.horizon + 1;
  std::vector<std::size_t> seq;

  auto check = [&]() {
    DiscretePlan plan;
    for (auto idx : seq) {
      plan.segments.push_back(PlanSegment{abs.atomics[letters[idx].first], letters[idx].second, 1, length});
    }
    std::vector<std::pair<int, int>> win(seq.size(), {INT_MAX, INT_MIN});
    bool any = false;
    std::vector<int> d(seq.size(), 1);
    auto rec = [&](auto&& self, std::size_t i, int used) -> void {
      if (i == seq.size()) {
        if (monitor_word(f, pad_word(word_of(plan, d), static_cast<std::size_t>(length)))) {
          any = true;
          for (std::size_t j = 0; j < d.size(); ++j) {
            win[j].first = std::min(win[j].first, d[j]);
            win[j].second = std::max(win[j].second, d[j]);
          }
        }
        return;
      }
      const int rest = static_cast<int>(seq.size() - i - 1);
      for (int v = 1; used + v + rest <= length; ++v) {
        d[i] = v;
        self(self, i + 1, used + v);
      }
    };
    rec(rec, 0, 0);
    if (any) {
      LabelSequence labels;
      for (auto idx : seq) labels.emplace_back(abs.atomics[letters[idx].first].name, letters[idx].second);
      out.sequences.push_back(labels);
      out.windows[labels] = win;
    }
  };

  for (int k = 1; k <= k_max; ++k) {
    auto extend = [&](auto&& self) -> void {
      if (static_cast<int>(seq.size()) == k) {
        check();
        return;
      }
      for (std::size_t idx = 0; idx < letters.size(); ++idx) {
        if (!seq.empty() && seq.back() == idx) continue;
        seq.push_back(idx);
        self(self);
        seq.pop_back();
      }
    };
    extend(extend);
  }
  return out;
}

std::vector<std::pair<int, int>> windows_of(const DiscretePlan& plan) {
  std::vector<std::pair<int, int>> out;
  for (const auto& s : plan.segments) out.emplace_back(s.dwell_min, s.dwell_max);
  return out;
}

}  // namespace

TEST(Abstract, LightDarkAlphabet) {
  const auto abs = abstract(lightdark::formula(), lightdark::system());
  ASSERT_EQ(abs.atomics.size(), 2u);
  EXPECT_EQ(abs.atomics[0].name, "free_space");
  EXPECT_EQ(abs.atomics[1].name, "target");
  EXPECT_EQ(abs.letters(), (std::vector<std::pair<std::size_t, int>>{{0, 0}, {1, 0}}));
  EXPECT_EQ(abs.horizon, 280);
}

TEST(Abstract, SingleAtomic) {
  EXPECT_EQ(abstract(lightdark::target(), 1).atomics.size(), 1u);
}

TEST(Abstract, UndeclaredMode) {
  const Formula f = make_atomic(BeliefCone{}, DiscretePredicate({3}, 4), "m3");
  EXPECT_THROW(abstract(f, 1), FormulaError);
}

TEST(Bmc, LightDarkFirstCandidate) {
  const Formula f = lightdark::formula();
  const auto abs = abstract(f, 1);
  const auto plan = bmc_next_candidate(abs, f, {}, 6);
  ASSERT_TRUE(plan);
  ASSERT_EQ(plan->size(), 1u);
  EXPECT_EQ(plan->segments[0].atomic.name, "target");
  EXPECT_EQ(plan->segments[0].mode, 0);
  EXPECT_EQ(plan->segments[0].dwell_min, 41);
  EXPECT_EQ(plan->segments[0].dwell_max, 281);
}

TEST(Bmc, LightDarkAfterCounterexample) {
  const Formula f = lightdark::formula();
  const auto abs = abstract(f, 1);
  CounterexampleStore cex;
  cex.add({{"target", 0}});
  const auto plan = bmc_next_candidate(abs, f, cex, 6);
  ASSERT_TRUE(plan);
  ASSERT_EQ(plan->size(), 2u);
  EXPECT_EQ(labels_of(*plan), (LabelSequence{{"free_space", 0}, {"target", 0}}));
  EXPECT_EQ(windows_of(*plan), (std::vector<std::pair<int, int>>{{1, 240}, {41, 280}}));
}

TEST(Bmc, WitnessWordsSatisfy) {
  const Formula f = lightdark::formula();
  CounterexampleStore cex;
  cex.add({{"target", 0}});
  const auto plan = *bmc_next_candidate(abstract(f, 1), f, cex, 2);
  for (const auto& d : std::vector<std::vector<int>>{{5, 41}, {240, 41}, {1, 280}, {100, 100}}) {
    EXPECT_TRUE(monitor_word(f, pad_word(word_of(plan, d), 281))) << d[0] << "," << d[1];
  }
  EXPECT_THROW(word_of(plan, {10, 40}), WindowViolation);
}

TEST(Bmc, UnsatisfiableModeRequirement) {
  const Formula a = make_atomic(lightdark::target().atomic().cone, DiscretePredicate({0}, 2), "a");
  const Formula needs_one = make_and({a, make_atomic(BeliefCone{}, DiscretePredicate({1}, 2))});
  const Formula f = make_and({a, make_eventually(1, 2, needs_one)});
  const auto abs = abstract(f, 2);
  EXPECT_EQ(abs.letters().size(), 1u);
  EXPECT_FALSE(bmc_next_candidate(abs, f, {}, 4));
}

TEST(Bmc, ExhaustedAlphabet) {
  const Formula f = lightdark::formula();
  CounterexampleStore cex;
  cex.add({{"target", 0}});
  cex.add({{"free_space", 0}});
  EXPECT_FALSE(bmc_next_candidate(abstract(f, 1), f, cex, 6));
}

TEST(Counterexamples, Dominance) {
  CounterexampleStore cex;
  cex.add({{"a", 0}, {"b", 0}});
  cex.add({{"a", 0}});
  ASSERT_EQ(cex.prefixes().size(), 1u);
  EXPECT_EQ(cex.prefixes()[0], (LabelSequence{{"a", 0}}));
  cex.add({{"a", 0}, {"c", 0}});
  EXPECT_EQ(cex.prefixes().size(), 1u);
  EXPECT_TRUE(cex.excludes({{"a", 0}, {"z", 1}}));
  EXPECT_FALSE(cex.excludes({{"b", 0}, {"a", 0}}));
  EXPECT_THROW(cex.add({}), FormulaError);
  const auto copy = add_counterexample(cex, {{"b", 0}});
  EXPECT_EQ(copy.prefixes().size(), 2u);
  EXPECT_EQ(cex.prefixes().size(), 1u);
}

TEST(WordOf, Concatenation) {
  const DiscretePlan plan{{PlanSegment{lightdark::free_space().atomic(), 0, 1, 240},
                           PlanSegment{lightdark::target().atomic(), 0, 41, 280}}};
  const Word w = word_of(plan, {5, 41});
  ASSERT_EQ(w.size(), 46u);
  for (std::size_t t = 0; t < 5; ++t) EXPECT_EQ(w[t].labels, std::vector<std::string>{"free_space"});
  for (std::size_t t = 5; t < 46; ++t) EXPECT_EQ(w[t].labels, std::vector<std::string>{"target"});
  EXPECT_THROW(word_of(plan, {5, 40}), WindowViolation);
  EXPECT_THROW(word_of(plan, {5}), WindowViolation);
  const DiscretePlan single{{PlanSegment{lightdark::target().atomic(), 0, 1, 1}}};
  EXPECT_EQ(word_of(single, {1}).size(), 1u);
}

TEST(DwellWindows, FixedPrefix) {
  const Formula f = lightdark::formula();
  const std::vector<PlanSegment> segs{PlanSegment{lightdark::free_space().atomic(), 0, 1, 281},
                                      PlanSegment{lightdark::target().atomic(), 0, 1, 281}};
  const auto w = dwell_windows(f, segs, {99});
  ASSERT_TRUE(w);
  EXPECT_EQ((*w)[0], (std::pair<int, int>{99, 99}));
  EXPECT_EQ((*w)[1], (std::pair<int, int>{41, 182}));
  EXPECT_FALSE(dwell_windows(f, segs, {241}));
  EXPECT_TRUE(dwell_windows(f, segs, {99, 41}));
  EXPECT_FALSE(dwell_windows(f, segs, {99, 40}));
}

TEST(BmcProperty, EnumerationMatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    random_formulas::Generator gen(seed, 1);
    const Formula f = gen.formula(2);
    const auto abs = abstract(f, 1);
    if (abs.letters().empty()) continue;
    const auto oracle = brute_force_plans(f, abs, 3);
    CounterexampleStore cex;
    std::vector<LabelSequence> got;
    while (auto plan = bmc_next_candidate(abs, f, cex, 3)) {
      const auto labels = labels_of(*plan);
      got.push_back(labels);
      ASSERT_TRUE(oracle.windows.count(labels)) << to_string(f);
      EXPECT_EQ(windows_of(*plan), oracle.windows.at(labels)) << to_string(f);
      cex.add(labels);
      ASSERT_LE(got.size(), 100u);
    }
    // Each emitted plan becomes a counterexample, so later plans it prefixes drop out.
    std::vector<LabelSequence> expected;
    for (const auto& seq : oracle.sequences) {
      const bool covered = std::any_of(expected.begin(), expected.end(), [&](const LabelSequence& p) {
        return p.size() <= seq.size() && std::equal(p.begin(), p.end(), seq.begin());
      });
      if (!covered) expected.push_back(seq);
    }
    EXPECT_EQ(got, expected) << to_string(f);
  }
}
