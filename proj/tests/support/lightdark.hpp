#pragma once

#include <string>

#include <beliefplan/belief_dynamics.hpp>
#include <beliefplan/formula_parser.hpp>
#include <beliefplan/synthesis.hpp>

namespace lightdark {

inline beliefplan::Matrix I2() { return beliefplan::Matrix::Identity(2, 2); }

inline beliefplan::SystemMode mode() {
  using namespace beliefplan;
  return SystemMode(I2(), 0.25 * I2(), Matrix::Zero(2, 2), I2(),
                    ScalarExpression::parse("0.1*(5 - x0)^2 + 0.001", 2));
}

inline beliefplan::Polytope unit_box() {
  return beliefplan::Polytope::box(beliefplan::Vector::Constant(2, -1.0),
                                   beliefplan::Vector::Constant(2, 1.0));
}

inline beliefplan::SwitchedSystem system() { return beliefplan::SwitchedSystem({mode()}, unit_box()); }

inline beliefplan::BeliefState initial() {
  return beliefplan::make_belief(beliefplan::Vector{{0.0, 2.5}}, 0.1 * I2());
}

inline const char* kFreeSpace =
    "q == 0 & P(-x0 <= 1) >= 0.99 & P(x0 <= 5) >= 0.99 & P(-x1 <= 1) >= 0.99 & P(x1 <= 4) >= 0.99";
inline const char* kTarget =
    "q == 0 & P(-x0 <= 0.25) >= 0.95 & P(x0 <= 0.25) >= 0.95 & P(-x1 <= 0.25) >= 0.95 & "
    "P(x1 <= 0.25) >= 0.95";

inline std::map<std::string, beliefplan::Formula> named() {
  return beliefplan::bind_named_formulas({{"free_space", kFreeSpace}, {"target", kTarget}}, 2, 1);
}

inline beliefplan::Formula free_space() { return named().at("free_space"); }
inline beliefplan::Formula target() { return named().at("target"); }

inline beliefplan::Formula formula() {
  const auto defs = named();
  return beliefplan::parse_formula("(free_space) U[0,240] G[0,40] (target)", 2, 1,
                                   [&](std::string_view n) -> std::optional<beliefplan::Formula> {
                                     auto it = defs.find(std::string(n));
                                     if (it == defs.end()) return std::nullopt;
                                     return it->second;
                                   });
}

inline beliefplan::Problem problem() { return beliefplan::Problem{system(), initial(), formula()}; }

inline beliefplan::RrtParams params(long cap = 20000) {
  beliefplan::RrtParams p;
  p.rrt_timeout = 60;
  p.delta_near = 2;
  p.delta_drain = 0.5;
  p.goal_bias = 0.25;
  p.min_num_of_steps = 3;
  p.max_num_of_steps = 15;
  p.iteration_cap = cap;
  return p;
}

inline std::string fixture_path() { return std::string(BELIEFPLAN_FIXTURE_DIR) + "/lightdark.json"; }

}  // namespace lightdark
