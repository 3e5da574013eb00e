#pragma once

#include <random>

#include <Eigen/Dense>

namespace beliefplan {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Random stream used for every stochastic operation; seeded by the caller.
using Rng = std::mt19937_64;

}  // namespace beliefplan
