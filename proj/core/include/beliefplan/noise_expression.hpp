#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "beliefplan/types.hpp"

namespace beliefplan {

/// Scalar polynomial over the state, e.g. "0.1*(5 - x0)^2 + 0.001".
///
/// Grammar: numbers, x0..x{n-1}, binary + - *, unary -, ^INT, parentheses.
class ScalarExpression {
 public:
  /// Throws ParseError on malformed text or out-of-range variables.
  static ScalarExpression parse(std::string_view text, int state_dim);

  /// Constant expression.
  static ScalarExpression constant(double value);

  double operator()(const Vector& x) const;
  const std::string& text() const noexcept { return text_; }
  int state_dim() const noexcept { return state_dim_; }

  struct Node;

 private:
  ScalarExpression(std::shared_ptr<const Node> root, std::string text, int n)
      : root_(std::move(root)), text_(std::move(text)), state_dim_(n) {}

  std::shared_ptr<const Node> root_;
  std::string text_;
  int state_dim_ = 0;
};

}  // namespace beliefplan
