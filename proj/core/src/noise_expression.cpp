#include "beliefplan/noise_expression.hpp"

#include <cmath>
#include <cstdio>

#include "beliefplan/error.hpp"
#include "lexer.hpp"

namespace beliefplan {

struct ScalarExpression::Node {
  enum class Op { Constant, Variable, Add, Sub, Mul, Neg, Pow } op;
  double value = 0.0;
  int index = 0;  // variable index or integer exponent
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = ScalarExpression::Node;
using NodePtr = std::shared_ptr<const Node>;
using detail::Tok;
using detail::TokenStream;

NodePtr leaf(double v) { return std::make_shared<const Node>(Node{Node::Op::Constant, v, 0, {}, {}}); }

NodePtr binary(Node::Op op, NodePtr l, NodePtr r) {
  return std::make_shared<const Node>(Node{op, 0.0, 0, std::move(l), std::move(r)});
}

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, int n) : ts_(detail::tokenize(text)), n_(n) {}

  NodePtr parse() {
    NodePtr e = sum();
    if (ts_.peek().kind != Tok::End) ts_.fail("unexpected trailing input");
    return e;
  }

 private:
  NodePtr sum() {
    NodePtr acc = product();
    while (ts_.at_symbol("+") || ts_.at_symbol("-")) {
      const auto op = ts_.next().text == "+" ? Node::Op::Add : Node::Op::Sub;
      acc = binary(op, acc, product());
    }
    return acc;
  }

  NodePtr product() {
    NodePtr acc = signed_factor();
    while (ts_.accept_symbol("*")) acc = binary(Node::Op::Mul, acc, signed_factor());
    return acc;
  }

  NodePtr signed_factor() {
    if (ts_.accept_symbol("-")) {
      return std::make_shared<const Node>(Node{Node::Op::Neg, 0.0, 0, signed_factor(), {}});
    }
    ts_.accept_symbol("+");
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (ts_.accept_symbol("^")) {
      const int exponent = ts_.expect_int();
      return std::make_shared<const Node>(Node{Node::Op::Pow, 0.0, exponent, base, {}});
    }
    return base;
  }

  NodePtr primary() {
    if (ts_.accept_symbol("(")) {
      NodePtr e = sum();
      ts_.expect_symbol(")");
      return e;
    }
    if (ts_.peek().kind == Tok::Number) return leaf(ts_.next().number);
    const auto& t = ts_.peek();
    if (t.kind == Tok::Ident) {
      const int idx = detail::variable_index(t.text);
      if (idx < 0) ts_.fail("expected a state variable");
      if (idx >= n_) {
        ts_.fail_at(t, "variable " + t.text + " exceeds state dimension " + std::to_string(n_));
      }
      ts_.next();
      return std::make_shared<const Node>(Node{Node::Op::Variable, 0.0, idx, {}, {}});
    }
    ts_.fail("expected a number, variable or '('");
  }

  TokenStream ts_;
  int n_;
};

double eval(const Node& node, const Vector& x) {
  switch (node.op) {
    case Node::Op::Constant:
      return node.value;
    case Node::Op::Variable:
      return x(node.index);
    case Node::Op::Add:
      return eval(*node.lhs, x) + eval(*node.rhs, x);
    case Node::Op::Sub:
      return eval(*node.lhs, x) - eval(*node.rhs, x);
    case Node::Op::Mul:
      return eval(*node.lhs, x) * eval(*node.rhs, x);
    case Node::Op::Neg:
      return -eval(*node.lhs, x);
    case Node::Op::Pow: {
      const double base = eval(*node.lhs, x);
      double out = 1.0;
      for (int i = 0; i < node.index; ++i) out *= base;
      return out;
    }
  }
  return 0.0;
}

}  // namespace

ScalarExpression ScalarExpression::parse(std::string_view text, int state_dim) {
  return ScalarExpression(ExpressionParser(text, state_dim).parse(), std::string(text), state_dim);
}

ScalarExpression ScalarExpression::constant(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return ScalarExpression(leaf(value), buf, 0);
}

double ScalarExpression::operator()(const Vector& x) const {
  if (x.size() < state_dim_) {
    throw DimensionError("noise expression expects a state of dimension " +
                         std::to_string(state_dim_));
  }
  return eval(*root_, x);
}

}  // namespace beliefplan
