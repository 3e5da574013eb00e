#include "beliefplan/formula_parser.hpp"

#include <set>

#include "beliefplan/error.hpp"
#include "lexer.hpp"

namespace beliefplan {
namespace {

using detail::Tok;
using detail::Token;
using detail::TokenStream;

bool is_keyword(const std::string& s) {
  static const std::set<std::string> kw = {"G", "F", "U", "R", "P", "q", "in", "true", "false"};
  return kw.count(s) > 0;
}

class FormulaParser {
 public:
  FormulaParser(std::string_view text, int n, int modes, const NameResolver& resolve)
      : ts_(detail::tokenize(text)), n_(n), modes_(modes), resolve_(resolve) {}

  Formula parse() {
    Formula f = binary();
    if (ts_.peek().kind != Tok::End) ts_.fail("unexpected trailing input");
    return f;
  }

 private:
  std::pair<int, int> interval() {
    const Token start = ts_.peek();
    ts_.expect_symbol("[");
    const int a = ts_.expect_int();
    ts_.expect_symbol(",");
    const int b = ts_.expect_int();
    ts_.expect_symbol("]");
    if (a >= b) ts_.fail_at(start, "interval requires a < b");
    return {a, b};
  }

  Formula binary() {
    Formula left = unary();
    if (ts_.at_ident("U") || ts_.at_ident("R")) {
      const bool until = ts_.next().text == "U";
      const auto [a, b] = interval();
      Formula right = unary();
      return until ? make_until(std::move(left), a, b, std::move(right))
                   : make_release(std::move(left), a, b, std::move(right));
    }
    return left;
  }

  Formula unary() {
    if (ts_.at_ident("G") || ts_.at_ident("F")) {
      const bool always = ts_.next().text == "G";
      const auto [a, b] = interval();
      Formula body = unary();
      return always ? make_always(a, b, std::move(body)) : make_eventually(a, b, std::move(body));
    }
    return disj();
  }

  Formula disj() {
    std::vector<Formula> items{conj()};
    while (ts_.accept_symbol("|")) items.push_back(conj());
    return items.size() == 1 ? items.front() : make_or(std::move(items));
  }

  Formula conj() {
    std::vector<Formula> items{atom()};
    while (ts_.accept_symbol("&")) items.push_back(atom());
    return items.size() == 1 ? items.front() : make_and(std::move(items));
  }

  Formula atom() {
    const Token& t = ts_.peek();
    if (ts_.accept_symbol("(")) {
      Formula f = binary();
      ts_.expect_symbol(")");
      return f;
    }
    if (t.kind != Tok::Ident) ts_.fail("expected a formula");
    if (t.text == "true") {
      ts_.next();
      return make_true(modes_);
    }
    if (t.text == "false") {
      ts_.next();
      return make_false(modes_);
    }
    if (t.text == "P") return probpred();
    if (t.text == "q") return modepred();
    if (is_keyword(t.text)) ts_.fail("unexpected keyword");
    const Token name = ts_.next();
    std::optional<Formula> bound;
    if (resolve_) bound = resolve_(name.text);
    if (!bound) ts_.fail_at(name, "undeclared name '" + name.text + "'");
    return *bound;
  }

  int mode_index() {
    const Token t = ts_.peek();
    const int q = ts_.expect_int();
    if (q >= modes_) {
      ts_.fail_at(t, "mode index " + std::to_string(q) + " exceeds declared mode count " +
                         std::to_string(modes_));
    }
    return q;
  }

  Formula modepred() {
    ts_.expect_ident("q");
    std::vector<int> modes;
    if (ts_.accept_symbol("==")) {
      modes.push_back(mode_index());
    } else {
      ts_.expect_ident("in");
      ts_.expect_symbol("{");
      modes.push_back(mode_index());
      while (ts_.accept_symbol(",")) modes.push_back(mode_index());
      ts_.expect_symbol("}");
    }
    return make_atomic(BeliefCone{}, DiscretePredicate(std::move(modes), modes_));
  }

  double signed_number() {
    double sign = 1.0;
    while (ts_.at_symbol("-") || ts_.at_symbol("+")) {
      if (ts_.next().text == "-") sign = -sign;
    }
    return sign * ts_.expect_number();
  }

  int variable() {
    const Token t = ts_.peek();
    if (t.kind != Tok::Ident) ts_.fail("expected a state variable x0..x" + std::to_string(n_ - 1));
    const int idx = detail::variable_index(t.text);
    if (idx < 0) ts_.fail("expected a state variable");
    if (idx >= n_) {
      ts_.fail_at(t, "variable " + t.text + " exceeds state dimension " + std::to_string(n_));
    }
    ts_.next();
    return idx;
  }

  // affine expression: [sign] term ((+|-) term)*
  void linexpr(Vector& h, double& c) {
    h = Vector::Zero(n_);
    c = 0.0;
    double sign = 1.0;
    if (ts_.accept_symbol("-")) {
      sign = -1.0;
    } else {
      ts_.accept_symbol("+");
    }
    while (true) {
      if (ts_.peek().kind == Tok::Number) {
        const double coef = ts_.next().number;
        if (ts_.accept_symbol("*") || ts_.peek().kind == Tok::Ident) {
          h(variable()) += sign * coef;
        } else {
          c += sign * coef;
        }
      } else {
        const int idx = variable();
        double coef = 1.0;
        if (ts_.accept_symbol("*")) coef = ts_.expect_number();
        h(idx) += sign * coef;
      }
      if (ts_.accept_symbol("+")) {
        sign = 1.0;
      } else if (ts_.accept_symbol("-")) {
        sign = -1.0;
      } else {
        break;
      }
    }
  }

  Formula probpred() {
    ts_.expect_ident("P");
    ts_.expect_symbol("(");
    Vector h;
    double c = 0.0;
    linexpr(h, c);
    ts_.expect_symbol("<=");
    const double rhs = signed_number();
    ts_.expect_symbol(")");
    ts_.expect_symbol(">=");
    const Token pt = ts_.peek();
    const double p = ts_.expect_number();
    if (p < 0.5) ts_.fail_at(pt, "probability bound below 0.5");
    if (p > 1.0) ts_.fail_at(pt, "probability bound above 1");
    ProbabilisticLinearPredicate pred(LinearExpression(std::move(h), c - rhs), 1.0 - p);
    return make_atomic(region_from_predicates({std::move(pred)}), DiscretePredicate::all(modes_));
  }

  TokenStream ts_;
  int n_;
  int modes_;
  const NameResolver& resolve_;
};

}  // namespace

Formula parse_formula(std::string_view text, int state_dim, int mode_count,
                      const NameResolver& resolve) {
  return FormulaParser(text, state_dim, mode_count, resolve).parse();
}

std::map<std::string, Formula> bind_named_formulas(const std::map<std::string, std::string>& defs,
                                                   int state_dim, int mode_count) {
  std::map<std::string, Formula> bound;
  std::set<std::string> active;
  NameResolver resolve;
  resolve = [&](std::string_view name) -> std::optional<Formula> {
    const std::string key(name);
    if (auto it = bound.find(key); it != bound.end()) return it->second;
    const auto def = defs.find(key);
    if (def == defs.end()) return std::nullopt;
    if (!active.insert(key).second) {
      throw FormulaError("cyclic reference through named formula '" + key + "'");
    }
    Formula f = [&] {
      try {
        return parse_formula(def->second, state_dim, mode_count, resolve);
      } catch (const ParseError& e) {
        throw FormulaError("in named formula '" + key + "': " + e.what());
      }
    }();
    active.erase(key);
    f = with_name(f, key);
    bound.emplace(key, f);
    return f;
  };
  for (const auto& [name, text] : defs) resolve(name);
  return bound;
}

}  // namespace beliefplan
