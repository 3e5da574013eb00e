#include "beliefplan/formula.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <limits>
#include <variant>

#include "beliefplan/error.hpp"

namespace beliefplan {

struct TemporalNode {
  Formula left;
  Formula right;
  int a;
  int b;
};

struct Formula::Node {
  Kind kind;
  std::variant<Atomic, std::vector<Formula>, TemporalNode> payload;
};

namespace {

void check_interval(int a, int b) {
  if (b == kUnboundedDeadline || b == std::numeric_limits<int>::max()) {
    throw UnsupportedBound("unbounded deadlines are not supported");
  }
  if (a < 0 || a >= b) {
    throw FormulaError("temporal interval requires 0 <= a < b, got [" + std::to_string(a) + "," +
                       std::to_string(b) + "]");
  }
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the shortest representation that round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char shortbuf[64];
    std::snprintf(shortbuf, sizeof shortbuf, "%.*g", prec, v);
    double back = 0.0;
    std::from_chars(shortbuf, shortbuf + std::char_traits<char>::length(shortbuf), back);
    if (back == v) return shortbuf;
  }
  return buf;
}

std::string linear_text(const Vector& h) {
  std::string out;
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    const double coef = h(i);
    if (coef == 0.0) continue;
    const double mag = std::abs(coef);
    if (out.empty()) {
      if (coef < 0) out += "-";
    } else {
      out += coef < 0 ? " - " : " + ";
    }
    if (mag != 1.0) out += format_number(mag) + "*";
    out += "x" + std::to_string(i);
  }
  if (out.empty()) out = "0*x0";
  return out;
}

Verdict vand(Verdict x, Verdict y) { return std::min(x, y); }
Verdict vor(Verdict x, Verdict y) { return std::max(x, y); }

// Evaluates f over positions [lo, hi]; entry i holds the verdict at lo + i.
std::vector<Verdict> eval_range(const Formula& f, std::size_t lo, std::size_t hi,
                                const AtomOracle& atom) {
  const std::size_t len = hi - lo + 1;
  switch (f.kind()) {
    case Formula::Kind::Atomic: {
      const Atomic& at = f.atomic();
      std::vector<Verdict> out(len);
      for (std::size_t i = 0; i < len; ++i) {
        if (at.is_false()) {
          out[i] = Verdict::False;
        } else if (at.is_true()) {
          out[i] = Verdict::True;
        } else {
          out[i] = atom(at, lo + i);
        }
      }
      return out;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      const bool conj = f.kind() == Formula::Kind::And;
      std::vector<Verdict> out(len, conj ? Verdict::True : Verdict::False);
      for (const auto& child : f.children()) {
        const auto sub = eval_range(child, lo, hi, atom);
        for (std::size_t i = 0; i < len; ++i) {
          out[i] = conj ? vand(out[i], sub[i]) : vor(out[i], sub[i]);
        }
      }
      return out;
    }
    case Formula::Kind::Until:
    case Formula::Kind::Release: {
      const auto a = static_cast<std::size_t>(f.lower());
      const auto b = static_cast<std::size_t>(f.upper());
      const std::size_t base = lo + a;
      const std::size_t top = hi + b;
      const auto left = eval_range(f.left(), base, top, atom);
      const auto right = eval_range(f.right(), base, top, atom);
      std::vector<Verdict> out(len, Verdict::False);
      if (f.kind() == Formula::Kind::Until) {
        for (std::size_t i = 0; i < len; ++i) {
          Verdict res = Verdict::False;
          Verdict prefix = Verdict::True;  // left on [k+a, k')
          for (std::size_t kp = i; kp <= i + (b - a); ++kp) {
            res = vor(res, vand(right[kp], prefix));
            if (res == Verdict::True) break;
            prefix = vand(prefix, left[kp]);
            if (prefix == Verdict::False) break;
          }
          out[i] = res;
        }
        return out;
      }
      // Release: window counts give the "right holds throughout" disjunct.
      std::vector<std::size_t> right_false(right.size() + 1, 0), right_unknown(right.size() + 1, 0),
          left_possible(left.size() + 1, 0);
      for (std::size_t j = 0; j < right.size(); ++j) {
        right_false[j + 1] = right_false[j] + (right[j] == Verdict::False);
        right_unknown[j + 1] = right_unknown[j] + (right[j] == Verdict::Unknown);
        left_possible[j + 1] = left_possible[j] + (left[j] != Verdict::False);
      }
      for (std::size_t i = 0; i < len; ++i) {
        const std::size_t end = i + (b - a) + 1;
        Verdict throughout = Verdict::True;
        if (right_false[end] - right_false[i] > 0) {
          throughout = Verdict::False;
        } else if (right_unknown[end] - right_unknown[i] > 0) {
          throughout = Verdict::Unknown;
        }
        Verdict res = throughout;
        if (res != Verdict::True && left_possible[end] - left_possible[i] > 0) {
          Verdict prefix = Verdict::True;  // right on [k+a, k']
          for (std::size_t kp = i; kp < end; ++kp) {
            prefix = vand(prefix, right[kp]);
            if (prefix == Verdict::False) break;
            res = vor(res, vand(left[kp], prefix));
            if (res == Verdict::True) break;
          }
        }
        out[i] = res;
      }
      return out;
    }
  }
  throw InternalConsistencyError("unknown formula kind");
}

void collect_atomics(const Formula& f, std::vector<Atomic>& out) {
  switch (f.kind()) {
    case Formula::Kind::Atomic: {
      const Atomic& at = f.atomic();
      if (at.is_constant()) return;
      for (const auto& seen : out) {
        if (seen.name == at.name) {
          if (!seen.same_content(at)) {
            throw NameCollision("distinct atomic propositions share the name '" + at.name + "'");
          }
          return;
        }
      }
      out.push_back(at);
      return;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or:
      for (const auto& c : f.children()) collect_atomics(c, out);
      return;
    case Formula::Kind::Until:
    case Formula::Kind::Release:
      collect_atomics(f.left(), out);
      collect_atomics(f.right(), out);
      return;
  }
}

std::string wrap(const Formula& f) { return "(" + to_string(f) + ")"; }

}  // namespace

Formula::Kind Formula::kind() const { return node_->kind; }

const Atomic& Formula::atomic() const {
  if (node_->kind != Kind::Atomic) throw FormulaError("formula is not atomic");
  return std::get<Atomic>(node_->payload);
}

const std::vector<Formula>& Formula::children() const {
  if (node_->kind != Kind::And && node_->kind != Kind::Or) {
    throw FormulaError("formula has no child list");
  }
  return std::get<std::vector<Formula>>(node_->payload);
}

namespace {
const TemporalNode& temporal(const Formula::Node& node, Formula::Kind kind) {
  if (kind != Formula::Kind::Until && kind != Formula::Kind::Release) {
    throw FormulaError("formula is not temporal");
  }
  return std::get<TemporalNode>(node.payload);
}
}  // namespace

const Formula& Formula::left() const { return temporal(*node_, node_->kind).left; }
const Formula& Formula::right() const { return temporal(*node_, node_->kind).right; }
int Formula::lower() const { return temporal(*node_, node_->kind).a; }
int Formula::upper() const { return temporal(*node_, node_->kind).b; }

Formula make_atomic(BeliefCone cone, DiscretePredicate modes, std::string name) {
  // An empty mode set is false whatever the cone says; keep one representation.
  if (modes.is_empty()) cone = BeliefCone{};
  Atomic at{std::move(cone), std::move(modes), std::move(name)};
  if (at.name.empty()) at.name = to_string(at);
  return Formula(std::make_shared<const Formula::Node>(
      Formula::Node{Formula::Kind::Atomic, std::move(at)}));
}

Formula make_true(int mode_count) {
  return make_atomic(BeliefCone{}, DiscretePredicate::all(mode_count), "true");
}

Formula make_false(int mode_count) {
  return make_atomic(BeliefCone{}, DiscretePredicate::none(mode_count), "false");
}

Formula make_and(std::vector<Formula> children) {
  if (children.empty()) throw FormulaError("conjunction needs at least one operand");
  std::vector<Formula> flat;
  for (auto& c : children) {
    if (c.kind() == Formula::Kind::And) {
      for (const auto& g : c.children()) flat.push_back(g);
    } else {
      flat.push_back(std::move(c));
    }
  }
  std::vector<Formula> rest;
  std::vector<const Formula*> atoms;
  for (const auto& c : flat) {
    if (c.kind() == Formula::Kind::Atomic) {
      atoms.push_back(&c);
    } else {
      rest.push_back(c);
    }
  }
  std::vector<Formula> out;
  if (atoms.size() == 1) {
    out.push_back(*atoms.front());
  } else if (atoms.size() > 1) {
    std::vector<ProbabilisticLinearPredicate> preds;
    DiscretePredicate modes = atoms.front()->atomic().modes;
    for (const auto* a : atoms) {
      const auto& at = a->atomic();
      preds.insert(preds.end(), at.cone.constraints().begin(), at.cone.constraints().end());
      modes = modes.intersect(at.modes);
    }
    out.push_back(make_atomic(region_from_predicates(std::move(preds)), std::move(modes)));
  }
  out.insert(out.end(), rest.begin(), rest.end());
  if (out.size() == 1) return out.front();
  return Formula(std::make_shared<const Formula::Node>(
      Formula::Node{Formula::Kind::And, std::move(out)}));
}

Formula make_or(std::vector<Formula> children) {
  if (children.empty()) throw FormulaError("disjunction needs at least one operand");
  std::vector<Formula> flat;
  for (auto& c : children) {
    if (c.kind() == Formula::Kind::Or) {
      for (const auto& g : c.children()) flat.push_back(g);
    } else {
      flat.push_back(std::move(c));
    }
  }
  std::vector<Formula> out;
  std::vector<const Formula*> mode_only;
  for (const auto& c : flat) {
    if (c.kind() == Formula::Kind::Atomic && c.atomic().cone.empty()) {
      mode_only.push_back(&c);
    } else {
      out.push_back(c);
    }
  }
  if (mode_only.size() == 1) {
    out.insert(out.begin(), *mode_only.front());
  } else if (mode_only.size() > 1) {
    DiscretePredicate modes = mode_only.front()->atomic().modes;
    for (const auto* m : mode_only) modes = modes.unite(m->atomic().modes);
    out.insert(out.begin(), make_atomic(BeliefCone{}, std::move(modes)));
  }
  if (out.size() == 1) return out.front();
  return Formula(std::make_shared<const Formula::Node>(
      Formula::Node{Formula::Kind::Or, std::move(out)}));
}

Formula make_until(Formula left, int a, int b, Formula right) {
  check_interval(a, b);
  return Formula(std::make_shared<const Formula::Node>(Formula::Node{
      Formula::Kind::Until, TemporalNode{std::move(left), std::move(right), a, b}}));
}

Formula make_release(Formula left, int a, int b, Formula right) {
  check_interval(a, b);
  return Formula(std::make_shared<const Formula::Node>(Formula::Node{
      Formula::Kind::Release, TemporalNode{std::move(left), std::move(right), a, b}}));
}

namespace {
int mode_count_of(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atomic:
      return f.atomic().modes.mode_count();
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return mode_count_of(f.children().front());
    default:
      return mode_count_of(f.right());
  }
}
}  // namespace

Formula make_always(int a, int b, Formula f) {
  const int n = mode_count_of(f);
  return make_release(make_false(n), a, b, std::move(f));
}

Formula make_eventually(int a, int b, Formula f) {
  const int n = mode_count_of(f);
  return make_until(make_true(n), a, b, std::move(f));
}

Formula with_name(const Formula& f, std::string name) {
  if (f.kind() != Formula::Kind::Atomic || f.atomic().is_constant()) return f;
  const Atomic& at = f.atomic();
  return make_atomic(at.cone, at.modes, std::move(name));
}

int horizon(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atomic:
      return 0;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      int h = 0;
      for (const auto& c : f.children()) h = std::max(h, horizon(c));
      return h;
    }
    case Formula::Kind::Until:
    case Formula::Kind::Release:
      return f.upper() + std::max(horizon(f.left()), horizon(f.right()));
  }
  return 0;
}

std::vector<Atomic> atomic_propositions(const Formula& f) {
  std::vector<Atomic> out;
  collect_atomics(f, out);
  return out;
}

std::string to_string(const Atomic& a) {
  if (a.is_false()) return "false";
  if (a.is_true()) return "true";
  std::vector<std::string> parts;
  if (!a.modes.is_full()) {
    std::string m = "q in {";
    for (std::size_t i = 0; i < a.modes.modes().size(); ++i) {
      if (i) m += ",";
      m += std::to_string(a.modes.modes()[i]);
    }
    parts.push_back(m + "}");
  }
  for (const auto& p : a.cone.constraints()) {
    parts.push_back("P(" + linear_text(p.expr.h) + " <= " + format_number(-p.expr.c) +
                    ") >= " + format_number(1.0 - p.epsilon));
  }
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += " & ";
    out += parts[i];
  }
  return out;
}

std::string to_string(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atomic:
      return to_string(f.atomic());
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      const char* op = f.kind() == Formula::Kind::And ? " & " : " | ";
      std::string out;
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i) out += op;
        out += wrap(f.children()[i]);
      }
      return out;
    }
    case Formula::Kind::Until:
    case Formula::Kind::Release: {
      const char* op = f.kind() == Formula::Kind::Until ? " U[" : " R[";
      return wrap(f.left()) + op + std::to_string(f.lower()) + "," + std::to_string(f.upper()) +
             "] " + wrap(f.right());
    }
  }
  return {};
}

void Trace::validate() const {
  if (beliefs.empty() || modes.size() + 1 != beliefs.size()) {
    throw DimensionError("trace needs T+1 beliefs and T modes, got " +
                         std::to_string(beliefs.size()) + " beliefs and " +
                         std::to_string(modes.size()) + " modes");
  }
}

Verdict evaluate(const Formula& f, std::size_t k, const AtomOracle& atom) {
  return eval_range(f, k, k, atom).front();
}

namespace {

Verdict belief_atom(const Atomic& at, const Trace& tr, std::size_t k) {
  if (k >= tr.beliefs.size()) return Verdict::False;
  if (k > 0 && !at.modes.contains(tr.modes[k - 1])) return Verdict::False;
  return cone_contains(at.cone, tr.beliefs[k]) ? Verdict::True : Verdict::False;
}

}  // namespace

bool monitor(const Formula& f, const Trace& tr, std::size_t k) {
  tr.validate();
  const std::size_t need = k + static_cast<std::size_t>(horizon(f)) + 1;
  if (tr.beliefs.size() < need) {
    throw InsufficientTrace("monitor needs " + std::to_string(need) + " beliefs, trace has " +
                            std::to_string(tr.beliefs.size()));
  }
  return evaluate(f, k, [&](const Atomic& at, std::size_t i) { return belief_atom(at, tr, i); }) ==
         Verdict::True;
}

bool satisfies(const Formula& f, const Trace& tr) {
  tr.validate();
  return evaluate(f, 0, [&](const Atomic& at, std::size_t i) { return belief_atom(at, tr, i); }) ==
         Verdict::True;
}

bool monitor_word(const Formula& f, const Word& word) {
  const std::size_t need = static_cast<std::size_t>(horizon(f)) + 1;
  if (word.size() < need) {
    throw InsufficientTrace("word needs " + std::to_string(need) + " steps, has " +
                            std::to_string(word.size()));
  }
  auto atom = [&](const Atomic& at, std::size_t k) {
    if (k >= word.size()) return Verdict::False;
    if (k > 0 && !at.modes.contains(word[k - 1].mode)) return Verdict::False;
    const auto& labels = word[k].labels;
    return std::find(labels.begin(), labels.end(), at.name) != labels.end() ? Verdict::True
                                                                            : Verdict::False;
  };
  return evaluate(f, 0, atom) == Verdict::True;
}

}  // namespace beliefplan
