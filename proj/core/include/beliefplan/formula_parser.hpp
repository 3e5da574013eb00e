#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "beliefplan/formula.hpp"

namespace beliefplan {

/// Looks up a named sub-formula; nullopt means undeclared.
using NameResolver = std::function<std::optional<Formula>(std::string_view)>;

/// Parses the PrSTL text grammar:
///
///   formula  := binary
///   binary   := unary (("U"|"R") "[" int "," int "]" unary)?
///   unary    := ("G"|"F") "[" int "," int "]" unary | disj
///   disj     := conj ("|" conj)*
///   conj     := atom ("&" atom)*
///   atom     := "(" formula ")" | "true" | "false" | probpred | modepred | NAME
///   probpred := "P" "(" linexpr "<=" NUMBER ")" ">=" NUMBER
///   modepred := "q" "==" INT | "q" "in" "{" INT ("," INT)* "}"
///
/// "P(e <= c) >= p" becomes mu(x) = e - c with epsilon = 1 - p.
/// Throws ParseError (with line/column) or FormulaError.
Formula parse_formula(std::string_view text, int state_dim, int mode_count,
                      const NameResolver& resolve = {});

/// Parses every definition, resolving references between them lazily.
/// Atomic definitions take their binding name. Throws FormulaError on
/// undeclared or cyclic references.
std::map<std::string, Formula> bind_named_formulas(const std::map<std::string, std::string>& defs,
                                                   int state_dim, int mode_count);

}  // namespace beliefplan
