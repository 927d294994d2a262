#pragma once

#include <string>
#include <vector>

#include "homsa/formula.hpp"
#include "homsa/poly.hpp"

namespace homsa {

// Parsed problem: an affine tuple, a lax formula over it, and the names
// needed to print both back out.
struct ProblemInput {
    PolyTuple tuple;
    LaxFormula formula;
    std::vector<std::string> var_names;
    std::vector<std::string> poly_names;
};

// Input grammar (UTF-8 text):
//   file         := (decl ";")* "formula" formula-expr
//   decl         := "vars" ident+ | "poly" ident "=" poly-expr ["deg" nat]
//   poly-expr    := signed sum of terms; term := coeff? (ident ("^" nat)?)*
//   coeff        := decimal or rational "a/b"
//   formula-expr := atom | formula-expr "&" formula-expr
//                 | formula-expr "|" formula-expr | "(" formula-expr ")"
//   atom         := "(" ident rel "0" ")", rel in {"<=", "=", ">="}
// "&" binds tighter than "|". Degrees default to the total degree (at least
// 1) unless a "deg" annotation raises them; annotations below the actual
// degree are rejected. "!" is rejected: lax formulas admit no negation.
ProblemInput parse(const std::string& text);

// Grammar-conforming rendering; parse(print_problem(p)) reproduces p.
std::string print_problem(const ProblemInput& input);

} // namespace homsa
