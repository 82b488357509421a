#pragma once

#include <string>
#include <vector>

#include "bapa/formula.hpp"

namespace bapa {

// card(set) = bound, or card(set) >= bound when exact is false.
struct BaLiteral {
  SetTerm set;
  bool exact = true;
  BigInt bound;
};

Formula to_formula(const BaLiteral& lit);

// Largest cardinality constant accepted; larger inputs belong to the alpha pipeline.
inline constexpr long kBaMaxConstant = 8;

// True when f has only set quantifiers and set variables, and every integer atom
// compares a cardinality with a constant.
bool is_pure_ba(const Formula& f);

// Accepts ~(card(b) = k), ~(card(b) >= k) and the equivalent card(b) < k.
Formula expand_negative_literal(const Formula& lit);

// Eliminates y from a conjunction of positive cardinality literals that all mention y.
Formula ba_eliminate_innermost(const std::vector<Formula>& conj, const std::string& y);

// Quantifier-free equivalent of a pure BA formula, as a disjunction of conjunctions of
// card(b) = k and card(b) >= k literals.
Formula ba_eliminate(const Formula& f);

}  // namespace bapa
