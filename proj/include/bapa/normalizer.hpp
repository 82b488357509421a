#pragma once

#include <set>
#include <string>
#include <vector>

#include "bapa/formula.hpp"

namespace bapa {

struct Binder {
  FKind quant;  // Exists or Forall
  std::string name;
  Sort sort;
  bool nonneg = false;
  int depth = 0;
};

struct PrenexForm {
  std::vector<Binder> prefix;  // outermost first
  Formula matrix;

  Formula to_formula() const;
};

// Negations only on atoms; Implies and Iff eliminated; And/Or flattened.
Formula to_nnf(const Formula& f);

// Pulls quantifiers outward, outside-in and left to right. Bound names are renamed
// apart from each other, from free variables and from `avoid`.
PrenexForm to_prenex(const Formula& f, const std::set<std::string>& avoid = {});

// Set relations become cardinality atoms; IntEq with a card only on the right is flipped.
Formula purify_atoms(const Formula& f);

SetTerm simplify_set(const SetTerm& s);
// Absorbs empty/univ, maps card(empty) to 0, folds ground integer atoms and propagates
// true/false through connectives.
Formula simplify_const(const Formula& f);

// Number of quantifier kind changes along a prefix.
std::size_t count_alternations(const std::vector<Binder>& prefix);

}  // namespace bapa
