#pragma once

#include <functional>

#include "bapa/formula.hpp"

namespace bapa::detail {

IntTerm map_cards(const IntTerm& t, const std::function<IntTerm(const SetTerm&)>& fn);
Formula map_atoms(const Formula& f, const std::function<Formula(const Formula&)>& fn);
// Rebuilds an integer atom (IntEq, IntLt or Dvd) around new terms.
Formula with_terms(const Formula& a, IntTerm t1, IntTerm t2);
bool has_int_terms(const Formula& a);
// Replaces every card(b) in an integer atom; other atoms pass through.
Formula map_atom_cards(const Formula& a, const std::function<IntTerm(const SetTerm&)>& fn);

}  // namespace bapa::detail
