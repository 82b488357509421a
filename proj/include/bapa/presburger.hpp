#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bapa/formula.hpp"

namespace bapa {

enum class Verdict { Valid, Invalid };

std::string_view verdict_name(Verdict v);

// True when f uses no set terms, card, fin or finU.
bool is_pa_formula(const Formula& f);

// Positive-literal form: ~(a < b) becomes b < a + 1, ~dvd(c,t) becomes a disjunction of
// dvd(c, t + i), and with split_equalities a = b becomes (a < b + 1) & (b < a + 1).
Formula normalize_atoms(const Formula& f, bool split_equalities = true);

// Eliminates x from a conjunction of literals in which every literal mentions x.
Formula pa_eliminate_exists(const std::vector<Formula>& conj, const std::string& x);

Formula pa_qe(const Formula& f);

// Throws FreeVariableError when f is not closed (MAXC counts as free).
Verdict pa_decide(const Formula& f);

using Env = std::map<std::string, BigInt>;

// MAXC is read from env["MAXC"]; propositional variables are 0/1.
bool pa_eval(const Formula& f, const Env& env);

struct BoundedEvalStats {
  std::size_t peak_frames = 0;    // deepest chain of live bindings
  std::size_t peak_values = 0;    // widest per-variable range used
  std::size_t evaluations = 0;    // atom evaluations
};

// Evaluates an alpha image of a pure Boolean-algebra sentence where every partition
// block carries its depth annotation. MAXC must already be instantiated or is given
// by maxc.
bool pa_eval_bounded(const Formula& g, const BigInt& maxc, BoundedEvalStats* stats = nullptr);

}  // namespace bapa
