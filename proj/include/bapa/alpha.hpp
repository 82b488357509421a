#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bapa/formula.hpp"
#include "bapa/normalizer.hpp"
#include "bapa/presburger.hpp"

namespace bapa {

enum class ModelClass { FiniteUniverse, InfiniteUniverse, AllModels };
enum class Strategy { Alpha, Interleaved };

std::string_view model_class_name(ModelClass m);
std::string_view strategy_name(Strategy s);

struct AlphaOptions {
  ModelClass mode = ModelClass::FiniteUniverse;
  Strategy strategy = Strategy::Alpha;
  bool optimize = false;
};

// Cube bitstrings and the integer (and, in infinite mode, propositional) variables
// standing for their cardinalities. The first bit belongs to the innermost remaining
// set variable; cube lists are ordered [1w, 0w] for each w of the enclosing level.
struct PartitionNaming {
  std::vector<std::string> set_vars;  // outermost first
  std::vector<std::string> cubes;
  std::map<std::string, std::string> l_names;
  std::map<std::string, std::string> p_names;
};

struct AlphaState {
  std::vector<Binder> remaining;  // outermost first; the back is processed next
  PartitionNaming naming;
  Formula g;
  int r = 0;  // set quantifiers processed so far
  bool infinite = false;
  std::set<std::string> avoid;
};

// pf.matrix must be purified. Card atoms become sums over cube variables; in infinite
// mode fin(b) becomes a conjunction of cube propositions and card(b) is 0 unless all
// its cubes are finite.
AlphaState introduce_partition(const PrenexForm& pf, bool infinite = false);

// Consumes the innermost remaining quantifier.
AlphaState alpha_step(const AlphaState& st);

// Front end shared by the strategies: sort check, purification and
// prenex form. In finite mode fin(b) and finU are replaced by true first.
PrenexForm alpha_front_end(const Formula& f, ModelClass mode);

// The PA image. FiniteUniverse leaves MAXC free; the other modes return a sentence.
Formula alpha_translate(const Formula& f, const AlphaOptions& opt = {});

// The finite-mode image closed over the universe size: all nat k. g[MAXC := k].
Formula close_universe(const Formula& g);
// g[MAXC := u].
Formula instantiate_universe(const Formula& g, const BigInt& u);

// Universal (or existential) closure over free variables, sorted by name.
Formula close_free(const Formula& f, bool existential = false);

// Interleaved strategy: quantifier-free PA formula in MAXC, equivalent per universe size.
Formula alpha_interleaved_qf(const Formula& f);
Verdict alpha_interleaved(const Formula& f, ModelClass mode = ModelClass::FiniteUniverse);

// Full pipeline on a sentence.
Verdict decide(const Formula& f, const AlphaOptions& opt = {});
// Truth in the finite model class of universe size u.
bool decide_at(const Formula& f, const BigInt& u, const AlphaOptions& opt = {});

}  // namespace bapa
