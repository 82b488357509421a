#pragma once

// Random BAPA sentences for the differential tests.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "bapa/formula.hpp"

namespace bapa::testing {

struct CorpusOptions {
  int max_sets = 3;
  int max_ints = 2;
  int max_const = 3;
  int max_depth = 6;  // nesting depth of the connectives in the matrix
  bool pure_ba = false;
  int free_sets = 0;  // leading set variables left unquantified
  bool use_maxc = true;
  bool cardinality_free = false;  // pure BA atoms only: = and subseteq
};

class CorpusGenerator {
 public:
  explicit CorpusGenerator(unsigned seed, CorpusOptions opt = {}) : rng_(seed), opt_(opt) {}

  Formula next() {
    int ns = pick(1, opt_.max_sets);
    int ni = opt_.pure_ba ? 0 : pick(0, opt_.max_ints);
    sets_.clear();
    ints_.clear();
    static const char* kSets[] = {"x", "y", "z", "w"};
    static const char* kInts[] = {"k", "m", "n"};
    for (int i = 0; i < ns; ++i) sets_.push_back(kSets[i]);
    for (int i = 0; i < ni; ++i) ints_.push_back(kInts[i]);

    Formula f = matrix(pick(1, opt_.max_depth));
    struct Q {
      std::string name;
      Sort sort;
    };
    std::vector<Q> qs;
    for (std::size_t i = static_cast<std::size_t>(opt_.free_sets); i < sets_.size(); ++i)
      qs.push_back({sets_[i], Sort::Set});
    for (const auto& n : ints_) qs.push_back({n, Sort::Int});
    std::shuffle(qs.begin(), qs.end(), rng_);
    for (auto it = qs.rbegin(); it != qs.rend(); ++it) {
      bool nonneg = it->sort == Sort::Int && coin(0.3);
      f = quantify(coin(0.5) ? FKind::Exists : FKind::Forall, it->name, it->sort, f, nonneg);
    }
    return f;
  }

  std::vector<Formula> batch(std::size_t n) {
    std::vector<Formula> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(next());
    return out;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
  template <class T>
  const T& any(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(pick(0, static_cast<int>(v.size()) - 1))];
  }

  SetTerm set_term(int depth) {
    int r = pick(0, depth <= 0 ? 2 : 7);
    switch (r) {
      case 0:
      case 1: return set_var(any(sets_));
      case 2: return coin(0.5) ? set_compl(set_var(any(sets_))) : (coin(0.5) ? set_empty() : set_univ());
      case 3:
      case 4: return set_union(set_term(depth - 1), set_term(depth - 1));
      case 5:
      case 6: return set_inter(set_term(depth - 1), set_term(depth - 1));
      default: return set_compl(set_term(depth - 1));
    }
  }

  IntTerm constant() { return int_const(pick(0, opt_.max_const)); }

  IntTerm int_term() {
    int r = pick(0, 5);
    if (r <= 1 && !ints_.empty()) return int_var(any(ints_));
    if (r == 2) return card(set_term(2));
    if (r == 3 && !ints_.empty()) return int_add(int_var(any(ints_)), constant());
    if (r == 4 && opt_.use_maxc && coin(0.3)) return int_maxc();
    if (r == 5) return int_add(card(set_term(1)), constant());
    return constant();
  }

  Formula ba_atom() {
    switch (pick(0, opt_.cardinality_free ? 1 : 4)) {
      case 0: return set_eq(set_term(2), set_term(2));
      case 1: return subset_eq(set_term(2), set_term(2));
      case 2: return int_eq(card(set_term(2)), constant());
      case 3: return int_ge(card(set_term(2)), constant());
      default: return int_lt(card(set_term(2)), constant());
    }
  }

  Formula atom() {
    if (opt_.pure_ba) return ba_atom();
    switch (pick(0, 6)) {
      case 0: return ba_atom();
      case 1: return int_eq(card(set_term(2)), int_term());
      case 2: return int_lt(int_term(), int_term());
      case 3: return int_eq(int_term(), int_term());
      case 4: return int_lt(card(set_term(2)), card(set_term(2)));
      case 5: return dvd(pick(2, std::max(2, opt_.max_const)), int_term());
      default: return int_ge(int_term(), card(set_term(1)));
    }
  }

  Formula matrix(int depth) {
    if (depth <= 1 || coin(0.3)) return atom();
    switch (pick(0, 5)) {
      case 0:
      case 1: return conj2(matrix(depth - 1), matrix(depth - 1));
      case 2:
      case 3: return disj2(matrix(depth - 1), matrix(depth - 1));
      case 4: return neg(matrix(depth - 1));
      default: return coin(0.5) ? implies(matrix(depth - 1), matrix(depth - 1))
                                : iff(matrix(depth - 1), matrix(depth - 1));
    }
  }

  std::mt19937_64 rng_;
  CorpusOptions opt_;
  std::vector<std::string> sets_;
  std::vector<std::string> ints_;
};

}  // namespace bapa::testing
