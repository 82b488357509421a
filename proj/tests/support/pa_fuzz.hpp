#pragma once

// Presburger formulas whose quantifiers carry explicit range guards -B <= x <= B, so
// enumeration of [-B, B] is an exact reference semantics.

#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bapa/formula.hpp"

namespace bapa::testing {

using IntEnv = std::map<std::string, long>;

inline long eval_term(const IntTerm& t, const IntEnv& env) {
  switch (t->kind) {
    case IntKind::Var: return env.at(t->name);
    case IntKind::Const: return t->value.get_si();
    case IntKind::Add: return eval_term(t->lhs, env) + eval_term(t->rhs, env);
    case IntKind::Sub: return eval_term(t->lhs, env) - eval_term(t->rhs, env);
    case IntKind::Mul: return t->value.get_si() * eval_term(t->lhs, env);
    default: throw std::logic_error("brute_eval: not a PA term");
  }
}

inline long floor_mod(long a, long m) { return ((a % m) + m) % m; }

inline bool brute_eval(const Formula& f, IntEnv& env, long bound) {
  switch (f->kind) {
    case FKind::True: return true;
    case FKind::False: return false;
    case FKind::IntEq: return eval_term(f->t1, env) == eval_term(f->t2, env);
    case FKind::IntLt: return eval_term(f->t1, env) < eval_term(f->t2, env);
    case FKind::Dvd: return floor_mod(eval_term(f->t1, env), f->divisor.get_si()) == 0;
    case FKind::Not: return !brute_eval(f->kids[0], env, bound);
    case FKind::And:
      for (const auto& k : f->kids)
        if (!brute_eval(k, env, bound)) return false;
      return true;
    case FKind::Or:
      for (const auto& k : f->kids)
        if (brute_eval(k, env, bound)) return true;
      return false;
    case FKind::Implies: return !brute_eval(f->kids[0], env, bound) || brute_eval(f->kids[1], env, bound);
    case FKind::Iff: return brute_eval(f->kids[0], env, bound) == brute_eval(f->kids[1], env, bound);
    case FKind::Exists:
    case FKind::Forall: {
      bool ex = f->kind == FKind::Exists;
      auto saved = env.find(f->name) != env.end() ? std::optional<long>(env[f->name]) : std::nullopt;
      bool result = !ex;
      for (long v = f->nonneg ? 0 : -bound; v <= bound; ++v) {
        env[f->name] = v;
        if (brute_eval(f->kids[0], env, bound) == ex) {
          result = ex;
          break;
        }
      }
      if (saved) env[f->name] = *saved;
      else env.erase(f->name);
      return result;
    }
    default: throw std::logic_error("brute_eval: not a PA formula");
  }
}

struct PaCase {
  Formula formula;
  std::vector<std::string> free;
  long bound;
};

class PaFuzzer {
 public:
  explicit PaFuzzer(unsigned seed, long bound = 4) : rng_(seed), bound_(bound) {}

  PaCase next() {
    static const char* kFree[] = {"a", "b"};
    vars_.clear();
    int nfree = pick(0, 2);
    for (int i = 0; i < nfree; ++i) vars_.push_back(kFree[i]);
    quantifiers_left_ = pick(1, 3);
    next_bound_ = 0;
    Formula f = formula(pick(2, 4));
    PaCase c{f, {}, bound_};
    for (const auto& [n, s] : free_vars(f)) c.free.push_back(n);
    return c;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  IntTerm term() {
    IntTerm t = int_const(pick(-3, 3));
    if (vars_.empty()) return t;
    int n = pick(1, 2);
    for (int i = 0; i < n; ++i) {
      const std::string& v = vars_[static_cast<std::size_t>(pick(0, static_cast<int>(vars_.size()) - 1))];
      int c = pick(-3, 3);
      if (c == 0) continue;
      t = int_add(c == 1 ? int_var(v) : int_mul(c, int_var(v)), t);
    }
    return t;
  }

  Formula atom() {
    switch (pick(0, 3)) {
      case 0:
      case 1: return int_lt(term(), term());
      case 2: return int_eq(term(), term());
      default: return dvd(pick(2, 4), term());
    }
  }

  Formula formula(int depth) {
    if (quantifiers_left_ > 0 && coin(0.4)) {
      --quantifiers_left_;
      std::string x = "x" + std::to_string(next_bound_++);
      vars_.push_back(x);
      Formula body = formula(std::max(1, depth - 1));
      vars_.pop_back();
      Formula guard = conj2(int_le(int_const(-bound_), int_var(x)), int_le(int_var(x), int_const(bound_)));
      return coin(0.5) ? exists(x, Sort::Int, conj2(guard, body))
                       : forall(x, Sort::Int, implies(guard, body));
    }
    if (depth <= 1 || coin(0.25)) return atom();
    switch (pick(0, 4)) {
      case 0: return conj2(formula(depth - 1), formula(depth - 1));
      case 1: return disj2(formula(depth - 1), formula(depth - 1));
      case 2: return neg(formula(depth - 1));
      case 3: return implies(formula(depth - 1), formula(depth - 1));
      default: return iff(formula(depth - 1), formula(depth - 1));
    }
  }

  std::mt19937_64 rng_;
  long bound_;
  std::vector<std::string> vars_;
  int quantifiers_left_ = 0;
  int next_bound_ = 0;
};

}  // namespace bapa::testing
