// Bounded evaluation of alpha images of pure Boolean-algebra sentences. The truth of
// the residual formula after eliminating r set variables depends on each free
// partition variable v only through min(v, 2^(r-1)). Each block enumerates the
// compositions of its parents exactly and stores the children clamped.

#include <algorithm>
#include <functional>

#include "bapa/presburger.hpp"
#include "bapa/text_format.hpp"

namespace bapa {

namespace {

struct Binding {
  std::string name;
  BigInt value;
};

BigInt pow2(int e) {
  BigInt c = 1;
  mpz_mul_2exp(c.get_mpz_t(), c.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
  return c;
}

class BoundedEvaluator {
 public:
  BoundedEvaluator(BigInt maxc, BoundedEvalStats* stats) : maxc_(std::move(maxc)), stats_(stats) {}

  bool run(const Formula& f) { return eval(f); }

 private:
  const Binding* find(const std::string& n) const {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it)
      if (it->name == n) return &*it;
    return nullptr;
  }

  BigInt term(const IntTerm& t) const {
    switch (t->kind) {
      case IntKind::Const: return t->value;
      case IntKind::MaxCard: return maxc_;
      case IntKind::Var: {
        const Binding* b = find(t->name);
        if (!b) throw Error("pa_eval_bounded: unbound variable '" + t->name + "'");
        return b->value;
      }
      case IntKind::Mul: return t->value * term(t->lhs);
      case IntKind::Add: return term(t->lhs) + term(t->rhs);
      case IntKind::Sub: return term(t->lhs) - term(t->rhs);
      case IntKind::Card: break;
    }
    throw ContractError("pa_eval_bounded expects a Presburger formula");
  }

  bool atom(const Formula& f) {
    if (stats_) ++stats_->evaluations;
    switch (f->kind) {
      case FKind::True: return true;
      case FKind::False: return false;
      case FKind::IntEq: return term(f->t1) == term(f->t2);
      case FKind::IntLt: return term(f->t1) < term(f->t2);
      case FKind::Dvd: {
        BigInt a = term(f->t1);
        return mpz_divisible_p(a.get_mpz_t(), f->divisor.get_mpz_t()) != 0;
      }
      default:
        throw ContractError("pa_eval_bounded: unsupported atom " + to_text(f));
    }
  }

  bool eval(const Formula& f) {
    switch (f->kind) {
      case FKind::Not: return !eval(f->kids[0]);
      case FKind::And:
        for (const auto& k : f->kids)
          if (!eval(k)) return false;
        return true;
      case FKind::Or:
        for (const auto& k : f->kids)
          if (eval(k)) return true;
        return false;
      case FKind::Implies: return !eval(f->kids[0]) || eval(f->kids[1]);
      case FKind::Iff: return eval(f->kids[0]) == eval(f->kids[1]);
      case FKind::Exists:
      case FKind::Forall: return block(f);
      default: return atom(f);
    }
  }

  // parent = sum of block variables, where parent is MAXC or a variable bound outside.
  static bool is_guard(const Formula& g, const std::vector<std::string>& vars) {
    if (g->kind != FKind::IntEq) return false;
    auto outer = [&](const IntTerm& t) {
      return t->kind == IntKind::MaxCard ||
             (t->kind == IntKind::Var &&
              std::find(vars.begin(), vars.end(), t->name) == vars.end());
    };
    const IntTerm& side = outer(g->t1) ? g->t2 : outer(g->t2) ? g->t1 : nullptr;
    if (!side) return false;
    for (const auto& [n, s] : free_vars(int_eq(side, int_const(0))))
      if (std::find(vars.begin(), vars.end(), n) == vars.end()) return false;
    return true;
  }

  bool block(const Formula& f) {
    if (f->sort != Sort::Int || !f->nonneg || f->depth <= 0)
      throw ContractError(
          "pa_eval_bounded needs depth-annotated partition blocks; translate the sentence with "
          "alpha_translate first");
    std::vector<std::string> vars;
    Formula body = f;
    while (body->kind == f->kind && body->sort == Sort::Int && body->nonneg &&
           body->depth == f->depth) {
      vars.push_back(body->name);
      body = body->body();
    }
    bool is_ex = f->kind == FKind::Exists;
    std::vector<Formula> guards, rest;
    Formula residual = body;
    auto split = [&](const Formula& defs) {
      std::vector<Formula> parts = defs->kind == FKind::And ? defs->kids : std::vector<Formula>{defs};
      for (const auto& k : parts) (is_guard(k, vars) ? guards : rest).push_back(k);
    };
    if (is_ex) {
      split(body);
      residual = conj(rest);
    } else if (body->kind == FKind::Implies) {
      split(body->kids[0]);
      residual = rest.empty() ? body->kids[1] : implies(conj(rest), body->kids[1]);
    }
    std::vector<std::vector<std::string>> guard_vars;
    for (const auto& g : guards) {
      std::vector<std::string> s;
      for (const auto& [n, sort] : free_vars(g))
        if (std::find(vars.begin(), vars.end(), n) != vars.end()) s.push_back(n);
      guard_vars.push_back(std::move(s));
    }

    BigInt top = std::min(pow2(f->depth), maxc_);
    BigInt clamp = pow2(f->depth - 1);
    if (stats_) stats_->peak_values = std::max(stats_->peak_values, std::size_t(top.get_ui() + 1));
    std::size_t base = env_.size();

    // Depth-first enumeration of exact values; a guard is checked once all of its
    // block variables are bound.
    std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
      if (i == vars.size()) {
        std::vector<BigInt> raw;
        for (std::size_t j = base; j < env_.size(); ++j) {
          raw.push_back(env_[j].value);
          env_[j].value = std::min(env_[j].value, clamp);
        }
        bool v = eval(residual);
        for (std::size_t j = base; j < env_.size(); ++j) env_[j].value = raw[j - base];
        return is_ex ? v : !v;
      }
      for (BigInt v = 0; v <= top; ++v) {
        env_.push_back({vars[i], v});
        if (stats_) stats_->peak_frames = std::max(stats_->peak_frames, env_.size());
        bool feasible = true;
        for (std::size_t g = 0; g < guards.size() && feasible; ++g) {
          const auto& gv = guard_vars[g];
          if (std::find(gv.begin(), gv.end(), vars[i]) == gv.end()) continue;
          bool ready = std::all_of(gv.begin(), gv.end(),
                                   [&](const std::string& n) { return find(n) != nullptr; });
          if (ready) feasible = atom(guards[g]);
        }
        bool decided = feasible && go(i + 1);
        env_.pop_back();
        if (decided) return true;
      }
      return false;
    };
    bool decided = go(0);
    env_.resize(base);
    return is_ex ? decided : !decided;
  }

  BigInt maxc_;
  BoundedEvalStats* stats_;
  std::vector<Binding> env_;
};

int max_depth(const Formula& f) {
  int d = f->is_quantifier() ? f->depth : 0;
  for (const auto& k : f->kids) d = std::max(d, max_depth(k));
  return d;
}

}  // namespace

bool pa_eval_bounded(const Formula& g, const BigInt& maxc, BoundedEvalStats* stats) {
  if (maxc < 0) throw ContractError("pa_eval_bounded: maxc must be non-negative");
  if (!is_pa_formula(g)) throw ContractError("pa_eval_bounded expects a Presburger formula");
  SortMap fv = free_vars(g);
  if (!fv.empty()) {
    std::vector<std::string> names;
    for (const auto& [n, s] : fv) names.push_back(n);
    throw FreeVariableError(names);
  }
  int s = max_depth(g);
  BigInt clamp = 1;
  mpz_mul_2exp(clamp.get_mpz_t(), clamp.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
  BoundedEvalStats local;
  BoundedEvaluator ev(std::min(maxc, clamp), stats ? stats : &local);
  return ev.run(g);
}

}  // namespace bapa
