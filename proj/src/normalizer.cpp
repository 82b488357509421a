#include "bapa/normalizer.hpp"

#include <optional>

namespace bapa {

// ---------------------------------------------------------------------------
// NNF

namespace {

void push_flat(std::vector<Formula>& out, const Formula& f, FKind k) {
  if (f->kind == k) {
    for (const auto& c : f->kids) out.push_back(c);
  } else {
    out.push_back(f);
  }
}

Formula mk_nary(FKind k, const std::vector<Formula>& parts) {
  std::vector<Formula> kids;
  for (const auto& p : parts) push_flat(kids, p, k);
  return k == FKind::And ? conj(std::move(kids)) : disj(std::move(kids));
}

Formula nnf(const Formula& f, bool pos) {
  switch (f->kind) {
    case FKind::True: return pos ? f : f_false();
    case FKind::False: return pos ? f : f_true();
    case FKind::Not: return nnf(f->kids[0], !pos);
    case FKind::And:
    case FKind::Or: {
      FKind k = (f->kind == FKind::And) == pos ? FKind::And : FKind::Or;
      std::vector<Formula> parts;
      for (const auto& c : f->kids) parts.push_back(nnf(c, pos));
      return mk_nary(k, parts);
    }
    case FKind::Implies: {
      const auto& a = f->kids[0];
      const auto& b = f->kids[1];
      if (pos) return mk_nary(FKind::Or, {nnf(a, false), nnf(b, true)});
      return mk_nary(FKind::And, {nnf(a, true), nnf(b, false)});
    }
    case FKind::Iff: {
      const auto& a = f->kids[0];
      const auto& b = f->kids[1];
      if (pos)
        return mk_nary(FKind::And, {mk_nary(FKind::Or, {nnf(a, false), nnf(b, true)}),
                                    mk_nary(FKind::Or, {nnf(b, false), nnf(a, true)})});
      return mk_nary(FKind::Or, {mk_nary(FKind::And, {nnf(a, true), nnf(b, false)}),
                                 mk_nary(FKind::And, {nnf(b, true), nnf(a, false)})});
    }
    case FKind::Exists:
    case FKind::Forall: {
      FKind q = pos ? f->kind : (f->kind == FKind::Exists ? FKind::Forall : FKind::Exists);
      return quantify(q, f->name, f->sort, nnf(f->body(), pos), f->nonneg, f->depth);
    }
    default: return pos ? f : neg(f);
  }
}

}  // namespace

Formula to_nnf(const Formula& f) { return nnf(f, true); }

// ---------------------------------------------------------------------------
// Prenex

Formula PrenexForm::to_formula() const {
  Formula f = matrix;
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    f = quantify(it->quant, it->name, it->sort, f, it->nonneg, it->depth);
  return f;
}

namespace {

struct PrenexState {
  std::set<std::string> used;
  std::set<std::string> avoid;
  std::vector<Binder> prefix;
};

Formula prenex_rec(const Formula& f, std::map<std::string, Replacement>& ren, PrenexState& st) {
  if (f->is_atom()) return ren.empty() ? f : substitute_all(f, ren);
  if (f->kind == FKind::Not) return neg(prenex_rec(f->kids[0], ren, st));
  if (f->is_quantifier()) {
    std::string name = f->name;
    if (st.used.count(name)) {
      name = fresh(name, st.avoid);
    }
    st.used.insert(name);
    st.avoid.insert(name);
    st.prefix.push_back({f->kind, name, f->sort, f->nonneg, f->depth});
    std::optional<Replacement> saved;
    if (auto it = ren.find(f->name); it != ren.end()) saved = it->second;
    if (name != f->name) {
      switch (f->sort) {
        case Sort::Set: ren[f->name] = set_var(name); break;
        case Sort::Int: ren[f->name] = int_var(name); break;
        case Sort::Prop: ren[f->name] = prop_var(name); break;
      }
    } else {
      ren.erase(f->name);
    }
    Formula body = prenex_rec(f->body(), ren, st);
    if (saved) ren[f->name] = *saved;
    else ren.erase(f->name);
    return body;
  }
  std::vector<Formula> kids;
  for (const auto& k : f->kids) kids.push_back(prenex_rec(k, ren, st));
  return with_kids(f, std::move(kids));
}

}  // namespace

PrenexForm to_prenex(const Formula& f, const std::set<std::string>& avoid) {
  Formula g = to_nnf(f);
  PrenexState st;
  for (const auto& [n, s] : free_vars(g)) st.used.insert(n);
  st.used.insert(avoid.begin(), avoid.end());
  st.avoid = st.used;
  collect_names(g, st.avoid);
  std::map<std::string, Replacement> ren;
  PrenexForm out;
  out.matrix = prenex_rec(g, ren, st);
  out.prefix = std::move(st.prefix);
  return out;
}

// ---------------------------------------------------------------------------
// Purification

namespace {

bool int_has_card(const IntTerm& t) {
  switch (t->kind) {
    case IntKind::Card: return true;
    case IntKind::Var:
    case IntKind::Const:
    case IntKind::MaxCard: return false;
    case IntKind::Mul: return int_has_card(t->lhs);
    default: return int_has_card(t->lhs) || int_has_card(t->rhs);
  }
}

Formula subset_atom(const SetTerm& a, const SetTerm& b) {
  return int_eq(card(set_inter(a, set_compl(b))), int_const(0));
}

}  // namespace

Formula purify_atoms(const Formula& f) {
  switch (f->kind) {
    case FKind::SubsetEq: return subset_atom(f->s1, f->s2);
    case FKind::SetEq: return conj({subset_atom(f->s1, f->s2), subset_atom(f->s2, f->s1)});
    case FKind::IntEq:
      if (!int_has_card(f->t1) && int_has_card(f->t2)) return int_eq(f->t2, f->t1);
      return f;
    default: break;
  }
  if (f->is_atom()) return f;
  std::vector<Formula> kids;
  for (const auto& k : f->kids) kids.push_back(purify_atoms(k));
  return with_kids(f, std::move(kids));
}

// ---------------------------------------------------------------------------
// Constant simplification

SetTerm simplify_set(const SetTerm& s) {
  switch (s->kind) {
    case SetKind::Var:
    case SetKind::Empty:
    case SetKind::Univ: return s;
    case SetKind::Compl: {
      SetTerm a = simplify_set(s->lhs);
      if (a->kind == SetKind::Empty) return set_univ();
      if (a->kind == SetKind::Univ) return set_empty();
      return a == s->lhs ? s : set_compl(a);
    }
    default: break;
  }
  SetTerm a = simplify_set(s->lhs);
  SetTerm b = simplify_set(s->rhs);
  if (s->kind == SetKind::Union) {
    if (a->kind == SetKind::Univ || b->kind == SetKind::Univ) return set_univ();
    if (a->kind == SetKind::Empty) return b;
    if (b->kind == SetKind::Empty) return a;
    return a == s->lhs && b == s->rhs ? s : set_union(a, b);
  }
  if (a->kind == SetKind::Empty || b->kind == SetKind::Empty) return set_empty();
  if (a->kind == SetKind::Univ) return b;
  if (b->kind == SetKind::Univ) return a;
  return a == s->lhs && b == s->rhs ? s : set_inter(a, b);
}

namespace {

IntTerm simplify_int(const IntTerm& t) {
  switch (t->kind) {
    case IntKind::Var:
    case IntKind::Const:
    case IntKind::MaxCard: return t;
    case IntKind::Card: {
      SetTerm s = simplify_set(t->set);
      if (s->kind == SetKind::Empty) return int_const(0);
      return s == t->set ? t : card(s);
    }
    case IntKind::Mul: {
      IntTerm a = simplify_int(t->lhs);
      return a == t->lhs ? t : int_mul(t->value, a);
    }
    default: {
      IntTerm a = simplify_int(t->lhs);
      IntTerm b = simplify_int(t->rhs);
      if (a == t->lhs && b == t->rhs) return t;
      return t->kind == IntKind::Add ? int_add(a, b) : int_sub(a, b);
    }
  }
}

std::optional<BigInt> ground_value(const IntTerm& t) {
  switch (t->kind) {
    case IntKind::Const: return t->value;
    case IntKind::Var:
    case IntKind::MaxCard:
    case IntKind::Card: return std::nullopt;
    case IntKind::Mul: {
      auto a = ground_value(t->lhs);
      if (!a) return std::nullopt;
      return BigInt(t->value * *a);
    }
    default: {
      auto a = ground_value(t->lhs);
      if (!a) return std::nullopt;
      auto b = ground_value(t->rhs);
      if (!b) return std::nullopt;
      return t->kind == IntKind::Add ? BigInt(*a + *b) : BigInt(*a - *b);
    }
  }
}

Formula simplify_atom(const Formula& f) {
  switch (f->kind) {
    case FKind::Fin: {
      SetTerm s = simplify_set(f->s1);
      if (s->kind == SetKind::Empty) return f_true();
      return s == f->s1 ? f : fin(s);
    }
    case FKind::SetEq:
    case FKind::SubsetEq: {
      SetTerm a = simplify_set(f->s1);
      SetTerm b = simplify_set(f->s2);
      if (a == f->s1 && b == f->s2) return f;
      return f->kind == FKind::SetEq ? set_eq(a, b) : subset_eq(a, b);
    }
    case FKind::IntEq:
    case FKind::IntLt: {
      IntTerm a = simplify_int(f->t1);
      IntTerm b = simplify_int(f->t2);
      auto va = ground_value(a);
      auto vb = ground_value(b);
      if (va && vb) return f_bool(f->kind == FKind::IntEq ? *va == *vb : *va < *vb);
      if (a == f->t1 && b == f->t2) return f;
      return f->kind == FKind::IntEq ? int_eq(a, b) : int_lt(a, b);
    }
    case FKind::Dvd: {
      IntTerm a = simplify_int(f->t1);
      if (auto v = ground_value(a)) {
        BigInt r;
        mpz_fdiv_r(r.get_mpz_t(), v->get_mpz_t(), f->divisor.get_mpz_t());
        return f_bool(r == 0);
      }
      return a == f->t1 ? f : dvd(f->divisor, a);
    }
    default: return f;
  }
}

bool is_const(const Formula& f, bool v) { return f->kind == (v ? FKind::True : FKind::False); }

}  // namespace

Formula simplify_const(const Formula& f) {
  if (f->is_atom()) return simplify_atom(f);
  switch (f->kind) {
    case FKind::Not: {
      Formula a = simplify_const(f->kids[0]);
      if (a->kind == FKind::True) return f_false();
      if (a->kind == FKind::False) return f_true();
      return a == f->kids[0] ? f : neg(a);
    }
    case FKind::And:
    case FKind::Or: {
      bool is_and = f->kind == FKind::And;
      std::vector<Formula> kids;
      for (const auto& k : f->kids) {
        Formula a = simplify_const(k);
        if (is_const(a, !is_and)) return f_bool(!is_and);
        if (is_const(a, is_and)) continue;
        push_flat(kids, a, f->kind);
      }
      return is_and ? conj(std::move(kids)) : disj(std::move(kids));
    }
    case FKind::Implies: {
      Formula a = simplify_const(f->kids[0]);
      Formula b = simplify_const(f->kids[1]);
      if (is_const(a, false) || is_const(b, true)) return f_true();
      if (is_const(a, true)) return b;
      if (is_const(b, false)) return simplify_const(neg(a));
      return implies(a, b);
    }
    case FKind::Iff: {
      Formula a = simplify_const(f->kids[0]);
      Formula b = simplify_const(f->kids[1]);
      if (is_const(a, true)) return b;
      if (is_const(b, true)) return a;
      if (is_const(a, false)) return simplify_const(neg(b));
      if (is_const(b, false)) return simplify_const(neg(a));
      return iff(a, b);
    }
    default: {
      Formula body = simplify_const(f->body());
      if (body->kind == FKind::True || body->kind == FKind::False) return body;
      return body == f->body() ? f : quantify(f->kind, f->name, f->sort, body, f->nonneg, f->depth);
    }
  }
}

}  // namespace bapa
