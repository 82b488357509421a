#include "bapa/presburger.hpp"

#include "bapa/detail/qe.hpp"
#include "bapa/normalizer.hpp"
#include "bapa/text_format.hpp"

namespace bapa {

std::string_view verdict_name(Verdict v) { return v == Verdict::Valid ? "valid" : "invalid"; }

namespace {

bool int_pa(const IntTerm& t) {
  switch (t->kind) {
    case IntKind::Card: return false;
    case IntKind::Var:
    case IntKind::Const:
    case IntKind::MaxCard: return true;
    case IntKind::Mul: return int_pa(t->lhs);
    default: return int_pa(t->lhs) && int_pa(t->rhs);
  }
}

}  // namespace

bool is_pa_formula(const Formula& f) {
  switch (f->kind) {
    case FKind::SetEq:
    case FKind::SubsetEq:
    case FKind::Fin:
    case FKind::FinU: return false;
    case FKind::IntEq:
    case FKind::IntLt: return int_pa(f->t1) && int_pa(f->t2);
    case FKind::Dvd: return int_pa(f->t1);
    case FKind::Exists:
    case FKind::Forall:
      if (f->sort == Sort::Set) return false;
      break;
    default: break;
  }
  for (const auto& k : f->kids)
    if (!is_pa_formula(k)) return false;
  return true;
}

namespace {

void require_pa(const Formula& f) {
  if (!is_pa_formula(f))
    throw ContractError("not a Presburger formula (set terms, card, fin or finU present)");
}

Formula norm_lit(const Formula& f, bool split) {
  bool negated = f->kind == FKind::Not;
  const Formula& a = negated ? f->kids[0] : f;
  switch (a->kind) {
    case FKind::IntLt:
      if (!negated) return a;
      return int_lt(a->t2, int_add(a->t1, int_const(1)));
    case FKind::IntEq:
      if (negated) return disj({int_lt(a->t1, a->t2), int_lt(a->t2, a->t1)});
      if (!split) return a;
      return conj({int_lt(a->t1, int_add(a->t2, int_const(1))),
                   int_lt(a->t2, int_add(a->t1, int_const(1)))});
    case FKind::Dvd: {
      if (!negated) return a;
      std::vector<Formula> alts;
      for (BigInt i = 1; i < a->divisor; ++i) alts.push_back(dvd(a->divisor, int_add(a->t1, int_const(i))));
      return disj(std::move(alts));
    }
    default: return f;
  }
}

Formula norm_rec(const Formula& f, bool split) {
  if (f->is_atom() || f->kind == FKind::Not) return norm_lit(f, split);
  std::vector<Formula> kids;
  for (const auto& k : f->kids) kids.push_back(norm_rec(k, split));
  return with_kids(f, std::move(kids));
}

}  // namespace

Formula normalize_atoms(const Formula& f, bool split_equalities) {
  require_pa(f);
  return norm_rec(to_nnf(f), split_equalities);
}

Formula pa_eliminate_exists(const std::vector<Formula>& conj_lits, const std::string& x) {
  pa::VarTable vars;
  pa::Converter conv(vars);
  pa::VarId xv = vars.intern(x);
  pa::Conj lits;
  for (const auto& f : conj_lits) {
    require_pa(f);
    if (!quantifier_free(f)) throw ContractError("pa_eliminate_exists expects literals");
    pa::Tree t = conv.to_tree(f);
    if (t->kind == pa::Node::Kind::True) continue;
    if (t->kind == pa::Node::Kind::False) return f_false();
    if (t->kind != pa::Node::Kind::Lit)
      throw ContractError("pa_eliminate_exists expects literals, got " + to_text(f));
    if (!t->contains(xv))
      throw ContractError("variable '" + x + "' does not occur in every literal; hoist it first");
    lits.push_back(t);
  }
  return conv.to_formula(pa::elim_conj(xv, lits));
}

Formula pa_qe(const Formula& f) {
  require_pa(f);
  pa::VarTable vars;
  pa::Converter conv(vars);
  return conv.to_formula(conv.to_tree(f));
}

Verdict pa_decide(const Formula& f) {
  require_pa(f);
  std::vector<std::string> fv;
  for (const auto& [n, s] : free_vars(f)) fv.push_back(n);
  if (contains_maxc(f)) fv.push_back("MAXC");
  if (!fv.empty()) throw FreeVariableError(fv);
  pa::VarTable vars;
  pa::Converter conv(vars);
  pa::Tree t = conv.to_tree(f);
  if (t->kind == pa::Node::Kind::True) return Verdict::Valid;
  if (t->kind == pa::Node::Kind::False) return Verdict::Invalid;
  throw ContractError("quantifier elimination left a non-ground residue");
}

bool pa_eval(const Formula& f, const Env& env) {
  require_pa(f);
  pa::VarTable vars;
  pa::Converter conv(vars);
  pa::Tree t = conv.to_tree(f);
  return pa::eval(t, [&](pa::VarId v) -> BigInt {
    const std::string& n = vars.name(v);
    auto it = env.find(n);
    if (it == env.end()) throw Error("pa_eval: missing binding for '" + n + "'");
    return it->second;
  });
}

}  // namespace bapa
