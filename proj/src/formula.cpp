#include "bapa/formula.hpp"

#include <functional>
#include <optional>

#include "bapa/text_format.hpp"

namespace bapa {

std::string_view sort_name(Sort s) {
  switch (s) {
    case Sort::Set: return "set";
    case Sort::Int: return "int";
    case Sort::Prop: return "prop";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Constructors

namespace {

SetTerm mk_set(SetKind k, std::string name = {}, SetTerm l = nullptr, SetTerm r = nullptr) {
  auto n = std::make_shared<SetTermNode>();
  n->kind = k;
  n->name = std::move(name);
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

IntTerm mk_int(IntKind k) {
  auto n = std::make_shared<IntTermNode>();
  n->kind = k;
  return n;
}

std::shared_ptr<FormulaNode> mk_f(FKind k) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = k;
  return n;
}

}  // namespace

SetTerm set_var(std::string name) { return mk_set(SetKind::Var, std::move(name)); }
SetTerm set_empty() {
  static const SetTerm e = mk_set(SetKind::Empty);
  return e;
}
SetTerm set_univ() {
  static const SetTerm u = mk_set(SetKind::Univ);
  return u;
}
SetTerm set_union(SetTerm a, SetTerm b) {
  return mk_set(SetKind::Union, {}, std::move(a), std::move(b));
}
SetTerm set_inter(SetTerm a, SetTerm b) {
  return mk_set(SetKind::Inter, {}, std::move(a), std::move(b));
}
SetTerm set_compl(SetTerm a) { return mk_set(SetKind::Compl, {}, std::move(a)); }

IntTerm int_var(std::string name) {
  auto n = std::make_shared<IntTermNode>();
  n->kind = IntKind::Var;
  n->name = std::move(name);
  return n;
}
IntTerm int_const(BigInt v) {
  auto n = std::make_shared<IntTermNode>();
  n->kind = IntKind::Const;
  n->value = std::move(v);
  return n;
}
IntTerm int_maxc() {
  static const IntTerm m = mk_int(IntKind::MaxCard);
  return m;
}
IntTerm int_add(IntTerm a, IntTerm b) {
  auto n = std::make_shared<IntTermNode>();
  n->kind = IntKind::Add;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}
IntTerm int_sub(IntTerm a, IntTerm b) {
  auto n = std::make_shared<IntTermNode>();
  n->kind = IntKind::Sub;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}
IntTerm int_mul(BigInt c, IntTerm t) {
  auto n = std::make_shared<IntTermNode>();
  n->kind = IntKind::Mul;
  n->value = std::move(c);
  n->lhs = std::move(t);
  return n;
}
IntTerm card(SetTerm s) {
  auto n = std::make_shared<IntTermNode>();
  n->kind = IntKind::Card;
  n->set = std::move(s);
  return n;
}
IntTerm int_sum(const std::vector<IntTerm>& terms) {
  if (terms.empty()) return int_const(0);
  IntTerm acc = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) acc = int_add(acc, terms[i]);
  return acc;
}

bool FormulaNode::is_atom() const {
  switch (kind) {
    case FKind::Not:
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
    case FKind::Iff:
    case FKind::Exists:
    case FKind::Forall:
      return false;
    default:
      return true;
  }
}

Formula f_true() {
  static const Formula t = mk_f(FKind::True);
  return t;
}
Formula f_false() {
  static const Formula f = mk_f(FKind::False);
  return f;
}
Formula f_bool(bool b) { return b ? f_true() : f_false(); }
Formula prop_var(std::string name) {
  auto n = mk_f(FKind::PropVar);
  n->name = std::move(name);
  return n;
}
Formula fin_u() {
  static const Formula f = mk_f(FKind::FinU);
  return f;
}
Formula fin(SetTerm s) {
  auto n = mk_f(FKind::Fin);
  n->s1 = std::move(s);
  return n;
}
Formula set_eq(SetTerm a, SetTerm b) {
  auto n = mk_f(FKind::SetEq);
  n->s1 = std::move(a);
  n->s2 = std::move(b);
  return n;
}
Formula subset_eq(SetTerm a, SetTerm b) {
  auto n = mk_f(FKind::SubsetEq);
  n->s1 = std::move(a);
  n->s2 = std::move(b);
  return n;
}
Formula int_eq(IntTerm a, IntTerm b) {
  auto n = mk_f(FKind::IntEq);
  n->t1 = std::move(a);
  n->t2 = std::move(b);
  return n;
}
Formula int_lt(IntTerm a, IntTerm b) {
  auto n = mk_f(FKind::IntLt);
  n->t1 = std::move(a);
  n->t2 = std::move(b);
  return n;
}
Formula int_le(IntTerm a, IntTerm b) { return neg(int_lt(std::move(b), std::move(a))); }
Formula int_gt(IntTerm a, IntTerm b) { return int_lt(std::move(b), std::move(a)); }
Formula int_ge(IntTerm a, IntTerm b) { return neg(int_lt(std::move(a), std::move(b))); }
Formula dvd(BigInt divisor, IntTerm t) {
  if (sgn(divisor) <= 0) throw ContractError("divisor must be positive");
  auto n = mk_f(FKind::Dvd);
  n->divisor = std::move(divisor);
  n->t1 = std::move(t);
  return n;
}
Formula neg(Formula f) {
  auto n = mk_f(FKind::Not);
  n->kids.push_back(std::move(f));
  return n;
}
Formula conj(std::vector<Formula> kids) {
  if (kids.empty()) return f_true();
  if (kids.size() == 1) return kids.front();
  auto n = mk_f(FKind::And);
  n->kids = std::move(kids);
  return n;
}
Formula disj(std::vector<Formula> kids) {
  if (kids.empty()) return f_false();
  if (kids.size() == 1) return kids.front();
  auto n = mk_f(FKind::Or);
  n->kids = std::move(kids);
  return n;
}
Formula conj2(Formula a, Formula b) { return conj({std::move(a), std::move(b)}); }
Formula disj2(Formula a, Formula b) { return disj({std::move(a), std::move(b)}); }
Formula implies(Formula a, Formula b) {
  auto n = mk_f(FKind::Implies);
  n->kids = {std::move(a), std::move(b)};
  return n;
}
Formula iff(Formula a, Formula b) {
  auto n = mk_f(FKind::Iff);
  n->kids = {std::move(a), std::move(b)};
  return n;
}
Formula quantify(FKind q, std::string name, Sort sort, Formula body, bool nonneg, int depth) {
  if (q != FKind::Exists && q != FKind::Forall) throw ContractError("quantify: not a quantifier");
  if (nonneg && sort != Sort::Int) throw ContractError("quantify: nonneg guard on non-int");
  auto n = mk_f(q);
  n->name = std::move(name);
  n->sort = sort;
  n->nonneg = nonneg;
  n->depth = depth;
  n->kids.push_back(std::move(body));
  return n;
}
Formula exists(std::string name, Sort sort, Formula body, bool nonneg, int depth) {
  return quantify(FKind::Exists, std::move(name), sort, std::move(body), nonneg, depth);
}
Formula forall(std::string name, Sort sort, Formula body, bool nonneg, int depth) {
  return quantify(FKind::Forall, std::move(name), sort, std::move(body), nonneg, depth);
}

Formula with_kids(const Formula& f, std::vector<Formula> kids) {
  auto n = std::make_shared<FormulaNode>(*f);
  n->kids = std::move(kids);
  return n;
}

// ---------------------------------------------------------------------------
// Equality

bool equal(const SetTerm& a, const SetTerm& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case SetKind::Var: return a->name == b->name;
    case SetKind::Empty:
    case SetKind::Univ: return true;
    case SetKind::Compl: return equal(a->lhs, b->lhs);
    default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
}

bool equal(const IntTerm& a, const IntTerm& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case IntKind::Var: return a->name == b->name;
    case IntKind::Const: return a->value == b->value;
    case IntKind::MaxCard: return true;
    case IntKind::Mul: return a->value == b->value && equal(a->lhs, b->lhs);
    case IntKind::Card: return equal(a->set, b->set);
    default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
}

bool equal(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case FKind::True:
    case FKind::False:
    case FKind::FinU: return true;
    case FKind::PropVar: return a->name == b->name;
    case FKind::Fin: return equal(a->s1, b->s1);
    case FKind::SetEq:
    case FKind::SubsetEq: return equal(a->s1, b->s1) && equal(a->s2, b->s2);
    case FKind::IntEq:
    case FKind::IntLt: return equal(a->t1, b->t1) && equal(a->t2, b->t2);
    case FKind::Dvd: return a->divisor == b->divisor && equal(a->t1, b->t1);
    case FKind::Exists:
    case FKind::Forall:
      if (a->name != b->name || a->sort != b->sort || a->nonneg != b->nonneg) return false;
      break;
    default: break;
  }
  if (a->kids.size() != b->kids.size()) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!equal(a->kids[i], b->kids[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Variables

void collect_set_vars(const SetTerm& s, std::set<std::string>& out) {
  switch (s->kind) {
    case SetKind::Var: out.insert(s->name); break;
    case SetKind::Empty:
    case SetKind::Univ: break;
    case SetKind::Compl: collect_set_vars(s->lhs, out); break;
    default:
      collect_set_vars(s->lhs, out);
      collect_set_vars(s->rhs, out);
  }
}

namespace {

using Visit = std::function<void(const std::string&, Sort)>;

void visit_set(const SetTerm& s, const Visit& v) {
  switch (s->kind) {
    case SetKind::Var: v(s->name, Sort::Set); break;
    case SetKind::Empty:
    case SetKind::Univ: break;
    case SetKind::Compl: visit_set(s->lhs, v); break;
    default:
      visit_set(s->lhs, v);
      visit_set(s->rhs, v);
  }
}

void visit_int(const IntTerm& t, const Visit& v) {
  switch (t->kind) {
    case IntKind::Var: v(t->name, Sort::Int); break;
    case IntKind::Const:
    case IntKind::MaxCard: break;
    case IntKind::Mul: visit_int(t->lhs, v); break;
    case IntKind::Card: visit_set(t->set, v); break;
    default:
      visit_int(t->lhs, v);
      visit_int(t->rhs, v);
  }
}

// Visits variable occurrences of an atom.
void visit_atom(const Formula& f, const Visit& v) {
  switch (f->kind) {
    case FKind::PropVar: v(f->name, Sort::Prop); break;
    case FKind::Fin: visit_set(f->s1, v); break;
    case FKind::SetEq:
    case FKind::SubsetEq:
      visit_set(f->s1, v);
      visit_set(f->s2, v);
      break;
    case FKind::IntEq:
    case FKind::IntLt:
      visit_int(f->t1, v);
      visit_int(f->t2, v);
      break;
    case FKind::Dvd: visit_int(f->t1, v); break;
    default: break;
  }
}

void free_vars_rec(const Formula& f, std::map<std::string, int>& bound, SortMap& out) {
  if (f->is_atom()) {
    visit_atom(f, [&](const std::string& n, Sort s) {
      if (bound.count(n) && bound[n] > 0) return;
      auto [it, inserted] = out.emplace(n, s);
      if (!inserted && it->second != s)
        throw SortError("variable '" + n + "' used as both " + std::string(sort_name(it->second)) +
                        " and " + std::string(sort_name(s)) + " in " + to_text(f));
    });
    return;
  }
  if (f->is_quantifier()) {
    ++bound[f->name];
    free_vars_rec(f->body(), bound, out);
    --bound[f->name];
    return;
  }
  for (const auto& k : f->kids) free_vars_rec(k, bound, out);
}

}  // namespace

SortMap free_vars(const Formula& f) {
  std::map<std::string, int> bound;
  SortMap out;
  free_vars_rec(f, bound, out);
  return out;
}

void collect_names(const Formula& f, std::set<std::string>& out) {
  if (f->is_atom()) {
    visit_atom(f, [&](const std::string& n, Sort) { out.insert(n); });
    return;
  }
  if (f->is_quantifier()) out.insert(f->name);
  for (const auto& k : f->kids) collect_names(k, out);
}

namespace {

bool int_has_maxc(const IntTerm& t) {
  switch (t->kind) {
    case IntKind::MaxCard: return true;
    case IntKind::Var:
    case IntKind::Const:
    case IntKind::Card: return false;
    case IntKind::Mul: return int_has_maxc(t->lhs);
    default: return int_has_maxc(t->lhs) || int_has_maxc(t->rhs);
  }
}

}  // namespace

bool contains_maxc(const Formula& f) {
  switch (f->kind) {
    case FKind::IntEq:
    case FKind::IntLt: return int_has_maxc(f->t1) || int_has_maxc(f->t2);
    case FKind::Dvd: return int_has_maxc(f->t1);
    default: break;
  }
  for (const auto& k : f->kids)
    if (contains_maxc(k)) return true;
  return false;
}

bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

bool quantifier_free(const Formula& f) {
  if (f->is_quantifier()) return false;
  for (const auto& k : f->kids)
    if (!quantifier_free(k)) return false;
  return true;
}

namespace {

void check_rec(const Formula& f, SortMap& env) {
  if (f->is_atom()) {
    visit_atom(f, [&](const std::string& n, Sort s) {
      auto it = env.find(n);
      if (it == env.end()) {
        env.emplace(n, s);
        return;
      }
      if (it->second != s)
        throw SortError("sort mismatch for '" + n + "': expected " +
                        std::string(sort_name(it->second)) + ", used as " +
                        std::string(sort_name(s)) + " in atom " + to_text(f));
    });
    if (f->kind == FKind::Dvd && sgn(f->divisor) <= 0)
      throw SortError("non-positive divisor in atom " + to_text(f));
    return;
  }
  if (f->is_quantifier()) {
    auto saved = env.find(f->name) == env.end() ? std::optional<Sort>{}
                                                : std::optional<Sort>{env[f->name]};
    env[f->name] = f->sort;
    check_rec(f->body(), env);
    if (saved) env[f->name] = *saved;
    else env.erase(f->name);
    return;
  }
  for (const auto& k : f->kids) check_rec(k, env);
}

}  // namespace

void check_sorts(const Formula& f, const SortMap& declared) {
  SortMap env = declared;
  check_rec(f, env);
}

std::string fresh(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (std::size_t i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

// ---------------------------------------------------------------------------
// Substitution

Sort replacement_sort(const Replacement& r) {
  switch (r.index()) {
    case 0: return Sort::Set;
    case 1: return Sort::Int;
    default: return Sort::Prop;
  }
}

SetTerm substitute_set(const SetTerm& s, const std::map<std::string, SetTerm>& subst) {
  switch (s->kind) {
    case SetKind::Var: {
      auto it = subst.find(s->name);
      return it == subst.end() ? s : it->second;
    }
    case SetKind::Empty:
    case SetKind::Univ: return s;
    case SetKind::Compl: {
      auto l = substitute_set(s->lhs, subst);
      return l == s->lhs ? s : set_compl(l);
    }
    default: {
      auto l = substitute_set(s->lhs, subst);
      auto r = substitute_set(s->rhs, subst);
      if (l == s->lhs && r == s->rhs) return s;
      return s->kind == SetKind::Union ? set_union(l, r) : set_inter(l, r);
    }
  }
}

namespace {

using Subst = std::map<std::string, Replacement>;

SetTerm subst_set(const SetTerm& s, const Subst& m) {
  switch (s->kind) {
    case SetKind::Var: {
      auto it = m.find(s->name);
      if (it == m.end()) return s;
      if (it->second.index() != 0)
        throw SortError("sort mismatch substituting for set variable '" + s->name + "'");
      return std::get<SetTerm>(it->second);
    }
    case SetKind::Empty:
    case SetKind::Univ: return s;
    case SetKind::Compl: {
      auto l = subst_set(s->lhs, m);
      return l == s->lhs ? s : set_compl(l);
    }
    default: {
      auto l = subst_set(s->lhs, m);
      auto r = subst_set(s->rhs, m);
      if (l == s->lhs && r == s->rhs) return s;
      return s->kind == SetKind::Union ? set_union(l, r) : set_inter(l, r);
    }
  }
}

}  // namespace

IntTerm substitute_int(const IntTerm& t, const Subst& m) {
  switch (t->kind) {
    case IntKind::Var: {
      auto it = m.find(t->name);
      if (it == m.end()) return t;
      if (it->second.index() != 1)
        throw SortError("sort mismatch substituting for int variable '" + t->name + "'");
      return std::get<IntTerm>(it->second);
    }
    case IntKind::Const:
    case IntKind::MaxCard: return t;
    case IntKind::Mul: {
      auto l = substitute_int(t->lhs, m);
      return l == t->lhs ? t : int_mul(t->value, l);
    }
    case IntKind::Card: {
      auto s = subst_set(t->set, m);
      return s == t->set ? t : card(s);
    }
    default: {
      auto l = substitute_int(t->lhs, m);
      auto r = substitute_int(t->rhs, m);
      if (l == t->lhs && r == t->rhs) return t;
      return t->kind == IntKind::Add ? int_add(l, r) : int_sub(l, r);
    }
  }
}

namespace {

void replacement_names(const Replacement& r, std::set<std::string>& out) {
  switch (r.index()) {
    case 0: collect_set_vars(std::get<SetTerm>(r), out); break;
    case 1: visit_int(std::get<IntTerm>(r), [&](const std::string& n, Sort) { out.insert(n); }); break;
    default:
      for (const auto& [n, s] : free_vars(std::get<Formula>(r))) out.insert(n);
  }
}

bool occurs_free(const Formula& f, const std::string& name) {
  if (f->is_atom()) {
    bool found = false;
    visit_atom(f, [&](const std::string& n, Sort) { found = found || n == name; });
    return found;
  }
  if (f->is_quantifier()) return f->name != name && occurs_free(f->body(), name);
  for (const auto& k : f->kids)
    if (occurs_free(k, name)) return true;
  return false;
}

Formula subst_rec(const Formula& f, const Subst& m) {
  if (m.empty()) return f;
  switch (f->kind) {
    case FKind::True:
    case FKind::False:
    case FKind::FinU: return f;
    case FKind::PropVar: {
      auto it = m.find(f->name);
      if (it == m.end()) return f;
      if (it->second.index() != 2)
        throw SortError("sort mismatch substituting for prop variable '" + f->name + "'");
      return std::get<Formula>(it->second);
    }
    case FKind::Fin: {
      auto s = subst_set(f->s1, m);
      return s == f->s1 ? f : fin(s);
    }
    case FKind::SetEq:
    case FKind::SubsetEq: {
      auto a = subst_set(f->s1, m);
      auto b = subst_set(f->s2, m);
      if (a == f->s1 && b == f->s2) return f;
      return f->kind == FKind::SetEq ? set_eq(a, b) : subset_eq(a, b);
    }
    case FKind::IntEq:
    case FKind::IntLt: {
      auto a = substitute_int(f->t1, m);
      auto b = substitute_int(f->t2, m);
      if (a == f->t1 && b == f->t2) return f;
      return f->kind == FKind::IntEq ? int_eq(a, b) : int_lt(a, b);
    }
    case FKind::Dvd: {
      auto a = substitute_int(f->t1, m);
      return a == f->t1 ? f : dvd(f->divisor, a);
    }
    case FKind::Exists:
    case FKind::Forall: {
      Subst inner = m;
      inner.erase(f->name);
      // Only substitutions that actually reach the body matter.
      for (auto it = inner.begin(); it != inner.end();) {
        if (!occurs_free(f->body(), it->first)) it = inner.erase(it);
        else ++it;
      }
      if (inner.empty()) return f;
      std::set<std::string> repl_names;
      for (const auto& [n, r] : inner) replacement_names(r, repl_names);
      std::string name = f->name;
      if (repl_names.count(name)) {
        std::set<std::string> avoid = repl_names;
        collect_names(f->body(), avoid);
        for (const auto& [n, r] : inner) avoid.insert(n);
        name = fresh(name, avoid);
        switch (f->sort) {
          case Sort::Set: inner[f->name] = set_var(name); break;
          case Sort::Int: inner[f->name] = int_var(name); break;
          case Sort::Prop: inner[f->name] = prop_var(name); break;
        }
      }
      auto body = subst_rec(f->body(), inner);
      if (body == f->body() && name == f->name) return f;
      return quantify(f->kind, name, f->sort, body, f->nonneg, f->depth);
    }
    default: {
      std::vector<Formula> kids;
      kids.reserve(f->kids.size());
      bool changed = false;
      for (const auto& k : f->kids) {
        kids.push_back(subst_rec(k, m));
        changed = changed || kids.back() != k;
      }
      return changed ? with_kids(f, std::move(kids)) : f;
    }
  }
}

}  // namespace

Formula substitute_all(const Formula& f, const Subst& subst) { return subst_rec(f, subst); }

Formula substitute(const Formula& f, const std::string& var, Sort sort, const Replacement& r) {
  if (replacement_sort(r) != sort)
    throw SortError("cannot substitute a " + std::string(sort_name(replacement_sort(r))) +
                    " term for " + std::string(sort_name(sort)) + " variable '" + var + "'");
  auto fv = free_vars(f);
  auto it = fv.find(var);
  if (it != fv.end() && it->second != sort)
    throw SortError("variable '" + var + "' occurs with sort " +
                    std::string(sort_name(it->second)));
  return subst_rec(f, Subst{{var, r}});
}

namespace {

IntTerm maxc_int(const IntTerm& t, const IntTerm& r) {
  switch (t->kind) {
    case IntKind::MaxCard: return r;
    case IntKind::Var:
    case IntKind::Const:
    case IntKind::Card: return t;
    case IntKind::Mul: {
      auto l = maxc_int(t->lhs, r);
      return l == t->lhs ? t : int_mul(t->value, l);
    }
    default: {
      auto l = maxc_int(t->lhs, r);
      auto rr = maxc_int(t->rhs, r);
      if (l == t->lhs && rr == t->rhs) return t;
      return t->kind == IntKind::Add ? int_add(l, rr) : int_sub(l, rr);
    }
  }
}

template <class AtomFn>
Formula map_atoms(const Formula& f, const AtomFn& fn) {
  if (f->is_atom()) return fn(f);
  std::vector<Formula> kids;
  kids.reserve(f->kids.size());
  bool changed = false;
  for (const auto& k : f->kids) {
    kids.push_back(map_atoms(k, fn));
    changed = changed || kids.back() != k;
  }
  return changed ? with_kids(f, std::move(kids)) : f;
}

}  // namespace

Formula substitute_maxc(const Formula& f, const IntTerm& r) {
  std::set<std::string> names;
  visit_int(r, [&](const std::string& n, Sort) { names.insert(n); });
  Formula g = f;
  if (!names.empty()) {
    // Rename binders that would capture names of the replacement.
    std::set<std::string> all;
    collect_names(f, all);
    all.insert(names.begin(), names.end());
    std::function<Formula(const Formula&)> rn = [&](const Formula& h) -> Formula {
      if (h->is_atom()) return h;
      if (h->is_quantifier() && names.count(h->name)) {
        std::string nn = fresh(h->name, all);
        all.insert(nn);
        Replacement rep = h->sort == Sort::Set   ? Replacement{set_var(nn)}
                          : h->sort == Sort::Int ? Replacement{int_var(nn)}
                                                 : Replacement{prop_var(nn)};
        auto body = substitute_all(h->body(), {{h->name, rep}});
        return quantify(h->kind, nn, h->sort, rn(body), h->nonneg, h->depth);
      }
      std::vector<Formula> kids;
      for (const auto& k : h->kids) kids.push_back(rn(k));
      return with_kids(h, std::move(kids));
    };
    g = rn(f);
  }
  return map_atoms(g, [&](const Formula& a) -> Formula {
    switch (a->kind) {
      case FKind::IntEq: {
        auto x = maxc_int(a->t1, r), y = maxc_int(a->t2, r);
        return x == a->t1 && y == a->t2 ? a : int_eq(x, y);
      }
      case FKind::IntLt: {
        auto x = maxc_int(a->t1, r), y = maxc_int(a->t2, r);
        return x == a->t1 && y == a->t2 ? a : int_lt(x, y);
      }
      case FKind::Dvd: {
        auto x = maxc_int(a->t1, r);
        return x == a->t1 ? a : dvd(a->divisor, x);
      }
      default: return a;
    }
  });
}

Formula substitute_finu(const Formula& f, bool value) {
  return map_atoms(f, [&](const Formula& a) { return a->kind == FKind::FinU ? f_bool(value) : a; });
}

Formula strip_depth(const Formula& f) {
  if (f->is_atom()) return f;
  std::vector<Formula> kids;
  for (const auto& k : f->kids) kids.push_back(strip_depth(k));
  auto n = std::make_shared<FormulaNode>(*f);
  n->kids = std::move(kids);
  n->depth = 0;
  return n;
}

namespace {

Formula canon_rec(const Formula& f, std::map<std::string, Replacement>& m, std::size_t& counter) {
  if (f->is_atom()) return substitute_all(f, m);
  if (f->is_quantifier()) {
    std::string nn = "?b" + std::to_string(counter++);
    auto saved = m.find(f->name) == m.end() ? std::optional<Replacement>{}
                                            : std::optional<Replacement>{m[f->name]};
    switch (f->sort) {
      case Sort::Set: m[f->name] = set_var(nn); break;
      case Sort::Int: m[f->name] = int_var(nn); break;
      case Sort::Prop: m[f->name] = prop_var(nn); break;
    }
    auto body = canon_rec(f->body(), m, counter);
    if (saved) m[f->name] = *saved;
    else m.erase(f->name);
    return quantify(f->kind, nn, f->sort, body, f->nonneg, 0);
  }
  std::vector<Formula> kids;
  for (const auto& k : f->kids) kids.push_back(canon_rec(k, m, counter));
  return with_kids(f, std::move(kids));
}

}  // namespace

Formula canonical_rename(const Formula& f) {
  std::map<std::string, Replacement> m;
  std::size_t counter = 0;
  return canon_rec(f, m, counter);
}

bool alpha_equivalent(const Formula& a, const Formula& b) {
  return equal(canonical_rename(a), canonical_rename(b));
}

}  // namespace bapa
