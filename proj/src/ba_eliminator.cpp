#include "bapa/ba_eliminator.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "bapa/detail/set_tables.hpp"
#include "bapa/normalizer.hpp"
#include "bapa/text_format.hpp"

namespace bapa {

Formula to_formula(const BaLiteral& lit) {
  IntTerm c = card(lit.set);
  if (lit.exact) return int_eq(c, int_const(lit.bound));
  return int_ge(c, int_const(lit.bound));
}

namespace {

using detail::Space;
using detail::Table;

// ---------------------------------------------------------------------------
// Literal recognition

std::optional<SetTerm> card_side(const IntTerm& t) {
  if (t->kind == IntKind::Card) return t->set;
  if (t->kind == IntKind::MaxCard) return set_univ();
  return std::nullopt;
}

std::optional<BigInt> ground(const IntTerm& t) {
  switch (t->kind) {
    case IntKind::Const: return t->value;
    case IntKind::Mul: {
      auto a = ground(t->lhs);
      if (!a) return std::nullopt;
      return BigInt(t->value * *a);
    }
    case IntKind::Add:
    case IntKind::Sub: {
      auto a = ground(t->lhs);
      auto b = ground(t->rhs);
      if (!a || !b) return std::nullopt;
      return t->kind == IntKind::Add ? BigInt(*a + *b) : BigInt(*a - *b);
    }
    default: return std::nullopt;
  }
}

[[noreturn]] void not_ba(const Formula& f) {
  throw ContractError("not a pure BA formula: '" + to_text(f) +
                      "' relates a cardinality to a non-constant term; use decide (alpha) instead");
}

// card(set) = k or card(set) >= k; `holds` is set for ground atoms.
struct AtomShape {
  SetTerm set;
  bool exact = true;
  BigInt bound;
  std::optional<bool> holds;
  bool negated = false;  // the atom reads ~(card(set) >= bound)
};

AtomShape shape_of(const Formula& f) {
  AtomShape s;
  if (f->kind == FKind::True || f->kind == FKind::False) {
    s.holds = f->kind == FKind::True;
    return s;
  }
  if (f->kind != FKind::IntEq && f->kind != FKind::IntLt) not_ba(f);
  auto ca = card_side(f->t1);
  auto cb = card_side(f->t2);
  auto ga = ground(f->t1);
  auto gb = ground(f->t2);
  if (ga && gb) {
    s.holds = f->kind == FKind::IntEq ? *ga == *gb : *ga < *gb;
    return s;
  }
  if (f->kind == FKind::IntEq) {
    if (ca && gb) return {*ca, true, *gb, std::nullopt};
    if (cb && ga) return {*cb, true, *ga, std::nullopt};
    not_ba(f);
  }
  // card < k is ~(card >= k); k < card is card >= k+1. The caller flips polarity.
  if (ca && gb) return {*ca, false, *gb, std::nullopt, true};
  if (cb && ga) return {*cb, false, *ga + 1, std::nullopt, false};
  not_ba(f);
}

struct Lit {
  Table table = 0;
  bool exact = true;
  long k = 0;
  SetTerm orig;  // kept for literals that pass through untouched

  bool operator<(const Lit& o) const {
    if (table != o.table) return table < o.table;
    if (exact != o.exact) return exact > o.exact;
    return k < o.k;
  }
  bool operator==(const Lit& o) const {
    return table == o.table && exact == o.exact && k == o.k;
  }
};

using Clause = std::vector<Lit>;  // sorted by table, one literal per table
using Dnf = std::vector<Clause>;

long small(const BigInt& v) {
  if (v > kBaMaxConstant || v < -kBaMaxConstant)
    throw ResourceError("cardinality constant " + v.get_str() + " exceeds " +
                        std::to_string(kBaMaxConstant) + "; decide it through the alpha pipeline");
  return v.get_si();
}

// Adds a literal to a clause, resolving duplicates on the same table. Returns false on
// contradiction.
bool add_lit(Clause& c, Lit l, Table full) {
  if (l.table == 0) return l.exact ? l.k == 0 : l.k <= 0;
  if (!l.exact && l.k <= 0) return true;
  if (l.exact && l.k < 0) return false;
  (void)full;
  auto it = std::lower_bound(c.begin(), c.end(), l,
                             [](const Lit& a, const Lit& b) { return a.table < b.table; });
  if (it == c.end() || it->table != l.table) {
    c.insert(it, std::move(l));
    return true;
  }
  Lit& o = *it;
  if (o.exact && l.exact) return o.k == l.k;
  if (o.exact) return o.k >= l.k;
  if (l.exact) {
    if (l.k < o.k) return false;
    o = std::move(l);
    return true;
  }
  if (l.k > o.k) o = std::move(l);
  return true;
}

void dedupe(Dnf& d) {
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  // A clause that contains another clause is redundant.
  Dnf out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < d.size() && !redundant; ++j) {
      if (i == j || d[j].size() >= d[i].size()) continue;
      redundant = std::includes(d[i].begin(), d[i].end(), d[j].begin(), d[j].end());
    }
    if (!redundant) out.push_back(d[i]);
  }
  d = std::move(out);
}

constexpr std::size_t kDnfLimit = 200000;

Dnf product(const Dnf& a, const Dnf& b, Table full) {
  Dnf out;
  for (const auto& x : a)
    for (const auto& y : b) {
      Clause c = x;
      bool ok = true;
      for (const auto& l : y)
        if (!(ok = add_lit(c, l, full))) break;
      if (ok) out.push_back(std::move(c));
      if (out.size() > kDnfLimit) throw ResourceError("BA elimination: DNF exceeds size limit");
    }
  dedupe(out);
  return out;
}

Dnf dnf_true() { return {Clause{}}; }
Dnf dnf_false() { return {}; }

Dnf dnf_of_lit(Lit l, Table full) {
  Clause c;
  if (!add_lit(c, std::move(l), full)) return dnf_false();
  return {c};
}

// Negation of card(t) = k or card(t) >= k.
Dnf negate_lit(const Lit& l, Table full) {
  Dnf out;
  for (long i = 0; i < l.k; ++i) {
    Dnf d = dnf_of_lit({l.table, true, i, l.orig}, full);
    out.insert(out.end(), d.begin(), d.end());
  }
  if (l.exact) {
    Dnf d = dnf_of_lit({l.table, false, l.k + 1, l.orig}, full);
    out.insert(out.end(), d.begin(), d.end());
  }
  dedupe(out);
  return out;
}

Dnf negate_dnf(const Dnf& d, Table full) {
  Dnf acc = dnf_true();
  for (const auto& clause : d) {
    Dnf alt;
    for (const auto& l : clause) {
      Dnf n = negate_lit(l, full);
      alt.insert(alt.end(), n.begin(), n.end());
    }
    dedupe(alt);
    acc = product(acc, alt, full);
    if (acc.empty()) break;
  }
  return acc;
}

Dnf lit_dnf(const Formula& atom, bool positive, const Space& sp) {
  AtomShape s = shape_of(atom);
  if (s.holds) return (*s.holds == positive) ? dnf_true() : dnf_false();
  bool pos = s.negated ? !positive : positive;
  Lit l{sp.table(s.set), s.exact, small(s.bound), s.set};
  if (pos) return dnf_of_lit(l, sp.full());
  return negate_lit(l, sp.full());
}

Dnf to_dnf(const Formula& f, const Space& sp) {
  switch (f->kind) {
    case FKind::And: {
      Dnf acc = dnf_true();
      for (const auto& k : f->kids) {
        acc = product(acc, to_dnf(k, sp), sp.full());
        if (acc.empty()) break;
      }
      return acc;
    }
    case FKind::Or: {
      Dnf acc;
      for (const auto& k : f->kids) {
        Dnf d = to_dnf(k, sp);
        acc.insert(acc.end(), d.begin(), d.end());
      }
      dedupe(acc);
      return acc;
    }
    case FKind::Not: return lit_dnf(f->kids[0], false, sp);
    default: return lit_dnf(f, true, sp);
  }
}

// ---------------------------------------------------------------------------
// Elimination of one variable from a clause

struct CubeState {
  bool exact = false;
  long k = 0;
};

bool merge(CubeState& s, bool exact, long k) {
  if (s.exact && exact) return s.k == k;
  if (s.exact) return s.k >= k;
  if (exact) {
    if (k < s.k) return false;
    s = {true, k};
    return true;
  }
  s.k = std::max(s.k, k);
  return true;
}

Dnf eliminate_clause(const Clause& ylits, int y, const Space& sp) {
  std::vector<int> vs;
  for (int j = 0; j < sp.n(); ++j) {
    if (j == y) continue;
    for (const auto& l : ylits)
      if (sp.depends(l.table, j)) {
        vs.push_back(j);
        break;
      }
  }
  vs.push_back(y);
  // Cubes over vs; cube index bit i refers to vs[i], the last bit is y.
  std::size_t m = vs.size();
  std::size_t ncubes = std::size_t{1} << m;
  std::vector<Table> cube(ncubes, sp.full());
  for (std::size_t c = 0; c < ncubes; ++c)
    for (std::size_t i = 0; i < m; ++i) {
      Table v = sp.var_table(vs[i]);
      cube[c] &= ((c >> i) & 1) ? v : (sp.full() & ~v);
    }

  std::vector<std::vector<std::size_t>> parts(ylits.size());
  for (std::size_t li = 0; li < ylits.size(); ++li)
    for (std::size_t c = 0; c < ncubes; ++c)
      if (cube[c] && (cube[c] & ylits[li].table) == cube[c]) parts[li].push_back(c);

  std::set<Clause> results;
  std::vector<CubeState> state(ncubes);
  std::size_t ybit = std::size_t{1} << (m - 1);

  auto emit = [&]() {
    Clause out;
    for (std::size_t s = 0; s < ybit; ++s) {
      const CubeState& in = state[s | ybit];
      const CubeState& out_y = state[s];
      Table t = cube[s] | cube[s | ybit];
      Lit l{t, in.exact && out_y.exact, in.k + out_y.k, nullptr};
      if (!add_lit(out, l, sp.full())) return;
    }
    results.insert(out);
  };

  // Distributes each literal's bound over its cubes.
  std::function<void(std::size_t)> lit_step;
  std::function<void(std::size_t, std::size_t, long)> part_step =
      [&](std::size_t li, std::size_t pi, long left) {
        const Lit& l = ylits[li];
        const auto& ps = parts[li];
        if (pi + 1 == ps.size() || ps.empty()) {
          if (ps.empty()) {
            if (l.exact ? left == 0 : left <= 0) lit_step(li + 1);
            return;
          }
          CubeState saved = state[ps[pi]];
          if (merge(state[ps[pi]], l.exact, left)) lit_step(li + 1);
          state[ps[pi]] = saved;
          return;
        }
        for (long v = 0; v <= left; ++v) {
          CubeState saved = state[ps[pi]];
          if (merge(state[ps[pi]], l.exact, v)) part_step(li, pi + 1, left - v);
          state[ps[pi]] = saved;
        }
      };
  lit_step = [&](std::size_t li) {
    if (li == ylits.size()) {
      emit();
      return;
    }
    part_step(li, 0, ylits[li].k);
  };
  lit_step(0);
  Dnf out(results.begin(), results.end());
  dedupe(out);
  return out;
}

Dnf exists_var(const Dnf& d, int y, const Space& sp) {
  Dnf out;
  for (const auto& clause : d) {
    Clause rest;
    Clause ylits;
    for (const auto& l : clause) (sp.depends(l.table, y) ? ylits : rest).push_back(l);
    if (ylits.empty()) {
      out.push_back(rest);
      continue;
    }
    Dnf e = eliminate_clause(ylits, y, sp);
    Dnf r = product({rest}, e, sp.full());
    out.insert(out.end(), r.begin(), r.end());
    if (out.size() > kDnfLimit) throw ResourceError("BA elimination: DNF exceeds size limit");
  }
  dedupe(out);
  return out;
}

// Original set terms are reused when they only mention variables that are still free.
Formula dnf_formula(const Dnf& d, const Space& sp, const std::set<std::string>& live) {
  auto reusable = [&](const SetTerm& t) {
    std::set<std::string> used;
    collect_set_vars(t, used);
    return std::includes(live.begin(), live.end(), used.begin(), used.end());
  };
  std::vector<Formula> alts;
  for (const auto& c : d) {
    std::vector<Formula> lits;
    for (const auto& l : c) {
      SetTerm s = l.orig && reusable(l.orig) && sp.table(l.orig) == l.table ? l.orig : sp.term(l.table);
      lits.push_back(to_formula(BaLiteral{s, l.exact, l.k}));
    }
    alts.push_back(conj(std::move(lits)));
  }
  return disj(std::move(alts));
}

Space make_space(const Formula& f, const std::vector<Binder>& prefix) {
  Space sp;
  for (const auto& [n, s] : free_vars(f))
    if (s == Sort::Set) sp.vars.push_back(n);
  for (const auto& b : prefix) sp.vars.push_back(b.name);
  if (sp.vars.size() > 6)
    throw ResourceError("BA elimination supports at most 6 set variables, got " +
                        std::to_string(sp.vars.size()));
  for (std::size_t i = 0; i < sp.vars.size(); ++i) sp.index[sp.vars[i]] = static_cast<int>(i);
  return sp;
}

bool int_ok(const IntTerm& t) {
  switch (t->kind) {
    case IntKind::Var: return false;
    case IntKind::Const:
    case IntKind::MaxCard:
    case IntKind::Card: return true;
    case IntKind::Mul: return int_ok(t->lhs);
    default: return int_ok(t->lhs) && int_ok(t->rhs);
  }
}

}  // namespace

bool is_pure_ba(const Formula& f) {
  switch (f->kind) {
    case FKind::PropVar:
    case FKind::Fin:
    case FKind::FinU:
    case FKind::Dvd: return false;
    case FKind::IntEq:
    case FKind::IntLt: {
      if (!int_ok(f->t1) || !int_ok(f->t2)) return false;
      bool ca = card_side(f->t1).has_value(), cb = card_side(f->t2).has_value();
      bool ga = ground(f->t1).has_value(), gb = ground(f->t2).has_value();
      return (ca && gb) || (cb && ga) || (ga && gb);
    }
    case FKind::Exists:
    case FKind::Forall:
      if (f->sort != Sort::Set) return false;
      break;
    default: break;
  }
  for (const auto& k : f->kids)
    if (!is_pure_ba(k)) return false;
  return true;
}

Formula expand_negative_literal(const Formula& lit) {
  // Accept ~(card = k), ~(card >= k) written as ~~(card < k), and card < k.
  Formula atom;
  bool positive;
  if (lit->kind == FKind::Not) {
    atom = lit->kids[0];
    positive = false;
    if (atom->kind == FKind::Not) {
      atom = atom->kids[0];
      positive = true;
    }
  } else {
    atom = lit;
    positive = true;
  }
  AtomShape s = shape_of(atom);
  if (s.holds) return f_bool(*s.holds == positive);
  bool pos = s.negated ? !positive : positive;
  if (pos) throw ContractError("expand_negative_literal expects a negated literal: " + to_text(lit));
  std::vector<Formula> alts;
  BigInt top = s.bound;
  for (BigInt i = 0; i < top; ++i) alts.push_back(int_eq(card(s.set), int_const(i)));
  if (s.exact) alts.push_back(int_ge(card(s.set), int_const(s.bound + 1)));
  if (s.exact && s.bound < 0) return f_true();
  return disj(std::move(alts));
}

Formula ba_eliminate_innermost(const std::vector<Formula>& conj_lits, const std::string& y) {
  Formula all = conj(conj_lits);
  Space sp = make_space(all, {});
  if (!sp.index.count(y)) sp.index[y] = sp.n(), sp.vars.push_back(y);
  int yi = sp.index.at(y);
  Clause ylits;
  for (const auto& f : conj_lits) {
    Dnf d = lit_dnf(f->kind == FKind::Not ? f->kids[0] : f, f->kind != FKind::Not, sp);
    if (d.size() != 1) throw ContractError("ba_eliminate_innermost expects positive literals");
    for (const auto& l : d[0]) {
      if (!sp.depends(l.table, yi))
        throw ContractError("literal '" + to_text(f) + "' does not mention " + y);
      if (!add_lit(ylits, l, sp.full())) return f_false();
    }
  }
  std::set<std::string> live(sp.vars.begin(), sp.vars.end());
  live.erase(y);
  return dnf_formula(eliminate_clause(ylits, yi, sp), sp, live);
}

Formula ba_eliminate(const Formula& f) {
  if (!is_pure_ba(f))
    throw ContractError(
        "ba_eliminate accepts pure BA only (set quantifiers, set relations and card compared "
        "with constants); integer variables need the alpha pipeline");
  Formula g = simplify_const(purify_atoms(f));
  PrenexForm pf = to_prenex(g);
  Space sp = make_space(pf.matrix, pf.prefix);
  Dnf d = to_dnf(pf.matrix, sp);
  for (auto it = pf.prefix.rbegin(); it != pf.prefix.rend(); ++it) {
    int y = sp.index.at(it->name);
    if (it->quant == FKind::Exists) {
      d = exists_var(d, y, sp);
    } else {
      d = negate_dnf(exists_var(negate_dnf(d, sp.full()), y, sp), sp.full());
    }
  }
  std::set<std::string> live;
  for (const auto& [n, s] : free_vars(f))
    if (s == Sort::Set) live.insert(n);
  return dnf_formula(d, sp, live);
}

}  // namespace bapa
