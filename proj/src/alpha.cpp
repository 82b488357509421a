#include "bapa/alpha.hpp"

#include <algorithm>
#include <functional>

#include "bapa/detail/set_tables.hpp"
#include "bapa/detail/term_map.hpp"

namespace bapa {

std::string_view model_class_name(ModelClass m) {
  switch (m) {
    case ModelClass::FiniteUniverse: return "finite";
    case ModelClass::InfiniteUniverse: return "infinite";
    case ModelClass::AllModels: return "all";
  }
  return "?";
}

std::string_view strategy_name(Strategy s) {
  return s == Strategy::Alpha ? "alpha" : "interleaved";
}

namespace detail {

IntTerm map_cards(const IntTerm& t, const std::function<IntTerm(const SetTerm&)>& fn) {
  switch (t->kind) {
    case IntKind::Card: return fn(t->set);
    case IntKind::Var:
    case IntKind::Const:
    case IntKind::MaxCard: return t;
    case IntKind::Mul: return int_mul(t->value, map_cards(t->lhs, fn));
    case IntKind::Add: return int_add(map_cards(t->lhs, fn), map_cards(t->rhs, fn));
    case IntKind::Sub: return int_sub(map_cards(t->lhs, fn), map_cards(t->rhs, fn));
  }
  return t;
}

Formula map_atoms(const Formula& f, const std::function<Formula(const Formula&)>& fn) {
  if (f->is_atom()) return fn(f);
  std::vector<Formula> kids;
  for (const auto& k : f->kids) kids.push_back(map_atoms(k, fn));
  return with_kids(f, std::move(kids));
}

Formula with_terms(const Formula& a, IntTerm t1, IntTerm t2) {
  switch (a->kind) {
    case FKind::IntEq: return int_eq(std::move(t1), std::move(t2));
    case FKind::IntLt: return int_lt(std::move(t1), std::move(t2));
    case FKind::Dvd: return dvd(a->divisor, std::move(t1));
    default: return a;
  }
}

bool has_int_terms(const Formula& a) {
  return a->kind == FKind::IntEq || a->kind == FKind::IntLt || a->kind == FKind::Dvd;
}

Formula map_atom_cards(const Formula& a, const std::function<IntTerm(const SetTerm&)>& fn) {
  if (!has_int_terms(a)) return a;
  IntTerm t1 = map_cards(a->t1, fn);
  IntTerm t2 = a->kind == FKind::Dvd ? nullptr : map_cards(a->t2, fn);
  return with_terms(a, t1, t2);
}

}  // namespace detail

namespace {

using detail::Space;
using detail::map_atoms;
using detail::map_cards;
using detail::with_terms;
using detail::has_int_terms;
using detail::Table;

Formula replace_fin(const Formula& f, bool value) {
  if (f->kind == FKind::Fin || f->kind == FKind::FinU) return f_bool(value);
  if (f->is_atom()) return f;
  std::vector<Formula> kids;
  for (const auto& k : f->kids) kids.push_back(replace_fin(k, value));
  return with_kids(f, std::move(kids));
}

void collect_cards(const IntTerm& t, std::vector<SetTerm>& out) {
  switch (t->kind) {
    case IntKind::Card:
      for (const auto& s : out)
        if (equal(s, t->set)) return;
      out.push_back(t->set);
      return;
    case IntKind::Var:
    case IntKind::Const:
    case IntKind::MaxCard: return;
    case IntKind::Mul: collect_cards(t->lhs, out); return;
    default:
      collect_cards(t->lhs, out);
      collect_cards(t->rhs, out);
  }
}

// Cube list for e set variables: [""], then [1w, 0w] for each w of the previous level.
std::vector<std::string> cube_list(std::size_t e) {
  std::vector<std::string> cubes{""};
  for (std::size_t i = 0; i < e; ++i) {
    std::vector<std::string> next;
    for (const auto& w : cubes) {
      next.push_back("1" + w);
      next.push_back("0" + w);
    }
    cubes = std::move(next);
  }
  return cubes;
}

Space space_for(const std::vector<std::string>& vars) {
  Space sp;
  sp.vars = vars;
  if (sp.vars.size() > 6)
    throw ResourceError("alpha: at most 6 set variables are supported, got " +
                        std::to_string(sp.vars.size()));
  for (std::size_t i = 0; i < vars.size(); ++i) sp.index[vars[i]] = static_cast<int>(i);
  return sp;
}

// Assignment index of a cube; set variable j (outermost first) reads bit e-1-j of w.
int cube_assignment(const std::string& w) {
  int a = 0;
  std::size_t e = w.size();
  for (std::size_t j = 0; j < e; ++j)
    if (w[e - 1 - j] == '1') a |= 1 << j;
  return a;
}

}  // namespace

// ---------------------------------------------------------------------------
// Partition introduction and the step

AlphaState introduce_partition(const PrenexForm& pf, bool infinite) {
  AlphaState st;
  st.remaining = pf.prefix;
  st.infinite = infinite;
  collect_names(pf.to_formula(), st.avoid);
  st.avoid.insert("MAXC");
  for (const auto& b : pf.prefix)
    if (b.sort == Sort::Set) st.naming.set_vars.push_back(b.name);
  std::size_t e = st.naming.set_vars.size();
  Space sp = space_for(st.naming.set_vars);
  st.naming.cubes = cube_list(e);
  if (e > 0) {
    for (const auto& w : st.naming.cubes) {
      st.naming.l_names[w] = fresh("l" + w, st.avoid);
      st.avoid.insert(st.naming.l_names[w]);
      if (infinite) {
        st.naming.p_names[w] = fresh("p" + w, st.avoid);
        st.avoid.insert(st.naming.p_names[w]);
      }
    }
  }

  auto cubes_of = [&](const SetTerm& s) {
    Table t = sp.table(s);
    std::vector<std::string> in;
    for (const auto& w : st.naming.cubes)
      if ((t >> cube_assignment(w)) & 1) in.push_back(w);
    return in;
  };
  auto card_sum = [&](const SetTerm& s) -> IntTerm {
    std::vector<std::string> in = cubes_of(s);
    if (e == 0) return in.empty() ? int_const(0) : int_maxc();
    std::vector<IntTerm> parts;
    for (const auto& w : in) parts.push_back(int_var(st.naming.l_names.at(w)));
    return int_sum(parts);
  };
  // In infinite mode: all cubes of s are finite.
  auto finite_cond = [&](const SetTerm& s) -> Formula {
    std::vector<std::string> in = cubes_of(s);
    if (e == 0) return in.empty() ? f_true() : fin_u();
    std::vector<Formula> ps;
    for (const auto& w : in) ps.push_back(prop_var(st.naming.p_names.at(w)));
    return conj(std::move(ps));
  };

  std::function<Formula(const Formula&)> atom = [&](const Formula& a) -> Formula {
    if (a->kind == FKind::Fin) {
      if (!infinite) return f_true();
      return finite_cond(a->s1);
    }
    if (a->kind == FKind::SetEq || a->kind == FKind::SubsetEq)
      throw ContractError("introduce_partition expects a purified matrix");
    if (!has_int_terms(a)) return a;
    if (!infinite) {
      IntTerm t1 = map_cards(a->t1, card_sum);
      IntTerm t2 = a->kind == FKind::Dvd ? nullptr : map_cards(a->t2, card_sum);
      return with_terms(a, t1, t2);
    }
    std::vector<SetTerm> cards;
    collect_cards(a->t1, cards);
    if (a->kind != FKind::Dvd) collect_cards(a->t2, cards);
    // Case split on the finiteness of each card argument.
    std::function<Formula(std::size_t, std::vector<bool>&)> split =
        [&](std::size_t i, std::vector<bool>& fin_flags) -> Formula {
      if (i == cards.size()) {
        auto fn = [&](const SetTerm& s) -> IntTerm {
          for (std::size_t j = 0; j < cards.size(); ++j)
            if (equal(cards[j], s)) return fin_flags[j] ? card_sum(s) : int_const(0);
          return card_sum(s);
        };
        IntTerm t1 = map_cards(a->t1, fn);
        IntTerm t2 = a->kind == FKind::Dvd ? nullptr : map_cards(a->t2, fn);
        return with_terms(a, t1, t2);
      }
      Formula cond = finite_cond(cards[i]);
      fin_flags.push_back(true);
      Formula yes = split(i + 1, fin_flags);
      fin_flags.back() = false;
      Formula no = split(i + 1, fin_flags);
      fin_flags.pop_back();
      if (cond->kind == FKind::True) return yes;
      return disj2(conj2(cond, yes), conj2(neg(cond), no));
    };
    std::vector<bool> flags;
    return split(0, flags);
  };

  Formula m = map_atoms(pf.matrix, atom);
  if (!infinite) m = replace_fin(m, true);
  st.g = m;
  return st;
}

AlphaState alpha_step(const AlphaState& in) {
  if (in.remaining.empty()) throw ContractError("alpha_step: no quantifier left");
  AlphaState st = in;
  Binder b = st.remaining.back();
  st.remaining.pop_back();
  if (b.sort != Sort::Set) {
    st.g = quantify(b.quant, b.name, b.sort, st.g, b.nonneg, 0);
    return st;
  }
  ++st.r;
  const auto& cubes = st.naming.cubes;
  std::vector<std::string> parents;
  for (std::size_t i = 0; i + 1 < cubes.size(); i += 2) parents.push_back(cubes[i].substr(1));

  PartitionNaming next;
  next.set_vars = st.naming.set_vars;
  next.set_vars.pop_back();
  next.cubes = parents;
  bool top = parents.size() == 1 && parents[0].empty();
  for (const auto& w : parents) {
    if (top) continue;
    next.l_names[w] = fresh("l" + w, st.avoid);
    st.avoid.insert(next.l_names[w]);
    if (st.infinite) {
      next.p_names[w] = fresh("p" + w, st.avoid);
      st.avoid.insert(next.p_names[w]);
    }
  }

  std::vector<Formula> defs;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    const std::string& w = parents[i];
    const std::string& c1 = cubes[2 * i];
    const std::string& c0 = cubes[2 * i + 1];
    IntTerm parent = top ? int_maxc() : int_var(next.l_names[w]);
    Formula sum = int_eq(parent, int_add(int_var(st.naming.l_names.at(c1)),
                                         int_var(st.naming.l_names.at(c0))));
    if (!st.infinite) {
      defs.push_back(sum);
      continue;
    }
    Formula both = conj2(prop_var(st.naming.p_names.at(c1)), prop_var(st.naming.p_names.at(c0)));
    Formula pparent = top ? fin_u() : prop_var(next.p_names[w]);
    defs.push_back(implies(both, sum));
    defs.push_back(iff(pparent, both));
  }

  Formula body;
  if (b.quant == FKind::Exists) {
    defs.push_back(st.g);
    body = conj(std::move(defs));
  } else {
    body = implies(conj(std::move(defs)), st.g);
  }
  if (st.infinite)
    for (auto it = cubes.rbegin(); it != cubes.rend(); ++it)
      body = quantify(b.quant, st.naming.p_names.at(*it), Sort::Prop, body, false, st.r);
  for (auto it = cubes.rbegin(); it != cubes.rend(); ++it)
    body = quantify(b.quant, st.naming.l_names.at(*it), Sort::Int, body, true, st.r);
  st.g = body;
  st.naming = std::move(next);
  return st;
}

// ---------------------------------------------------------------------------
// Partitions restricted to co-occurring variables

namespace {

struct Region {
  Table table;
  IntTerm term;  // variable, MAXC or 0
};

Formula alpha_optimized(const PrenexForm& pf) {
  std::set<std::string> avoid;
  collect_names(pf.to_formula(), avoid);
  avoid.insert("MAXC");
  std::vector<std::string> set_vars;
  for (const auto& b : pf.prefix)
    if (b.sort == Sort::Set) set_vars.push_back(b.name);
  Space sp = space_for(set_vars);

  std::vector<Region> regions;
  auto new_var = [&]() {
    std::string n = fresh("l", avoid);
    avoid.insert(n);
    return n;
  };
  auto region_term = [&](Table t) -> IntTerm {
    if (t == 0) return int_const(0);
    if (t == sp.full()) return int_maxc();
    for (const auto& r : regions)
      if (r.table == t) return r.term;
    regions.push_back({t, int_var(new_var())});
    return regions.back().term;
  };
  Formula g = map_atoms(pf.matrix, [&](const Formula& a) -> Formula {
    if (a->kind == FKind::SetEq || a->kind == FKind::SubsetEq)
      throw ContractError("alpha expects a purified matrix");
    if (a->kind == FKind::Fin || a->kind == FKind::FinU) return f_true();
    if (!has_int_terms(a)) return a;
    auto fn = [&](const SetTerm& s) { return region_term(sp.table(s)); };
    IntTerm t1 = map_cards(a->t1, fn);
    IntTerm t2 = a->kind == FKind::Dvd ? nullptr : map_cards(a->t2, fn);
    return with_terms(a, t1, t2);
  });

  int r = 0;
  for (auto it = pf.prefix.rbegin(); it != pf.prefix.rend(); ++it) {
    const Binder& b = *it;
    if (b.sort != Sort::Set) {
      g = quantify(b.quant, b.name, b.sort, g, b.nonneg, 0);
      continue;
    }
    ++r;
    int y = sp.index.at(b.name);
    std::vector<Region> with_y, rest;
    for (const auto& reg : regions) (sp.depends(reg.table, y) ? with_y : rest).push_back(reg);
    std::vector<int> vs;
    for (int j = 0; j < sp.n(); ++j) {
      if (j == y) continue;
      for (const auto& reg : with_y)
        if (sp.depends(reg.table, j)) {
          vs.push_back(j);
          break;
        }
    }
    std::size_t nv = vs.size();
    std::size_t nparents = std::size_t{1} << nv;
    // Parent cube s over vs, child cubes s & y and s & ~y.
    std::vector<Table> parent_table(nparents, sp.full());
    for (std::size_t s = 0; s < nparents; ++s)
      for (std::size_t i = 0; i < nv; ++i) {
        Table v = sp.var_table(vs[i]);
        parent_table[s] &= ((s >> i) & 1) ? v : (sp.full() & ~v);
      }
    Table ty = sp.var_table(y);
    std::vector<std::string> in_y(nparents), out_y(nparents);
    for (std::size_t s = 0; s < nparents; ++s) {
      in_y[s] = new_var();
      out_y[s] = new_var();
    }
    std::map<std::string, Replacement> subst;
    for (const auto& reg : with_y) {
      std::vector<IntTerm> parts;
      for (std::size_t s = 0; s < nparents; ++s) {
        Table c1 = parent_table[s] & ty;
        Table c0 = parent_table[s] & ~ty;
        if ((reg.table & c1) == c1) parts.push_back(int_var(in_y[s]));
        if ((reg.table & c0) == c0) parts.push_back(int_var(out_y[s]));
      }
      subst[reg.term->name] = int_sum(parts);
    }
    if (!subst.empty()) g = substitute_all(g, subst);

    std::vector<Formula> defs;
    std::vector<Region> next = rest;
    for (std::size_t s = 0; s < nparents; ++s) {
      IntTerm parent;
      if (nv == 0) {
        parent = int_maxc();
      } else {
        parent = int_var(new_var());
        next.push_back({parent_table[s], parent});
      }
      defs.push_back(int_eq(parent, int_add(int_var(in_y[s]), int_var(out_y[s]))));
    }
    Formula body;
    if (b.quant == FKind::Exists) {
      defs.push_back(g);
      body = conj(std::move(defs));
    } else {
      body = implies(conj(std::move(defs)), g);
    }
    for (std::size_t s = nparents; s-- > 0;) {
      body = quantify(b.quant, out_y[s], Sort::Int, body, true, r);
      body = quantify(b.quant, in_y[s], Sort::Int, body, true, r);
    }
    g = body;
    regions = std::move(next);
  }
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// Pipeline

PrenexForm alpha_front_end(const Formula& f, ModelClass mode) {
  check_sorts(f);
  Formula g = f;
  if (mode == ModelClass::FiniteUniverse) g = replace_fin(g, true);
  g = purify_atoms(g);
  return to_prenex(g, {"MAXC"});
}

namespace {

void require_sentence(const Formula& f) {
  SortMap fv = free_vars(f);
  if (fv.empty()) return;
  std::vector<std::string> names;
  for (const auto& [n, s] : fv) names.push_back(n);
  throw FreeVariableError(names);
}

}  // namespace

Formula alpha_translate(const Formula& f, const AlphaOptions& opt) {
  require_sentence(f);
  if (opt.strategy == Strategy::Interleaved) {
    if (opt.mode != ModelClass::FiniteUniverse)
      throw ContractError("the interleaved strategy supports the finite model class only");
    return alpha_interleaved_qf(f);
  }
  PrenexForm pf = alpha_front_end(f, opt.mode);
  Formula g;
  if (opt.optimize && opt.mode == ModelClass::FiniteUniverse) {
    g = alpha_optimized(pf);
  } else {
    AlphaState st = introduce_partition(pf, opt.mode != ModelClass::FiniteUniverse);
    while (!st.remaining.empty()) st = alpha_step(st);
    g = st.g;
  }
  switch (opt.mode) {
    case ModelClass::FiniteUniverse: return g;
    case ModelClass::InfiniteUniverse: return substitute_finu(substitute_maxc(g, int_const(0)), false);
    case ModelClass::AllModels:
      return conj2(substitute_finu(substitute_maxc(g, int_const(0)), false),
                   close_universe(substitute_finu(g, true)));
  }
  return g;
}

Formula close_universe(const Formula& g) {
  std::set<std::string> names;
  collect_names(g, names);
  std::string k = fresh("k", names);
  return forall(k, Sort::Int, substitute_maxc(g, int_var(k)), true);
}

Formula instantiate_universe(const Formula& g, const BigInt& u) {
  return substitute_maxc(g, int_const(u));
}

Formula close_free(const Formula& f, bool existential) {
  SortMap fv = free_vars(f);
  Formula g = f;
  for (auto it = fv.rbegin(); it != fv.rend(); ++it)
    g = existential ? exists(it->first, it->second, g) : forall(it->first, it->second, g);
  return g;
}

Verdict decide(const Formula& f, const AlphaOptions& opt) {
  require_sentence(f);
  if (opt.strategy == Strategy::Interleaved) return alpha_interleaved(f, opt.mode);
  Formula g = alpha_translate(f, opt);
  if (opt.mode == ModelClass::FiniteUniverse) g = close_universe(g);
  return pa_decide(g);
}

bool decide_at(const Formula& f, const BigInt& u, const AlphaOptions& opt) {
  AlphaOptions o = opt;
  o.mode = ModelClass::FiniteUniverse;
  Formula g = alpha_translate(f, o);
  return pa_decide(instantiate_universe(g, u)) == Verdict::Valid;
}

}  // namespace bapa
