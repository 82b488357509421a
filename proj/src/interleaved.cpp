// Interleaved strategy: integer quantifiers are eliminated by Presburger QE as soon as
// they are reached, set quantifiers by pairing the cubes of co-occurring variables and
// eliminating the fresh cube cardinalities immediately.

#include <map>

#include "bapa/alpha.hpp"
#include "bapa/detail/qe.hpp"
#include "bapa/detail/set_tables.hpp"
#include "bapa/detail/term_map.hpp"

namespace bapa {

namespace {

using detail::Space;
using detail::Table;

struct Region {
  Table table;
  pa::VarId var;
};

struct Interleaver {
  pa::VarTable vars;
  pa::Converter conv{vars};
  Space sp;
  std::vector<Region> regions;
  std::set<std::string> avoid;
  pa::VarId maxc = -1;

  pa::Linear region_linear(Table t) {
    if (t == 0) return pa::lin_const(0);
    if (t == sp.full()) return pa::lin_var(maxc);
    for (const auto& r : regions)
      if (r.table == t) return pa::lin_var(r.var);
    std::string n = fresh("l", avoid);
    avoid.insert(n);
    regions.push_back({t, vars.intern(n)});
    return pa::lin_var(regions.back().var);
  }

  pa::Tree nonneg(pa::VarId v) { return pa::mk_lt(pa::lin_add(pa::lin_var(v), pa::lin_const(1))); }

  pa::Tree set_step(const Binder& b, const pa::Tree& g) {
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
    std::size_t nparents = std::size_t{1} << vs.size();
    std::vector<Table> parent_table(nparents, sp.full());
    for (std::size_t s = 0; s < nparents; ++s)
      for (std::size_t i = 0; i < vs.size(); ++i) {
        Table v = sp.var_table(vs[i]);
        parent_table[s] &= ((s >> i) & 1) ? v : (sp.full() & ~v);
      }
    Table ty = sp.var_table(y);
    std::vector<pa::VarId> in_y, out_y, block;
    for (std::size_t s = 0; s < nparents; ++s) {
      in_y.push_back(vars.fresh("l"));
      out_y.push_back(vars.fresh("l"));
      block.push_back(in_y.back());
      block.push_back(out_y.back());
    }
    pa::Tree t = g;
    for (const auto& reg : with_y) {
      pa::Linear sum;
      for (std::size_t s = 0; s < nparents; ++s) {
        Table c1 = parent_table[s] & ty;
        Table c0 = parent_table[s] & ~ty;
        if ((reg.table & c1) == c1) sum = pa::lin_add(sum, pa::lin_var(in_y[s]));
        if ((reg.table & c0) == c0) sum = pa::lin_add(sum, pa::lin_var(out_y[s]));
      }
      t = pa::subst(t, reg.var, sum);
    }
    std::vector<pa::Tree> defs;
    regions = rest;
    for (std::size_t s = 0; s < nparents; ++s) {
      pa::Linear parent;
      if (vs.empty()) {
        parent = pa::lin_var(maxc);
      } else {
        pa::VarId p = vars.intern(fresh("l", avoid));
        avoid.insert(vars.name(p));
        regions.push_back({parent_table[s], p});
        parent = pa::lin_var(p);
      }
      pa::Linear diff = pa::lin_add(
          parent, pa::lin_scale(pa::lin_add(pa::lin_var(in_y[s]), pa::lin_var(out_y[s])), -1));
      defs.push_back(pa::mk_eq(diff));
      defs.push_back(nonneg(in_y[s]));
      defs.push_back(nonneg(out_y[s]));
    }
    if (b.quant == FKind::Exists) {
      defs.push_back(t);
      return pa::exists_block(block, pa::mk_and(std::move(defs)), &conv.stats);
    }
    std::vector<pa::Tree> alts;
    for (const auto& d : defs) alts.push_back(pa::negate(d));
    alts.push_back(t);
    return pa::forall_block(block, pa::mk_or(std::move(alts)), &conv.stats);
  }

  pa::Tree run(const Formula& f) {
    PrenexForm pf = alpha_front_end(f, ModelClass::FiniteUniverse);
    collect_names(pf.to_formula(), avoid);
    avoid.insert("MAXC");
    maxc = vars.intern("MAXC");
    std::vector<std::string> set_vars;
    for (const auto& b : pf.prefix)
      if (b.sort == Sort::Set) set_vars.push_back(b.name);
    if (set_vars.size() > 6)
      throw ResourceError("interleaved: at most 6 set variables are supported");
    sp.vars = set_vars;
    for (std::size_t i = 0; i < set_vars.size(); ++i) sp.index[set_vars[i]] = static_cast<int>(i);

    // Card terms become region variables, which are free names of the matrix tree.
    Formula m = detail::map_atoms(pf.matrix, [&](const Formula& a) -> Formula {
      if (a->kind == FKind::SetEq || a->kind == FKind::SubsetEq)
        throw ContractError("interleaved strategy expects a purified matrix");
      if (a->kind == FKind::Fin || a->kind == FKind::FinU) return f_true();
      return detail::map_atom_cards(a, [&](const SetTerm& s) -> IntTerm {
        pa::Linear l = region_linear(sp.table(s));
        if (l.terms.empty()) return int_const(l.c0);
        return l.terms[0].first == maxc ? int_maxc() : int_var(vars.name(l.terms[0].first));
      });
    });
    pa::Tree g = conv.to_tree(m);
    for (auto it = pf.prefix.rbegin(); it != pf.prefix.rend(); ++it) {
      const Binder& b = *it;
      bool ex = b.quant == FKind::Exists;
      if (b.sort == Sort::Set) {
        g = set_step(b, g);
        continue;
      }
      pa::VarId v = vars.intern(b.name);
      if (b.sort == Sort::Prop) {
        g = ex ? pa::exists_prop(v, g) : pa::forall_prop(v, g);
        continue;
      }
      if (b.nonneg)
        g = ex ? pa::mk_and({nonneg(v), g}) : pa::mk_or({pa::negate(nonneg(v)), g});
      g = ex ? pa::exists(v, g, &conv.stats) : pa::forall(v, g, &conv.stats);
    }
    return g;
  }
};

}  // namespace

Formula alpha_interleaved_qf(const Formula& f) {
  Interleaver il;
  pa::Tree t = il.run(f);
  return il.conv.to_formula(t);
}

Verdict alpha_interleaved(const Formula& f, ModelClass mode) {
  if (mode != ModelClass::FiniteUniverse)
    throw ContractError("the interleaved strategy supports the finite model class only");
  SortMap fv = free_vars(f);
  if (!fv.empty()) {
    std::vector<std::string> names;
    for (const auto& [n, s] : fv) names.push_back(n);
    throw FreeVariableError(names);
  }
  Interleaver il;
  pa::Tree t = il.run(f);
  t = pa::forall(il.maxc, pa::mk_or({pa::negate(il.nonneg(il.maxc)), t}));
  if (t->kind == pa::Node::Kind::True) return Verdict::Valid;
  if (t->kind == pa::Node::Kind::False) return Verdict::Invalid;
  throw ContractError("interleaved elimination left a non-ground residue");
}

}  // namespace bapa
