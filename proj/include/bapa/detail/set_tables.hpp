#pragma once

// Set terms as truth tables over a small ordered list of set variables. Assignment a
// gives variable j the value of bit j; table bit a is set when a lies in the set.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bapa/formula.hpp"

namespace bapa::detail {

using Table = std::uint64_t;

struct Space {
  std::vector<std::string> vars;
  std::map<std::string, int> index;

  int n() const { return static_cast<int>(vars.size()); }
  Table full() const {
    int bits = 1 << n();
    return bits == 64 ? ~Table{0} : ((Table{1} << bits) - 1);
  }
  Table var_table(int j) const {
    Table t = 0;
    for (int a = 0; a < (1 << n()); ++a)
      if ((a >> j) & 1) t |= Table{1} << a;
    return t;
  }
  Table table(const SetTerm& s) const {
    switch (s->kind) {
      case SetKind::Var: {
        auto it = index.find(s->name);
        if (it == index.end()) throw ContractError("unknown set variable '" + s->name + "'");
        return var_table(it->second);
      }
      case SetKind::Empty: return 0;
      case SetKind::Univ: return full();
      case SetKind::Compl: return full() & ~table(s->lhs);
      case SetKind::Union: return table(s->lhs) | table(s->rhs);
      case SetKind::Inter: return table(s->lhs) & table(s->rhs);
    }
    return 0;
  }
  bool depends(Table t, int j) const {
    Table v = var_table(j);
    // Compare t on assignments with bit j set against the same assignments with it cleared.
    Table hi = t & v;
    Table lo = t & ~v;
    return (hi >> (1 << j)) != lo;
  }
  SetTerm term(Table t) const {
    if (t == full()) return set_univ();
    if (t == 0) return set_empty();
    std::vector<int> support;
    for (int j = 0; j < n(); ++j)
      if (depends(t, j)) support.push_back(j);
    std::vector<SetTerm> cubes;
    std::set<int> seen;
    for (int a = 0; a < (1 << n()); ++a) {
      if (!((t >> a) & 1)) continue;
      int key = 0;
      for (int j : support) key |= a & (1 << j);
      if (!seen.insert(key).second) continue;
      SetTerm c;
      for (int j : support) {
        SetTerm v = set_var(vars[static_cast<std::size_t>(j)]);
        if (!((a >> j) & 1)) v = set_compl(v);
        c = c ? set_inter(c, v) : v;
      }
      cubes.push_back(c);
    }
    SetTerm u;
    for (const auto& c : cubes) u = u ? set_union(u, c) : c;
    return u;
  }
};

}  // namespace bapa::detail
