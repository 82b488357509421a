#include "bapa/detail/qe.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace bapa::pa {

// ---------------------------------------------------------------------------
// Variables and linear terms

VarId VarTable::intern(const std::string& name) {
  auto it = ids_.find(name);
  if (it != ids_.end()) return it->second;
  VarId id = static_cast<VarId>(names_.size());
  names_.push_back(name);
  ids_.emplace(name, id);
  return id;
}

std::optional<VarId> VarTable::find(const std::string& name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

VarId VarTable::fresh(const std::string& base) {
  VarId id = static_cast<VarId>(names_.size());
  names_.push_back(base + "#" + std::to_string(id));
  return id;
}

BigInt Linear::coeff(VarId x) const {
  auto it = std::lower_bound(terms.begin(), terms.end(), x,
                             [](const auto& p, VarId v) { return p.first < v; });
  if (it != terms.end() && it->first == x) return it->second;
  return 0;
}

bool Linear::has(VarId x) const {
  auto it = std::lower_bound(terms.begin(), terms.end(), x,
                             [](const auto& p, VarId v) { return p.first < v; });
  return it != terms.end() && it->first == x;
}

Linear Linear::without(VarId x) const {
  Linear out;
  out.c0 = c0;
  out.terms.reserve(terms.size());
  for (const auto& p : terms)
    if (p.first != x) out.terms.push_back(p);
  return out;
}

Linear lin_add(const Linear& a, const Linear& b) {
  Linear out;
  out.c0 = a.c0 + b.c0;
  out.terms.reserve(a.terms.size() + b.terms.size());
  std::size_t i = 0, j = 0;
  while (i < a.terms.size() || j < b.terms.size()) {
    if (j == b.terms.size() || (i < a.terms.size() && a.terms[i].first < b.terms[j].first)) {
      out.terms.push_back(a.terms[i++]);
    } else if (i == a.terms.size() || b.terms[j].first < a.terms[i].first) {
      out.terms.push_back(b.terms[j++]);
    } else {
      BigInt c = a.terms[i].second + b.terms[j].second;
      if (c != 0) out.terms.emplace_back(a.terms[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  return out;
}

Linear lin_scale(const Linear& a, const BigInt& k) {
  Linear out;
  if (k == 0) return out;
  out.c0 = a.c0 * k;
  out.terms.reserve(a.terms.size());
  for (const auto& [v, c] : a.terms) out.terms.emplace_back(v, c * k);
  return out;
}

Linear lin_var(VarId x, const BigInt& k) {
  Linear out;
  if (k != 0) out.terms.emplace_back(x, k);
  return out;
}

Linear lin_const(const BigInt& c) {
  Linear out;
  out.c0 = c;
  return out;
}

// ---------------------------------------------------------------------------
// Literals

namespace {

std::size_t hmix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t hbig(const BigInt& v) {
  std::size_t h = static_cast<std::size_t>(mpz_sgn(v.get_mpz_t()) + 2);
  if (mpz_size(v.get_mpz_t()) > 0) h = hmix(h, mpz_getlimbn(v.get_mpz_t(), 0));
  return h;
}

std::size_t hterms(const Terms& t) {
  std::size_t h = t.size();
  for (const auto& [v, c] : t) h = hmix(hmix(h, static_cast<std::size_t>(v)), hbig(c));
  return h;
}

std::size_t hlit(const Literal& l) {
  std::size_t h = static_cast<std::size_t>(l.rel) * 31 + (l.positive ? 7 : 0);
  h = hmix(h, static_cast<std::size_t>(l.prop + 1));
  h = hmix(h, hbig(l.d));
  h = hmix(h, hbig(l.t.c0));
  return hmix(h, hterms(l.t.terms));
}

BigInt gcd_of(const Terms& t, BigInt g = 0) {
  for (const auto& [v, c] : t) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

BigInt fdiv(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

BigInt fmod(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

bool terms_equal(const Terms& a, const Terms& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].first != b[i].first || a[i].second != b[i].second) return false;
  return true;
}

bool terms_less(const Terms& a, const Terms& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].first != b[i].first) return a[i].first < b[i].first;
    int c = cmp(a[i].second, b[i].second);
    if (c != 0) return c < 0;
  }
  return a.size() < b.size();
}

struct TermsLess {
  bool operator()(const Terms& a, const Terms& b) const { return terms_less(a, b); }
};

Terms negate_terms(const Terms& t) {
  Terms out;
  out.reserve(t.size());
  for (const auto& [v, c] : t) out.emplace_back(v, -c);
  return out;
}

}  // namespace

bool lit_equal(const Literal& a, const Literal& b) {
  return a.rel == b.rel && a.positive == b.positive && a.prop == b.prop && a.d == b.d &&
         a.t.c0 == b.t.c0 && terms_equal(a.t.terms, b.t.terms);
}

bool lit_less(const Literal& a, const Literal& b) {
  if (a.rel != b.rel) return a.rel < b.rel;
  if (a.prop != b.prop) return a.prop < b.prop;
  if (a.positive != b.positive) return a.positive < b.positive;
  if (int c = cmp(a.d, b.d); c != 0) return c < 0;
  if (!terms_equal(a.t.terms, b.t.terms)) return terms_less(a.t.terms, b.t.terms);
  return a.t.c0 < b.t.c0;
}

// ---------------------------------------------------------------------------
// Nodes

bool Node::contains(VarId v) const { return std::binary_search(vars.begin(), vars.end(), v); }

namespace {

using Kind = Node::Kind;

Tree make_const(Kind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->hash = k == Kind::True ? 0x51ed27 : 0x2f1a3b;
  return n;
}

Tree make_lit_node(Literal l) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lit;
  if (l.rel == Rel::Prop) {
    n->vars.push_back(l.prop);
  } else {
    n->vars.reserve(l.t.terms.size());
    for (const auto& p : l.t.terms) n->vars.push_back(p.first);
  }
  n->hash = hlit(l);
  n->lit = std::move(l);
  return n;
}

Tree make_nary(Kind k, std::vector<Tree> kids) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  std::size_t h = k == Kind::And ? 0xa11 : 0x0f0f;
  std::size_t sz = 1;
  std::vector<VarId> vars;
  for (const auto& c : kids) {
    h = hmix(h, c->hash);
    sz += c->size;
    std::vector<VarId> merged;
    merged.reserve(vars.size() + c->vars.size());
    std::set_union(vars.begin(), vars.end(), c->vars.begin(), c->vars.end(),
                   std::back_inserter(merged));
    vars.swap(merged);
  }
  n->hash = h;
  n->size = sz;
  n->vars = std::move(vars);
  n->kids = std::move(kids);
  return n;
}

bool node_less(const Tree& a, const Tree& b) {
  if (a->hash != b->hash) return a->hash < b->hash;
  if (a->kind != b->kind) return a->kind < b->kind;
  if (a->kind == Kind::Lit) return lit_less(a->lit, b->lit);
  return false;
}

}  // namespace

Tree t_true() {
  static const Tree t = make_const(Kind::True);
  return t;
}
Tree t_false() {
  static const Tree f = make_const(Kind::False);
  return f;
}
Tree t_bool(bool b) { return b ? t_true() : t_false(); }

bool tree_equal(const Tree& a, const Tree& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->hash != b->hash) return false;
  switch (a->kind) {
    case Kind::True:
    case Kind::False: return true;
    case Kind::Lit: return lit_equal(a->lit, b->lit);
    default: break;
  }
  if (a->kids.size() != b->kids.size()) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!tree_equal(a->kids[i], b->kids[i])) return false;
  return true;
}

Tree mk_lit(Literal l) {
  switch (l.rel) {
    case Rel::Prop: return make_lit_node(std::move(l));
    case Rel::Lt: {
      if (l.t.terms.empty()) return t_bool(l.t.c0 > 0);
      BigInt g = gcd_of(l.t.terms);
      if (g > 1) {
        // 0 < g*s + c  <=>  0 < s + 1 + floor((c - 1) / g)
        for (auto& p : l.t.terms) mpz_divexact(p.second.get_mpz_t(), p.second.get_mpz_t(), g.get_mpz_t());
        l.t.c0 = 1 + fdiv(l.t.c0 - 1, g);
      }
      return make_lit_node(std::move(l));
    }
    case Rel::Eq: {
      if (l.t.terms.empty()) return t_bool(l.t.c0 == 0);
      BigInt g = gcd_of(l.t.terms);
      if (g > 1) {
        if (fmod(l.t.c0, g) != 0) return t_false();
        for (auto& p : l.t.terms) mpz_divexact(p.second.get_mpz_t(), p.second.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(l.t.c0.get_mpz_t(), l.t.c0.get_mpz_t(), g.get_mpz_t());
      }
      if (l.t.terms.front().second < 0) l.t = lin_scale(l.t, -1);
      return make_lit_node(std::move(l));
    }
    case Rel::Dvd:
    case Rel::NDvd: {
      bool pos = l.rel == Rel::Dvd;
      if (l.d <= 0) throw ContractError("divisor must be positive");
      if (l.d == 1) return t_bool(pos);
      Terms reduced;
      for (auto& [v, c] : l.t.terms) {
        BigInt r = fmod(c, l.d);
        if (r != 0) reduced.emplace_back(v, std::move(r));
      }
      l.t.terms = std::move(reduced);
      l.t.c0 = fmod(l.t.c0, l.d);
      if (l.t.terms.empty()) return t_bool((l.t.c0 == 0) == pos);
      BigInt g = gcd_of(l.t.terms, l.d);
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), l.t.c0.get_mpz_t());
      if (g > 1) {
        for (auto& p : l.t.terms) mpz_divexact(p.second.get_mpz_t(), p.second.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(l.t.c0.get_mpz_t(), l.t.c0.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(l.d.get_mpz_t(), l.d.get_mpz_t(), g.get_mpz_t());
        if (l.d == 1) return t_bool(pos);
      }
      return make_lit_node(std::move(l));
    }
  }
  return t_false();
}

Tree mk_lt(Linear t) {
  Literal l;
  l.rel = Rel::Lt;
  l.t = std::move(t);
  return mk_lit(std::move(l));
}

Tree mk_eq(Linear t) {
  Literal l;
  l.rel = Rel::Eq;
  l.t = std::move(t);
  return mk_lit(std::move(l));
}

Tree mk_dvd(BigInt d, Linear t) {
  Literal l;
  l.rel = Rel::Dvd;
  l.d = std::move(d);
  l.t = std::move(t);
  return mk_lit(std::move(l));
}

Tree mk_prop(VarId p, bool positive) {
  Literal l;
  l.rel = Rel::Prop;
  l.prop = p;
  l.positive = positive;
  return mk_lit(std::move(l));
}

namespace {

Tree mk_ndvd(BigInt d, Linear t) {
  Literal l;
  l.rel = Rel::NDvd;
  l.d = std::move(d);
  l.t = std::move(t);
  return mk_lit(std::move(l));
}

// Bounds on a sign-normalized variable part s: lo <= s <= hi, or s = eq.
struct Bounds {
  std::optional<BigInt> lo, hi, eq;
  std::vector<Tree> origin;
};

// Simplifies a conjunction of literals. Returns nullopt when unsatisfiable.
std::optional<std::vector<Tree>> simplify_conj_lits(const std::vector<Tree>& lits) {
  std::map<Terms, Bounds, TermsLess> bounds;
  struct DvdGroup {
    std::optional<BigInt> pos;
    std::set<BigInt> negs;
    std::vector<Tree> origin;
  };
  std::map<std::pair<BigInt, Terms>, DvdGroup,
           decltype([](const std::pair<BigInt, Terms>& a, const std::pair<BigInt, Terms>& b) {
             if (int c = cmp(a.first, b.first); c != 0) return c < 0;
             return terms_less(a.second, b.second);
           })>
      dvds;
  std::map<VarId, bool> props;
  std::vector<Tree> out;
  for (const auto& n : lits) {
    const Literal& l = n->lit;
    switch (l.rel) {
      case Rel::Prop: {
        auto [it, inserted] = props.emplace(l.prop, l.positive);
        if (!inserted && it->second != l.positive) return std::nullopt;
        if (inserted) out.push_back(n);
        break;
      }
      case Rel::Lt: {
        bool up = l.t.terms.front().second > 0;
        Terms key = up ? l.t.terms : negate_terms(l.t.terms);
        Bounds& b = bounds[key];
        b.origin.push_back(n);
        if (up) {
          BigInt lo = 1 - l.t.c0;
          if (!b.lo || lo > *b.lo) b.lo = lo;
        } else {
          BigInt hi = l.t.c0 - 1;
          if (!b.hi || hi < *b.hi) b.hi = hi;
        }
        break;
      }
      case Rel::Eq: {
        Bounds& b = bounds[l.t.terms];
        b.origin.push_back(n);
        BigInt v = -l.t.c0;
        if (b.eq && *b.eq != v) return std::nullopt;
        b.eq = v;
        break;
      }
      case Rel::Dvd:
      case Rel::NDvd: {
        DvdGroup& g = dvds[{l.d, l.t.terms}];
        g.origin.push_back(n);
        if (l.rel == Rel::Dvd) {
          if (g.pos && *g.pos != l.t.c0) return std::nullopt;
          g.pos = l.t.c0;
        } else {
          g.negs.insert(l.t.c0);
        }
        break;
      }
    }
  }
  for (auto& [key, b] : bounds) {
    if (b.origin.size() == 1) {
      out.push_back(b.origin.front());
      continue;
    }
    Linear s;
    s.terms = key;
    if (b.eq) {
      if ((b.lo && *b.eq < *b.lo) || (b.hi && *b.eq > *b.hi)) return std::nullopt;
      out.push_back(mk_eq(lin_add(s, lin_const(-*b.eq))));
      continue;
    }
    if (b.lo && b.hi) {
      if (*b.lo > *b.hi) return std::nullopt;
      if (*b.lo == *b.hi) {
        out.push_back(mk_eq(lin_add(s, lin_const(-*b.lo))));
        continue;
      }
    }
    if (b.lo) out.push_back(mk_lt(lin_add(s, lin_const(1 - *b.lo))));
    if (b.hi) out.push_back(mk_lt(lin_add(lin_scale(s, -1), lin_const(*b.hi + 1))));
  }
  for (auto& [key, g] : dvds) {
    if (g.origin.size() == 1) {
      out.push_back(g.origin.front());
      continue;
    }
    if (g.pos) {
      if (g.negs.count(*g.pos)) return std::nullopt;
      Linear t;
      t.terms = key.second;
      t.c0 = *g.pos;
      out.push_back(mk_dvd(key.first, t));
      continue;
    }
    for (const auto& c : g.negs) {
      Linear t;
      t.terms = key.second;
      t.c0 = c;
      out.push_back(mk_ndvd(key.first, t));
    }
  }
  return out;
}

// Simplifies a disjunction of literals. Returns nullopt when valid.
std::optional<std::vector<Tree>> simplify_disj_lits(const std::vector<Tree>& lits) {
  struct Side {
    std::optional<BigInt> lo;  // s >= lo
    std::optional<BigInt> hi;  // s <= hi
    std::vector<Tree> origin;
  };
  std::map<Terms, Side, TermsLess> groups;
  std::map<VarId, bool> props;
  std::vector<Tree> out;
  for (const auto& n : lits) {
    const Literal& l = n->lit;
    if (l.rel == Rel::Prop) {
      auto [it, inserted] = props.emplace(l.prop, l.positive);
      if (!inserted && it->second != l.positive) return std::nullopt;
      if (inserted) out.push_back(n);
      continue;
    }
    if (l.rel != Rel::Lt) {
      out.push_back(n);
      continue;
    }
    bool up = l.t.terms.front().second > 0;
    Terms key = up ? l.t.terms : negate_terms(l.t.terms);
    Side& s = groups[key];
    s.origin.push_back(n);
    if (up) {
      BigInt lo = 1 - l.t.c0;
      if (!s.lo || lo < *s.lo) s.lo = lo;
    } else {
      BigInt hi = l.t.c0 - 1;
      if (!s.hi || hi > *s.hi) s.hi = hi;
    }
  }
  for (auto& [key, s] : groups) {
    if (s.origin.size() == 1) {
      out.push_back(s.origin.front());
      continue;
    }
    if (s.lo && s.hi && *s.lo <= *s.hi + 1) return std::nullopt;
    Linear v;
    v.terms = key;
    if (s.lo) out.push_back(mk_lt(lin_add(v, lin_const(1 - *s.lo))));
    if (s.hi) out.push_back(mk_lt(lin_add(lin_scale(v, -1), lin_const(*s.hi + 1))));
  }
  return out;
}

void sort_dedupe(std::vector<Tree>& v) {
  std::sort(v.begin(), v.end(), node_less);
  std::vector<Tree> out;
  out.reserve(v.size());
  for (auto& t : v) {
    bool dup = false;
    for (auto it = out.rbegin(); it != out.rend() && (*it)->hash == t->hash; ++it) {
      if (tree_equal(*it, t)) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(t));
  }
  v.swap(out);
}

bool has_kid(const Tree& parent, const std::unordered_multimap<std::size_t, Tree>& lits) {
  for (const auto& k : parent->kids) {
    if (k->kind != Kind::Lit) continue;
    auto [b, e] = lits.equal_range(k->hash);
    for (auto it = b; it != e; ++it)
      if (tree_equal(it->second, k)) return true;
  }
  return false;
}

Tree mk_junction(Kind k, std::vector<Tree> kids) {
  const bool is_and = k == Kind::And;
  const Kind unit = is_and ? Kind::True : Kind::False;
  const Kind zero = is_and ? Kind::False : Kind::True;
  std::vector<Tree> lits, others;
  for (auto& c : kids) {
    if (c->kind == unit) continue;
    if (c->kind == zero) return c;
    if (c->kind == k) {
      for (const auto& g : c->kids) (g->kind == Kind::Lit ? lits : others).push_back(g);
    } else {
      (c->kind == Kind::Lit ? lits : others).push_back(std::move(c));
    }
  }
  if (lits.size() > 1) {
    auto r = is_and ? simplify_conj_lits(lits) : simplify_disj_lits(lits);
    if (!r) return is_and ? t_false() : t_true();
    lits = std::move(*r);
    // Merging can produce constants.
    std::vector<Tree> keep;
    for (auto& l : lits) {
      if (l->kind == unit) continue;
      if (l->kind == zero) return l;
      keep.push_back(std::move(l));
    }
    lits.swap(keep);
  }
  if (!lits.empty() && !others.empty()) {
    // Absorption: A & (A | B) = A and A | (A & B) = A.
    std::unordered_multimap<std::size_t, Tree> index;
    for (const auto& l : lits) index.emplace(l->hash, l);
    std::vector<Tree> keep;
    for (auto& o : others)
      if (!has_kid(o, index)) keep.push_back(std::move(o));
    others.swap(keep);
  }
  std::vector<Tree> all = std::move(lits);
  for (auto& o : others) all.push_back(std::move(o));
  sort_dedupe(all);
  if (all.empty()) return is_and ? t_true() : t_false();
  if (all.size() == 1) return all.front();
  return make_nary(k, std::move(all));
}

}  // namespace

Tree mk_and(std::vector<Tree> kids) { return mk_junction(Kind::And, std::move(kids)); }
Tree mk_or(std::vector<Tree> kids) { return mk_junction(Kind::Or, std::move(kids)); }

namespace {

Tree negate_lit(const Literal& l) {
  switch (l.rel) {
    case Rel::Lt: return mk_lt(lin_add(lin_scale(l.t, -1), lin_const(1)));
    case Rel::Eq: return mk_or({mk_lt(l.t), mk_lt(lin_scale(l.t, -1))});
    case Rel::Dvd: return mk_ndvd(l.d, l.t);
    case Rel::NDvd: return mk_dvd(l.d, l.t);
    case Rel::Prop: return mk_prop(l.prop, !l.positive);
  }
  return t_false();
}

}  // namespace

Tree negate(const Tree& t) {
  switch (t->kind) {
    case Kind::True: return t_false();
    case Kind::False: return t_true();
    case Kind::Lit: return negate_lit(t->lit);
    case Kind::And:
    case Kind::Or: {
      std::vector<Tree> kids;
      kids.reserve(t->kids.size());
      for (const auto& k : t->kids) kids.push_back(negate(k));
      return t->kind == Kind::And ? mk_or(std::move(kids)) : mk_and(std::move(kids));
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

Tree subst_lit(const Literal& l, VarId x, const Linear& num, const BigInt& den) {
  BigInt c = l.t.coeff(x);
  Literal out;
  out.rel = l.rel;
  out.d = l.d;
  Linear rest = l.t.without(x);
  if (den == 1) {
    out.t = lin_add(rest, lin_scale(num, c));
  } else {
    out.t = lin_add(lin_scale(rest, den), lin_scale(num, c));
    if (l.rel == Rel::Dvd || l.rel == Rel::NDvd) out.d = l.d * den;
  }
  return mk_lit(std::move(out));
}

}  // namespace

Tree subst(const Tree& t, VarId x, const Linear& num, const BigInt& den) {
  if (!t->contains(x)) return t;
  if (t->kind == Kind::Lit) return subst_lit(t->lit, x, num, den);
  std::vector<Tree> kids;
  kids.reserve(t->kids.size());
  for (const auto& k : t->kids) kids.push_back(subst(k, x, num, den));
  return t->kind == Kind::And ? mk_and(std::move(kids)) : mk_or(std::move(kids));
}

Tree subst_prop(const Tree& t, VarId p, bool value) {
  if (!t->contains(p)) return t;
  if (t->kind == Kind::Lit) {
    if (t->lit.rel == Rel::Prop && t->lit.prop == p) return t_bool(t->lit.positive == value);
    return t;
  }
  std::vector<Tree> kids;
  kids.reserve(t->kids.size());
  for (const auto& k : t->kids) kids.push_back(subst_prop(k, p, value));
  return t->kind == Kind::And ? mk_and(std::move(kids)) : mk_or(std::move(kids));
}

// ---------------------------------------------------------------------------
// DNF

namespace {

constexpr std::size_t kDnfLimit = 200000;

std::size_t conj_hash(const Conj& c) {
  std::size_t h = c.size();
  for (const auto& t : c) h = hmix(h, t->hash);
  return h;
}

bool conj_equal(const Conj& a, const Conj& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!tree_equal(a[i], b[i])) return false;
  return true;
}

// Sorted, simplified conjunction; nullopt when unsatisfiable.
std::optional<Conj> normalize_conj(Conj c) {
  if (c.size() > 1) {
    auto r = simplify_conj_lits(c);
    if (!r) return std::nullopt;
    Conj keep;
    for (auto& l : *r) {
      if (l->kind == Kind::True) continue;
      if (l->kind == Kind::False) return std::nullopt;
      keep.push_back(std::move(l));
    }
    c.swap(keep);
  }
  sort_dedupe(c);
  return c;
}

void dedupe_conjs(std::vector<Conj>& cs) {
  std::unordered_multimap<std::size_t, std::size_t> seen;
  std::vector<Conj> out;
  out.reserve(cs.size());
  for (auto& c : cs) {
    std::size_t h = conj_hash(c);
    auto [b, e] = seen.equal_range(h);
    bool dup = false;
    for (auto it = b; it != e && !dup; ++it) dup = conj_equal(out[it->second], c);
    if (dup) continue;
    seen.emplace(h, out.size());
    out.push_back(std::move(c));
  }
  cs.swap(out);
}

}  // namespace

std::vector<Conj> dnf(const Tree& t) {
  switch (t->kind) {
    case Kind::True: return {Conj{}};
    case Kind::False: return {};
    case Kind::Lit: return {Conj{t}};
    case Kind::Or: {
      std::vector<Conj> out;
      for (const auto& k : t->kids) {
        auto d = dnf(k);
        for (auto& c : d) out.push_back(std::move(c));
        if (out.size() > kDnfLimit) throw ResourceError("DNF exceeds conjunct limit");
      }
      dedupe_conjs(out);
      return out;
    }
    case Kind::And: {
      std::vector<Conj> acc{Conj{}};
      for (const auto& k : t->kids) {
        auto d = dnf(k);
        std::vector<Conj> next;
        for (const auto& a : acc) {
          for (const auto& b : d) {
            Conj m = a;
            m.insert(m.end(), b.begin(), b.end());
            if (auto n = normalize_conj(std::move(m))) next.push_back(std::move(*n));
          }
          if (next.size() > kDnfLimit) throw ResourceError("DNF exceeds conjunct limit");
        }
        dedupe_conjs(next);
        acc.swap(next);
        if (acc.empty()) break;
      }
      return acc;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Elimination

namespace {

BigInt abs_big(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

// Picks the equality literal best suited to eliminate x: unit coefficient first,
// then smallest coefficient, then fewest terms.
const Literal* pick_eq(const std::vector<const Literal*>& lits, VarId x) {
  const Literal* best = nullptr;
  BigInt best_a;
  for (const Literal* l : lits) {
    if (l->rel != Rel::Eq) continue;
    BigInt a = abs_big(l->t.coeff(x));
    if (a == 0) continue;
    if (!best || a < best_a || (a == best_a && l->t.terms.size() < best->t.terms.size())) {
      best = l;
      best_a = a;
    }
  }
  return best;
}

// x = num / den for the equality 0 = a*x + r; extra divisibility when |a| > 1.
void solve_eq(const Literal& eq, VarId x, Linear& num, BigInt& den, Tree& extra) {
  BigInt a = eq.t.coeff(x);
  Linear r = eq.t.without(x);
  if (a < 0) {
    a = -a;
    r = lin_scale(r, -1);
  }
  num = lin_scale(r, -1);
  den = a;
  extra = a == 1 ? t_true() : mk_dvd(a, r);
}

}  // namespace

Tree elim_conj(VarId x, const Conj& lits, QeStats* stats) {
  std::vector<Tree> rest;
  std::vector<const Literal*> with;
  for (const auto& l : lits) {
    if (l->contains(x)) with.push_back(&l->lit);
    else rest.push_back(l);
  }
  if (with.empty()) return mk_and(rest);
  if (stats) ++stats->eliminations;

  if (const Literal* eq = pick_eq(with, x)) {
    Linear num;
    BigInt den;
    Tree extra;
    solve_eq(*eq, x, num, den, extra);
    std::vector<Tree> out = rest;
    out.push_back(extra);
    for (const Literal* l : with)
      if (l != eq) out.push_back(subst_lit(*l, x, num, den));
    return mk_and(std::move(out));
  }

  // Unit coefficients and no divisibility: the exact shadow b + 1 < a of each pair.
  bool unit = true;
  for (const Literal* l : with)
    unit = unit && l->rel == Rel::Lt && abs_big(l->t.coeff(x)) == 1;
  if (unit) {
    std::vector<Linear> lo, hi;
    for (const Literal* l : with) {
      Linear r = l->t.without(x);
      if (l->t.coeff(x) > 0) lo.push_back(lin_scale(r, -1));
      else hi.push_back(r);
    }
    std::vector<Tree> out = rest;
    for (const auto& b : lo)
      for (const auto& a : hi) out.push_back(mk_lt(lin_add(lin_add(a, lin_scale(b, -1)), lin_const(-1))));
    return mk_and(std::move(out));
  }

  if (stats) ++stats->cooper_steps;
  BigInt m = 1;
  for (const Literal* l : with) m = lcm(m, abs_big(l->t.coeff(x)));

  // After scaling, x stands for y = m*x and has coefficient +-1 everywhere.
  std::vector<Literal> scaled;
  std::vector<Linear> lowers, uppers;  // y > b, y < a
  std::vector<Literal> periodic;
  BigInt period = 1;
  for (const Literal* l : with) {
    BigInt c = l->t.coeff(x);
    BigInt k = m / abs_big(c);
    Literal s;
    s.rel = l->rel;
    s.d = l->d * k;
    Linear rest_t = lin_scale(l->t.without(x), k);
    int sign = c > 0 ? 1 : -1;
    s.t = lin_add(rest_t, lin_var(x, sign));
    if (l->rel == Rel::Lt) {
      if (sign > 0) lowers.push_back(lin_scale(rest_t, -1));
      else uppers.push_back(rest_t);
    } else {
      period = lcm(period, s.d);
      periodic.push_back(s);
    }
    scaled.push_back(std::move(s));
  }
  if (m > 1) {
    Literal s;
    s.rel = Rel::Dvd;
    s.d = m;
    s.t = lin_var(x, 1);
    period = lcm(period, m);
    periodic.push_back(s);
    scaled.push_back(std::move(s));
  }

  std::vector<Tree> disj;
  if (lowers.empty() || uppers.empty()) {
    if (periodic.empty()) return mk_and(rest);
    for (BigInt i = 1; i <= period; ++i) {
      std::vector<Tree> parts;
      for (const auto& p : periodic) parts.push_back(subst_lit(p, x, lin_const(i), 1));
      disj.push_back(mk_and(std::move(parts)));
      if (disj.back()->kind == Kind::True) break;
    }
  } else {
    bool use_lower = lowers.size() <= uppers.size();
    const auto& pts = use_lower ? lowers : uppers;
    for (const auto& b : pts) {
      for (BigInt i = 1; i <= period; ++i) {
        Linear v = lin_add(b, lin_const(use_lower ? BigInt(i) : BigInt(-i)));
        std::vector<Tree> parts;
        for (const auto& s : scaled) parts.push_back(subst_lit(s, x, v, 1));
        disj.push_back(mk_and(std::move(parts)));
        if (disj.back()->kind == Kind::True) break;
      }
    }
  }
  rest.push_back(mk_or(std::move(disj)));
  return mk_and(std::move(rest));
}

namespace {

// +1 / -1 when every literal mentioning x is a strict bound with that coefficient sign.
int monotone_sign(const Tree& t, VarId x) {
  if (!t->contains(x)) return 2;
  if (t->kind == Kind::Lit) {
    if (t->lit.rel != Rel::Lt) return 0;
    return t->lit.t.coeff(x) > 0 ? 1 : -1;
  }
  int sign = 2;
  for (const auto& k : t->kids) {
    int s = monotone_sign(k, x);
    if (s == 0) return 0;
    if (s == 2) continue;
    if (sign == 2) sign = s;
    else if (sign != s) return 0;
  }
  return sign;
}

Tree drop_var_lits(const Tree& t, VarId x) {
  if (!t->contains(x)) return t;
  if (t->kind == Kind::Lit) return t_true();
  std::vector<Tree> kids;
  for (const auto& k : t->kids) kids.push_back(drop_var_lits(k, x));
  return t->kind == Kind::And ? mk_and(std::move(kids)) : mk_or(std::move(kids));
}

}  // namespace

Tree exists(VarId x, const Tree& t, QeStats* stats) {
  if (!t->contains(x)) return t;
  int ms = monotone_sign(t, x);
  if (ms == 1 || ms == -1) return drop_var_lits(t, x);
  switch (t->kind) {
    case Kind::Lit: return elim_conj(x, {t}, stats);
    case Kind::Or: {
      std::vector<Tree> kids;
      kids.reserve(t->kids.size());
      for (const auto& k : t->kids) {
        kids.push_back(exists(x, k, stats));
        if (kids.back()->kind == Kind::True) return kids.back();
      }
      return mk_or(std::move(kids));
    }
    case Kind::And: {
      std::vector<Tree> free, dep;
      for (const auto& k : t->kids) (k->contains(x) ? dep : free).push_back(k);
      std::vector<const Literal*> dep_lits;
      for (const auto& k : dep)
        if (k->kind == Kind::Lit) dep_lits.push_back(&k->lit);
      Tree r;
      if (const Literal* eq = pick_eq(dep_lits, x)) {
        if (stats) ++stats->eliminations;
        Linear num;
        BigInt den;
        Tree extra;
        solve_eq(*eq, x, num, den, extra);
        std::vector<Tree> parts{extra};
        for (const auto& k : dep)
          if (!(k->kind == Kind::Lit && &k->lit == eq)) parts.push_back(subst(k, x, num, den));
        r = mk_and(std::move(parts));
      } else if (dep.size() == 1) {
        r = exists(x, dep.front(), stats);
      } else {
        // Distribute the smallest disjunction and recurse on each branch.
        std::size_t pick = dep.size();
        for (std::size_t i = 0; i < dep.size(); ++i) {
          if (dep[i]->kind != Kind::Or) continue;
          if (pick == dep.size() || dep[i]->kids.size() < dep[pick]->kids.size()) pick = i;
        }
        if (pick == dep.size()) {
          r = elim_conj(x, dep, stats);
        } else {
          if (stats) ++stats->dnf_conjuncts;
          std::vector<Tree> branches;
          for (const auto& alt : dep[pick]->kids) {
            std::vector<Tree> parts;
            for (std::size_t i = 0; i < dep.size(); ++i)
              if (i != pick) parts.push_back(dep[i]);
            parts.push_back(alt);
            branches.push_back(exists(x, mk_and(std::move(parts)), stats));
            if (branches.back()->kind == Kind::True) break;
          }
          r = mk_or(std::move(branches));
        }
      }
      free.push_back(r);
      return mk_and(std::move(free));
    }
    default: return t;
  }
}

Tree forall(VarId x, const Tree& t, QeStats* stats) {
  return negate(exists(x, negate(t), stats));
}

namespace {

void count_occurrences(const Tree& t, std::map<VarId, std::size_t>& counts) {
  if (t->kind == Kind::Lit) {
    for (VarId v : t->vars) {
      auto it = counts.find(v);
      if (it != counts.end()) ++it->second;
    }
    return;
  }
  for (const auto& k : t->kids) count_occurrences(k, counts);
}

bool has_top_eq(const Tree& t, VarId x) {
  auto is_eq = [&](const Tree& n) {
    return n->kind == Kind::Lit && n->lit.rel == Rel::Eq && n->lit.t.has(x);
  };
  if (is_eq(t)) return true;
  if (t->kind != Kind::And) return false;
  for (const auto& k : t->kids)
    if (is_eq(k)) return true;
  return false;
}

}  // namespace

Tree exists_block(std::vector<VarId> xs, Tree t, QeStats* stats) {
  while (!xs.empty()) {
    std::map<VarId, std::size_t> counts;
    for (VarId x : xs) counts[x] = 0;
    count_occurrences(t, counts);
    std::vector<VarId> live;
    for (VarId x : xs)
      if (counts[x] > 0 && t->contains(x)) live.push_back(x);
    xs.swap(live);
    if (xs.empty()) break;
    std::size_t best = 0;
    std::size_t best_score = SIZE_MAX;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      std::size_t score = counts[xs[i]] + 1;
      if (has_top_eq(t, xs[i])) score = 0;
      if (score < best_score) {
        best_score = score;
        best = i;
      }
    }
    VarId x = xs[best];
    xs.erase(xs.begin() + static_cast<std::ptrdiff_t>(best));
    t = exists(x, t, stats);
  }
  return t;
}

Tree forall_block(std::vector<VarId> xs, const Tree& t, QeStats* stats) {
  return negate(exists_block(std::move(xs), negate(t), stats));
}

Tree exists_prop(VarId p, const Tree& t) {
  if (!t->contains(p)) return t;
  return mk_or({subst_prop(t, p, true), subst_prop(t, p, false)});
}

Tree forall_prop(VarId p, const Tree& t) {
  if (!t->contains(p)) return t;
  return mk_and({subst_prop(t, p, true), subst_prop(t, p, false)});
}

// ---------------------------------------------------------------------------
// Evaluation

BigInt eval_linear(const Linear& l, const std::function<BigInt(VarId)>& env) {
  BigInt v = l.c0;
  for (const auto& [x, c] : l.terms) v += c * env(x);
  return v;
}

bool eval(const Tree& t, const std::function<BigInt(VarId)>& env) {
  switch (t->kind) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Lit: {
      const Literal& l = t->lit;
      switch (l.rel) {
        case Rel::Prop: return (env(l.prop) != 0) == l.positive;
        case Rel::Lt: return eval_linear(l.t, env) > 0;
        case Rel::Eq: return eval_linear(l.t, env) == 0;
        case Rel::Dvd: return fmod(eval_linear(l.t, env), l.d) == 0;
        case Rel::NDvd: return fmod(eval_linear(l.t, env), l.d) != 0;
      }
      return false;
    }
    case Kind::And:
      for (const auto& k : t->kids)
        if (!eval(k, env)) return false;
      return true;
    case Kind::Or:
      for (const auto& k : t->kids)
        if (eval(k, env)) return true;
      return false;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Conversion

VarId Converter::lookup(const std::string& name) {
  for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
    if (it->first == name) return it->second;
  return vars_.intern(name);
}

Linear Converter::linearize(const IntTerm& t) {
  switch (t->kind) {
    case IntKind::Var: {
      VarId v = lookup(t->name);
      auto it = ground_.find(v);
      return it != ground_.end() ? lin_const(it->second) : lin_var(v, 1);
    }
    case IntKind::Const: return lin_const(t->value);
    case IntKind::MaxCard: return lin_var(vars_.intern(kMaxc), 1);
    case IntKind::Add: return lin_add(linearize(t->lhs), linearize(t->rhs));
    case IntKind::Sub: return lin_add(linearize(t->lhs), lin_scale(linearize(t->rhs), -1));
    case IntKind::Mul: return lin_scale(linearize(t->lhs), t->value);
    case IntKind::Card: throw ContractError("card() is not a Presburger term");
  }
  return {};
}

Tree Converter::to_tree(const Formula& f) { return conv(f); }

Tree Converter::conv(const Formula& f) {
  switch (f->kind) {
    case FKind::True: return t_true();
    case FKind::False: return t_false();
    case FKind::PropVar: return mk_prop(lookup(f->name), true);
    case FKind::IntEq: return mk_eq(lin_add(linearize(f->t1), lin_scale(linearize(f->t2), -1)));
    case FKind::IntLt: return mk_lt(lin_add(linearize(f->t2), lin_scale(linearize(f->t1), -1)));
    case FKind::Dvd: return mk_dvd(f->divisor, linearize(f->t1));
    case FKind::Not: return negate(conv(f->kids[0]));
    case FKind::And:
    case FKind::Or: {
      std::vector<Tree> kids;
      for (const auto& k : f->kids) {
        kids.push_back(conv(k));
        Kind stop = f->kind == FKind::And ? Kind::False : Kind::True;
        if (kids.back()->kind == stop) return kids.back();
      }
      return f->kind == FKind::And ? mk_and(std::move(kids)) : mk_or(std::move(kids));
    }
    case FKind::Implies: return mk_or({negate(conv(f->kids[0])), conv(f->kids[1])});
    case FKind::Iff: {
      Tree a = conv(f->kids[0]);
      Tree b = conv(f->kids[1]);
      return mk_and({mk_or({negate(a), b}), mk_or({negate(b), a})});
    }
    case FKind::Exists:
    case FKind::Forall: {
      if (f->sort == Sort::Set) throw ContractError("set quantifier in a Presburger formula");
      if (f->sort == Sort::Prop) {
        VarId p = vars_.fresh(f->name);
        scope_.emplace_back(f->name, p);
        Tree body = conv(f->body());
        scope_.pop_back();
        return f->kind == FKind::Exists ? exists_prop(p, body) : forall_prop(p, body);
      }
      std::vector<Bound> block;
      Formula cur = f;
      while (cur->kind == f->kind && cur->sort == Sort::Int) {
        block.push_back({cur->name, cur->nonneg});
        cur = cur->body();
      }
      return quantifier_block(f->kind == FKind::Exists, block, cur);
    }
    default:
      throw ContractError("not a Presburger formula: set atoms must be translated first");
  }
}

namespace {

void flatten_and(const Formula& f, std::vector<Formula>& out) {
  if (f->kind == FKind::And) {
    for (const auto& k : f->kids) flatten_and(k, out);
  } else {
    out.push_back(f);
  }
}

}  // namespace

// A guard sum x1 + ... + xn = c over nonnegative block variables, with c constant
// once the enclosing ground values are substituted, has finitely many solutions.
// Those are enumerated; assignments that violate the guard contribute nothing.
Tree Converter::quantifier_block(bool ex, const std::vector<Bound>& block, const Formula& body) {
  std::vector<VarId> ids;
  for (const auto& b : block) {
    ids.push_back(vars_.fresh(b.name));
    scope_.emplace_back(b.name, ids.back());
  }
  std::vector<Formula> guards;
  if (ex) flatten_and(body, guards);
  else if (body->kind == FKind::Implies) flatten_and(body->kids[0], guards);

  struct Split {
    std::vector<VarId> parts;
    BigInt total;
  };
  std::vector<Split> splits;
  std::vector<bool> taken(ids.size(), false);
  for (const auto& g : guards) {
    if (g->kind != FKind::IntEq) continue;
    Linear d = lin_add(linearize(g->t1), lin_scale(linearize(g->t2), -1));
    if (d.terms.empty()) continue;
    int sign = d.terms.front().second > 0 ? 1 : -1;
    std::vector<std::size_t> pos;
    for (const auto& [v, c] : d.terms) {
      auto it = std::find(ids.begin(), ids.end(), v);
      if (it == ids.end() || c != sign) break;
      std::size_t i = static_cast<std::size_t>(it - ids.begin());
      if (!block[i].nonneg || taken[i]) break;
      pos.push_back(i);
    }
    if (pos.size() != d.terms.size()) continue;
    Split sp;
    for (std::size_t i : pos) {
      taken[i] = true;
      sp.parts.push_back(ids[i]);
    }
    sp.total = sign > 0 ? BigInt(-d.c0) : d.c0;
    splits.push_back(std::move(sp));
  }

  std::vector<VarId> symbolic;
  std::vector<bool> symbolic_nonneg;
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (!taken[i]) {
      symbolic.push_back(ids[i]);
      symbolic_nonneg.push_back(block[i].nonneg);
    }

  auto finish = [&]() -> Tree {
    Tree inner = conv(body);
    std::vector<Tree> parts;
    for (std::size_t i = 0; i < symbolic.size(); ++i) {
      if (!symbolic_nonneg[i]) continue;
      // x >= 0 is 0 < x + 1; its negation is 0 < -x.
      parts.push_back(ex ? mk_lt(lin_add(lin_var(symbolic[i]), lin_const(1)))
                         : mk_lt(lin_var(symbolic[i], -1)));
    }
    parts.push_back(inner);
    inner = ex ? mk_and(std::move(parts)) : mk_or(std::move(parts));
    return ex ? exists_block(symbolic, inner, &stats) : forall_block(symbolic, inner, &stats);
  };

  Tree result;
  if (splits.empty()) {
    result = finish();
  } else {
    Kind stop = ex ? Kind::True : Kind::False;
    std::vector<Tree> acc;
    bool done = false;
    std::function<void(std::size_t, std::size_t, BigInt)> assign = [&](std::size_t s, std::size_t p,
                                                                        BigInt left) {
      if (done) return;
      if (s == splits.size()) {
        acc.push_back(finish());
        done = acc.back()->kind == stop;
        return;
      }
      const Split& sp = splits[s];
      if (sp.total < 0) return;
      if (p + 1 == sp.parts.size()) {
        ground_[sp.parts[p]] = left;
        assign(s + 1, 0, s + 1 < splits.size() ? splits[s + 1].total : BigInt(0));
        return;
      }
      for (BigInt v = 0; v <= left && !done; ++v) {
        ground_[sp.parts[p]] = v;
        assign(s, p + 1, left - v);
      }
    };
    assign(0, 0, splits.front().total);
    for (const auto& sp : splits)
      for (VarId v : sp.parts) ground_.erase(v);
    result = ex ? mk_or(std::move(acc)) : mk_and(std::move(acc));
  }
  scope_.resize(scope_.size() - ids.size());
  return result;
}

IntTerm Converter::to_term(const Linear& l) const {
  IntTerm acc;
  auto var_term = [&](VarId v) -> IntTerm {
    const std::string& n = vars_.name(v);
    return n == kMaxc ? int_maxc() : int_var(n);
  };
  for (const auto& [v, c] : l.terms) {
    if (!acc) {
      acc = c == 1 ? var_term(v) : int_mul(c, var_term(v));
      continue;
    }
    BigInt a = abs_big(c);
    IntTerm t = a == 1 ? var_term(v) : int_mul(a, var_term(v));
    acc = c > 0 ? int_add(acc, t) : int_sub(acc, t);
  }
  if (!acc) return int_const(l.c0);
  if (l.c0 > 0) return int_add(acc, int_const(l.c0));
  if (l.c0 < 0) return int_sub(acc, int_const(-l.c0));
  return acc;
}

Formula Converter::to_formula(const Tree& t) const {
  switch (t->kind) {
    case Kind::True: return f_true();
    case Kind::False: return f_false();
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      for (const auto& k : t->kids) kids.push_back(to_formula(k));
      return t->kind == Kind::And ? conj(std::move(kids)) : disj(std::move(kids));
    }
    case Kind::Lit: break;
  }
  const Literal& l = t->lit;
  if (l.rel == Rel::Prop) {
    Formula p = prop_var(vars_.name(l.prop));
    return l.positive ? p : neg(p);
  }
  if (l.rel == Rel::Dvd) return dvd(l.d, to_term(l.t));
  if (l.rel == Rel::NDvd) return neg(dvd(l.d, to_term(l.t)));
  // Split 0 < t / 0 = t into positive and negative sides.
  Linear pos, negs;
  for (const auto& [v, c] : l.t.terms) {
    if (c > 0) pos.terms.emplace_back(v, c);
    else negs.terms.emplace_back(v, -c);
  }
  if (l.t.c0 > 0) pos.c0 = l.t.c0;
  else negs.c0 = -l.t.c0;
  if (l.rel == Rel::Lt) return int_lt(to_term(negs), to_term(pos));
  return int_eq(to_term(pos), to_term(negs));
}

}  // namespace bapa::pa
