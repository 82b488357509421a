#include "bapa/oracle.hpp"

#include <omp.h>

#include <atomic>
#include <bit>
#include <exception>
#include <mutex>

#include "bapa/normalizer.hpp"
#include "bapa/presburger.hpp"

namespace bapa {

namespace {

struct Ctx {
  unsigned u;
  std::uint64_t full;
  IntBackend backend;
  BigInt bound;
};

std::uint64_t set_value(const SetTerm& s, const FiniteModel& m, const Ctx& c) {
  switch (s->kind) {
    case SetKind::Var: {
      auto it = m.sets.find(s->name);
      if (it == m.sets.end()) throw Error("oracle: unbound set variable '" + s->name + "'");
      return it->second;
    }
    case SetKind::Empty: return 0;
    case SetKind::Univ: return c.full;
    case SetKind::Compl: return c.full & ~set_value(s->lhs, m, c);
    case SetKind::Union: return set_value(s->lhs, m, c) | set_value(s->rhs, m, c);
    case SetKind::Inter: return set_value(s->lhs, m, c) & set_value(s->rhs, m, c);
  }
  return 0;
}

BigInt int_value(const IntTerm& t, const FiniteModel& m, const Ctx& c) {
  switch (t->kind) {
    case IntKind::Var: {
      auto it = m.ints.find(t->name);
      if (it == m.ints.end()) throw Error("oracle: unbound integer variable '" + t->name + "'");
      return it->second;
    }
    case IntKind::Const: return t->value;
    case IntKind::MaxCard: return BigInt(c.u);
    case IntKind::Card: return BigInt(std::popcount(set_value(t->set, m, c)));
    case IntKind::Add: return int_value(t->lhs, m, c) + int_value(t->rhs, m, c);
    case IntKind::Sub: return int_value(t->lhs, m, c) - int_value(t->rhs, m, c);
    case IntKind::Mul: return t->value * int_value(t->lhs, m, c);
  }
  return 0;
}

// Replaces everything but integer variables bound inside f by constants; set and
// propositional quantifiers become finite disjunctions or conjunctions.
IntTerm ground_int(const IntTerm& t, const FiniteModel& m, const Ctx& c,
                   const std::set<std::string>& local) {
  switch (t->kind) {
    case IntKind::Var:
      if (local.count(t->name)) return t;
      return int_const(int_value(t, m, c));
    case IntKind::Const: return t;
    case IntKind::MaxCard:
    case IntKind::Card: return int_const(int_value(t, m, c));
    case IntKind::Add: return int_add(ground_int(t->lhs, m, c, local), ground_int(t->rhs, m, c, local));
    case IntKind::Sub: return int_sub(ground_int(t->lhs, m, c, local), ground_int(t->rhs, m, c, local));
    case IntKind::Mul: return int_mul(t->value, ground_int(t->lhs, m, c, local));
  }
  return t;
}

bool eval_serial(const Formula& f, FiniteModel& m, const Ctx& c);

Formula ground(const Formula& f, FiniteModel& m, const Ctx& c, std::set<std::string>& local) {
  switch (f->kind) {
    case FKind::True:
    case FKind::False: return f;
    case FKind::FinU:
    case FKind::Fin: return f_true();
    case FKind::PropVar: {
      auto it = m.props.find(f->name);
      if (it == m.props.end()) throw Error("oracle: unbound proposition '" + f->name + "'");
      return f_bool(it->second);
    }
    case FKind::SetEq: return f_bool(set_value(f->s1, m, c) == set_value(f->s2, m, c));
    case FKind::SubsetEq: {
      std::uint64_t a = set_value(f->s1, m, c);
      return f_bool((a & set_value(f->s2, m, c)) == a);
    }
    case FKind::IntEq:
    case FKind::IntLt:
    case FKind::Dvd: {
      IntTerm t1 = ground_int(f->t1, m, c, local);
      if (f->kind == FKind::Dvd) return simplify_const(dvd(f->divisor, t1));
      IntTerm t2 = ground_int(f->t2, m, c, local);
      return simplify_const(f->kind == FKind::IntEq ? int_eq(t1, t2) : int_lt(t1, t2));
    }
    case FKind::Not: return simplify_const(neg(ground(f->kids[0], m, c, local)));
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
    case FKind::Iff: {
      std::vector<Formula> kids;
      for (const auto& k : f->kids) kids.push_back(ground(k, m, c, local));
      return simplify_const(with_kids(f, std::move(kids)));
    }
    case FKind::Exists:
    case FKind::Forall: break;
  }
  bool ex = f->kind == FKind::Exists;
  if (f->sort == Sort::Int) {
    bool fresh_name = local.insert(f->name).second;
    Formula body = ground(f->body(), m, c, local);
    if (fresh_name) local.erase(f->name);
    return simplify_const(quantify(f->kind, f->name, Sort::Int, body, f->nonneg));
  }
  std::vector<Formula> alts;
  auto add = [&](Formula g) {
    if (g->kind == (ex ? FKind::True : FKind::False)) return true;
    if (g->kind != (ex ? FKind::False : FKind::True)) alts.push_back(std::move(g));
    return false;
  };
  if (f->sort == Sort::Prop) {
    std::optional<bool> saved;
    if (auto it = m.props.find(f->name); it != m.props.end()) saved = it->second;
    bool done = false;
    for (int v = 0; v < 2 && !done; ++v) {
      m.props[f->name] = v != 0;
      done = add(ground(f->body(), m, c, local));
    }
    if (saved) m.props[f->name] = *saved;
    else m.props.erase(f->name);
    if (done) return f_bool(ex);
  } else {
    std::optional<std::uint64_t> saved;
    if (auto it = m.sets.find(f->name); it != m.sets.end()) saved = it->second;
    bool done = false;
    for (std::uint64_t s = 0; s <= c.full && !done; ++s) {
      m.sets[f->name] = s;
      done = add(ground(f->body(), m, c, local));
    }
    if (saved) m.sets[f->name] = *saved;
    else m.sets.erase(f->name);
    if (done) return f_bool(ex);
  }
  return ex ? disj(std::move(alts)) : conj(std::move(alts));
}

bool int_quantifier(const Formula& f, FiniteModel& m, const Ctx& c) {
  bool ex = f->kind == FKind::Exists;
  if (c.backend == IntBackend::PaExact) {
    std::set<std::string> local;
    Formula residual = ground(f, m, c, local);
    return pa_decide(residual) == Verdict::Valid;
  }
  auto saved = m.ints.find(f->name) != m.ints.end() ? std::optional<BigInt>(m.ints[f->name])
                                                     : std::nullopt;
  bool result = !ex;
  BigInt lo = f->nonneg ? BigInt(0) : BigInt(-c.bound);
  for (BigInt v = lo; v <= c.bound; ++v) {
    m.ints[f->name] = v;
    if (eval_serial(f->body(), m, c) == ex) {
      result = ex;
      break;
    }
  }
  if (saved) m.ints[f->name] = *saved;
  else m.ints.erase(f->name);
  return result;
}

bool eval_serial(const Formula& f, FiniteModel& m, const Ctx& c) {
  switch (f->kind) {
    case FKind::True: return true;
    case FKind::False: return false;
    case FKind::FinU:
    case FKind::Fin: return true;
    case FKind::PropVar: {
      auto it = m.props.find(f->name);
      if (it == m.props.end()) throw Error("oracle: unbound proposition '" + f->name + "'");
      return it->second;
    }
    case FKind::SetEq: return set_value(f->s1, m, c) == set_value(f->s2, m, c);
    case FKind::SubsetEq: {
      std::uint64_t a = set_value(f->s1, m, c);
      return (a & set_value(f->s2, m, c)) == a;
    }
    case FKind::IntEq: return int_value(f->t1, m, c) == int_value(f->t2, m, c);
    case FKind::IntLt: return int_value(f->t1, m, c) < int_value(f->t2, m, c);
    case FKind::Dvd: {
      BigInt v = int_value(f->t1, m, c);
      return mpz_divisible_p(v.get_mpz_t(), f->divisor.get_mpz_t()) != 0;
    }
    case FKind::Not: return !eval_serial(f->kids[0], m, c);
    case FKind::And:
      for (const auto& k : f->kids)
        if (!eval_serial(k, m, c)) return false;
      return true;
    case FKind::Or:
      for (const auto& k : f->kids)
        if (eval_serial(k, m, c)) return true;
      return false;
    case FKind::Implies: return !eval_serial(f->kids[0], m, c) || eval_serial(f->kids[1], m, c);
    case FKind::Iff: return eval_serial(f->kids[0], m, c) == eval_serial(f->kids[1], m, c);
    case FKind::Exists:
    case FKind::Forall: break;
  }
  bool ex = f->kind == FKind::Exists;
  if (f->sort == Sort::Int) return int_quantifier(f, m, c);
  bool result = !ex;
  if (f->sort == Sort::Prop) {
    std::optional<bool> saved;
    if (auto it = m.props.find(f->name); it != m.props.end()) saved = it->second;
    for (int v = 0; v < 2; ++v) {
      m.props[f->name] = v != 0;
      if (eval_serial(f->body(), m, c) == ex) {
        result = ex;
        break;
      }
    }
    if (saved) m.props[f->name] = *saved;
    else m.props.erase(f->name);
    return result;
  }
  auto it = m.sets.find(f->name);
  std::optional<std::uint64_t> saved =
      it != m.sets.end() ? std::optional<std::uint64_t>(it->second) : std::nullopt;
  for (std::uint64_t s = 0; s <= c.full; ++s) {
    m.sets[f->name] = s;
    if (eval_serial(f->body(), m, c) == ex) {
      result = ex;
      break;
    }
  }
  if (saved) m.sets[f->name] = *saved;
  else m.sets.erase(f->name);
  return result;
}

// Parallel over the assignments of the first set quantifier reached through the
// boolean structure; everything below runs serially.
bool eval_parallel(const Formula& f, FiniteModel& m, const Ctx& c) {
  switch (f->kind) {
    case FKind::Not: return !eval_parallel(f->kids[0], m, c);
    case FKind::And:
      for (const auto& k : f->kids)
        if (!eval_parallel(k, m, c)) return false;
      return true;
    case FKind::Or:
      for (const auto& k : f->kids)
        if (eval_parallel(k, m, c)) return true;
      return false;
    case FKind::Implies: return !eval_parallel(f->kids[0], m, c) || eval_parallel(f->kids[1], m, c);
    case FKind::Exists:
    case FKind::Forall:
      if (f->sort == Sort::Set) break;
      return eval_serial(f, m, c);
    default: return eval_serial(f, m, c);
  }
  bool ex = f->kind == FKind::Exists;
  std::atomic<bool> hit{false};
  std::exception_ptr error;
  std::mutex error_mu;
  const long n = static_cast<long>(c.full) + 1;
#pragma omp parallel for schedule(dynamic)
  for (long s = 0; s < n; ++s) {
    if (hit.load(std::memory_order_relaxed)) continue;
    try {
      FiniteModel local = m;
      local.sets[f->name] = static_cast<std::uint64_t>(s);
      if (eval_serial(f->body(), local, c) == ex) hit.store(true, std::memory_order_relaxed);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!error) error = std::current_exception();
      hit.store(true, std::memory_order_relaxed);
    }
  }
  if (error) std::rethrow_exception(error);
  return ex ? hit.load() : !hit.load();
}

void max_const(const IntTerm& t, BigInt& acc) {
  switch (t->kind) {
    case IntKind::Const:
      if (abs(t->value) > acc) acc = abs(t->value);
      return;
    case IntKind::Mul:
      if (abs(t->value) > acc) acc = abs(t->value);
      max_const(t->lhs, acc);
      return;
    case IntKind::Add:
    case IntKind::Sub:
      max_const(t->lhs, acc);
      max_const(t->rhs, acc);
      return;
    default: return;
  }
}

void max_const(const Formula& f, BigInt& acc) {
  if (f->t1) max_const(f->t1, acc);
  if (f->t2) max_const(f->t2, acc);
  if (f->kind == FKind::Dvd && f->divisor > acc) acc = f->divisor;
  for (const auto& k : f->kids) max_const(k, acc);
}

std::size_t count_set_binders(const Formula& f) {
  std::size_t n = f->is_quantifier() && f->sort == Sort::Set ? 1 : 0;
  for (const auto& k : f->kids) n += count_set_binders(k);
  return n;
}

Ctx make_ctx(const Formula& f, unsigned u, const OracleOptions& opt) {
  if (u > 63) throw ResourceError("evaluate: universe size " + std::to_string(u) + " exceeds 63");
  std::size_t bits = count_set_binders(f) * u;
  if (bits >= 64 || (std::uint64_t{1} << bits) > kOracleMaxCost)
    throw ResourceError("evaluate: enumeration cost 2^" + std::to_string(bits) +
                        " set assignments exceeds the limit 2^24");
  Ctx c;
  c.u = u;
  c.full = (std::uint64_t{1} << u) - 1;
  c.backend = opt.backend;
  c.bound = opt.bound ? *opt.bound : default_bound(f, u);
  return c;
}

}  // namespace

BigInt default_bound(const Formula& f, unsigned u) {
  BigInt m = 0;
  max_const(f, m);
  return BigInt(2 * u + 10) + m;
}

std::uint64_t oracle_cost(const Formula& f, unsigned u) {
  std::size_t s = count_set_binders(f);
  for (const auto& [n, sort] : free_vars(f))
    if (sort == Sort::Set) ++s;
  std::size_t bits = s * u;
  if (bits >= 64 || (std::uint64_t{1} << bits) > kOracleMaxCost)
    throw ResourceError("oracle: enumeration cost 2^" + std::to_string(bits) +
                        " set assignments exceeds the limit 2^24");
  return std::uint64_t{1} << bits;
}

bool evaluate(const Formula& f, const FiniteModel& m, const OracleOptions& opt) {
  Ctx c = make_ctx(f, m.u, opt);
  for (const auto& [n, v] : m.sets)
    if ((v & ~c.full) != 0) throw ContractError("set '" + n + "' exceeds the universe");
  FiniteModel local = m;
  return opt.parallel ? eval_parallel(f, local, c) : eval_serial(f, local, c);
}

bool oracle(const Formula& f, unsigned u, const OracleOptions& opt) {
  SortMap fv = free_vars(f);
  if (!fv.empty()) {
    std::vector<std::string> names;
    for (const auto& [n, s] : fv) names.push_back(n);
    throw FreeVariableError(names);
  }
  if (u > kOracleMaxUniverse)
    throw ResourceError("oracle: universe size " + std::to_string(u) + " exceeds " +
                        std::to_string(kOracleMaxUniverse));
  oracle_cost(f, u);
  FiniteModel m;
  m.u = u;
  return evaluate(f, m, opt);
}

bool oracle_serial(const Formula& f, unsigned u, const OracleOptions& opt) {
  OracleOptions o = opt;
  o.parallel = false;
  return oracle(f, u, o);
}

std::vector<std::pair<unsigned, bool>> oracle_sweep(const Formula& f, unsigned u_max,
                                                    const OracleOptions& opt) {
  std::vector<std::pair<unsigned, bool>> out;
  for (unsigned u = 0; u <= u_max; ++u) out.emplace_back(u, oracle(f, u, opt));
  return out;
}

}  // namespace bapa
