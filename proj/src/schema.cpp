#include "bapa/schema.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "bapa/detail/parser.hpp"

namespace bapa {

using Vars = std::vector<std::pair<std::string, Sort>>;

StmtPtr stmt_formula(Formula f) {
  auto s = std::make_shared<Stmt>();
  s->kind = Stmt::Kind::Formula;
  s->formula = std::move(f);
  return s;
}

StmtPtr stmt_call(std::string proc) {
  auto s = std::make_shared<Stmt>();
  s->kind = Stmt::Kind::Call;
  s->name = std::move(proc);
  return s;
}

StmtPtr stmt_seq(StmtPtr a, StmtPtr b) {
  auto s = std::make_shared<Stmt>();
  s->kind = Stmt::Kind::Seq;
  s->first = std::move(a);
  s->second = std::move(b);
  return s;
}

StmtPtr stmt_choice(StmtPtr a, StmtPtr b) {
  auto s = std::make_shared<Stmt>();
  s->kind = Stmt::Kind::Choice;
  s->first = std::move(a);
  s->second = std::move(b);
  return s;
}

StmtPtr stmt_local(std::string name, Sort sort, StmtPtr body) {
  auto s = std::make_shared<Stmt>();
  s->kind = Stmt::Kind::Local;
  s->name = std::move(name);
  s->sort = sort;
  s->first = std::move(body);
  return s;
}

const Proc& Schema::proc(std::string_view name) const {
  for (const auto& p : procs)
    if (p.name == name) return p;
  throw Error("unknown procedure '" + std::string(name) + "'");
}

const Formula& Schema::invariant(std::string_view name) const {
  for (const auto& [n, f] : invariants)
    if (n == name) return f;
  throw Error("unknown invariant '" + std::string(name) + "'");
}

std::string primed(const std::string& name) { return name + "'"; }

namespace {

Replacement var_of(const std::string& name, Sort s) {
  switch (s) {
    case Sort::Set: return set_var(name);
    case Sort::Int: return int_var(name);
    case Sort::Prop: return prop_var(name);
  }
  return int_var(name);
}

Formula var_eq(const std::string& a, const std::string& b, Sort s) {
  if (s == Sort::Set) return set_eq(set_var(a), set_var(b));
  if (s == Sort::Int) return int_eq(int_var(a), int_var(b));
  return iff(prop_var(a), prop_var(b));
}

std::map<std::string, Replacement> rename_map(const Vars& vars, bool to_primed) {
  std::map<std::string, Replacement> m;
  for (const auto& [n, s] : vars) {
    if (to_primed) m[n] = var_of(primed(n), s);
    else m[primed(n)] = var_of(n, s);
  }
  return m;
}

void flatten_conj(const Formula& f, std::vector<Formula>& out) {
  if (f->kind == FKind::And) {
    for (const auto& k : f->kids) flatten_conj(k, out);
  } else if (f->kind != FKind::True) {
    out.push_back(f);
  }
}

std::vector<Formula> conjuncts(const Formula& f) {
  std::vector<Formula> out;
  flatten_conj(f, out);
  return out;
}

struct SchemaParser {
  detail::Parser p;
  SchemaOptions opt;
  Schema schema;
  Vars scope;  // globals then enclosing locals
  std::vector<std::pair<std::string, SourceSpan>> calls;

  SchemaParser(std::string_view text, SchemaOptions o) : p(text), opt(o) {}

  bool declared(const std::string& n) const {
    return std::any_of(scope.begin(), scope.end(), [&](const auto& v) { return v.first == n; });
  }

  void declare(const std::string& n, Sort s, const SourceSpan& at) {
    if (declared(n)) p.fail("duplicate variable '" + n + "'", at);
    scope.emplace_back(n, s);
    p.push(n, s);
    p.push(primed(n), s);
  }

  void undeclare() {
    scope.pop_back();
    p.pop(2);
  }

  Sort state_sort() {
    SourceSpan at = p.peek().span;
    std::string s = p.next().text;
    if (s == "set") return Sort::Set;
    if (s == "int") return Sort::Int;
    p.fail("expected 'set' or 'int'", at);
  }

  // Parses a formula over the unprimed state.
  Formula unprimed_formula(const char* what) {
    SourceSpan at = p.peek().span;
    Formula f = p.formula();
    for (const auto& [n, s] : free_vars(f))
      if (!n.empty() && n.back() == '\'')
        p.fail(std::string(what) + " may not mention primed variable '" + n + "'", at);
    return f;
  }

  void run() {
    while (!p.at_end()) {
      if (p.accept("var")) {
        SourceSpan at = p.peek().span;
        std::string n = p.ident();
        p.expect(":");
        Sort s = state_sort();
        p.expect(";");
        declare(n, s, at);
        schema.globals.emplace_back(n, s);
      } else if (p.accept("invariant")) {
        SourceSpan at = p.peek().span;
        std::string n = p.ident();
        for (const auto& [m, f] : schema.invariants)
          if (m == n) p.fail("duplicate invariant '" + n + "'", at);
        p.expect("<=>");
        schema.invariants.emplace_back(n, unprimed_formula("an invariant"));
        p.expect(";");
      } else if (p.accept("procedure")) {
        procedure();
      } else {
        p.fail("expected 'var', 'invariant' or 'procedure'");
      }
    }
    for (const auto& [n, at] : calls) {
      bool known = std::any_of(schema.procs.begin(), schema.procs.end(),
                               [&](const Proc& q) { return q.name == n; });
      if (!known) p.fail("call to undeclared procedure '" + n + "'", at);
    }
  }

  void procedure() {
    Proc pr;
    SourceSpan at = p.peek().span;
    pr.name = p.ident();
    for (const auto& q : schema.procs)
      if (q.name == pr.name) p.fail("duplicate procedure '" + pr.name + "'", at);
    std::vector<Formula> pre, post;
    std::vector<Formula> invs;
    if (p.accept("maintains")) {
      do {
        SourceSpan iat = p.peek().span;
        std::string n = p.ident();
        auto it = std::find_if(schema.invariants.begin(), schema.invariants.end(),
                               [&](const auto& kv) { return kv.first == n; });
        if (it == schema.invariants.end()) p.fail("unknown invariant '" + n + "'", iat);
        pr.maintains.push_back(n);
        invs.push_back(it->second);
      } while (p.accept(","));
    }
    pr.requires_clause = p.accept("requires") ? unprimed_formula("a precondition") : f_true();
    pr.ensures_clause = p.accept("ensures") ? p.formula() : f_true();
    flatten_conj(pr.requires_clause, pre);
    flatten_conj(pr.ensures_clause, post);
    auto to_primed = rename_map(schema.globals, true);
    for (const auto& i : invs) {
      flatten_conj(i, pre);
      flatten_conj(substitute_all(i, to_primed), post);
    }
    pr.pre = conj(pre);
    pr.post = conj(post);
    p.expect("{");
    pr.body = p.at("}") ? stmt_formula(skip_formula(scope)) : sequence();
    p.expect("}");
    schema.procs.push_back(std::move(pr));
  }

  StmtPtr sequence() {
    StmtPtr s = simple();
    while (p.accept(";")) {
      if (p.at("}")) break;
      s = stmt_seq(s, simple());
    }
    return s;
  }

  StmtPtr block() {
    p.expect("{");
    StmtPtr s = p.at("}") ? stmt_formula(skip_formula(scope)) : sequence();
    p.expect("}");
    return s;
  }

  StmtPtr simple() {
    SourceSpan at = p.peek().span;
    StmtPtr out;
    if (p.accept("choice")) {
      StmtPtr a = block();
      p.expect("or");
      out = stmt_choice(a, block());
    } else if (p.accept("call")) {
      SourceSpan cat = p.peek().span;
      std::string n = p.ident();
      calls.emplace_back(n, cat);
      out = stmt_call(n);
    } else if (p.accept("local")) {
      SourceSpan lat = p.peek().span;
      std::string n = p.ident();
      p.expect(":");
      Sort s = state_sort();
      declare(n, s, lat);
      StmtPtr body = block();
      undeclare();
      out = stmt_local(n, s, body);
    } else if (p.accept("assume")) {
      Formula f = p.formula();
      Formula skip = skip_formula(scope);
      out = stmt_formula(opt.assume_conjunctive ? conj2(f, skip) : implies(f, skip));
    } else if (p.accept("skip")) {
      out = stmt_formula(skip_formula(scope));
    } else if (p.peek().kind == detail::Tok::Ident && p.peek(1).text == ":=") {
      out = stmt_formula(assignment());
    } else {
      out = stmt_formula(p.formula());
    }
    auto s = std::make_shared<Stmt>(*out);
    s->span = at;
    return s;
  }

  Formula assignment() {
    SourceSpan at = p.peek().span;
    std::string x = p.ident();
    p.expect(":=");
    auto it = std::find_if(scope.begin(), scope.end(), [&](const auto& v) { return v.first == x; });
    if (it == scope.end()) p.fail("assignment to undeclared variable '" + x + "'", at);
    std::vector<Formula> parts;
    if (it->second == Sort::Set) parts.push_back(set_eq(set_var(primed(x)), p.set_term()));
    else parts.push_back(int_eq(int_var(primed(x)), p.int_term()));
    for (const auto& [n, s] : scope)
      if (n != x) parts.push_back(var_eq(primed(n), n, s));
    return conj(parts);
  }
};

std::set<std::string> names_of(const Schema& schema) {
  std::set<std::string> out;
  for (const auto& [n, s] : schema.globals) {
    out.insert(n);
    out.insert(primed(n));
  }
  for (const auto& [n, f] : schema.invariants) collect_names(f, out);
  for (const auto& pr : schema.procs) {
    collect_names(pr.pre, out);
    collect_names(pr.post, out);
  }
  return out;
}

Formula reduce(const StmtPtr& s, const Schema& schema, Vars& scope, std::set<std::string>& avoid) {
  switch (s->kind) {
    case Stmt::Kind::Formula:
      collect_names(s->formula, avoid);
      return s->formula;
    case Stmt::Kind::Call: {
      const Proc& pr = schema.proc(s->name);
      Vars locals(scope.begin() + static_cast<std::ptrdiff_t>(schema.globals.size()), scope.end());
      return conj2(implies(pr.pre, pr.post), skip_formula(locals));
    }
    case Stmt::Kind::Choice: {
      Formula a = reduce(s->first, schema, scope, avoid);
      return disj2(a, reduce(s->second, schema, scope, avoid));
    }
    case Stmt::Kind::Local: {
      scope.emplace_back(s->name, s->sort);
      avoid.insert(s->name);
      avoid.insert(primed(s->name));
      Formula body = reduce(s->first, schema, scope, avoid);
      scope.pop_back();
      return exists(s->name, s->sort, exists(primed(s->name), s->sort, body));
    }
    case Stmt::Kind::Seq: {
      Formula f1 = reduce(s->first, schema, scope, avoid);
      Formula f2 = reduce(s->second, schema, scope, avoid);
      std::map<std::string, Replacement> m1, m2;
      Vars mid;
      for (const auto& [n, srt] : scope) {
        std::string x0 = fresh(n + "0", avoid);
        avoid.insert(x0);
        m1[primed(n)] = var_of(x0, srt);
        m2[n] = var_of(x0, srt);
        mid.emplace_back(x0, srt);
      }
      Formula body = conj2(substitute_all(f1, m1), substitute_all(f2, m2));
      for (auto it = mid.rbegin(); it != mid.rend(); ++it) body = exists(it->first, it->second, body);
      return body;
    }
  }
  throw ContractError("unknown statement kind");
}

// The term that x is equated with by a conjunct, if x does not occur in it.
std::optional<Replacement> definition(const Formula& c, const std::string& x, Sort s) {
  if (s == Sort::Int && c->kind == FKind::IntEq) {
    for (int side = 0; side < 2; ++side) {
      const IntTerm& v = side == 0 ? c->t1 : c->t2;
      const IntTerm& t = side == 0 ? c->t2 : c->t1;
      if (v->kind == IntKind::Var && v->name == x && !free_vars(int_eq(t, t)).count(x))
        return t;
    }
  }
  if (s == Sort::Set && c->kind == FKind::SetEq) {
    for (int side = 0; side < 2; ++side) {
      const SetTerm& v = side == 0 ? c->s1 : c->s2;
      const SetTerm& t = side == 0 ? c->s2 : c->s1;
      if (v->kind == SetKind::Var && v->name == x && !free_vars(set_eq(t, t)).count(x)) return t;
    }
  }
  return std::nullopt;
}

}  // namespace

Schema parse_schema(std::string_view text, const SchemaOptions& opt) {
  SchemaParser sp(text, opt);
  sp.run();
  return std::move(sp.schema);
}

Formula skip_formula(const Vars& vars) {
  std::vector<Formula> parts;
  for (const auto& [n, s] : vars) parts.push_back(var_eq(primed(n), n, s));
  return conj(parts);
}

Formula body_to_formula(const StmtPtr& s, const Schema& schema) {
  Vars scope = schema.globals;
  std::set<std::string> avoid = names_of(schema);
  return reduce(s, schema, scope, avoid);
}

Formula simplify_transition(const Formula& f) {
  std::vector<Formula> kids;
  for (const auto& k : f->kids) kids.push_back(simplify_transition(k));
  Formula g = kids.empty() ? f : with_kids(f, kids);
  if (g->kind != FKind::Exists) return g;

  std::vector<std::pair<std::string, Sort>> bound;
  Formula body = g;
  while (body->kind == FKind::Exists && !body->nonneg) {
    bound.emplace_back(body->name, body->sort);
    body = body->kids[0];
  }
  std::vector<Formula> cs = conjuncts(body);
  std::vector<bool> kept(bound.size(), true);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t b = 0; b < bound.size(); ++b) {
      if (!kept[b]) continue;
      for (std::size_t i = 0; i < cs.size(); ++i) {
        auto d = definition(cs[i], bound[b].first, bound[b].second);
        if (!d) continue;
        cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(i));
        for (auto& c : cs) c = substitute(c, bound[b].first, bound[b].second, *d);
        kept[b] = false;
        changed = true;
        break;
      }
    }
  }
  Formula out = conj(cs);
  for (std::size_t b = bound.size(); b-- > 0;)
    if (kept[b]) out = exists(bound[b].first, bound[b].second, out);
  return out;
}

Formula correctness_vc(const Schema& schema, std::string_view name) {
  const Proc& pr = schema.proc(name);
  std::vector<Formula> body = conjuncts(simplify_transition(body_to_formula(pr.body, schema)));

  // Frame conjuncts x' = x become a substitution.
  std::map<std::string, Replacement> frames;
  std::vector<std::pair<int, Formula>> keyed;
  for (const auto& c : body) {
    bool frame = false;
    int key = -1;
    for (std::size_t g = 0; g < schema.globals.size(); ++g) {
      const auto& [n, s] = schema.globals[g];
      auto d = definition(c, primed(n), s);
      if (!d) continue;
      key = static_cast<int>(g);
      if (std::holds_alternative<SetTerm>(*d)) {
        const SetTerm& t = std::get<SetTerm>(*d);
        frame = t->kind == SetKind::Var && t->name == n;
      } else if (std::holds_alternative<IntTerm>(*d)) {
        const IntTerm& t = std::get<IntTerm>(*d);
        frame = t->kind == IntKind::Var && t->name == n;
      }
      if (frame && !frames.count(primed(n))) frames[primed(n)] = var_of(n, s);
      else frame = false;
      break;
    }
    if (!frame) keyed.emplace_back(key, c);
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<Formula> ante = conjuncts(pr.pre);
  for (const auto& [k, c] : keyed) ante.push_back(c);
  Formula m = implies(conj(ante), pr.post);
  if (!frames.empty()) m = substitute_all(m, frames);

  SortMap fv = free_vars(m);
  std::vector<std::pair<std::string, Sort>> order;
  for (const auto& [n, s] : schema.globals)
    for (const std::string& v : {n, primed(n)})
      if (fv.count(v)) {
        order.emplace_back(v, s);
        fv.erase(v);
      }
  for (const auto& [n, s] : fv) order.emplace_back(n, s);
  for (auto it = order.rbegin(); it != order.rend(); ++it) m = forall(it->first, it->second, m);
  return m;
}

}  // namespace bapa
