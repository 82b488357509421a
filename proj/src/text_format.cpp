#include "bapa/text_format.hpp"

#include <cctype>
#include <set>

#include "bapa/detail/parser.hpp"

namespace bapa {
namespace detail {

namespace {

const std::set<std::string_view> kKeywords = {
    "ex",     "all",   "free",  "set",   "int",      "prop",    "nat",   "true",
    "false",  "fin",   "finU",  "dvd",   "eqcard",   "seteq",   "subseteq", "union",
    "inter",  "empty", "univ",  "compl", "card",     "MAXC"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

bool is_keyword(std::string_view s) { return kKeywords.count(s) > 0; }

std::vector<Token> lex(std::string_view src) {
  static const char* kSyms[] = {"<=>", "=>", "<=", ">=", ":=", "(", ")", ",", ".", ":", "~",
                                "&",   "|",  "=",  "<",  ">",  "+", "-", "*", ";", "{", "}"};
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    SourceSpan sp{i, i, line, col};
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      sp.end = j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), sp});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      sp.end = j;
      out.push_back({Tok::Int, std::string(src.substr(i, j - i)), sp});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const char* s : kSyms) {
      std::string_view sv(s);
      if (src.substr(i, sv.size()) == sv) {
        sp.end = i + sv.size();
        out.push_back({Tok::Sym, std::string(sv), sp});
        advance(sv.size());
        matched = true;
        break;
      }
    }
    if (!matched) {
      sp.end = i + 1;
      throw ParseError(std::string("unexpected character '") + c + "'", sp);
    }
  }
  SourceSpan end{src.size(), src.size(), line, col};
  out.push_back({Tok::End, "", end});
  return out;
}

Parser::Parser(std::string_view src) : toks_(lex(src)) {}

const Token& Parser::peek(std::size_t k) const {
  std::size_t p = std::min(pos + k, toks_.size() - 1);
  return toks_[p];
}

Token Parser::next() {
  Token t = peek();
  if (pos < toks_.size() - 1) ++pos;
  return t;
}

bool Parser::at(std::string_view text) const {
  const Token& t = peek();
  return t.kind != Tok::End && t.kind != Tok::Int && t.text == text;
}

bool Parser::accept(std::string_view text) {
  if (!at(text)) return false;
  next();
  return true;
}

void Parser::expect(std::string_view text) {
  if (!accept(text)) {
    const Token& t = peek();
    fail("expected '" + std::string(text) + "' but found " +
         (t.kind == Tok::End ? std::string("end of input") : "'" + t.text + "'"));
  }
}

std::string Parser::ident() {
  const Token& t = peek();
  if (t.kind != Tok::Ident) fail("expected identifier");
  if (is_keyword(t.text)) fail("keyword '" + t.text + "' cannot be used as a name");
  return next().text;
}

void Parser::fail(const std::string& msg) const { fail(msg, peek().span); }

void Parser::fail(const std::string& msg, const SourceSpan& span) const {
  throw ParseError(msg, span);
}

std::optional<Sort> Parser::lookup(const std::string& name) const {
  for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
    if (it->first == name) return it->second;
  return std::nullopt;
}

std::optional<std::pair<Sort, bool>> Parser::sort_keyword(std::string_view s) const {
  if (s == "set") return std::pair{Sort::Set, false};
  if (s == "int") return std::pair{Sort::Int, false};
  if (s == "prop") return std::pair{Sort::Prop, false};
  if (s == "nat") return std::pair{Sort::Int, true};
  return std::nullopt;
}

std::vector<Parser::Decl> Parser::decls() {
  std::vector<Decl> out;
  if (peek().kind == Tok::Ident) {
    if (auto sk = sort_keyword(peek().text)) {
      next();
      do out.push_back({ident(), sk->first, sk->second});
      while (accept(","));
      return out;
    }
  }
  do {
    std::string name = ident();
    expect(":");
    auto sk = peek().kind == Tok::Ident ? sort_keyword(peek().text) : std::nullopt;
    if (!sk) fail("expected sort 'set', 'int', 'prop' or 'nat'");
    next();
    out.push_back({name, sk->first, sk->second});
  } while (accept(","));
  return out;
}

template <class A, class B>
auto Parser::either(A a, B b) -> decltype(a()) {
  std::size_t saved = pos;
  try {
    return a();
  } catch (const ParseError& e1) {
    pos = saved;
    try {
      return b();
    } catch (const ParseError& e2) {
      if (e1.span().start > e2.span().start) throw e1;
      throw;
    }
  }
}

Formula Parser::formula() {
  if (at("ex") || at("all")) return quantified();
  return iff_level();
}

Formula Parser::quantified() {
  FKind q = next().text == "ex" ? FKind::Exists : FKind::Forall;
  auto ds = decls();
  expect(".");
  for (const auto& d : ds) push(d.name, d.sort);
  Formula body = formula();
  pop(ds.size());
  for (auto it = ds.rbegin(); it != ds.rend(); ++it)
    body = quantify(q, it->name, it->sort, body, it->nonneg);
  return body;
}

Formula Parser::iff_level() {
  Formula f = imp_level();
  while (accept("<=>")) f = iff(f, imp_level());
  return f;
}

Formula Parser::imp_level() {
  Formula f = or_level();
  if (accept("=>")) return implies(f, imp_level());
  return f;
}

Formula Parser::or_level() {
  std::vector<Formula> kids{and_level()};
  while (accept("|")) kids.push_back(and_level());
  return kids.size() == 1 ? kids.front() : disj(std::move(kids));
}

Formula Parser::and_level() {
  std::vector<Formula> kids{not_level()};
  while (accept("&")) kids.push_back(not_level());
  return kids.size() == 1 ? kids.front() : conj(std::move(kids));
}

namespace {

bool is_term_continuation(const Token& t) {
  static const std::set<std::string_view> ops = {"seteq", "subseteq", "union", "inter", "=", "<",
                                                 "<=",    ">",        ">=",    "+",     "-", "*"};
  return t.kind != Tok::End && t.kind != Tok::Int && ops.count(t.text) > 0;
}

}  // namespace

Formula Parser::not_level() {
  if (accept("~")) return neg(not_level());
  if (at("ex") || at("all")) return quantified();
  if (at("(")) {
    return either(
        [&] {
          expect("(");
          Formula f = formula();
          expect(")");
          if (is_term_continuation(peek())) fail("parenthesized formula used as a term");
          return f;
        },
        [&] { return atom(); });
  }
  return atom();
}

Formula Parser::atom() {
  const Token t = peek();
  if (t.kind == Tok::Ident) {
    if (t.text == "true") return next(), f_true();
    if (t.text == "false") return next(), f_false();
    if (t.text == "finU") return next(), fin_u();
    if (t.text == "fin") {
      next();
      expect("(");
      SetTerm s = set_term();
      expect(")");
      return fin(s);
    }
    if (t.text == "dvd") {
      next();
      expect("(");
      SourceSpan sp = peek().span;
      BigInt d = integer_literal(true);
      if (sgn(d) <= 0) fail("divisor must be positive", sp);
      expect(",");
      IntTerm a = int_term();
      expect(")");
      return dvd(d, a);
    }
    if (t.text == "eqcard") {
      next();
      expect("(");
      SetTerm a = set_term();
      expect(",");
      SetTerm b = set_term();
      expect(")");
      return int_eq(card(a), card(b));
    }
    if (t.text == "empty" || t.text == "univ" || t.text == "compl") return set_relation();
    if (t.text == "MAXC" || t.text == "card") return int_relation();
    if (is_keyword(t.text)) fail("unexpected keyword '" + t.text + "'");
    auto s = lookup(t.text);
    if (!s) fail("unbound variable '" + t.text + "'");
    switch (*s) {
      case Sort::Prop: next(); return prop_var(t.text);
      case Sort::Set: return set_relation();
      case Sort::Int: return int_relation();
    }
  }
  if (t.kind == Tok::Int || at("-")) return int_relation();
  if (at("(")) return either([&] { return set_relation(); }, [&] { return int_relation(); });
  fail(t.kind == Tok::End ? "unexpected end of input" : "expected formula, found '" + t.text + "'");
}

Formula Parser::set_relation() {
  SetTerm a = set_term();
  if (accept("seteq")) return set_eq(a, set_term());
  if (accept("subseteq")) return subset_eq(a, set_term());
  if (accept("<")) {
    SetTerm b = set_term();
    return conj({subset_eq(a, b), neg(set_eq(a, b))});
  }
  if (at("=")) fail("sets are compared with 'seteq', not '='");
  fail("expected 'seteq', 'subseteq' or '<' after set term");
}

Formula Parser::int_relation() {
  IntTerm a = int_term();
  if (accept("=")) return int_eq(a, int_term());
  if (accept("<")) return int_lt(a, int_term());
  if (accept("<=")) return int_le(a, int_term());
  if (accept(">")) return int_gt(a, int_term());
  if (accept(">=")) return int_ge(a, int_term());
  fail("expected '=', '<', '<=', '>' or '>=' after integer term");
}

SetTerm Parser::set_term() {
  SetTerm acc = set_atom();
  std::string op;
  while (at("union") || at("inter")) {
    Token t = next();
    if (!op.empty() && op != t.text)
      fail("mixing 'union' and 'inter' requires parentheses", t.span);
    op = t.text;
    SetTerm rhs = set_atom();
    acc = op == "union" ? set_union(acc, rhs) : set_inter(acc, rhs);
  }
  return acc;
}

SetTerm Parser::set_atom() {
  const Token t = peek();
  if (accept("(")) {
    SetTerm s = set_term();
    expect(")");
    return s;
  }
  if (t.kind != Tok::Ident) fail("expected set term");
  if (t.text == "empty") return next(), set_empty();
  if (t.text == "univ") return next(), set_univ();
  if (t.text == "compl") {
    next();
    expect("(");
    SetTerm s = set_term();
    expect(")");
    return set_compl(s);
  }
  if (is_keyword(t.text)) fail("expected set term, found keyword '" + t.text + "'");
  auto s = lookup(t.text);
  if (!s) fail("unbound variable '" + t.text + "'");
  if (*s != Sort::Set)
    fail("'" + t.text + "' has sort " + std::string(sort_name(*s)) + ", expected set");
  next();
  return set_var(t.text);
}

BigInt Parser::integer_literal(bool allow_sign) {
  bool negative = allow_sign && accept("-");
  if (peek().kind != Tok::Int) fail("expected integer literal");
  BigInt v(next().text, 10);
  return negative ? BigInt(-v) : v;
}

IntTerm Parser::int_term() {
  IntTerm acc = int_atom();
  while (at("+") || at("-")) {
    bool plus = next().text == "+";
    IntTerm rhs = int_atom();
    acc = plus ? int_add(acc, rhs) : int_sub(acc, rhs);
  }
  return acc;
}

IntTerm Parser::int_atom() {
  const Token t = peek();
  if (t.kind == Tok::Int || at("-")) {
    BigInt v = integer_literal(true);
    if (accept("*")) return int_mul(v, int_atom());
    return int_const(v);
  }
  if (accept("(")) {
    IntTerm a = int_term();
    expect(")");
    return a;
  }
  if (t.kind != Tok::Ident) fail("expected integer term");
  if (t.text == "MAXC") return next(), int_maxc();
  if (t.text == "card") {
    next();
    expect("(");
    SetTerm s = set_term();
    expect(")");
    return card(s);
  }
  if (is_keyword(t.text)) fail("expected integer term, found keyword '" + t.text + "'");
  auto s = lookup(t.text);
  if (!s) fail("unbound variable '" + t.text + "'");
  if (*s != Sort::Int)
    fail("'" + t.text + "' has sort " + std::string(sort_name(*s)) + ", expected int");
  next();
  return int_var(t.text);
}

}  // namespace detail

ParsedInput parse_input(std::string_view text) {
  detail::Parser p(text);
  ParsedInput out;
  if (p.accept("free")) {
    for (const auto& d : p.decls()) {
      if (d.nonneg) p.fail("'nat' is only allowed on quantifiers");
      if (out.declared.count(d.name)) p.fail("duplicate free variable '" + d.name + "'");
      out.declared[d.name] = d.sort;
      p.push(d.name, d.sort);
    }
    p.expect(".");
  }
  out.formula = p.formula();
  if (!p.at_end()) p.fail("unexpected '" + p.peek().text + "' after formula");
  check_sorts(out.formula, out.declared);
  return out;
}

Formula parse_formula(std::string_view text) { return parse_input(text).formula; }

// ---------------------------------------------------------------------------
// Printing

namespace {

bool binary_set(const SetTerm& s) { return s->kind == SetKind::Union || s->kind == SetKind::Inter; }
bool binary_int(const IntTerm& t) { return t->kind == IntKind::Add || t->kind == IntKind::Sub; }

void print_set(const SetTerm& s, std::string& out) {
  switch (s->kind) {
    case SetKind::Var: out += s->name; return;
    case SetKind::Empty: out += "empty"; return;
    case SetKind::Univ: out += "univ"; return;
    case SetKind::Compl:
      out += "compl(";
      print_set(s->lhs, out);
      out += ")";
      return;
    default: break;
  }
  bool lparen = binary_set(s->lhs) && s->lhs->kind != s->kind;
  if (lparen) out += "(";
  print_set(s->lhs, out);
  if (lparen) out += ")";
  out += s->kind == SetKind::Union ? " union " : " inter ";
  bool rparen = binary_set(s->rhs);
  if (rparen) out += "(";
  print_set(s->rhs, out);
  if (rparen) out += ")";
}

void print_int(const IntTerm& t, std::string& out) {
  switch (t->kind) {
    case IntKind::Var: out += t->name; return;
    case IntKind::Const: out += t->value.get_str(); return;
    case IntKind::MaxCard: out += "MAXC"; return;
    case IntKind::Card:
      out += "card(";
      print_set(t->set, out);
      out += ")";
      return;
    case IntKind::Mul: {
      out += t->value.get_str();
      out += " * ";
      bool paren = binary_int(t->lhs);
      if (paren) out += "(";
      print_int(t->lhs, out);
      if (paren) out += ")";
      return;
    }
    default: break;
  }
  print_int(t->lhs, out);
  out += t->kind == IntKind::Add ? " + " : " - ";
  bool paren = binary_int(t->rhs);
  if (paren) out += "(";
  print_int(t->rhs, out);
  if (paren) out += ")";
}

bool needs_parens(const Formula& f) {
  switch (f->kind) {
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
    case FKind::Iff:
    case FKind::Exists:
    case FKind::Forall: return true;
    default: return false;
  }
}

void print_f(const Formula& f, std::string& out);

void print_kid(const Formula& f, std::string& out) {
  bool paren = needs_parens(f);
  if (paren) out += "(";
  print_f(f, out);
  if (paren) out += ")";
}

void print_f(const Formula& f, std::string& out) {
  switch (f->kind) {
    case FKind::True: out += "true"; return;
    case FKind::False: out += "false"; return;
    case FKind::FinU: out += "finU"; return;
    case FKind::PropVar: out += f->name; return;
    case FKind::Fin:
      out += "fin(";
      print_set(f->s1, out);
      out += ")";
      return;
    case FKind::SetEq:
    case FKind::SubsetEq:
      print_set(f->s1, out);
      out += f->kind == FKind::SetEq ? " seteq " : " subseteq ";
      print_set(f->s2, out);
      return;
    case FKind::IntEq:
    case FKind::IntLt:
      print_int(f->t1, out);
      out += f->kind == FKind::IntEq ? " = " : " < ";
      print_int(f->t2, out);
      return;
    case FKind::Dvd:
      out += "dvd(" + f->divisor.get_str() + ", ";
      print_int(f->t1, out);
      out += ")";
      return;
    case FKind::Not: {
      const Formula& k = f->kids[0];
      if (k->kind == FKind::IntLt) {
        print_int(k->t1, out);
        out += " >= ";
        print_int(k->t2, out);
        return;
      }
      out += "~";
      print_kid(k, out);
      return;
    }
    case FKind::And:
    case FKind::Or:
      for (std::size_t i = 0; i < f->kids.size(); ++i) {
        if (i) out += f->kind == FKind::And ? " & " : " | ";
        print_kid(f->kids[i], out);
      }
      return;
    case FKind::Implies:
    case FKind::Iff:
      print_kid(f->kids[0], out);
      out += f->kind == FKind::Implies ? " => " : " <=> ";
      print_kid(f->kids[1], out);
      return;
    case FKind::Exists:
    case FKind::Forall:
      out += f->kind == FKind::Exists ? "ex " : "all ";
      out += f->nonneg ? "nat" : std::string(sort_name(f->sort));
      out += " " + f->name + ". ";
      print_f(f->body(), out);
      return;
  }
}

}  // namespace

std::string to_text(const SetTerm& s) {
  std::string out;
  print_set(s, out);
  return out;
}

std::string to_text(const IntTerm& t) {
  std::string out;
  print_int(t, out);
  return out;
}

std::string to_text(const Formula& f) {
  std::string out;
  print_f(f, out);
  return out;
}

std::string print_formula(const Formula& f) {
  auto fv = free_vars(f);
  std::string out;
  if (!fv.empty()) {
    out += "free ";
    bool first = true;
    for (const auto& [n, s] : fv) {
      if (!first) out += ", ";
      first = false;
      out += n + ":" + std::string(sort_name(s));
    }
    out += ". ";
  }
  print_f(f, out);
  return out;
}

}  // namespace bapa
