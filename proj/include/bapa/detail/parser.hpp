#pragma once

// Recursive-descent parser shared by the formula and schema readers.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bapa/errors.hpp"
#include "bapa/formula.hpp"

namespace bapa::detail {

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

std::vector<Token> lex(std::string_view src);

bool is_keyword(std::string_view s);

class Parser {
 public:
  explicit Parser(std::string_view src);

  Formula formula();
  SetTerm set_term();
  IntTerm int_term();
  // decls := name ":" sort {"," ...} or sort name {"," name}; returns (name, sort, nonneg).
  struct Decl {
    std::string name;
    Sort sort;
    bool nonneg;
  };
  std::vector<Decl> decls();
  std::optional<std::pair<Sort, bool>> sort_keyword(std::string_view s) const;

  const Token& peek(std::size_t k = 0) const;
  Token next();
  bool at(std::string_view text) const;
  bool at_end() const { return peek().kind == Tok::End; }
  bool accept(std::string_view text);
  void expect(std::string_view text);
  std::string ident();
  [[noreturn]] void fail(const std::string& msg) const;
  [[noreturn]] void fail(const std::string& msg, const SourceSpan& span) const;

  void push(const std::string& name, Sort s) { scope_.emplace_back(name, s); }
  void pop(std::size_t n = 1) { scope_.resize(scope_.size() - n); }
  std::optional<Sort> lookup(const std::string& name) const;

  std::size_t pos = 0;

 private:
  Formula quantified();
  Formula iff_level();
  Formula imp_level();
  Formula or_level();
  Formula and_level();
  Formula not_level();
  Formula atom();
  Formula set_relation();
  Formula int_relation();
  SetTerm set_atom();
  IntTerm int_atom();
  BigInt integer_literal(bool allow_sign);

  // Runs alternatives with backtracking; rethrows the error that got furthest.
  template <class A, class B>
  auto either(A a, B b) -> decltype(a());

  std::vector<Token> toks_;
  std::vector<std::pair<std::string, Sort>> scope_;
};

}  // namespace bapa::detail
