#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bapa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SortError : public Error {
 public:
  using Error::Error;
};

struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, SourceSpan span)
      : Error(format(msg, span)), span_(span), bare_(msg) {}
  const SourceSpan& span() const { return span_; }
  const std::string& bare_message() const { return bare_; }

 private:
  static std::string format(const std::string& msg, const SourceSpan& s) {
    return std::to_string(s.line) + ":" + std::to_string(s.column) + ": " + msg;
  }
  SourceSpan span_;
  std::string bare_;
};

// Raised when a caller breaks an operation's precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

class FreeVariableError : public Error {
 public:
  explicit FreeVariableError(std::vector<std::string> names)
      : Error(format(names)), names_(std::move(names)) {}
  const std::vector<std::string>& names() const { return names_; }

 private:
  static std::string format(const std::vector<std::string>& names) {
    std::string s = "free variables present:";
    for (const auto& n : names) s += " " + n;
    return s;
  }
  std::vector<std::string> names_;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace bapa
