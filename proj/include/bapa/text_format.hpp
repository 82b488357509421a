#pragma once

#include <string>
#include <string_view>

#include "bapa/formula.hpp"

namespace bapa {

struct ParsedInput {
  Formula formula;
  SortMap declared;  // from the `free` preamble
};

// Throws ParseError (with span) or SortError.
ParsedInput parse_input(std::string_view text);
Formula parse_formula(std::string_view text);

// Full text, including a `free` preamble when f has free variables.
std::string print_formula(const Formula& f);
// Formula text without preamble.
std::string to_text(const Formula& f);
std::string to_text(const SetTerm& s);
std::string to_text(const IntTerm& t);

}  // namespace bapa
