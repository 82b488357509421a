#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "bapa/alpha.hpp"

namespace bapa {

struct RunConfig {
  std::string command;
  std::string file;
  ModelClass mode = ModelClass::FiniteUniverse;
  Strategy strategy = Strategy::Alpha;
  bool optimize = false;
  bool open_as_exists = false;
  unsigned sweep = 4;
  std::optional<unsigned> universe;
  std::optional<std::string> proc;
  bool stats = false;
  bool assume_conjunctive = false;
};

// Exit codes: 0 valid or true, 1 invalid or false, 2 error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace bapa
