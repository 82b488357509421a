#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bapa/errors.hpp"
#include "bapa/formula.hpp"

namespace bapa {

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

// Assignments and assume statements are desugared into Formula statements while
// parsing, so they have no kind of their own.
struct Stmt {
  enum class Kind { Formula, Call, Seq, Choice, Local };
  Kind kind = Kind::Formula;
  bapa::Formula formula;  // Formula
  std::string name;       // Call: procedure; Local: variable
  Sort sort = Sort::Int;  // Local
  StmtPtr first, second;  // Seq, Choice; Local uses first
  SourceSpan span;
};

StmtPtr stmt_formula(Formula f);
StmtPtr stmt_call(std::string proc);
StmtPtr stmt_seq(StmtPtr a, StmtPtr b);
StmtPtr stmt_choice(StmtPtr a, StmtPtr b);
StmtPtr stmt_local(std::string name, Sort sort, StmtPtr body);

struct Proc {
  std::string name;
  std::vector<std::string> maintains;
  Formula requires_clause;
  Formula ensures_clause;
  // requires plus maintained invariants; ensures plus primed invariants.
  Formula pre;
  Formula post;
  StmtPtr body;
};

struct Schema {
  std::vector<std::pair<std::string, Sort>> globals;
  std::vector<std::pair<std::string, Formula>> invariants;
  std::vector<Proc> procs;

  const Proc& proc(std::string_view name) const;
  const Formula& invariant(std::string_view name) const;
};

struct SchemaOptions {
  // assume F as F & skip instead of F => skip.
  bool assume_conjunctive = false;
};

Schema parse_schema(std::string_view text, const SchemaOptions& opt = {});

std::string primed(const std::string& name);

// The frame x' = x (seteq for sets) over the given variables.
Formula skip_formula(const std::vector<std::pair<std::string, Sort>>& vars);

// Transition formula of a body over the globals and their primed copies.
Formula body_to_formula(const StmtPtr& s, const Schema& schema);

// One-point elimination of intermediate states; frame conjuncts x' = x are kept.
Formula simplify_transition(const Formula& f);

// all x x' ... . (pre & body) => post, with the closure in declaration order.
Formula correctness_vc(const Schema& schema, std::string_view proc);

}  // namespace bapa
