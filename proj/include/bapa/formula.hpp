#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bapa/errors.hpp"

namespace bapa {

using BigInt = mpz_class;

enum class Sort { Set, Int, Prop };

std::string_view sort_name(Sort s);

// ---------------------------------------------------------------------------
// Set terms

enum class SetKind { Var, Empty, Univ, Union, Inter, Compl };

struct SetTermNode;
using SetTerm = std::shared_ptr<const SetTermNode>;

struct SetTermNode {
  SetKind kind;
  std::string name;  // Var
  SetTerm lhs;       // Union, Inter, Compl
  SetTerm rhs;       // Union, Inter
};

SetTerm set_var(std::string name);
SetTerm set_empty();
SetTerm set_univ();
SetTerm set_union(SetTerm a, SetTerm b);
SetTerm set_inter(SetTerm a, SetTerm b);
SetTerm set_compl(SetTerm a);

// ---------------------------------------------------------------------------
// Integer terms

enum class IntKind { Var, Const, MaxCard, Add, Sub, Mul, Card };

struct IntTermNode;
using IntTerm = std::shared_ptr<const IntTermNode>;

struct IntTermNode {
  IntKind kind;
  std::string name;  // Var
  BigInt value;      // Const, Mul (the constant factor)
  IntTerm lhs;       // Add, Sub, Mul
  IntTerm rhs;       // Add, Sub
  SetTerm set;       // Card
};

IntTerm int_var(std::string name);
IntTerm int_const(BigInt v);
IntTerm int_maxc();
IntTerm int_add(IntTerm a, IntTerm b);
IntTerm int_sub(IntTerm a, IntTerm b);
IntTerm int_mul(BigInt c, IntTerm t);
IntTerm card(SetTerm s);

// Left-nested sum; the empty sum is the constant 0.
IntTerm int_sum(const std::vector<IntTerm>& terms);

// ---------------------------------------------------------------------------
// Formulas

enum class FKind {
  True,
  False,
  PropVar,
  FinU,
  Fin,
  SetEq,
  SubsetEq,
  IntEq,
  IntLt,
  Dvd,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Exists,
  Forall
};

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  FKind kind;
  std::string name;         // PropVar; bound variable of a quantifier
  Sort sort = Sort::Int;    // quantifier
  bool nonneg = false;      // quantifier ranges over k >= 0
  int depth = 0;            // block depth annotation; 0 means none
  SetTerm s1, s2;           // Fin, SetEq, SubsetEq
  IntTerm t1, t2;           // IntEq, IntLt; Dvd uses t1
  BigInt divisor;           // Dvd
  std::vector<Formula> kids;

  bool is_atom() const;
  bool is_quantifier() const { return kind == FKind::Exists || kind == FKind::Forall; }
  const Formula& body() const { return kids.front(); }
};

Formula f_true();
Formula f_false();
Formula f_bool(bool b);
Formula prop_var(std::string name);
Formula fin_u();
Formula fin(SetTerm s);
Formula set_eq(SetTerm a, SetTerm b);
Formula subset_eq(SetTerm a, SetTerm b);
Formula int_eq(IntTerm a, IntTerm b);
Formula int_lt(IntTerm a, IntTerm b);
Formula int_le(IntTerm a, IntTerm b);  // ~(b < a)
Formula int_gt(IntTerm a, IntTerm b);  // b < a
Formula int_ge(IntTerm a, IntTerm b);  // ~(a < b)
Formula dvd(BigInt divisor, IntTerm t);
Formula neg(Formula f);
Formula conj(std::vector<Formula> kids);  // 0 kids -> true, 1 kid -> kid
Formula disj(std::vector<Formula> kids);  // 0 kids -> false, 1 kid -> kid
Formula conj2(Formula a, Formula b);
Formula disj2(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula exists(std::string name, Sort sort, Formula body, bool nonneg = false, int depth = 0);
Formula forall(std::string name, Sort sort, Formula body, bool nonneg = false, int depth = 0);
Formula quantify(FKind q, std::string name, Sort sort, Formula body, bool nonneg = false,
                 int depth = 0);

// Same node with new children.
Formula with_kids(const Formula& f, std::vector<Formula> kids);

// ---------------------------------------------------------------------------
// Structural queries

bool equal(const SetTerm& a, const SetTerm& b);
bool equal(const IntTerm& a, const IntTerm& b);
// Structural equality; block-depth annotations are not compared.
bool equal(const Formula& a, const Formula& b);

using SortMap = std::map<std::string, Sort>;

// Free variables with their sorts. Throws SortError when a name is used at two sorts.
SortMap free_vars(const Formula& f);
void collect_names(const Formula& f, std::set<std::string>& out);
void collect_set_vars(const SetTerm& s, std::set<std::string>& out);
bool contains_maxc(const Formula& f);
bool is_sentence(const Formula& f);
bool quantifier_free(const Formula& f);

// Checks well-sortedness against declared free variables; throws SortError naming the atom.
void check_sorts(const Formula& f, const SortMap& declared = {});

// Smallest numeric suffix making base unused.
std::string fresh(const std::string& base, const std::set<std::string>& avoid);

// ---------------------------------------------------------------------------
// Substitution

using Replacement = std::variant<SetTerm, IntTerm, Formula>;

Sort replacement_sort(const Replacement& r);

// Capture-avoiding substitution of a free variable.
Formula substitute(const Formula& f, const std::string& var, Sort sort, const Replacement& r);
// Simultaneous substitution; bound variables that would capture are renamed.
Formula substitute_all(const Formula& f, const std::map<std::string, Replacement>& subst);
SetTerm substitute_set(const SetTerm& s, const std::map<std::string, SetTerm>& subst);
IntTerm substitute_int(const IntTerm& t, const std::map<std::string, Replacement>& subst);
Formula substitute_maxc(const Formula& f, const IntTerm& replacement);
Formula substitute_finu(const Formula& f, bool value);

// Removes block-depth annotations (structural equality already ignores them).
Formula strip_depth(const Formula& f);
// Renames bound variables to _b0, _b1, ... in binding order.
Formula canonical_rename(const Formula& f);
bool alpha_equivalent(const Formula& a, const Formula& b);

// ---------------------------------------------------------------------------
// Metrics

struct Metrics {
  std::size_t size = 1;
  std::size_t alternations = 0;
  std::size_t set_vars = 0;
  std::size_t int_vars = 0;
  std::size_t prop_vars = 0;
};

std::size_t node_count(const Formula& f);
Metrics measure(const Formula& f);

}  // namespace bapa
