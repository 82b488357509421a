#pragma once

// Internal linear-arithmetic representation and quantifier elimination. Shared by
// the public Presburger API, the interleaved strategy and the model oracle.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bapa/formula.hpp"

namespace bapa::pa {

using VarId = int;

class VarTable {
 public:
  VarId intern(const std::string& name);
  std::optional<VarId> find(const std::string& name) const;
  // A new variable that never collides with an interned name.
  VarId fresh(const std::string& base);
  const std::string& name(VarId v) const { return names_[static_cast<std::size_t>(v)]; }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, VarId> ids_;
};

using Terms = std::vector<std::pair<VarId, BigInt>>;  // sorted by VarId, no zero coefficients

struct Linear {
  BigInt c0;
  Terms terms;

  BigInt coeff(VarId x) const;
  bool has(VarId x) const;
  Linear without(VarId x) const;
};

Linear lin_add(const Linear& a, const Linear& b);
Linear lin_scale(const Linear& a, const BigInt& k);
Linear lin_var(VarId x, const BigInt& k = 1);
Linear lin_const(const BigInt& c);

// 0 < t, 0 = t, d | t, not d | t, or a propositional literal.
enum class Rel : std::uint8_t { Lt, Eq, Dvd, NDvd, Prop };

struct Literal {
  Rel rel = Rel::Lt;
  bool positive = true;  // Prop only
  VarId prop = -1;       // Prop only
  BigInt d;              // Dvd, NDvd
  Linear t;
};

bool lit_equal(const Literal& a, const Literal& b);
bool lit_less(const Literal& a, const Literal& b);

struct Node;
using Tree = std::shared_ptr<const Node>;

struct Node {
  enum class Kind : std::uint8_t { True, False, Lit, And, Or };
  Kind kind;
  Literal lit;
  std::vector<Tree> kids;
  std::vector<VarId> vars;  // sorted, distinct
  std::size_t hash = 0;
  std::size_t size = 1;

  bool contains(VarId v) const;
};

Tree t_true();
Tree t_false();
Tree t_bool(bool b);
// Canonicalizes; may return True or False.
Tree mk_lit(Literal l);
Tree mk_lt(Linear t);
Tree mk_eq(Linear t);
Tree mk_dvd(BigInt d, Linear t);
Tree mk_prop(VarId p, bool positive);
Tree mk_and(std::vector<Tree> kids);
Tree mk_or(std::vector<Tree> kids);
Tree negate(const Tree& t);
bool tree_equal(const Tree& a, const Tree& b);

// Replaces x by num/den (den > 0); the caller guarantees den | num where needed.
Tree subst(const Tree& t, VarId x, const Linear& num, const BigInt& den = 1);
Tree subst_prop(const Tree& t, VarId p, bool value);

using Conj = std::vector<Tree>;  // literal nodes
std::vector<Conj> dnf(const Tree& t);

struct QeStats {
  std::size_t eliminations = 0;
  std::size_t cooper_steps = 0;
  std::size_t dnf_conjuncts = 0;
};

// Quantifier elimination over integers.
Tree elim_conj(VarId x, const Conj& lits, QeStats* stats = nullptr);
Tree exists(VarId x, const Tree& t, QeStats* stats = nullptr);
Tree forall(VarId x, const Tree& t, QeStats* stats = nullptr);
// Eliminates a block of same-kind quantifiers, picking a cheap variable order.
Tree exists_block(std::vector<VarId> xs, Tree t, QeStats* stats = nullptr);
Tree forall_block(std::vector<VarId> xs, const Tree& t, QeStats* stats = nullptr);
Tree exists_prop(VarId p, const Tree& t);
Tree forall_prop(VarId p, const Tree& t);

// Ground truth value under an assignment; props read as 0/1.
bool eval(const Tree& t, const std::function<BigInt(VarId)>& env);
BigInt eval_linear(const Linear& l, const std::function<BigInt(VarId)>& env);

// Conversion between formulas and trees. Bound variables get fresh ids; free
// names are interned, MAXC included under the name "MAXC".
class Converter {
 public:
  explicit Converter(VarTable& vars) : vars_(vars) {}

  // Eliminates all quantifiers of a PA formula.
  Tree to_tree(const Formula& f);
  Linear linearize(const IntTerm& t);
  Formula to_formula(const Tree& t) const;
  IntTerm to_term(const Linear& l) const;

  QeStats stats;
  static constexpr const char* kMaxc = "MAXC";

 private:
  struct Bound {
    std::string name;
    bool nonneg;
  };
  Tree conv(const Formula& f);
  Tree quantifier_block(bool ex, const std::vector<Bound>& block, const Formula& body);
  VarId lookup(const std::string& name);

  // Block variables fixed to constants while a bounded block is expanded.
  std::unordered_map<VarId, BigInt> ground_;

  VarTable& vars_;
  std::vector<std::pair<std::string, VarId>> scope_;
};

}  // namespace bapa::pa
