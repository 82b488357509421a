#include <gtest/gtest.h>

#include "bapa/normalizer.hpp"
#include "bapa/oracle.hpp"
#include "bapa/text_format.hpp"
#include "corpus.hpp"

using namespace bapa;

namespace {

bool no_implies(const Formula& f) {
  if (f->kind == FKind::Implies || f->kind == FKind::Iff) return false;
  if (f->kind == FKind::Not && !f->kids[0]->is_atom()) return false;
  for (const auto& k : f->kids)
    if (!no_implies(k)) return false;
  return true;
}

}  // namespace

TEST(Normalizer, NnfShapeAndTruth) {
  bapa::testing::CorpusGenerator gen(21, {.max_ints = 0});
  for (int i = 0; i < 100; ++i) {
    Formula f = gen.next();
    Formula n = to_nnf(f);
    EXPECT_TRUE(no_implies(n)) << to_text(n);
    for (unsigned u = 0; u <= 2; ++u) EXPECT_EQ(oracle(f, u), oracle(n, u)) << to_text(f);
  }
}

TEST(Normalizer, PrenexKeepsTruthAndRenamesApart) {
  Formula f = parse_formula("(ex set x. card(x) = 1) & (all set x. ex set y. x subseteq y)");
  PrenexForm p = to_prenex(f);
  ASSERT_EQ(p.prefix.size(), 3u);
  EXPECT_NE(p.prefix[0].name, p.prefix[1].name);
  EXPECT_TRUE(quantifier_free(p.matrix));
  for (unsigned u = 0; u <= 3; ++u) EXPECT_EQ(oracle(f, u), oracle(p.to_formula(), u));
}

TEST(Normalizer, AlternationCount) {
  PrenexForm p = to_prenex(parse_formula("all set x. all set y. ex int k. all int m. k = m"));
  EXPECT_EQ(count_alternations(p.prefix), 2u);
}

TEST(Normalizer, PurifyOrientsCardinalityLeft) {
  Formula f = purify_atoms(parse_formula("all set x. all int k. k = card(x)"));
  const Formula& atom = f->body()->body();
  ASSERT_EQ(atom->kind, FKind::IntEq);
  EXPECT_EQ(atom->t1->kind, IntKind::Card);
}

TEST(Normalizer, PurifySetEquality) {
  Formula f = purify_atoms(parse_formula("all set x. all set y. x seteq y"));
  Formula m = f->body()->body();
  ASSERT_EQ(m->kind, FKind::And);
  EXPECT_EQ(m->kids.size(), 2u);
  for (const auto& k : m->kids) EXPECT_EQ(k->kind, FKind::IntEq);
}

TEST(Normalizer, SimplifyConst) {
  Formula f = simplify_const(parse_formula("all set x. card(x inter empty) = 0 | card(x) < 2"));
  EXPECT_EQ(f->kind, FKind::True) << to_text(f);
  Formula g = simplify_const(parse_formula("all set x. card(x union univ) < card(empty)"));
  EXPECT_FALSE(oracle(g, 0));
}
