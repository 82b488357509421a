#include <gtest/gtest.h>

#include "bapa/oracle.hpp"
#include "bapa/text_format.hpp"
#include "corpus.hpp"

using namespace bapa;

TEST(Oracle, ParallelMatchesSerial) {
  bapa::testing::CorpusGenerator gen(61);
  for (int i = 0; i < 150; ++i) {
    Formula f = gen.next();
    for (unsigned u = 0; u <= 3; ++u) ASSERT_EQ(oracle(f, u), oracle_serial(f, u)) << to_text(f);
  }
}

TEST(Oracle, BoundedBackendMatchesExact) {
  bapa::testing::CorpusGenerator gen(62);
  OracleOptions bounded;
  bounded.backend = IntBackend::Bounded;
  for (int i = 0; i < 80; ++i) {
    Formula f = gen.next();
    for (unsigned u = 0; u <= 2; ++u) EXPECT_EQ(oracle(f, u), oracle(f, u, bounded)) << to_text(f);
  }
}

TEST(Oracle, EvaluateModel) {
  Formula f = parse_input("free a : set, k : int. card(a) = k & a subseteq univ").formula;
  FiniteModel m;
  m.u = 5;
  m.sets["a"] = 0b10110;
  m.ints["k"] = 3;
  EXPECT_TRUE(evaluate(f, m));
  m.ints["k"] = 2;
  EXPECT_FALSE(evaluate(f, m));
}

TEST(Oracle, Sweep) {
  auto r = oracle_sweep(parse_formula("ex set x. card(x) = 2"), 3);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_FALSE(r[1].second);
  EXPECT_TRUE(r[2].second);
}

TEST(Oracle, Limits) {
  Formula f = parse_formula("all set x. all set y. all set z. all set w. x subseteq univ");
  EXPECT_THROW(oracle(f, 7), ResourceError);
  EXPECT_THROW(oracle(parse_input("free a : set. a seteq a").formula, 1), FreeVariableError);
}
