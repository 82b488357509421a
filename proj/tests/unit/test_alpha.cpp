#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "bapa/alpha.hpp"
#include "bapa/normalizer.hpp"
#include "bapa/oracle.hpp"
#include "bapa/presburger.hpp"
#include "bapa/text_format.hpp"
#include "corpus.hpp"

using namespace bapa;

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(BAPA_FIXTURE_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict decide_in(const char* text, ModelClass m) {
  AlphaOptions o;
  o.mode = m;
  return decide(parse_formula(text), o);
}

}  // namespace

TEST(Alpha, InsertVcImageMatchesGolden) {
  Formula g = alpha_translate(parse_formula(fixture("insert_vc.bapa")));
  Formula expected = parse_formula(fixture("insert_vc.pa"));
  EXPECT_TRUE(equal(canonical_rename(to_nnf(g)), canonical_rename(to_nnf(expected))));
  EXPECT_EQ(decide(parse_formula(fixture("insert_vc.bapa"))), Verdict::Valid);
}

TEST(Alpha, ImageIsPresburgerWithMaxc) {
  Formula g = alpha_translate(parse_formula(fixture("ex_singleton.bapa")));
  EXPECT_TRUE(is_pa_formula(g));
  EXPECT_TRUE(contains_maxc(g));
  for (unsigned u = 0; u <= 4; ++u)
    EXPECT_EQ(pa_decide(instantiate_universe(g, u)) == Verdict::Valid, u >= 1);
  EXPECT_EQ(pa_decide(close_universe(g)), Verdict::Invalid);
}

TEST(Alpha, AlternationsPreserved) {
  bapa::testing::CorpusGenerator gen(51);
  for (int i = 0; i < 100; ++i) {
    Formula f = gen.next();
    EXPECT_EQ(measure(alpha_translate(f)).alternations, measure(f).alternations) << to_text(f);
  }
}

TEST(Alpha, AgreesWithOracle) {
  bapa::testing::CorpusGenerator gen(52);
  for (int i = 0; i < 60; ++i) {
    Formula f = gen.next();
    Formula g = alpha_translate(f);
    for (unsigned u = 0; u <= 3; ++u)
      ASSERT_EQ(pa_decide(instantiate_universe(g, u)) == Verdict::Valid, oracle(f, u)) << to_text(f);
  }
}

TEST(Alpha, OptimizedCubesAgree) {
  bapa::testing::CorpusGenerator gen(53, {.max_ints = 1});
  AlphaOptions opt;
  opt.optimize = true;
  for (int i = 0; i < 60; ++i) {
    Formula f = gen.next();
    Formula a = alpha_translate(f), b = alpha_translate(f, opt);
    for (unsigned u = 0; u <= 3; ++u)
      ASSERT_EQ(pa_decide(instantiate_universe(a, u)), pa_decide(instantiate_universe(b, u)))
          << to_text(f);
  }
}

TEST(Alpha, InfiniteUniverseFixtures) {
  EXPECT_EQ(decide_in("fin(univ)", ModelClass::InfiniteUniverse), Verdict::Invalid);
  EXPECT_EQ(decide_in("~fin(univ) => card(univ) = 0", ModelClass::InfiniteUniverse), Verdict::Valid);
  EXPECT_EQ(decide_in("ex set y. ~fin(y)", ModelClass::InfiniteUniverse), Verdict::Valid);
  EXPECT_EQ(decide_in("all set y. fin(y) | fin(compl(y))", ModelClass::InfiniteUniverse),
            Verdict::Invalid);
  EXPECT_EQ(decide_in("ex set y. ~fin(y)", ModelClass::AllModels), Verdict::Invalid);
  EXPECT_EQ(decide_in("fin(univ)", ModelClass::FiniteUniverse), Verdict::Valid);
}

TEST(Alpha, InterleavedAgrees) {
  bapa::testing::CorpusGenerator gen(54, {.max_sets = 2});
  AlphaOptions inter;
  inter.strategy = Strategy::Interleaved;
  for (int i = 0; i < 30; ++i) {
    Formula f = gen.next();
    EXPECT_EQ(decide(f), decide(f, inter)) << to_text(f);
  }
}

TEST(Alpha, BoundedEvaluatorOnPureBa) {
  Formula g = alpha_translate(parse_formula("all set x. ex set y. x subseteq y & ~(y seteq x)"));
  for (unsigned u = 0; u <= 4; ++u)
    EXPECT_EQ(pa_eval_bounded(g, u), pa_decide(instantiate_universe(g, u)) == Verdict::Valid);
  EXPECT_THROW(pa_eval_bounded(parse_formula("ex int k. k = 1"), 2), ContractError);
}
