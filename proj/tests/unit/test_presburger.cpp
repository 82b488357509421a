#include <gtest/gtest.h>

#include "bapa/presburger.hpp"
#include "bapa/text_format.hpp"
#include "pa_fuzz.hpp"

using namespace bapa;

TEST(Presburger, KnownSentences) {
  EXPECT_EQ(pa_decide(parse_formula("all int x. ex int y. x = 2 * y | x = 2 * y + 1")), Verdict::Valid);
  EXPECT_EQ(pa_decide(parse_formula("all int x. ex int y. x = 2 * y")), Verdict::Invalid);
  EXPECT_EQ(pa_decide(parse_formula("ex int x. 3 * x = 7")), Verdict::Invalid);
  EXPECT_EQ(pa_decide(parse_formula("all nat x. all nat y. x + y = 0 => x = 0")), Verdict::Valid);
  EXPECT_EQ(pa_decide(parse_formula("all int x. x < 3 | 2 < x")), Verdict::Valid);
}

TEST(Presburger, QeOutputIsQuantifierFree) {
  Formula f = parse_input("free a : int. ex int x. 2 * x = a & 0 < x").formula;
  Formula q = pa_qe(f);
  EXPECT_TRUE(quantifier_free(q));
  for (long a = -6; a <= 6; ++a)
    EXPECT_EQ(pa_eval(q, {{"a", a}}), a > 0 && a % 2 == 0) << a;
}

TEST(Presburger, FuzzAgainstEnumeration) {
  bapa::testing::PaFuzzer fuzz(31);
  for (int i = 0; i < 150; ++i) {
    auto c = fuzz.next();
    Formula q = pa_qe(c.formula);
    ASSERT_TRUE(quantifier_free(q));
    for (long a = -5; a <= 5; ++a)
      for (long b = -5; b <= 5; ++b) {
        bapa::testing::IntEnv env{{"a", a}, {"b", b}};
        Env e{{"a", a}, {"b", b}};
        ASSERT_EQ(bapa::testing::brute_eval(c.formula, env, c.bound), pa_eval(q, e)) << to_text(c.formula);
      }
  }
}

TEST(Presburger, RejectsSets) {
  EXPECT_THROW(pa_qe(parse_formula("ex set x. card(x) = 1")), ContractError);
}

TEST(Presburger, EliminateExistsConjunction) {
  std::vector<Formula> c = {int_lt(int_var("a"), int_var("x")), int_lt(int_var("x"), int_var("b"))};
  Formula q = pa_eliminate_exists(c, "x");
  for (long a = -3; a <= 3; ++a)
    for (long b = -3; b <= 3; ++b) EXPECT_EQ(pa_eval(q, {{"a", a}, {"b", b}}), a + 1 < b);
}
