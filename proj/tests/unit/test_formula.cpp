#include <gtest/gtest.h>

#include "bapa/text_format.hpp"
#include "corpus.hpp"

using namespace bapa;

TEST(TextFormat, CorpusRoundTrip) {
  bapa::testing::CorpusGenerator gen(11);
  for (int i = 0; i < 300; ++i) {
    Formula f = gen.next();
    Formula g = parse_formula(to_text(f));
    EXPECT_TRUE(equal(f, g)) << to_text(f);
  }
}

TEST(TextFormat, FreePreambleRoundTrip) {
  ParsedInput in = parse_input("free y : set, k : int. ex set x. x subseteq y & card(x) = k");
  EXPECT_EQ(in.declared.at("y"), Sort::Set);
  EXPECT_EQ(in.declared.at("k"), Sort::Int);
  ParsedInput again = parse_input(print_formula(in.formula));
  EXPECT_TRUE(equal(in.formula, again.formula));
  EXPECT_EQ(again.declared, in.declared);
}

TEST(TextFormat, ParseErrorCarriesSpan) {
  try {
    parse_formula("all set x.\n  x = x");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().line, 2u);
    EXPECT_EQ(e.span().column, 5u);
  }
}

TEST(TextFormat, UnboundVariableRejected) {
  EXPECT_THROW(parse_formula("ex set x. x seteq y"), ParseError);
}

TEST(Formula, SortClashRejected) {
  Formula f = conj2(set_eq(set_var("a"), set_empty()), int_eq(int_var("a"), int_const(0)));
  EXPECT_THROW(free_vars(f), SortError);
}

TEST(Formula, SubstitutionAvoidsCapture) {
  Formula f = parse_input("free k : int. ex int m. m = k + 1").formula;
  Formula g = substitute(f, "k", Sort::Int, IntTerm(int_var("m")));
  EXPECT_EQ(free_vars(g).count("m"), 1u);
  EXPECT_TRUE(alpha_equivalent(g, parse_input("free m : int. ex int z. z = m + 1").formula));
}

TEST(Formula, AlphaEquivalenceIgnoresBoundNames) {
  EXPECT_TRUE(alpha_equivalent(parse_formula("all set x. ex set y. x subseteq y"),
                               parse_formula("all set a. ex set b. a subseteq b")));
  EXPECT_FALSE(alpha_equivalent(parse_formula("all set x. ex set y. x subseteq y"),
                                parse_formula("all set a. ex set b. b subseteq a")));
}

TEST(Formula, Metrics) {
  Metrics m = measure(parse_formula("all set x. ex set y. all int k. card(x inter y) = k"));
  EXPECT_EQ(m.set_vars, 2u);
  EXPECT_EQ(m.int_vars, 1u);
  EXPECT_EQ(m.alternations, 2u);
}
