#include <gtest/gtest.h>

#include "bapa/ba_eliminator.hpp"
#include "bapa/oracle.hpp"
#include "bapa/text_format.hpp"
#include "corpus.hpp"

using namespace bapa;

namespace {

bool same_on_models(const Formula& a, const Formula& b, unsigned u) {
  std::vector<std::string> sets;
  for (const auto& [n, s] : free_vars(conj2(a, b))) sets.push_back(n);
  std::uint64_t per = std::uint64_t{1} << u;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < sets.size(); ++i) total *= per;
  for (std::uint64_t code = 0; code < total; ++code) {
    FiniteModel m;
    m.u = u;
    std::uint64_t c = code;
    for (const auto& n : sets) {
      m.sets[n] = c % per;
      c /= per;
    }
    if (evaluate(a, m) != evaluate(b, m)) return false;
  }
  return true;
}

}  // namespace

TEST(BaEliminator, SingletonExists) {
  Formula f = parse_formula("ex set x. card(x) = 1");
  Formula q = ba_eliminate(f);
  EXPECT_TRUE(quantifier_free(q));
  for (unsigned u = 0; u <= 3; ++u) EXPECT_EQ(oracle(q, u), u >= 1);
}

TEST(BaEliminator, FreeVariablesKept) {
  Formula f = parse_input("free a : set. ex set x. x subseteq a & card(x) = 2").formula;
  Formula q = ba_eliminate(f);
  EXPECT_TRUE(quantifier_free(q));
  for (unsigned u = 0; u <= 4; ++u) EXPECT_TRUE(same_on_models(f, q, u));
}

TEST(BaEliminator, RandomPureBa) {
  bapa::testing::CorpusOptions opt;
  opt.pure_ba = true;
  opt.max_const = 2;
  opt.free_sets = 1;
  opt.use_maxc = false;
  bapa::testing::CorpusGenerator gen(41, opt);
  for (int i = 0; i < 60; ++i) {
    Formula f = gen.next();
    Formula q = ba_eliminate(f);
    ASSERT_TRUE(quantifier_free(q)) << to_text(f);
    for (unsigned u = 0; u <= 3; ++u) ASSERT_TRUE(same_on_models(f, q, u)) << to_text(f);
  }
}

TEST(BaEliminator, RejectsIntegerVariables) {
  EXPECT_FALSE(is_pure_ba(parse_formula("ex int k. ex set x. card(x) = k")));
  EXPECT_THROW(ba_eliminate(parse_formula("ex int k. ex set x. card(x) = k")), ContractError);
}
