#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "bapa/alpha.hpp"
#include "bapa/normalizer.hpp"
#include "bapa/oracle.hpp"
#include "bapa/schema.hpp"
#include "bapa/text_format.hpp"

using namespace bapa;

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(BAPA_FIXTURE_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kCounter = R"(
var c : set;
var x : int;
procedure inc
ensures x' = x + 1
{
  x := x + 1;
}
)";

}  // namespace

TEST(Schema, InsertVcMatchesGolden) {
  Schema s = parse_schema(fixture("insert.schema"));
  Formula vc = correctness_vc(s, "insert");
  EXPECT_TRUE(alpha_equivalent(vc, parse_formula(fixture("insert_vc.bapa"))));
  EXPECT_EQ(decide(vc), Verdict::Valid);
  EXPECT_LE(measure(vc).alternations, 1u);
}

TEST(Schema, AssignmentFramesOtherGlobals) {
  Schema s = parse_schema(kCounter);
  Formula t = simplify_transition(body_to_formula(s.proc("inc").body, s));
  Formula expected = parse_input("free c : set, c' : set, x : int, x' : int. x' = x + 1 & c' seteq c").formula;
  EXPECT_TRUE(equal(t, expected)) << to_text(t);
}

TEST(Schema, SkipSequenceIsSkip) {
  Schema s = parse_schema(kCounter);
  Formula t = simplify_transition(body_to_formula(stmt_seq(stmt_formula(skip_formula(s.globals)),
                                                           stmt_formula(skip_formula(s.globals))),
                                                  s));
  for (unsigned u = 0; u <= 2; ++u)
    EXPECT_TRUE(oracle(close_free(iff(t, skip_formula(s.globals))), u));
}

TEST(Schema, FalseBodyIsValid) {
  Schema s = parse_schema(R"(
var c : set;
procedure p
ensures card(c') = 7
{ false }
)");
  EXPECT_EQ(decide(correctness_vc(s, "p")), Verdict::Valid);
}

TEST(Schema, WeakBodyIsRefuted) {
  std::string text = fixture("insert.schema");
  text.replace(text.find("size' > 0"), 9, "size' > 1");
  Schema s = parse_schema(text);
  Formula vc = correctness_vc(s, "insert");
  EXPECT_EQ(decide(vc), Verdict::Invalid);
  EXPECT_FALSE(oracle(vc, 1));
}

TEST(Schema, CallUsesContract) {
  Schema s = parse_schema(R"(
var x : int;
procedure inc
ensures x' = x + 1
{ x := x + 1; }
procedure twice
ensures x' = x + 2
{ call inc; call inc; }
)");
  EXPECT_EQ(decide(correctness_vc(s, "twice")), Verdict::Valid);
}

TEST(Schema, ChoiceAndLocal) {
  Schema s = parse_schema(R"(
var a : set;
var b : set;
procedure swap
ensures a' seteq b & b' seteq a
{ local t : set { t := a; a := b; b := t; } }
procedure pick
ensures a' subseteq a union b
{ choice { a := a inter b; } or { a := a union b; } }
)");
  EXPECT_EQ(decide(correctness_vc(s, "swap")), Verdict::Valid);
  EXPECT_EQ(decide(correctness_vc(s, "pick")), Verdict::Valid);
}

TEST(Schema, UndeclaredCallReported) {
  try {
    parse_schema("var x : int;\nprocedure p\n{ call q; }\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().line, 3u);
    EXPECT_NE(std::string(e.what()).find("q"), std::string::npos);
  }
}
