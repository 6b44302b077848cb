#include <gtest/gtest.h>

#include "support.hpp"

using namespace munj;
using namespace munj::testing;

namespace {

std::string syntax_error(const std::string& text) {
  try {
    parse_theory(text, "t.mnj");
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Syntax);
    return e.what();
  }
  ADD_FAILURE() << "expected a syntax error";
  return {};
}

const char* kNat =
    "sort nat\nconst 0 : nat\nconst s : nat -> nat\n"
    "const plus : nat -> nat -> nat infix +\n"
    "rewrite [x:nat] x + 0 ~> x\nrewrite [x:nat y:nat] x + s y ~> s (x + y)\n"
    "pred p : nat -> o\n";

}  // namespace

TEST(Syntax, EmptyFile) {
  TheoryFile f = parse_theory("");
  EXPECT_TRUE(f.decls.empty());
  EXPECT_TRUE(parse_theory("# only a comment\n").decls.empty());
}

TEST(Syntax, ErrorsCarryPosition) {
  std::string msg = syntax_error("sort nat\nrewrite ~> r\n");
  EXPECT_NE(msg.find("t.mnj:2:9:"), std::string::npos) << msg;
  EXPECT_NE(msg.find("'~>'"), std::string::npos) << msg;
}

TEST(Syntax, ReservedWordsCannotBeDeclared) {
  syntax_error("sort forall\n");
  syntax_error("sort nat\nconst mu : nat\n");
}

TEST(Syntax, UnknownNamesAreReported) {
  std::string msg = syntax_error("sort nat\nconst 0 : nat\ntheorem t : q 0\nproof unit end\n");
  EXPECT_NE(msg.find("t.mnj:3:"), std::string::npos) << msg;
}

TEST(Syntax, IllTypedTermsAreRejected) {
  syntax_error("sort nat\nsort b\nconst 0 : nat\nconst s : nat -> nat\nconst t : b\n"
               "theorem x : s t = 0\nproof unit end\n");
}

TEST(Syntax, InfixAndPrecedence) {
  TheoryFile f = parse_theory(std::string(kNat) + "theorem t : s 0 + s 0 = s (s 0)\nproof refl(s (s 0)) end\n");
  const auto& th = std::get<TheoremDecl>(f.decls.back().value);
  EXPECT_EQ(to_string(th.statement, &f.sig), "s 0 + s 0 = s (s 0)");
}

TEST(Syntax, ImplicationIsRightAssociative) {
  TheoryFile f = parse_theory(std::string(kNat) + "theorem t : p 0 => p 0 => p 0\nproof lam a. lam b. a end\n");
  const auto& th = std::get<TheoremDecl>(f.decls.back().value);
  ASSERT_EQ(th.statement.kind(), Formula::Kind::Imp);
  EXPECT_EQ(th.statement.right().kind(), Formula::Kind::Imp);
}

TEST(Syntax, NatIsDefinedAsLeastFixedPoint) {
  TheoryFile f = parse_theory_file(corpus_path("nat.mnj"));
  int fixed_points = 0;
  for (const Decl& d : f.decls) {
    auto* def = std::get_if<DefineDecl>(&d.value);
    if (!def) continue;
    auto* pred = std::get_if<Predicate>(&def->value);
    if (!pred || pred->body.kind() != Formula::Kind::Mu) continue;
    ++fixed_points;
    EXPECT_EQ(def->name, "nat");
  }
  EXPECT_EQ(fixed_points, 1);
}

TEST(Syntax, SubstSugarNeedsConstructorFragment) {
  std::string text =
      "sort nat\nconst 0 : nat\nconst f : nat -> nat\nrewrite f 0 ~> 0\npred p : nat -> o\n"
      "theorem t : forall x:nat, f x = 0 => p x\n"
      "proof lamx x:nat. lam e. subst e : f x = 0 in p x end\n";
  try {
    parse_theory(text, "t.mnj");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("t.mnj:"), std::string::npos) << e.what();
  }
}

TEST(Syntax, SubstSugarWithoutUnifierRejectsThen) {
  syntax_error(std::string(kNat) +
               "theorem t : 0 = s 0 => p 0\nproof lam e. subst e : 0 = s 0 in p 0 then unit end\n");
  TheoryFile f = parse_theory(std::string(kNat) +
                              "theorem t : 0 = s 0 => p 0\nproof lam e. subst e : 0 = s 0 in p 0 end\n");
  const auto& th = std::get<TheoremDecl>(f.decls.back().value);
  ASSERT_EQ(th.proof.sub(0).kind(), ProofTerm::Kind::EqElim);
  EXPECT_TRUE(th.proof.sub(0).eq().branches.empty());
}

class RoundTrip : public ::testing::TestWithParam<std::string> {};

TEST_P(RoundTrip, PrintThenParseIsAlphaEqual) {
  TheoryFile f = parse_theory_file(corpus_path(GetParam()));
  std::string printed = print_theory(f);
  TheoryFile g = parse_theory(printed, "printed");
  EXPECT_TRUE(alpha_eq(f, g)) << printed;
  EXPECT_EQ(print_theory(g), printed);
}

INSTANTIATE_TEST_SUITE_P(Corpus, RoundTrip,
                         ::testing::Values("nat.mnj", "ackermann.mnj", "red.mnj", "muwrap.mnj",
                                           "conat.mnj", "noncons.mnj", "assumed_csu.mnj",
                                           "bad_check.mnj", "bad_csu.mnj", "bad_escape.mnj",
                                           "bad_incoherent.mnj", "bad_muwrap_raw.mnj",
                                           "bad_nonmono.mnj", "bad_rule.mnj"),
                         [](const auto& info) {
                           std::string n = info.param.substr(0, info.param.find('.'));
                           return n;
                         });
