#include <gtest/gtest.h>

#include "support.hpp"
#include "munj/unify.hpp"

using namespace munj;
using munj::testing::make_nat_theory;

TEST(Unify, ConstructorTermsGetOneMgu) {
  auto th = make_nat_theory();
  Term x = th.var("x");
  Term y = th.var("y");
  CsuResult r = fo_unify(th.rs, th.s(x), th.s(th.s(y)));
  EXPECT_EQ(r.completeness, Completeness::Complete);
  ASSERT_EQ(r.unifiers.size(), 1u);
  EXPECT_TRUE(is_unifier(th.rs, r.unifiers[0], th.s(x), th.s(th.s(y))));
}

TEST(Unify, ClashAndOccursCheckGiveEmptyCsu) {
  auto th = make_nat_theory();
  Term x = th.var("x");
  EXPECT_TRUE(fo_unify(th.rs, th.zero, th.s(x)).unifiers.empty());
  EXPECT_TRUE(fo_unify(th.rs, x, th.s(x)).unifiers.empty());
  EXPECT_EQ(fo_unify(th.rs, th.zero, th.s(x)).completeness, Completeness::Complete);
}

TEST(Unify, DefinedSymbolsDemandAnnotation) {
  auto th = make_nat_theory();
  Term x = th.var("x");
  try {
    fo_unify(th.rs, th.plus(th.zero, x), x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DemandAnnotation);
  }
  EXPECT_FALSE(in_constructor_fragment(th.rs, th.plus(th.zero, x)));
  EXPECT_TRUE(in_constructor_fragment(th.rs, th.s(x)));
}

TEST(Unify, UnifierCheckWorksModuloRewriting) {
  auto th = make_nat_theory();
  Term x = th.var("x");
  TermSubst s = TermSubst::single(x, th.zero);
  EXPECT_TRUE(is_unifier(th.rs, s, th.plus(th.zero, x), x));
  EXPECT_FALSE(is_unifier(th.rs, TermSubst::single(x, th.num(1)), th.zero, x));
}

TEST(Unify, FactoringThroughABranch) {
  auto th = make_nat_theory();
  Term x = th.var("x");
  Term y = th.var("y");
  Term k = th.var("k");
  // θ = [x := s 0, y := 0] factors through θ′ = [x := s k, y := k] with k := 0.
  TermSubst theta;
  theta.bind(x, th.num(1));
  theta.bind(y, th.zero);
  TermSubst prime;
  prime.bind(x, th.s(k));
  prime.bind(y, k);
  auto f = factor_subst(th.rs, theta, prime);
  ASSERT_TRUE(f.has_value());
  EXPECT_TRUE(alpha_eq(*f->find("k"), th.zero));
  TermSubst other;
  other.bind(x, th.zero);
  other.bind(y, th.zero);
  EXPECT_FALSE(factor_subst(th.rs, theta, other).has_value());
}

TEST(Unify, MatchingModuloRewriting) {
  auto th = make_nat_theory();
  Term y = th.var("y");
  auto m = match(th.rs, th.s(y), th.plus(th.num(1), th.num(1)));
  ASSERT_TRUE(m.has_value());
  EXPECT_TRUE(alpha_eq(*m->find("y"), th.num(1)));
}
