#include <gtest/gtest.h>

#include "support.hpp"

using namespace munj;
using munj::testing::make_nat_theory;

namespace {

// p x, x = y ⊢ p y by equality elimination on x = y.
ProofTerm leibniz(const munj::testing::NatTheory& th) {
  Term x = th.var("x");
  Term y = th.var("y");
  EqElimData d{Context{{"h", th.p(x)}}, VarSet{}, TermSubst{}, ProofSubst::single("h", ProofTerm::var("h")),
               x, y, th.p(y), ProofTerm::var("e"), {}};
  TermSubst branch;
  branch.bind(x, y);
  d.branches.push_back({branch, ProofTerm::var("h")});
  return ProofTerm::eq_elim(d);
}

}  // namespace

TEST(Proof, EqElimCanonicalizesSubstitutions) {
  auto th = make_nat_theory();
  ProofTerm p = leibniz(th);
  const EqElimData& d = p.eq();
  EXPECT_EQ(d.scope.size(), 2u);
  EXPECT_EQ(d.theta.size(), 2u);  // identity on x and y
  EXPECT_EQ(d.branches[0].unifier.size(), 2u);
}

TEST(Proof, EqElimRejectsUnboundBranchVariables) {
  auto th = make_nat_theory();
  Term x = th.var("x");
  Term y = th.var("y");
  EqElimData d{Context{}, VarSet{}, TermSubst{}, ProofSubst{}, x, y, Formula::top(),
               ProofTerm::var("e"), {}};
  d.branches.push_back({TermSubst::single(x, y), ProofTerm::refl(th.var("w"))});
  EXPECT_THROW(ProofTerm::eq_elim(d), Error);
}

TEST(Proof, TermSubstitutionIsSuspendedAtEqualityElimination) {
  auto th = make_nat_theory();
  ProofTerm p = leibniz(th);
  TermSubst theta;
  theta.bind(th.var("x"), th.num(1));
  theta.bind(th.var("y"), th.plus(th.var("z"), th.zero));
  ProofTerm q = apply_term_subst(p, theta);
  const EqElimData& a = p.eq();
  const EqElimData& b = q.eq();
  ASSERT_EQ(a.branches.size(), b.branches.size());
  EXPECT_EQ(a.branches[0].unifier.str(), b.branches[0].unifier.str());
  EXPECT_EQ(to_string(a.branches[0].proof), to_string(b.branches[0].proof));
  EXPECT_TRUE(alpha_eq(a.u, b.u));
  EXPECT_TRUE(alpha_eq(*b.theta.find("x"), th.num(1)));
}

TEST(Proof, ProofSubstitutionReachesSigmaAndMajorOnly) {
  auto th = make_nat_theory();
  ProofTerm p = leibniz(th);
  ProofSubst s;
  s.bind("h", ProofTerm::var("hh"));
  s.bind("e", ProofTerm::var("ee"));
  ProofTerm q = apply_proof_subst(p, s);
  EXPECT_EQ(to_string(q.eq().major), "ee");
  EXPECT_EQ(to_string(*q.eq().sigma.find("h")), "hh");
  EXPECT_EQ(to_string(q.eq().branches[0].proof), "h");
  EXPECT_EQ(free_proof_vars(q), (std::set<std::string>{"ee", "hh"}));
}

TEST(Proof, CaptureAvoidingProofSubstitution) {
  auto th = make_nat_theory();
  // (λh. k)[h/k] must rename the binder.
  ProofTerm p = ProofTerm::lam("h", th.p(th.zero), ProofTerm::var("k"));
  ProofTerm q = apply_proof_subst(p, ProofSubst::single("k", ProofTerm::var("h")));
  EXPECT_NE(q.name(), "h");
  EXPECT_EQ(free_proof_vars(q), std::set<std::string>{"h"});
}

TEST(Proof, CaptureAvoidingTermSubstitution) {
  auto th = make_nat_theory();
  Term x = th.var("x");
  Term y = th.var("y");
  ProofTerm p = ProofTerm::lam_term(x, ProofTerm::refl(th.plus(x, y)));
  ProofTerm q = apply_term_subst(p, TermSubst::single(y, x));
  EXPECT_NE(q.term_binders()[0].name(), "x");
  EXPECT_EQ(free_vars(q).count("x"), 1u);
}

TEST(Proof, AlphaEquivalence) {
  auto th = make_nat_theory();
  ProofTerm a = ProofTerm::lam("h", th.p(th.zero), ProofTerm::var("h"));
  ProofTerm b = ProofTerm::lam("k", th.p(th.zero), ProofTerm::var("k"));
  ProofTerm c = ProofTerm::lam("k", th.p(th.zero), ProofTerm::var("h"));
  EXPECT_TRUE(alpha_eq(a, b));
  EXPECT_FALSE(alpha_eq(a, c));
  EXPECT_TRUE(alpha_eq(ProofTerm::lam("h", std::nullopt, ProofTerm::var("h")), a));
}

TEST(Proof, PrintingUsesSurfaceSyntax) {
  auto th = make_nat_theory();
  ProofTerm p = ProofTerm::pair(ProofTerm::refl(th.num(1)), ProofTerm::unit());
  EXPECT_EQ(to_string(p, &th.sig), "pair(refl(s 0), unit)");
}
