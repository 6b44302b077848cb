#include <gtest/gtest.h>

#include "support.hpp"

using namespace munj;
using munj::testing::make_nat_theory;

namespace {

std::string check_error(const munj::testing::NatTheory& th, const Context& ctx, const ProofTerm& p,
                        const Formula& goal) {
  try {
    check_proof(th.sig, th.rs, ctx, p, goal);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Check) << e.what();
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Checker, OneStepArithmetic) {
  auto th = make_nat_theory();
  Formula goal = Formula::eq(th.plus(th.num(1), th.num(1)), th.num(2));
  EXPECT_NO_THROW(check_proof(th.sig, th.rs, {}, ProofTerm::refl(th.num(2)), goal));
  EXPECT_NE(check_error(th, {}, ProofTerm::refl(th.num(1)), goal), "");
}

TEST(Checker, ErrorsNameThePath) {
  auto th = make_nat_theory();
  Formula goal = Formula::conj(Formula::top(), th.p(th.zero));
  std::string msg = check_error(th, {}, ProofTerm::pair(ProofTerm::unit(), ProofTerm::unit()), goal);
  EXPECT_NE(msg.find("at pair.2:"), std::string::npos) << msg;
}

TEST(Checker, ImplicationAndHypotheses) {
  auto th = make_nat_theory();
  Formula a = th.p(th.zero);
  Formula goal = Formula::imp(a, Formula::conj(a, a));
  ProofTerm p = ProofTerm::lam("h", std::nullopt, ProofTerm::pair(ProofTerm::var("h"), ProofTerm::var("h")));
  ProofTerm el = check_proof(th.sig, th.rs, {}, p, goal);
  ASSERT_TRUE(el.annot().has_value());
  EXPECT_TRUE(alpha_eq(*el.annot(), a));
  EXPECT_NE(check_error(th, {}, ProofTerm::var("h"), a), "");
}

TEST(Checker, AbortAndDisjunction) {
  auto th = make_nat_theory();
  Formula goal = Formula::imp(Formula::bot(), Formula::disj(th.p(th.zero), th.q(th.zero)));
  ProofTerm p = ProofTerm::lam("b", std::nullopt, ProofTerm::abort(ProofTerm::var("b")));
  EXPECT_NO_THROW(check_proof(th.sig, th.rs, {}, p, goal));
  Formula comm = Formula::imp(Formula::disj(th.p(th.zero), th.q(th.zero)),
                              Formula::disj(th.q(th.zero), th.p(th.zero)));
  ProofTerm c = ProofTerm::lam(
      "d", std::nullopt,
      ProofTerm::case_of(ProofTerm::var("d"), "a", ProofTerm::in2(ProofTerm::var("a")), "b",
                         ProofTerm::in1(ProofTerm::var("b"))));
  EXPECT_NO_THROW(check_proof(th.sig, th.rs, {}, c, comm));
}

TEST(Checker, QuantifiersAndEigenvariables) {
  auto th = make_nat_theory();
  Term x = th.var("x");
  Formula all = Formula::forall(x, th.p(x));
  ProofTerm inst = ProofTerm::app_term(ProofTerm::var("h"), th.plus(th.num(1), th.zero));
  EXPECT_NO_THROW(check_proof(th.sig, th.rs, {{"h", all}}, inst, th.p(th.num(1))));
  // ∀-introduction over a variable free in the context is rejected by renaming.
  ProofTerm bad = ProofTerm::lam_term(x, ProofTerm::var("k"));
  EXPECT_NE(check_error(th, {{"k", th.p(x)}}, bad, all), "");
  Formula ex = Formula::exists(x, th.p(x));
  ProofTerm escape = ProofTerm::destruct(ProofTerm::var("h"), x, "k", ProofTerm::var("k"));
  EXPECT_NE(check_error(th, {{"h", ex}}, escape, th.p(th.zero)), "");
}

TEST(Checker, EmptyCsuProvesAnything) {
  auto th = make_nat_theory();
  Formula hyp = Formula::eq(th.zero, th.num(1));
  EqElimData d{Context{}, VarSet{}, TermSubst{}, ProofSubst{}, th.zero, th.num(1), th.c(),
               ProofTerm::var("e"), {}};
  EXPECT_NO_THROW(check_proof(th.sig, th.rs, {{"e", hyp}}, ProofTerm::eq_elim(d), th.c()));
}

TEST(Checker, IncompleteBranchesAreRejected) {
  auto th = make_nat_theory();
  Term x = th.var("x");
  Term y = th.var("y");
  EqElimData d{Context{}, VarSet{}, TermSubst{}, ProofSubst{}, th.s(x), th.s(y), Formula::bot(),
               ProofTerm::var("e"), {}};
  std::string msg = check_error(th, {{"e", Formula::eq(th.s(x), th.s(y))}}, ProofTerm::eq_elim(d),
                                Formula::bot());
  EXPECT_NE(msg.find("do not cover"), std::string::npos) << msg;
}

TEST(Checker, NonUnifierBranchIsRejected) {
  auto th = make_nat_theory();
  Term x = th.var("x");
  EqElimData d{Context{}, VarSet{}, TermSubst{}, ProofSubst{}, x, th.zero, Formula::eq(x, th.zero),
               ProofTerm::var("e"), {}};
  d.branches.push_back({TermSubst::single(x, th.num(1)), ProofTerm::refl(th.num(1))});
  EXPECT_NE(check_error(th, {{"e", Formula::eq(x, th.zero)}}, ProofTerm::eq_elim(d),
                        Formula::eq(x, th.zero)),
            "");
}

TEST(Checker, AssumedCompletenessIsLogged) {
  auto th = make_nat_theory();
  Term x = th.var("x");
  // 0 + x = x lies outside the constructor fragment.
  EqElimData d{Context{}, VarSet{}, TermSubst{}, ProofSubst{}, th.plus(th.zero, x), x, th.c(),
               ProofTerm::var("e"), {}};
  TrustLog log;
  Formula hyp = Formula::eq(th.plus(th.zero, x), x);
  EXPECT_NO_THROW(check_proof(th.sig, th.rs, {{"e", hyp}}, ProofTerm::eq_elim(d), th.c(), &log));
  EXPECT_TRUE(log.has(TrustLog::Kind::AssumedComplete));
}

TEST(Checker, DerivedNatRules) {
  auto th = make_nat_theory();
  NatRules rules = derive_nat_rules(th.sig, th.rs);
  EXPECT_NO_THROW(check_proof(th.sig, th.rs, {}, rules.zero, rules.zero_type));
  EXPECT_NO_THROW(check_proof(th.sig, th.rs, {}, rules.succ, rules.succ_type));
  EXPECT_NO_THROW(check_proof(th.sig, th.rs, {}, th.nat_proof(rules, 3), rules.nat(th.num(3))));
  Predicate p = Predicate::of_atom("p", {th.nat});
  EXPECT_NO_THROW(check_proof(th.sig, th.rs, {}, rules.induction(p), rules.induction_type(p)));
  EXPECT_NE(check_error(th, {}, th.nat_proof(rules, 2), rules.nat(th.num(3))), "");
}

TEST(Checker, SubstitutionTyping) {
  auto th = make_nat_theory();
  Context source{{"a", th.p(th.zero)}};
  Context target{{"b", th.p(th.plus(th.zero, th.zero))}};
  EXPECT_NO_THROW(check_subst_typing(th.sig, th.rs, target, ProofSubst::single("a", ProofTerm::var("b")), source));
  EXPECT_THROW(check_subst_typing(th.sig, th.rs, target, ProofSubst{}, source), Error);
}
