#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace munj;
using munj::testing::make_nat_theory;

namespace {

const TermType kNat = TermType::base("nat");
const TermType kFun = TermType::arrow(kNat, kNat);

Term v(const std::string& n, const TermType& t = kNat) { return Term::var(n, t); }

// Outermost-first reducer, independent of beta_normalize.
std::optional<Term> outer_step(const Term& t) {
  if (t.is_app() && t.fn().is_lam())
    return substitute(t.fn().body(), TermSubst::single(t.fn().binder(), t.arg()));
  if (t.is_app()) {
    if (auto f = outer_step(t.fn())) return Term::app(*f, t.arg());
    if (auto a = outer_step(t.arg())) return Term::app(t.fn(), *a);
  }
  if (t.is_lam())
    if (auto b = outer_step(t.body())) return Term::lam(t.binder(), *b);
  return std::nullopt;
}

Term outer_normalize(Term t) {
  for (int i = 0; i < 100000; ++i) {
    auto n = outer_step(t);
    if (!n) return t;
    t = *n;
  }
  ADD_FAILURE() << "outer reducer did not terminate";
  return t;
}

class TermGen {
 public:
  explicit TermGen(std::uint32_t seed) : rng_(seed) {}
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  Term gen(const TermType& type, std::vector<Term> env, int depth) {
    const auto& th = theory();
    if (type == kNat) {
      std::vector<Term> candidates;
      for (const Term& e : env)
        if (e.type() == kNat) candidates.push_back(e);
      int c = depth <= 0 ? pick(2) : pick(6);
      switch (c) {
        case 0: return th.zero;
        case 1: return candidates.empty() ? th.zero : candidates[pick(static_cast<int>(candidates.size()))];
        case 2: return th.s(gen(kNat, env, depth - 1));
        case 3: return th.plus(gen(kNat, env, depth - 1), gen(kNat, env, depth - 1));
        case 4: return Term::app(gen(kFun, env, depth - 1), gen(kNat, env, depth - 1));
        default: {
          Term x = v(fresh(env), kNat);
          env.push_back(x);
          return Term::app(Term::lam(x, gen(kNat, env, depth - 1)), gen(kNat, env, depth - 1));
        }
      }
    }
    std::vector<Term> candidates;
    for (const Term& e : env)
      if (e.type() == kFun) candidates.push_back(e);
    int c = depth <= 0 ? pick(2) : pick(3);
    if (c == 0) return th.succ;
    if (c == 1 && !candidates.empty()) return candidates[pick(static_cast<int>(candidates.size()))];
    // Reuse an existing name now and then to exercise capture avoidance.
    Term x = v(pick(3) == 0 && !env.empty() ? env[0].name() : fresh(env), kNat);
    if (x.type() != kNat) x = v(fresh(env), kNat);
    env.push_back(x);
    return Term::lam(x, gen(kNat, env, depth - 1));
  }

  static const munj::testing::NatTheory& theory() {
    static const auto th = make_nat_theory();
    return th;
  }

 private:
  std::string fresh(const std::vector<Term>& env) { return "x" + std::to_string(env.size() + counter_++); }
  std::mt19937 rng_;
  int counter_ = 0;
};

}  // namespace

TEST(Term, BetaContractsApplication) {
  auto th = make_nat_theory();
  Term x = v("x");
  Term t = Term::app(Term::lam(x, th.s(x)), th.zero);
  EXPECT_TRUE(alpha_eq(beta_normalize(t), th.s(th.zero)));
  EXPECT_FALSE(is_beta_normal(t));
  EXPECT_TRUE(is_beta_normal(beta_normalize(t)));
}

TEST(Term, SubstitutionAvoidsCapture) {
  auto th = make_nat_theory();
  Term x = v("x");
  Term y = v("y");
  // (λx λy. x + y) y  →  λy'. y + y'
  Term t = Term::app(Term::lam(x, Term::lam(y, th.plus(x, y))), y);
  Term z = v("z");
  Term expected = Term::lam(z, th.plus(y, z));
  Term got = beta_normalize(t);
  EXPECT_TRUE(alpha_eq(got, expected)) << to_string(got);
  EXPECT_TRUE(occurs_free("y", got));
}

TEST(Term, AlphaEquivalence) {
  Term x = v("x");
  Term y = v("y");
  EXPECT_TRUE(alpha_eq(Term::lam(x, x), Term::lam(y, y)));
  EXPECT_FALSE(alpha_eq(Term::lam(x, y), Term::lam(y, y)));
  EXPECT_FALSE(alpha_eq(x, y));
}

TEST(Term, TypeErrors) {
  auto th = make_nat_theory();
  EXPECT_THROW(infer_term_type(th.sig, Term::app(th.succ, th.succ)), Error);
  EXPECT_THROW(infer_term_type(th.sig, Term::constant("nope", kNat)), Error);
  EXPECT_EQ(infer_term_type(th.sig, th.plus(th.zero, th.s(th.zero))), kNat);
  TermSubst s;
  EXPECT_THROW(s.bind(v("x"), th.succ), Error);
}

TEST(Term, BetaFuelGuard) {
  auto th = make_nat_theory();
  Term x = v("x");
  Term t = Term::app(Term::lam(x, th.s(x)), th.zero);
  try {
    beta_normalize(t, 0);
    FAIL() << "expected fuel exhaustion";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Fuel);
  }
}

TEST(Term, SubstitutionComposition) {
  auto th = make_nat_theory();
  Term x = v("x");
  Term y = v("y");
  TermSubst a = TermSubst::single(x, th.s(y));
  TermSubst b = TermSubst::single(y, th.zero);
  TermSubst ab = compose(a, b);
  Term t = th.plus(x, y);
  EXPECT_TRUE(alpha_eq(apply_term_subst(t, ab), th.plus(th.s(th.zero), th.zero)));
  EXPECT_TRUE(alpha_eq(apply_term_subst(t, ab), apply_term_subst(apply_term_subst(t, a), b)));
}

TEST(TermProperty, BetaNormalFormsAgreeAcrossStrategies) {
  TermGen gen(7);
  for (int trial = 0; trial < 500; ++trial) {
    Term t = gen.gen(kNat, {v("a"), v("f", kFun)}, 4);
    Term n1 = beta_normalize(t);
    Term n2 = outer_normalize(t);
    ASSERT_TRUE(alpha_eq(n1, n2)) << to_string(t) << "\n" << to_string(n1) << "\n" << to_string(n2);
    ASSERT_TRUE(alpha_eq(beta_normalize(n1), n1));
    ASSERT_TRUE(is_beta_normal(n1));
    ASSERT_EQ(type_of(n1), kNat);
  }
}

TEST(TermProperty, SubstitutionPreservesTypes) {
  TermGen gen(11);
  auto th = make_nat_theory();
  for (int trial = 0; trial < 300; ++trial) {
    Term t = gen.gen(kNat, {v("a"), v("f", kFun)}, 3);
    TermSubst s;
    s.bind(v("a"), gen.gen(kNat, {v("a")}, 2));
    s.bind(v("f", kFun), gen.gen(kFun, {v("a")}, 2));
    Term r = apply_term_subst(t, s);
    ASSERT_EQ(infer_term_type(th.sig, r), kNat);
    ASSERT_TRUE(is_beta_normal(r));
  }
}
