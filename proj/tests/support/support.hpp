#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "munj/checker.hpp"
#include "munj/cli.hpp"
#include "munj/normalizer.hpp"
#include "munj/syntax.hpp"

namespace munj::testing {

// sort nat, 0, s, + with x + 0 ~> x and x + s y ~> s (x + y), predicates
// p q r : nat -> o and c : o.
struct NatTheory {
  Signature sig;
  RewriteSystem rs;
  TermType nat = TermType::base("nat");
  Term zero = Term::constant("0", TermType::base("nat"));
  Term succ = Term::constant("s", TermType::arrow(TermType::base("nat"), TermType::base("nat")));
  Term plus_c = Term::constant(
      "plus", TermType::arrows({TermType::base("nat"), TermType::base("nat")}, TermType::base("nat")));

  Term var(const std::string& name) const { return Term::var(name, nat); }
  Term s(const Term& t) const { return Term::app(succ, t); }
  Term plus(const Term& a, const Term& b) const { return Term::apps(plus_c, {a, b}); }
  Term num(int n) const;
  Formula p(const Term& t) const { return Formula::atom("p", {t}); }
  Formula q(const Term& t) const { return Formula::atom("q", {t}); }
  Formula r(const Term& t) const { return Formula::atom("r", {t}); }
  Formula c() const { return Formula::atom("c", {}); }

  // nat (s^n 0) built from the derived zero and successor rules.
  ProofTerm nat_proof(const NatRules& rules, int n) const;
};

NatTheory make_nat_theory();

std::string corpus_path(const std::string& name);
std::vector<std::string> positive_corpus();
Session load_checked(const std::string& name);

// Forward random generation of checked proofs over a NatTheory. Every
// generated proof is well typed by construction; callers still run the
// checker, which is the property under test.
struct GenProof {
  ProofTerm proof;
  Formula type;
};

class ProofGen {
 public:
  ProofGen(const NatTheory& th, const NatRules& rules, std::uint32_t seed);

  std::mt19937& rng() { return rng_; }

  // x, y : nat free; hypotheses over them.
  Context base_context() const;
  std::vector<Term> base_vars() const;

  Term term(const std::vector<Term>& vars, int depth);
  Formula formula(const std::vector<Term>& vars, int depth);
  GenProof proof(const Context& ctx, const std::vector<Term>& vars, int depth);
  // A proof whose root is a redex.
  GenProof redex(const Context& ctx, const std::vector<Term>& vars, int depth);
  // Random substitution over `vars` into small terms over `vars`.
  TermSubst subst(const std::vector<Term>& vars);

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

 private:
  std::string fresh_term_name(const std::vector<Term>& vars, const Context& ctx);
  std::string fresh_proof_name(const Context& ctx);
  GenProof leaf(const Context& ctx, const std::vector<Term>& vars);

  const NatTheory& th_;
  const NatRules& rules_;
  std::mt19937 rng_;
  int counter_ = 0;
};

}  // namespace munj::testing
