#pragma once

#include <string>
#include <utility>
#include <vector>

#include "munj/proof.hpp"
#include "munj/rewrite.hpp"
#include "munj/trust.hpp"

namespace munj {

// Bidirectional checker for Γ ⊢ π : P modulo the rewrite system.
// Checking returns the elaborated proof: the input with every annotation the
// normalizer needs filled in (λ domains, ⊥/∨/∃/ν goals).
class Checker {
 public:
  Checker(const Signature& sig, const RewriteSystem& rs, TrustLog* log = nullptr);

  ProofTerm check(const Context& ctx, const ProofTerm& p, const Formula& goal);
  std::pair<ProofTerm, Formula> infer(const Context& ctx, const ProofTerm& p);
  // Γ′ ⊢ σ : Γ. Returns σ with elaborated values.
  ProofSubst check_subst(const Context& target, const ProofSubst& sigma, const Context& source);

 private:
  struct PathGuard;

  Formula norm(const Formula& f);
  void require_congruent(const Formula& expected, const Formula& found, const std::string& what);
  [[noreturn]] void error(const std::string& msg) const;
  std::string path() const;
  void check_term(const Term& t);
  void check_well_formed(const Formula& f);
  void check_arity(const std::vector<TermType>& arity, const std::vector<Term>& args,
                   const std::string& what);
  ProofTerm check_eq_elim(const Context& ctx, const ProofTerm& p);
  ProofTerm check_mu_elim(const Context& ctx, const ProofTerm& p, const ProofTerm& major,
                          const Formula& major_type);
  // Binder names for a rule introducing term variables, renamed away from
  // the variables free in `ctx` and `extra`.
  std::pair<std::vector<Term>, ProofTerm> fresh_binders(const Context& ctx, const VarSet& extra,
                                                        const std::vector<Term>& binders,
                                                        const ProofTerm& body);

  const Signature& sig_;
  const RewriteSystem& rs_;
  TrustLog* log_;
  std::vector<std::string> path_;
};

ProofTerm check_proof(const Signature& sig, const RewriteSystem& rs, const Context& ctx,
                      const ProofTerm& p, const Formula& goal, TrustLog* log = nullptr);

// Throws ErrorKind::Check on a domain mismatch or a failing binding.
void check_subst_typing(const Signature& sig, const RewriteSystem& rs, const Context& target,
                        const ProofSubst& sigma, const Context& source);

// Derived rules for nat = μ(λN λx. x = 0 ∨ ∃y. x = s y ∧ N y).
struct NatRules {
  PredOperator nat_op;
  Formula nat(const Term& t) const { return Formula::mu(nat_op, {t}); }

  ProofTerm zero;  // nat 0
  Formula zero_type;
  ProofTerm succ;  // ∀x. nat x ⊃ nat (s x)
  Formula succ_type;

  Term zero_term;
  Term succ_const;

  // P 0 ⊃ (∀y. P y ⊃ P (s y)) ⊃ ∀x. nat x ⊃ P x
  Formula induction_type(const Predicate& p) const;
  ProofTerm induction(const Predicate& p) const;
};

// Requires sort `nat`, `0 : nat` and `s : nat -> nat`. Each template is
// checked before being returned.
NatRules derive_nat_rules(const Signature& sig, const RewriteSystem& rs);

}  // namespace munj
