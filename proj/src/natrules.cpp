#include "munj/checker.hpp"

namespace munj {

namespace {

Term nat_var(const std::string& name) { return Term::var(name, TermType::base("nat")); }

struct NatNames {
  NameSupply supply;
  std::string z, st, x, n, m, h, e, w, k, c, y;
};

NatNames fresh_names(const Predicate& p) {
  NatNames out;
  VarSet fv;
  collect_free_vars(p, fv);
  out.supply.reserve(names_of(fv));
  out.z = out.supply.fresh("z");
  out.st = out.supply.fresh("st");
  out.h = out.supply.fresh("h");
  out.e = out.supply.fresh("e");
  out.w = out.supply.fresh("w");
  out.c = out.supply.fresh("c");
  out.x = out.supply.fresh("x");
  out.n = out.supply.fresh("n");
  out.m = out.supply.fresh("m");
  out.k = out.supply.fresh("k");
  out.y = out.supply.fresh("y");
  return out;
}

}  // namespace

Formula NatRules::induction_type(const Predicate& p) const {
  NatNames nm = fresh_names(p);
  Term y = nat_var(nm.y);
  Term x = nat_var(nm.x);
  Formula step = Formula::forall(
      y, Formula::imp(apply_predicate(p, {y}), apply_predicate(p, {Term::app(succ_const, y)})));
  return Formula::imp(apply_predicate(p, {zero_term}),
                      Formula::imp(step, Formula::forall(x, Formula::imp(nat(x),
                                                                         apply_predicate(p, {x})))));
}

ProofTerm NatRules::induction(const Predicate& p) const {
  NatNames nm = fresh_names(p);
  Term x = nat_var(nm.x);
  Term m = nat_var(nm.m);
  Term k = nat_var(nm.k);
  Term y = nat_var(nm.y);
  Formula p_zero = apply_predicate(p, {zero_term});
  Formula step_type = Formula::forall(
      y, Formula::imp(apply_predicate(p, {y}), apply_predicate(p, {Term::app(succ_const, y)})));

  EqElimData zero_case{
      Context{{nm.z, p_zero}},
      {},
      {},
      ProofSubst::single(nm.z, ProofTerm::var(nm.z)),
      m,
      zero_term,
      apply_predicate(p, {m}),
      ProofTerm::var(nm.e),
      {EqBranch{TermSubst::single(m, zero_term), ProofTerm::var(nm.z)}},
  };
  ProofSubst succ_sigma;
  succ_sigma.bind(nm.st, ProofTerm::var(nm.st));
  succ_sigma.bind(nm.c, ProofTerm::proj2(ProofTerm::var(nm.c)));
  EqElimData succ_case{
      Context{{nm.st, step_type}, {nm.c, apply_predicate(p, {k})}},
      {},
      {},
      succ_sigma,
      m,
      Term::app(succ_const, k),
      apply_predicate(p, {m}),
      ProofTerm::proj1(ProofTerm::var(nm.c)),
      {EqBranch{TermSubst::single(m, Term::app(succ_const, k)),
                ProofTerm::app(ProofTerm::app_term(ProofTerm::var(nm.st), k),
                               ProofTerm::var(nm.c))}},
  };
  ProofTerm step_body = ProofTerm::case_of(
      ProofTerm::var(nm.h), nm.e, ProofTerm::eq_elim(zero_case), nm.w,
      ProofTerm::destruct(ProofTerm::var(nm.w), k, nm.c, ProofTerm::eq_elim(succ_case)));
  ProofTerm iter = ProofTerm::mu_elim(p, ProofTerm::var(nm.n), {m}, nm.h, step_body);
  return ProofTerm::lam(
      nm.z, p_zero,
      ProofTerm::lam(nm.st, step_type,
                     ProofTerm::lam_term(x, ProofTerm::lam(nm.n, nat(x), iter))));
}

NatRules derive_nat_rules(const Signature& sig, const RewriteSystem& rs) {
  TermType nat_t = TermType::base("nat");
  if (!sig.has_sort("nat")) fail(ErrorKind::Check, "derive_nat_rules: sort nat is not declared");
  const TermType* zt = sig.constant_type("0");
  const TermType* st = sig.constant_type("s");
  if (zt == nullptr || *zt != nat_t)
    fail(ErrorKind::Check, "derive_nat_rules: constant 0 : nat is not declared");
  if (st == nullptr || *st != TermType::arrow(nat_t, nat_t))
    fail(ErrorKind::Check, "derive_nat_rules: constant s : nat -> nat is not declared");

  Term zero_term = Term::constant("0", nat_t);
  Term succ_const = Term::constant("s", *st);
  PredVar big_n{"N", {nat_t}};
  Term x = nat_var("x");
  Term y = nat_var("y");
  PredOperator nat_op{
      big_n,
      {x},
      Formula::disj(Formula::eq(x, zero_term),
                    Formula::exists(y, Formula::conj(Formula::eq(x, Term::app(succ_const, y)),
                                                     Formula::pred_app(big_n, {y})))),
  };
  auto nat = [&](const Term& t) { return Formula::mu(nat_op, {t}); };
  Term sx = Term::app(succ_const, x);
  NatRules r{
      nat_op,
      ProofTerm::mu_intro(nat_op, {zero_term}, ProofTerm::in1(ProofTerm::refl(zero_term))),
      nat(zero_term),
      ProofTerm::lam_term(
          x, ProofTerm::lam("h", nat(x),
                            ProofTerm::mu_intro(nat_op, {sx},
                                                ProofTerm::in2(ProofTerm::witness(
                                                    x, ProofTerm::pair(ProofTerm::refl(sx),
                                                                       ProofTerm::var("h"))))))),
      Formula::forall(x, Formula::imp(nat(x), nat(sx))),
      zero_term,
      succ_const,
  };

  r.zero = check_proof(sig, rs, {}, r.zero, r.zero_type);
  r.succ = check_proof(sig, rs, {}, r.succ, r.succ_type);

  // The induction template is checked once against an opaque predicate.
  Signature probe_sig = sig;
  std::string probe = "nat_induction_probe";
  while (probe_sig.declares(probe)) probe += "_";
  probe_sig.add_predicate(probe, TermType::arrow(nat_t, TermType::prop()));
  Predicate probe_pred = Predicate::of_atom(probe, {nat_t});
  check_proof(probe_sig, rs, {}, r.induction(probe_pred), r.induction_type(probe_pred));
  return r;
}

}  // namespace munj
