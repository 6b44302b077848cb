#include "munj/normalizer.hpp"

#include "munj/checker.hpp"
#include "munj/unify.hpp"

namespace munj {

namespace {

using K = ProofTerm::Kind;

bool is_root_redex(const ProofTerm& p) {
  switch (p.kind()) {
    case K::App: return p.sub(0).is(K::Lam);
    case K::Proj1:
    case K::Proj2: return p.sub(0).is(K::Pair);
    case K::Case: return p.sub(0).is(K::In1) || p.sub(0).is(K::In2);
    case K::AppTerm: return p.sub(0).is(K::LamTerm);
    case K::Destruct: return p.sub(0).is(K::Witness);
    case K::MuElim: return p.sub(0).is(K::MuIntro);
    case K::NuElim: return p.sub(0).is(K::NuIntro);
    case K::EqElim: return p.eq().major.is(K::Refl);
    default: return false;
  }
}

TermSubst bind_all(const std::vector<Term>& vars, const std::vector<Term>& values) {
  TermSubst s;
  for (std::size_t i = 0; i < vars.size(); ++i) s.bind(vars[i], values[i]);
  return s;
}

std::set<std::string> used_term_names(const ProofTerm& p) { return names_of(free_vars(p)); }

// Fresh copies of x̄ for the functoriality template.
std::vector<Term> fresh_vars(const std::vector<Term>& xs, std::set<std::string> taken) {
  std::vector<Term> out;
  for (const Term& x : xs) taken.insert(x.name());
  for (const Term& x : xs) {
    Term y = Term::var(fresh_name(x.name(), taken), x.type());
    taken.insert(y.name());
    out.push_back(y);
  }
  return out;
}

// B p t̄ as a formula in p.
Formula operator_at(const PredOperator& op, const std::vector<Term>& args) {
  return apply_term_subst(op.body, bind_all(op.params, args));
}

ProofTerm contract_mu(const ProofTerm& p) {
  const ProofTerm& intro = p.sub(0);
  const PredOperator& op = intro.op();
  const std::vector<Term>& ts = intro.terms();
  const Predicate& s = p.invariant();
  const std::vector<Term>& xs = p.term_binders();
  const ProofTerm& step = p.sub(1);

  NameSupply names(free_proof_vars(p));
  std::string beta = names.fresh("b");
  std::set<std::string> taken = used_term_names(p);
  std::vector<Term> ys = fresh_vars(xs, taken);
  ProofTerm recur = ProofTerm::mu_elim(s, ProofTerm::var(beta), xs, p.name(), step);
  ProofTerm f = functoriality(op.pred, operator_at(op, ts), true, Predicate::of_mu(op), s,
                              FunctorArg{ys, beta, recur});
  ProofTerm mapped = ProofTerm::app(f, intro.sub(0));
  ProofTerm body = apply_term_subst(step, bind_all(xs, ts));
  return apply_proof_subst(body, ProofSubst::single(p.name(), mapped));
}

ProofTerm contract_nu(const ProofTerm& p) {
  const ProofTerm& intro = p.sub(0);
  const PredOperator& op = p.op();
  const std::vector<Term>& ts = p.terms();
  const Predicate& s = intro.invariant();
  const std::vector<Term>& xs = intro.term_binders();
  const ProofTerm& step = intro.sub(1);

  NameSupply names(free_proof_vars(p));
  std::string beta = names.fresh("b");
  std::vector<Term> ys = fresh_vars(xs, used_term_names(p));
  ProofTerm recur = ProofTerm::nu_intro(s, ProofTerm::var(beta), xs, intro.name(), step,
                                        Formula::nu(op, ys));
  ProofTerm f = functoriality(op.pred, operator_at(op, ts), true, s, Predicate::of_nu(op),
                              FunctorArg{ys, beta, recur});
  ProofTerm seed = apply_proof_subst(apply_term_subst(step, bind_all(xs, ts)),
                                     ProofSubst::single(intro.name(), intro.sub(0)));
  return ProofTerm::app(f, seed);
}

std::vector<ProofTerm> contract_eq(const RewriteSystem& rs, const ProofTerm& p, bool all) {
  const EqElimData& d = p.eq();
  std::vector<ProofTerm> out;
  for (const EqBranch& b : d.branches) {
    auto rest = factor_subst(rs, d.theta, b.unifier);
    if (!rest) continue;
    out.push_back(apply_proof_subst(apply_term_subst(b.proof, *rest), d.sigma));
    if (!all) break;
  }
  return out;
}

std::vector<ProofTerm> contract_all(const RewriteSystem& rs, const ProofTerm& p, bool all,
                                    std::string& rule) {
  const ProofTerm& m = p.subs().empty() ? p : p.sub(0);
  switch (p.kind()) {
    case K::App:
      rule = "beta";
      return {apply_proof_subst(m.sub(0), ProofSubst::single(m.name(), p.sub(1)))};
    case K::Proj1: rule = "proj1"; return {m.sub(0)};
    case K::Proj2: rule = "proj2"; return {m.sub(1)};
    case K::Case: {
      rule = m.is(K::In1) ? "case-inl" : "case-inr";
      bool left = m.is(K::In1);
      return {apply_proof_subst(p.sub(left ? 1 : 2),
                                ProofSubst::single(left ? p.name() : p.name2(), m.sub(0)))};
    }
    case K::AppTerm:
      rule = "beta-term";
      return {apply_term_subst(m.sub(0), TermSubst::single(m.term_binders()[0], p.terms()[0]))};
    case K::Destruct: {
      rule = "exists";
      ProofTerm body =
          apply_term_subst(p.sub(1), TermSubst::single(p.term_binders()[0], m.terms()[0]));
      return {apply_proof_subst(body, ProofSubst::single(p.name(), m.sub(0)))};
    }
    case K::MuElim: rule = "mu"; return {contract_mu(p)};
    case K::NuElim: rule = "nu"; return {contract_nu(p)};
    case K::EqElim: {
      rule = "eq";
      auto out = contract_eq(rs, p, all);
      if (out.empty() && !all)
        fail(ErrorKind::StuckEqualityRedex,
             "equality redex on " + to_string(p.eq().u) + " = " + to_string(p.eq().v) +
                 " with substitution " + p.eq().theta.str() +
                 ": no branch factors it (the supplied unifiers are incomplete)");
      return out;
    }
    default: return {};
  }
}

std::string child_path(std::size_t i, const std::string& rest) {
  return rest == "root" ? std::to_string(i) : std::to_string(i) + "." + rest;
}

void scan(const ProofTerm& p, const std::string& path, std::vector<std::string>& out) {
  if (is_root_redex(p)) out.push_back(path);
  for (std::size_t i = 0; i < p.subs().size(); ++i)
    scan(p.sub(i), path == "root" ? std::to_string(i) : path + "." + std::to_string(i), out);
}

}  // namespace

std::optional<ReductionStep> contract_root(const RewriteSystem& rs, const ProofTerm& p) {
  if (!is_root_redex(p)) return std::nullopt;
  std::string rule;
  auto out = contract_all(rs, p, false, rule);
  return ReductionStep{out.front(), rule, "root"};
}

std::optional<ReductionStep> reduce_step(const RewriteSystem& rs, const ProofTerm& p) {
  if (auto r = contract_root(rs, p)) return r;
  for (std::size_t i = 0; i < p.subs().size(); ++i) {
    auto r = reduce_step(rs, p.sub(i));
    if (!r) continue;
    std::vector<ProofTerm> subs = p.subs();
    subs[i] = r->result;
    return ReductionStep{rebuild(p, std::move(subs)), r->rule, child_path(i, r->path)};
  }
  return std::nullopt;
}

std::vector<std::string> find_redexes(const ProofTerm& p) {
  std::vector<std::string> out;
  scan(p, "root", out);
  return out;
}

std::vector<ProofTerm> all_one_step_reducts(const RewriteSystem& rs, const ProofTerm& p) {
  std::vector<ProofTerm> out;
  if (is_root_redex(p)) {
    std::string rule;
    out = contract_all(rs, p, true, rule);
  }
  for (std::size_t i = 0; i < p.subs().size(); ++i) {
    for (const ProofTerm& r : all_one_step_reducts(rs, p.sub(i))) {
      std::vector<ProofTerm> subs = p.subs();
      subs[i] = r;
      out.push_back(rebuild(p, std::move(subs)));
    }
  }
  return out;
}

NormalizeResult normalize(const RewriteSystem& rs, const ProofTerm& p,
                          const NormalizeOptions& opts) {
  if (opts.debug_subject_reduction && (opts.sig == nullptr || !opts.goal))
    fail(ErrorKind::Malformed, "subject-reduction checking needs a signature and a goal");
  Fuel fuel(opts.fuel);
  NormalizeResult res{p, 0};
  while (auto step = reduce_step(rs, res.proof)) {
    fuel.tick("proof normalization");
    ++res.steps;
    res.proof = step->result;
    if (opts.trace) opts.trace(res.steps, *step, res.proof.size());
    if (opts.debug_subject_reduction) {
      try {
        check_proof(*opts.sig, rs, opts.ctx, res.proof, *opts.goal);
      } catch (const Error& e) {
        fail(ErrorKind::Check, "subject reduction failed after step " +
                                   std::to_string(res.steps) + " (" + step->rule + " at " +
                                   step->path + "): " + e.what());
      }
    }
  }
  return res;
}

}  // namespace munj
