#include "support.hpp"

#include <sstream>

namespace munj::testing {

Term NatTheory::num(int n) const {
  Term t = zero;
  for (int i = 0; i < n; ++i) t = s(t);
  return t;
}

ProofTerm NatTheory::nat_proof(const NatRules& rules, int n) const {
  ProofTerm p = rules.zero;
  for (int i = 0; i < n; ++i) p = ProofTerm::app(ProofTerm::app_term(rules.succ, num(i)), p);
  return p;
}

NatTheory make_nat_theory() {
  NatTheory th;
  TermType n = th.nat;
  th.sig.add_sort("nat");
  th.sig.add_constant("0", n);
  th.sig.add_constant("s", TermType::arrow(n, n));
  th.sig.add_constant("plus", TermType::arrows({n, n}, n));
  th.sig.set_infix("+", "plus");
  th.sig.add_predicate("p", TermType::arrow(n, TermType::prop()));
  th.sig.add_predicate("q", TermType::arrow(n, TermType::prop()));
  th.sig.add_predicate("r", TermType::arrow(n, TermType::prop()));
  th.sig.add_predicate("c", TermType::prop());
  Term x = th.var("x");
  Term y = th.var("y");
  th.rs.term_rules.push_back({th.plus(x, th.zero), x});
  th.rs.term_rules.push_back({th.plus(x, th.s(y)), th.s(th.plus(x, y))});
  return th;
}

std::string corpus_path(const std::string& name) { return std::string(MUNJ_CORPUS_DIR) + "/" + name; }

std::vector<std::string> positive_corpus() {
  return {"nat.mnj", "ackermann.mnj", "red.mnj", "muwrap.mnj", "conat.mnj", "noncons.mnj"};
}

Session load_checked(const std::string& name) {
  std::ostringstream err;
  TheoryFile f = parse_theory_file(corpus_path(name));
  Session s = process_theory(f, {}, err);
  if (s.errors || s.resource_errors) fail(ErrorKind::Check, name + ": " + err.str());
  return s;
}

// ---------------------------------------------------------------------------

ProofGen::ProofGen(const NatTheory& th, const NatRules& rules, std::uint32_t seed)
    : th_(th), rules_(rules), rng_(seed) {}

std::vector<Term> ProofGen::base_vars() const { return {th_.var("x"), th_.var("y")}; }

Context ProofGen::base_context() const {
  Term x = th_.var("x");
  Term y = th_.var("y");
  Term z = th_.var("z");
  Context ctx;
  ctx.extend("h1", th_.p(x));
  ctx.extend("h2", Formula::imp(th_.p(x), th_.q(y)));
  ctx.extend("h3", Formula::forall(z, th_.p(z)));
  ctx.extend("h4", Formula::eq(x, y));
  ctx.extend("h5", Formula::disj(th_.q(th_.plus(x, th_.zero)), th_.r(y)));
  ctx.extend("h6", Formula::exists(z, Formula::conj(th_.p(z), th_.q(th_.s(z)))));
  ctx.extend("h7", th_.c());
  return ctx;
}

Term ProofGen::term(const std::vector<Term>& vars, int depth) {
  int choice = pick(depth <= 0 ? 2 : 4);
  switch (choice) {
    case 0: return th_.zero;
    case 1: return vars.empty() ? th_.zero : vars[pick(static_cast<int>(vars.size()))];
    case 2: return th_.s(term(vars, depth - 1));
    default: return th_.plus(term(vars, depth - 1), term(vars, depth - 1));
  }
}

Formula ProofGen::formula(const std::vector<Term>& vars, int depth) {
  int choice = pick(depth <= 0 ? 5 : 9);
  switch (choice) {
    case 0: return th_.p(term(vars, 1));
    case 1: return th_.q(term(vars, 1));
    case 2: return Formula::eq(term(vars, 1), term(vars, 1));
    case 3: return Formula::top();
    case 4: return th_.c();
    case 5: return Formula::conj(formula(vars, depth - 1), formula(vars, depth - 1));
    case 6: return Formula::disj(formula(vars, depth - 1), formula(vars, depth - 1));
    case 7: return Formula::imp(formula(vars, depth - 1), formula(vars, depth - 1));
    default: {
      Term z = Term::var("z" + std::to_string(++counter_), th_.nat);
      std::vector<Term> inner = vars;
      inner.push_back(z);
      Formula body = formula(inner, depth - 1);
      return pick(2) ? Formula::forall(z, body) : Formula::exists(z, body);
    }
  }
}

std::string ProofGen::fresh_term_name(const std::vector<Term>& vars, const Context& ctx) {
  std::set<std::string> taken;
  for (const Term& v : vars) taken.insert(v.name());
  VarSet fv;
  ctx.collect_free_vars(fv);
  for (const auto& kv : fv) taken.insert(kv.first);
  return fresh_name("v" + std::to_string(++counter_), taken);
}

std::string ProofGen::fresh_proof_name(const Context& ctx) {
  return fresh_name("k" + std::to_string(++counter_), ctx.names());
}

GenProof ProofGen::leaf(const Context& ctx, const std::vector<Term>& vars) {
  int choice = pick(4);
  if (choice <= 1 && !ctx.empty()) {
    // Half the time the most recently bound hypothesis.
    const auto& e = pick(2) ? ctx.entries().back() : ctx.entries()[pick(static_cast<int>(ctx.size()))];
    return {ProofTerm::var(e.first), e.second};
  }
  if (choice == 2) {
    Term t = term(vars, 2);
    return {ProofTerm::refl(t), Formula::eq(t, t)};
  }
  return {ProofTerm::unit(), Formula::top()};
}

GenProof ProofGen::proof(const Context& ctx, const std::vector<Term>& vars, int depth) {
  if (depth <= 0) return leaf(ctx, vars);
  switch (pick(9)) {
    case 0: return leaf(ctx, vars);
    case 1: {
      GenProof a = proof(ctx, vars, depth - 1);
      GenProof b = proof(ctx, vars, depth - 1);
      return {ProofTerm::pair(a.proof, b.proof), Formula::conj(a.type, b.type)};
    }
    case 2: {
      GenProof a = proof(ctx, vars, depth - 1);
      Formula other = formula(vars, 1);
      if (pick(2)) {
        Formula t = Formula::disj(a.type, other);
        return {ProofTerm::in1(a.proof, t), t};
      }
      Formula t = Formula::disj(other, a.type);
      return {ProofTerm::in2(a.proof, t), t};
    }
    case 3: {
      Formula dom = formula(vars, 1);
      std::string h = fresh_proof_name(ctx);
      GenProof body = proof(ctx.extended(h, dom), vars, depth - 1);
      return {ProofTerm::lam(h, dom, body.proof), Formula::imp(dom, body.type)};
    }
    case 4: {
      Term z = Term::var(fresh_term_name(vars, ctx), th_.nat);
      std::vector<Term> inner = vars;
      inner.push_back(z);
      GenProof body = proof(ctx, inner, depth - 1);
      return {ProofTerm::lam_term(z, body.proof), Formula::forall(z, body.type)};
    }
    case 5: {
      // ∃-introduction abstracting one variable.
      GenProof a = proof(ctx, vars, depth - 1);
      if (vars.empty()) return a;
      Term v = vars[pick(static_cast<int>(vars.size()))];
      Term z = Term::var(fresh_term_name(vars, ctx), th_.nat);
      Formula body = apply_term_subst(a.type, TermSubst::single(v, z));
      Formula t = Formula::exists(z, body);
      return {ProofTerm::witness(v, a.proof, t), t};
    }
    case 6: {
      // Eliminations on the base hypotheses.
      if (ctx.contains("h2") && ctx.contains("h1") && pick(2))
        return {ProofTerm::app(ProofTerm::var("h2"), ProofTerm::var("h1")), ctx.find("h2")->right()};
      if (ctx.contains("h3")) {
        Term t = term(vars, 2);
        const Formula& all = *ctx.find("h3");
        return {ProofTerm::app_term(ProofTerm::var("h3"), t),
                apply_term_subst(all.body(), TermSubst::single(all.binder(), t))};
      }
      return leaf(ctx, vars);
    }
    default: return redex(ctx, vars, depth);
  }
}

GenProof ProofGen::redex(const Context& ctx, const std::vector<Term>& vars, int depth) {
  int d = std::max(depth - 1, 0);
  switch (pick(10)) {
    case 0: {
      GenProof a = proof(ctx, vars, d);
      std::string h = fresh_proof_name(ctx);
      GenProof body = proof(ctx.extended(h, a.type), vars, d);
      return {ProofTerm::app(ProofTerm::lam(h, a.type, body.proof), a.proof), body.type};
    }
    case 1: {
      GenProof a = proof(ctx, vars, d);
      GenProof b = proof(ctx, vars, d);
      if (pick(2)) return {ProofTerm::proj1(ProofTerm::pair(a.proof, b.proof)), a.type};
      return {ProofTerm::proj2(ProofTerm::pair(a.proof, b.proof)), b.type};
    }
    case 2: {
      // case(inl a, h. b1, k. k) : B
      GenProof a = proof(ctx, vars, d);
      std::string h = fresh_proof_name(ctx);
      GenProof b1 = proof(ctx.extended(h, a.type), vars, d);
      std::string k = fresh_proof_name(ctx);
      if (pick(2)) {
        Formula t = Formula::disj(a.type, b1.type);
        return {ProofTerm::case_of(ProofTerm::in1(a.proof, t), h, b1.proof, k, ProofTerm::var(k)),
                b1.type};
      }
      Formula t = Formula::disj(b1.type, a.type);
      return {ProofTerm::case_of(ProofTerm::in2(a.proof, t), k, ProofTerm::var(k), h, b1.proof),
              b1.type};
    }
    case 3: {
      Term z = Term::var(fresh_term_name(vars, ctx), th_.nat);
      std::vector<Term> inner = vars;
      inner.push_back(z);
      GenProof body = proof(ctx, inner, d);
      Term t = term(vars, 2);
      return {ProofTerm::app_term(ProofTerm::lam_term(z, body.proof), t),
              apply_term_subst(body.type, TermSubst::single(z, t))};
    }
    case 4: {
      // dest(wit(v, a), z. h. body) with z absent from body's type.
      GenProof a = proof(ctx, vars, d);
      if (vars.empty()) return a;
      Term v = vars[pick(static_cast<int>(vars.size()))];
      Term z = Term::var(fresh_term_name(vars, ctx), th_.nat);
      Formula ex = Formula::exists(z, apply_term_subst(a.type, TermSubst::single(v, z)));
      std::string h = fresh_proof_name(ctx);
      Term z2 = Term::var(fresh_term_name(vars, ctx), th_.nat);
      std::vector<Term> inner = vars;
      inner.push_back(z2);
      Formula hyp = apply_term_subst(ex.body(), TermSubst::single(z, z2));
      GenProof body = proof(ctx.extended(h, hyp), inner, d);
      if (free_vars(body.type).count(z2.name())) body = GenProof{ProofTerm::var(h), hyp};
      if (free_vars(body.type).count(z2.name())) {
        body = proof(ctx, vars, d);
      }
      return {ProofTerm::destruct(ProofTerm::witness(v, a.proof, ex), z2, h, body.proof), body.type};
    }
    case 5: {
      // Leibniz: eqcase on refl(v) transporting a proof of A[v].
      GenProof a = proof(ctx, vars, d);
      VarSet fv = free_vars(a.type);
      std::vector<Term> candidates;
      for (const Term& v : vars)
        if (fv.count(v.name())) candidates.push_back(v);
      if (candidates.empty()) return a;
      Term v = candidates[pick(static_cast<int>(candidates.size()))];
      std::set<std::string> taken = names_of(fv);
      Term ua = Term::var(fresh_name("a", taken), th_.nat);
      taken.insert(ua.name());
      Term ub = Term::var(fresh_name("b", taken), th_.nat);
      Formula at_b = apply_term_subst(a.type, TermSubst::single(v, ub));
      Formula at_a = apply_term_subst(a.type, TermSubst::single(v, ua));
      EqElimData data{Context{{"g", at_b}}, VarSet{}, TermSubst{}, ProofSubst::single("g", a.proof),
                      ua, ub, at_a, ProofTerm::refl(v), {}};
      data.theta.bind(ua, v);
      data.theta.bind(ub, v);
      for (const auto& [name, type] : fv)
        if (name != v.name()) data.theta.bind(Term::var(name, type), Term::var(name, type));
      data.branches.push_back({TermSubst::single(ua, ub), ProofTerm::var("g")});
      return {ProofTerm::eq_elim(data), a.type};
    }
    case 6: {
      // The induction template at a constant predicate, run on a numeral.
      GenProof a = proof(ctx, vars, d);
      std::set<std::string> taken = names_of(free_vars(a.type));
      Term m = Term::var(fresh_name("m", taken), th_.nat);
      Predicate pred{{m}, a.type};
      Term y = Term::var(fresh_name("y", taken), th_.nat);
      std::string i = fresh_proof_name(ctx);
      ProofTerm step = ProofTerm::lam_term(y, ProofTerm::lam(i, a.type, ProofTerm::var(i)));
      int n = pick(3);
      ProofTerm ind = ProofTerm::app(
          ProofTerm::app_term(ProofTerm::app(ProofTerm::app(rules_.induction(pred), a.proof), step),
                              th_.num(n)),
          th_.nat_proof(rules_, n));
      return {ind, a.type};
    }
    case 7: {
      // iter over a numeral, the step ignoring its hypothesis.
      GenProof a = proof(ctx, vars, d);
      Term m = Term::var(fresh_term_name(vars, ctx), th_.nat);
      std::string h = fresh_proof_name(ctx);
      ProofTerm major = th_.nat_proof(rules_, pick(3));
      return {ProofTerm::mu_elim(Predicate{{m}, a.type}, major, {m}, h, a.proof), a.type};
    }
    case 8: {
      // unfold of a coiteration: ν(I, x. I (s x)) with invariant λy. A.
      GenProof a = proof(ctx, vars, d);
      std::set<std::string> taken = names_of(free_vars(a.type));
      Term xp = Term::var(fresh_name("w", taken), th_.nat);
      PredVar iv{"I", {th_.nat}};
      PredOperator inf{iv, {xp}, Formula::pred_app(iv, {th_.s(xp)})};
      Term yv = Term::var(fresh_name("y", taken), th_.nat);
      std::string h = fresh_proof_name(ctx);
      Term t = term(vars, 1);
      ProofTerm co = ProofTerm::nu_intro(Predicate{{yv}, a.type}, a.proof, {yv}, h,
                                         ProofTerm::var(h), Formula::nu(inf, {t}));
      return {ProofTerm::nu_elim(inf, {t}, co), Formula::nu(inf, {th_.s(t)})};
    }
    default: {
      // case-inr whose right branch returns its hypothesis.
      GenProof a = proof(ctx, vars, d);
      Formula t = Formula::disj(formula(vars, 1), a.type);
      std::string h = fresh_proof_name(ctx);
      std::string k = fresh_proof_name(ctx);
      return {ProofTerm::case_of(ProofTerm::in2(a.proof, t), h, a.proof, k, ProofTerm::var(k)),
              a.type};
    }
  }
}

TermSubst ProofGen::subst(const std::vector<Term>& vars) {
  TermSubst s;
  for (const Term& v : vars)
    if (pick(3) != 0) s.bind(v, term(vars, 2));
  return s;
}

}  // namespace munj::testing
