#include "munj/checker.hpp"

#include <sstream>
#include <tuple>

#include "munj/unify.hpp"

namespace munj {

struct Checker::PathGuard {
  PathGuard(Checker& c, std::string step) : c_(c) { c_.path_.push_back(std::move(step)); }
  ~PathGuard() { c_.path_.pop_back(); }
  PathGuard(const PathGuard&) = delete;
  PathGuard& operator=(const PathGuard&) = delete;
  Checker& c_;
};

Checker::Checker(const Signature& sig, const RewriteSystem& rs, TrustLog* log)
    : sig_(sig), rs_(rs), log_(log) {}

std::string Checker::path() const {
  if (path_.empty()) return "<root>";
  std::string out;
  for (const auto& s : path_) {
    if (!out.empty()) out += ".";
    out += s;
  }
  return out;
}

void Checker::error(const std::string& msg) const {
  fail(ErrorKind::Check, "at " + path() + ": " + msg);
}

Formula Checker::norm(const Formula& f) { return rw_normalize_formula(rs_, f); }

void Checker::require_congruent(const Formula& expected, const Formula& found,
                                const std::string& what) {
  Formula ne = norm(expected);
  Formula nf = norm(found);
  if (alpha_eq(ne, nf)) return;
  error(what + ": expected " + to_string(expected, &sig_) + " but found " +
        to_string(found, &sig_) + " (normal forms " + to_string(ne, &sig_) + " vs " +
        to_string(nf, &sig_) + ")");
}

void Checker::check_term(const Term& t) {
  try {
    TermType ty = infer_term_type(sig_, t);
    if (!ty.is_term_type()) error("term " + to_string(t, &sig_) + " has non-term type " + ty.str());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Check) throw;
    error(std::string("ill-typed term ") + to_string(t, &sig_) + ": " + e.what());
  }
}

void Checker::check_well_formed(const Formula& f) {
  try {
    check_formula(sig_, f);
  } catch (const Error& e) {
    error(std::string("ill-formed formula ") + to_string(f, &sig_) + ": " + e.what());
  }
}

void Checker::check_arity(const std::vector<TermType>& arity, const std::vector<Term>& args,
                          const std::string& what) {
  if (arity.size() != args.size())
    error(what + " expects " + std::to_string(arity.size()) + " arguments, got " +
          std::to_string(args.size()));
  for (std::size_t i = 0; i < args.size(); ++i) {
    check_term(args[i]);
    if (type_of(args[i]) != arity[i])
      error(what + " argument " + std::to_string(i + 1) + " has type " + type_of(args[i]).str() +
            ", expected " + arity[i].str());
  }
}

namespace {

VarSet context_vars(const Context& ctx) {
  VarSet out;
  ctx.collect_free_vars(out);
  return out;
}

std::vector<TermType> binder_types(const std::vector<Term>& vs) {
  std::vector<TermType> out;
  for (const Term& v : vs) out.push_back(v.type());
  return out;
}

Formula instantiate_body(const Formula& quantified, const Term& t) {
  return apply_term_subst(quantified.body(), TermSubst::single(quantified.binder(), t));
}

}  // namespace

std::pair<std::vector<Term>, ProofTerm> Checker::fresh_binders(const Context& ctx,
                                                               const VarSet& extra,
                                                               const std::vector<Term>& binders,
                                                               const ProofTerm& body) {
  VarSet avoid = context_vars(ctx);
  avoid.insert(extra.begin(), extra.end());
  std::set<std::string> taken = names_of(avoid);
  for (const auto& [name, type] : free_vars(body)) taken.insert(name);
  for (const Term& b : binders) taken.insert(b.name());
  std::vector<Term> out = binders;
  TermSubst rename;
  for (Term& b : out) {
    if (avoid.count(b.name()) == 0) continue;
    Term renamed = Term::var(fresh_name(b.name(), taken), b.type());
    taken.insert(renamed.name());
    rename.bind(b, renamed);
    b = renamed;
  }
  return {out, apply_term_subst(body, rename)};
}

ProofSubst Checker::check_subst(const Context& target, const ProofSubst& sigma,
                                const Context& source) {
  if (sigma.domain() != source.names()) {
    std::string want, have;
    for (const auto& n : source.names()) want += " " + n;
    for (const auto& n : sigma.domain()) have += " " + n;
    error("substitution domain {" + have + " } does not match context {" + want + " }");
  }
  ProofSubst out;
  for (const auto& [name, f] : source.entries()) {
    PathGuard g(*this, "sigma[" + name + "]");
    out.bind(name, check(target, *sigma.find(name), f));
  }
  return out;
}

ProofTerm Checker::check(const Context& ctx, const ProofTerm& p, const Formula& goal) {
  using K = ProofTerm::Kind;
  using F = Formula::Kind;
  Formula g = norm(goal);
  auto expect = [&](F kind, const char* rule) {
    if (!g.is(kind))
      error(std::string(rule) + " cannot prove " + to_string(goal, &sig_) + " (normal form " +
            to_string(g, &sig_) + ")");
  };
  switch (p.kind()) {
    case K::Var: {
      const Formula* f = ctx.find(p.name());
      if (f == nullptr) error("unbound proof variable " + p.name());
      require_congruent(goal, *f, "hypothesis " + p.name());
      return p;
    }
    case K::Unit:
      expect(F::Top, "unit");
      return p;
    case K::Abort: {
      PathGuard pg(*this, "abort");
      return ProofTerm::abort(check(ctx, p.sub(0), Formula::bot()), goal);
    }
    case K::Lam: {
      expect(F::Imp, "lam");
      Formula dom = g.left();
      if (p.annot()) {
        check_well_formed(*p.annot());
        require_congruent(*p.annot(), g.left(), "lam domain");
        dom = *p.annot();
      }
      PathGuard pg(*this, "lam");
      return ProofTerm::lam(p.name(), dom, check(ctx.extended(p.name(), dom), p.sub(0), g.right()));
    }
    case K::Pair: {
      expect(F::And, "pair");
      ProofTerm a = [&] {
        PathGuard pg(*this, "pair.1");
        return check(ctx, p.sub(0), g.left());
      }();
      PathGuard pg(*this, "pair.2");
      return ProofTerm::pair(a, check(ctx, p.sub(1), g.right()));
    }
    case K::In1:
    case K::In2: {
      expect(F::Or, p.is(K::In1) ? "inl" : "inr");
      if (p.annot()) require_congruent(*p.annot(), goal, "injection annotation");
      PathGuard pg(*this, p.is(K::In1) ? "inl" : "inr");
      ProofTerm q = check(ctx, p.sub(0), p.is(K::In1) ? g.left() : g.right());
      return p.is(K::In1) ? ProofTerm::in1(q, goal) : ProofTerm::in2(q, goal);
    }
    case K::Case: {
      auto [m, mf] = [&] {
        PathGuard pg(*this, "case.major");
        return infer(ctx, p.sub(0));
      }();
      Formula nm = norm(mf);
      if (!nm.is(F::Or)) error("case on a proof of " + to_string(mf, &sig_) + ", not a disjunction");
      ProofTerm l = [&] {
        PathGuard pg(*this, "case.left");
        return check(ctx.extended(p.name(), nm.left()), p.sub(1), goal);
      }();
      PathGuard pg(*this, "case.right");
      ProofTerm r = check(ctx.extended(p.name2(), nm.right()), p.sub(2), goal);
      return ProofTerm::case_of(m, p.name(), l, p.name2(), r);
    }
    case K::LamTerm: {
      expect(F::Forall, "lamx");
      const Term& x = p.term_binders()[0];
      if (x.type() != g.binder().type())
        error("lamx binder " + x.name() + " has type " + x.type().str() + ", quantifier expects " +
              g.binder().type().str());
      auto [bs, body] = fresh_binders(ctx, free_vars(g), {x}, p.sub(0));
      PathGuard pg(*this, "lamx");
      return ProofTerm::lam_term(bs[0], check(ctx, body, instantiate_body(g, bs[0])));
    }
    case K::Witness: {
      expect(F::Exists, "wit");
      const Term& t = p.terms()[0];
      check_term(t);
      if (type_of(t) != g.binder().type())
        error("witness " + to_string(t, &sig_) + " has type " + type_of(t).str() +
              ", quantifier expects " + g.binder().type().str());
      if (p.annot()) require_congruent(*p.annot(), goal, "witness annotation");
      PathGuard pg(*this, "wit");
      return ProofTerm::witness(t, check(ctx, p.sub(0), instantiate_body(g, t)), goal);
    }
    case K::Destruct: {
      auto [m, mf] = [&] {
        PathGuard pg(*this, "dest.major");
        return infer(ctx, p.sub(0));
      }();
      Formula nm = norm(mf);
      if (!nm.is(F::Exists))
        error("dest on a proof of " + to_string(mf, &sig_) + ", not an existential");
      const Term& x = p.term_binders()[0];
      if (x.type() != nm.binder().type())
        error("dest binder " + x.name() + " has type " + x.type().str() + ", quantifier expects " +
              nm.binder().type().str());
      VarSet extra = free_vars(goal);
      collect_free_vars(nm, extra);
      auto [bs, body] = fresh_binders(ctx, extra, {x}, p.sub(1));
      PathGuard pg(*this, "dest.body");
      ProofTerm q = check(ctx.extended(p.name(), instantiate_body(nm, bs[0])), body, goal);
      return ProofTerm::destruct(m, bs[0], p.name(), q);
    }
    case K::Refl: {
      check_term(p.terms()[0]);
      require_congruent(goal, Formula::eq(p.terms()[0], p.terms()[0]), "refl");
      return p;
    }
    case K::EqElim: {
      ProofTerm q = check_eq_elim(ctx, p);
      const EqElimData& d = q.eq();
      require_congruent(goal, apply_term_subst(d.goal, d.theta), "eqcase conclusion");
      return q;
    }
    case K::MuIntro: {
      try {
        check_operator(sig_, p.op());
      } catch (const Error& e) {
        error(std::string("fold operator: ") + e.what());
      }
      check_arity(p.op().pred.arity, p.terms(), "fold");
      require_congruent(goal, Formula::mu(p.op(), p.terms()), "fold");
      PathGuard pg(*this, "fold");
      Formula unfolded = instantiate_operator(p.op(), Predicate::of_mu(p.op()), p.terms());
      return ProofTerm::mu_intro(p.op(), p.terms(), check(ctx, p.sub(0), unfolded));
    }
    case K::MuElim: {
      auto [m, mf] = [&] {
        PathGuard pg(*this, "iter.major");
        return infer(ctx, p.sub(0));
      }();
      ProofTerm q = check_mu_elim(ctx, p, m, mf);
      Formula nm = norm(mf);
      require_congruent(goal, apply_predicate(p.invariant(), nm.args()), "iter conclusion");
      return q;
    }
    case K::NuIntro: {
      expect(F::Nu, "coiter");
      if (p.annot()) require_congruent(*p.annot(), goal, "coiter annotation");
      const PredOperator& op = g.op();
      const Predicate& s = p.invariant();
      try {
        check_predicate(sig_, s);
      } catch (const Error& e) {
        error(std::string("coiter invariant: ") + e.what());
      }
      if (s.arity() != op.pred.arity) error("coiter invariant arity does not match the operator");
      ProofTerm seed = [&] {
        PathGuard pg(*this, "coiter.seed");
        return check(ctx, p.sub(0), apply_predicate(s, g.args()));
      }();
      if (binder_types(p.term_binders()) != op.pred.arity)
        error("coiter binds " + std::to_string(p.term_binders().size()) +
              " variables of the wrong types");
      VarSet extra;
      collect_free_vars(s, extra);
      collect_free_vars(op, extra);
      auto [xs, body] = fresh_binders(ctx, extra, p.term_binders(), p.sub(1));
      PathGuard pg(*this, "coiter.step");
      ProofTerm step = check(ctx.extended(p.name(), apply_predicate(s, xs)), body,
                             instantiate_operator(op, s, xs));
      return ProofTerm::nu_intro(s, seed, xs, p.name(), step, goal);
    }
    case K::NuElim: {
      try {
        check_operator(sig_, p.op());
      } catch (const Error& e) {
        error(std::string("unfold operator: ") + e.what());
      }
      check_arity(p.op().pred.arity, p.terms(), "unfold");
      require_congruent(goal, instantiate_operator(p.op(), Predicate::of_nu(p.op()), p.terms()),
                        "unfold");
      PathGuard pg(*this, "unfold");
      return ProofTerm::nu_elim(p.op(), p.terms(),
                                check(ctx, p.sub(0), Formula::nu(p.op(), p.terms())));
    }
    default: {
      auto [q, f] = infer(ctx, p);
      require_congruent(goal, f, std::string(to_string(p.kind())));
      return q;
    }
  }
}

ProofTerm Checker::check_mu_elim(const Context& ctx, const ProofTerm& p, const ProofTerm& major,
                                 const Formula& major_type) {
  Formula nm = norm(major_type);
  if (!nm.is(Formula::Kind::Mu))
    error("iter on a proof of " + to_string(major_type, &sig_) + ", not a least fixed point");
  const PredOperator& op = nm.op();
  const Predicate& s = p.invariant();
  try {
    check_predicate(sig_, s);
  } catch (const Error& e) {
    error(std::string("iter invariant: ") + e.what());
  }
  if (s.arity() != op.pred.arity) error("iter invariant arity does not match the operator");
  if (binder_types(p.term_binders()) != op.pred.arity)
    error("iter binds " + std::to_string(p.term_binders().size()) +
          " variables of the wrong types");
  VarSet extra;
  collect_free_vars(s, extra);
  collect_free_vars(op, extra);
  auto [xs, body] = fresh_binders(ctx, extra, p.term_binders(), p.sub(1));
  PathGuard pg(*this, "iter.step");
  ProofTerm step =
      check(ctx.extended(p.name(), instantiate_operator(op, s, xs)), body, apply_predicate(s, xs));
  return ProofTerm::mu_elim(s, major, xs, p.name(), step);
}

ProofTerm Checker::check_eq_elim(const Context& ctx, const ProofTerm& p) {
  PathGuard pg(*this, "eqcase");
  const EqElimData& d = p.eq();
  for (const auto& [name, f] : d.ctx.entries()) check_well_formed(f);
  check_well_formed(d.goal);
  check_term(d.u);
  check_term(d.v);
  if (type_of(d.u) != type_of(d.v)) error("eqcase equation relates terms of different types");
  for (const auto& [name, b] : d.theta) check_term(b.value);

  auto data = std::make_shared<EqElimData>(d);
  data->sigma = check_subst(ctx, d.sigma, d.ctx.apply_term_subst(d.theta));
  {
    PathGuard mg(*this, "major");
    data->major = check(ctx, d.major, Formula::eq(apply_term_subst(d.u, d.theta),
                                                  apply_term_subst(d.v, d.theta)));
  }

  Term nu = rw_normalize_term(rs_, d.u);
  Term nv = rw_normalize_term(rs_, d.v);
  for (std::size_t i = 0; i < d.branches.size(); ++i) {
    if (!is_unifier(rs_, d.branches[i].unifier, d.u, d.v))
      error("branch " + std::to_string(i + 1) + " substitution " + d.branches[i].unifier.str() +
            " does not unify " + to_string(d.u, &sig_) + " and " + to_string(d.v, &sig_));
  }
  bool complete = true;
  CsuResult csu;
  try {
    csu = fo_unify(rs_, nu, nv);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DemandAnnotation) throw;
    complete = false;
  }
  if (complete) {
    for (const TermSubst& mgu : csu.unifiers) {
      TermSubst total = mgu.totalized(d.scope);
      bool covered = false;
      for (const EqBranch& b : d.branches)
        if (factor_subst(rs_, total, b.unifier)) covered = true;
      if (!covered)
        error("branches do not cover the unifier " + mgu.str() + " of " + to_string(d.u, &sig_) +
              " = " + to_string(d.v, &sig_));
    }
  } else if (log_) {
    log_->record(TrustLog::Kind::AssumedComplete,
                 "unifiers of " + to_string(d.u, &sig_) + " = " + to_string(d.v, &sig_) +
                     " supplied by the user");
  }

  data->branches.clear();
  for (std::size_t i = 0; i < d.branches.size(); ++i) {
    PathGuard bg(*this, "branch" + std::to_string(i + 1));
    const EqBranch& b = d.branches[i];
    Context ci = d.ctx.apply_term_subst(b.unifier);
    ProofTerm q = check(ci, b.proof, apply_term_subst(d.goal, b.unifier));
    data->branches.push_back({b.unifier, q});
  }
  return ProofTerm::eq_elim_canonical(data);
}

std::pair<ProofTerm, Formula> Checker::infer(const Context& ctx, const ProofTerm& p) {
  using K = ProofTerm::Kind;
  using F = Formula::Kind;
  auto annotated = [&](const char* rule) -> std::pair<ProofTerm, Formula> {
    if (!p.annot()) error(std::string("cannot infer the conclusion of ") + rule + "; annotate it");
    check_well_formed(*p.annot());
    return {check(ctx, p, *p.annot()), *p.annot()};
  };
  switch (p.kind()) {
    case K::Var: {
      const Formula* f = ctx.find(p.name());
      if (f == nullptr) error("unbound proof variable " + p.name());
      return {p, *f};
    }
    case K::Unit: return {p, Formula::top()};
    case K::Refl:
      check_term(p.terms()[0]);
      return {p, Formula::eq(p.terms()[0], p.terms()[0])};
    case K::Abort: return annotated("abort");
    case K::In1: return annotated("inl");
    case K::In2: return annotated("inr");
    case K::Witness: return annotated("wit");
    case K::NuIntro: return annotated("coiter");
    case K::Lam: {
      if (!p.annot()) error("cannot infer the domain of lam " + p.name() + "; annotate it");
      check_well_formed(*p.annot());
      PathGuard pg(*this, "lam");
      auto [q, f] = infer(ctx.extended(p.name(), *p.annot()), p.sub(0));
      return {ProofTerm::lam(p.name(), p.annot(), q), Formula::imp(*p.annot(), f)};
    }
    case K::App: {
      ProofTerm head = p.sub(0);
      ProofTerm hq = head;
      Formula hf = Formula::top();
      if (head.is(K::Lam) && !head.annot()) {
        auto [aq, af] = [&] {
          PathGuard pg(*this, "app.arg");
          return infer(ctx, p.sub(1));
        }();
        PathGuard pg(*this, "app.fn");
        std::tie(hq, hf) = infer(ctx, head.with_annot(af));
      } else {
        PathGuard pg(*this, "app.fn");
        std::tie(hq, hf) = infer(ctx, head);
      }
      Formula nh = norm(hf);
      if (!nh.is(F::Imp)) error("app of a proof of " + to_string(hf, &sig_) + ", not an implication");
      PathGuard pg(*this, "app.arg");
      return {ProofTerm::app(hq, check(ctx, p.sub(1), nh.left())), nh.right()};
    }
    case K::Pair: {
      auto [a, af] = [&] {
        PathGuard pg(*this, "pair.1");
        return infer(ctx, p.sub(0));
      }();
      PathGuard pg(*this, "pair.2");
      auto [b, bf] = infer(ctx, p.sub(1));
      return {ProofTerm::pair(a, b), Formula::conj(af, bf)};
    }
    case K::Proj1:
    case K::Proj2: {
      PathGuard pg(*this, p.is(K::Proj1) ? "fst" : "snd");
      auto [q, f] = infer(ctx, p.sub(0));
      Formula nf = norm(f);
      if (!nf.is(F::And)) error("projection of a proof of " + to_string(f, &sig_) + ", not a conjunction");
      return {p.is(K::Proj1) ? ProofTerm::proj1(q) : ProofTerm::proj2(q),
              p.is(K::Proj1) ? nf.left() : nf.right()};
    }
    case K::Case: {
      auto [m, mf] = [&] {
        PathGuard pg(*this, "case.major");
        return infer(ctx, p.sub(0));
      }();
      Formula nm = norm(mf);
      if (!nm.is(F::Or)) error("case on a proof of " + to_string(mf, &sig_) + ", not a disjunction");
      auto [l, lf] = [&] {
        PathGuard pg(*this, "case.left");
        return infer(ctx.extended(p.name(), nm.left()), p.sub(1));
      }();
      PathGuard pg(*this, "case.right");
      ProofTerm r = check(ctx.extended(p.name2(), nm.right()), p.sub(2), lf);
      return {ProofTerm::case_of(m, p.name(), l, p.name2(), r), lf};
    }
    case K::LamTerm: {
      auto [bs, body] = fresh_binders(ctx, {}, p.term_binders(), p.sub(0));
      PathGuard pg(*this, "lamx");
      auto [q, f] = infer(ctx, body);
      return {ProofTerm::lam_term(bs[0], q), Formula::forall(bs[0], f)};
    }
    case K::AppTerm: {
      auto [q, f] = [&] {
        PathGuard pg(*this, "tapp");
        return infer(ctx, p.sub(0));
      }();
      Formula nf = norm(f);
      if (!nf.is(F::Forall))
        error("tapp of a proof of " + to_string(f, &sig_) + ", not a universal");
      const Term& t = p.terms()[0];
      check_term(t);
      if (type_of(t) != nf.binder().type())
        error("tapp argument " + to_string(t, &sig_) + " has type " + type_of(t).str() +
              ", quantifier expects " + nf.binder().type().str());
      return {ProofTerm::app_term(q, t), instantiate_body(nf, t)};
    }
    case K::Destruct: {
      auto [m, mf] = [&] {
        PathGuard pg(*this, "dest.major");
        return infer(ctx, p.sub(0));
      }();
      Formula nm = norm(mf);
      if (!nm.is(F::Exists))
        error("dest on a proof of " + to_string(mf, &sig_) + ", not an existential");
      const Term& x = p.term_binders()[0];
      if (x.type() != nm.binder().type())
        error("dest binder " + x.name() + " has the wrong type");
      auto [bs, body] = fresh_binders(ctx, free_vars(nm), {x}, p.sub(1));
      PathGuard pg(*this, "dest.body");
      auto [q, f] = infer(ctx.extended(p.name(), instantiate_body(nm, bs[0])), body);
      if (free_vars(f).count(bs[0].name()) != 0)
        error("eigenvariable " + bs[0].name() + " escapes into " + to_string(f, &sig_));
      return {ProofTerm::destruct(m, bs[0], p.name(), q), f};
    }
    case K::EqElim: {
      ProofTerm q = check_eq_elim(ctx, p);
      return {q, apply_term_subst(q.eq().goal, q.eq().theta)};
    }
    case K::MuIntro: {
      Formula f = Formula::mu(p.op(), p.terms());
      return {check(ctx, p, f), f};
    }
    case K::MuElim: {
      auto [m, mf] = [&] {
        PathGuard pg(*this, "iter.major");
        return infer(ctx, p.sub(0));
      }();
      ProofTerm q = check_mu_elim(ctx, p, m, mf);
      return {q, apply_predicate(p.invariant(), norm(mf).args())};
    }
    case K::NuElim: {
      Formula f = instantiate_operator(p.op(), Predicate::of_nu(p.op()), p.terms());
      return {check(ctx, p, f), f};
    }
  }
  error("unhandled proof form");
}

ProofTerm check_proof(const Signature& sig, const RewriteSystem& rs, const Context& ctx,
                      const ProofTerm& p, const Formula& goal, TrustLog* log) {
  Checker c(sig, rs, log);
  return c.check(ctx, p, goal);
}

void check_subst_typing(const Signature& sig, const RewriteSystem& rs, const Context& target,
                        const ProofSubst& sigma, const Context& source) {
  Checker c(sig, rs);
  c.check_subst(target, sigma, source);
}

}  // namespace munj
