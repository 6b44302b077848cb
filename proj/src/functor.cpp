#include "munj/normalizer.hpp"

namespace munj {

namespace {

class FunctorBuilder {
 public:
  FunctorBuilder(const PredVar& p, const Predicate& src, const Predicate& tgt,
                 const FunctorArg& arg, const Formula& body)
      : p_(p), src_(src), tgt_(tgt), arg_(arg) {
    proofs_.reserve(free_proof_vars(arg.body));
    proofs_.reserve(arg.alpha);
    VarSet fv = free_vars(arg.body);
    collect_free_vars(src, fv);
    collect_free_vars(tgt, fv);
    collect_free_vars(body, fv);
    terms_ = names_of(fv);
    for (const Term& x : arg.vars) terms_.insert(x.name());
  }

  ProofTerm build(const Formula& body, bool pos) {
    const Predicate& from = pos ? src_ : tgt_;
    const Predicate& to = pos ? tgt_ : src_;
    using K = Formula::Kind;
    if (!occurs_pred(p_.name, body)) {
      std::string b = proofs_.fresh("b");
      return ProofTerm::lam(b, at(body, from), ProofTerm::var(b));
    }
    switch (body.kind()) {
      case K::PredApp: {
        if (!pos)
          fail(ErrorKind::NonMonotonic,
               "functoriality: " + p_.name + " occurs negatively in " + to_string(body));
        if (body.args().size() != arg_.vars.size())
          fail(ErrorKind::Malformed, "functoriality: template binds " +
                                         std::to_string(arg_.vars.size()) + " variables, " +
                                         p_.name + " is applied to " +
                                         std::to_string(body.args().size()));
        TermSubst inst;
        for (std::size_t i = 0; i < arg_.vars.size(); ++i) inst.bind(arg_.vars[i], body.args()[i]);
        return ProofTerm::lam(arg_.alpha, apply_predicate(src_, body.args()),
                              apply_term_subst(arg_.body, inst));
      }
      case K::And: {
        std::string b = proofs_.fresh("b");
        ProofTerm l = ProofTerm::app(build(body.left(), pos), ProofTerm::proj1(ProofTerm::var(b)));
        ProofTerm r = ProofTerm::app(build(body.right(), pos), ProofTerm::proj2(ProofTerm::var(b)));
        return ProofTerm::lam(b, at(body, from), ProofTerm::pair(l, r));
      }
      case K::Or: {
        std::string b = proofs_.fresh("b");
        std::string g = proofs_.fresh("g");
        Formula goal = at(body, to);
        ProofTerm l = ProofTerm::in1(ProofTerm::app(build(body.left(), pos), ProofTerm::var(g)), goal);
        ProofTerm r =
            ProofTerm::in2(ProofTerm::app(build(body.right(), pos), ProofTerm::var(g)), goal);
        return ProofTerm::lam(b, at(body, from), ProofTerm::case_of(ProofTerm::var(b), g, l, g, r));
      }
      case K::Imp: {
        std::string b = proofs_.fresh("b");
        std::string g = proofs_.fresh("g");
        ProofTerm back = build(body.left(), !pos);
        ProofTerm fwd = build(body.right(), pos);
        ProofTerm inner = ProofTerm::app(
            fwd, ProofTerm::app(ProofTerm::var(b), ProofTerm::app(back, ProofTerm::var(g))));
        return ProofTerm::lam(b, at(body, from),
                              ProofTerm::lam(g, at(body.left(), to), inner));
      }
      case K::Forall:
      case K::Exists: {
        Term y = body.binder();
        Term y2 = Term::var(fresh_name(y.name(), terms_), y.type());
        terms_.insert(y2.name());
        Formula inner_body = apply_term_subst(body.body(), TermSubst::single(y, y2));
        std::string b = proofs_.fresh("b");
        ProofTerm f = build(inner_body, pos);
        if (body.is(K::Forall)) {
          ProofTerm inner =
              ProofTerm::lam_term(y2, ProofTerm::app(f, ProofTerm::app_term(ProofTerm::var(b), y2)));
          return ProofTerm::lam(b, at(body, from), inner);
        }
        std::string g = proofs_.fresh("g");
        ProofTerm wit = ProofTerm::witness(y2, ProofTerm::app(f, ProofTerm::var(g)), at(body, to));
        return ProofTerm::lam(b, at(body, from),
                              ProofTerm::destruct(ProofTerm::var(b), y2, g, wit));
      }
      case K::Mu:
      case K::Nu: {
        const PredOperator& op = body.op();
        std::vector<Term> zs;
        TermSubst rename;
        for (const Term& z : op.params) {
          Term z2 = Term::var(fresh_name(z.name(), terms_), z.type());
          terms_.insert(z2.name());
          rename.bind(z, z2);
          zs.push_back(z2);
        }
        Formula c = apply_term_subst(op.body, rename);
        PredOperator op_from{op.pred, zs, at(c, from)};
        PredOperator op_to{op.pred, zs, at(c, to)};
        std::string b = proofs_.fresh("b");
        std::string g = proofs_.fresh("g");
        if (body.is(K::Mu)) {
          Formula inner = substitute_pred(c, op.pred.name, Predicate::of_mu(op_to));
          ProofTerm step =
              ProofTerm::mu_intro(op_to, zs, ProofTerm::app(build(inner, pos), ProofTerm::var(g)));
          return ProofTerm::lam(
              b, Formula::mu(op_from, body.args()),
              ProofTerm::mu_elim(Predicate::of_mu(op_to), ProofTerm::var(b), zs, g, step));
        }
        Formula inner = substitute_pred(c, op.pred.name, Predicate::of_nu(op_from));
        ProofTerm step = ProofTerm::app(build(inner, pos),
                                        ProofTerm::nu_elim(op_from, zs, ProofTerm::var(g)));
        return ProofTerm::lam(b, Formula::nu(op_from, body.args()),
                              ProofTerm::nu_intro(Predicate::of_nu(op_from), ProofTerm::var(b), zs,
                                                  g, step, Formula::nu(op_to, body.args())));
      }
      default:
        fail(ErrorKind::Malformed, "functoriality: unexpected formula " + to_string(body));
    }
  }

 private:
  Formula at(const Formula& f, const Predicate& s) const { return substitute_pred(f, p_.name, s); }

  const PredVar& p_;
  const Predicate& src_;
  const Predicate& tgt_;
  const FunctorArg& arg_;
  NameSupply proofs_;
  std::set<std::string> terms_;
};

}  // namespace

ProofTerm functoriality(const PredVar& p, const Formula& body, bool positive, const Predicate& src,
                        const Predicate& tgt, const FunctorArg& arg) {
  if (src.arity() != p.arity || tgt.arity() != p.arity)
    fail(ErrorKind::Type, "functoriality: predicate arity does not match " + p.name);
  FunctorBuilder builder(p, src, tgt, arg, body);
  return builder.build(body, positive);
}

Formula functoriality_type(const PredVar& p, const Formula& body, bool positive,
                           const Predicate& src, const Predicate& tgt) {
  Formula a = substitute_pred(body, p.name, src);
  Formula b = substitute_pred(body, p.name, tgt);
  return positive ? Formula::imp(a, b) : Formula::imp(b, a);
}

}  // namespace munj
