#include "munj/rewrite.hpp"

#include <algorithm>

namespace munj {

std::string to_string(const TermRule& r, const Signature* sig) {
  return to_string(r.lhs, sig) + " ~> " + to_string(r.rhs, sig);
}

std::string to_string(const AtomRule& r, const Signature* sig) {
  return to_string(Formula::atom(r.pred, r.args), sig) + " ~> " + to_string(r.rhs, sig);
}

bool RewriteSystem::is_constructor(const std::string& constant) const {
  for (const TermRule& r : term_rules) {
    Term head = r.lhs.spine().first;
    if (head.is_const() && head.name() == constant) return false;
  }
  return true;
}

bool RewriteSystem::has_atom_rules(const std::string& pred) const {
  return std::any_of(atom_rules.begin(), atom_rules.end(),
                     [&](const AtomRule& r) { return r.pred == pred; });
}

namespace {

bool contains_lambda(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Lam: return true;
    case Term::Kind::App: return contains_lambda(t.fn()) || contains_lambda(t.arg());
    default: return false;
  }
}

bool has_applied_var(const Term& t) {
  if (!t.is_app()) return false;
  auto [head, args] = t.spine();
  if (head.is_var()) return true;
  return std::any_of(args.begin(), args.end(), has_applied_var);
}

std::string missing_vars(const VarSet& rhs, const VarSet& lhs) {
  std::string out;
  for (const auto& [name, type] : rhs) {
    if (lhs.count(name) != 0) continue;
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

}  // namespace

std::vector<std::string> validate_system(const Signature& sig, const RewriteSystem& rs) {
  std::vector<std::string> errors;
  for (const TermRule& r : rs.term_rules) {
    std::string label = "rule " + to_string(r, &sig) + ": ";
    if (r.lhs.is_var()) {
      errors.push_back(label + "variable left side");
      continue;
    }
    if (contains_lambda(r.lhs)) {
      errors.push_back(label + "left side contains a lambda-abstraction");
      continue;
    }
    if (has_applied_var(r.lhs)) {
      errors.push_back(label + "left side applies a variable");
      continue;
    }
    try {
      TermType l = infer_term_type(sig, r.lhs);
      TermType rt = infer_term_type(sig, r.rhs);
      if (l != rt) {
        errors.push_back(label + "sides have different types " + l.str() + " and " + rt.str());
        continue;
      }
      if (!l.is_term_type()) {
        errors.push_back(label + "rewrites at non-term type " + l.str());
        continue;
      }
    } catch (const Error& e) {
      errors.push_back(label + e.what());
      continue;
    }
    std::string missing = missing_vars(free_vars(r.rhs), free_vars(r.lhs));
    if (!missing.empty())
      errors.push_back(label + "variable condition violated: " + missing +
                       " free on the right side only");
  }
  for (const AtomRule& r : rs.atom_rules) {
    std::string label = "rule " + to_string(r, &sig) + ": ";
    const auto* arity = sig.predicate_arity(r.pred);
    if (arity == nullptr) {
      errors.push_back(label + "left side is not headed by a predicate constant");
      continue;
    }
    bool bad = false;
    for (const Term& a : r.args) {
      if (contains_lambda(a) || has_applied_var(a)) {
        errors.push_back(label + "left side argument is not first-order");
        bad = true;
        break;
      }
    }
    if (bad) continue;
    try {
      check_formula(sig, Formula::atom(r.pred, r.args));
      check_formula(sig, r.rhs);
    } catch (const Error& e) {
      errors.push_back(label + e.what());
      continue;
    }
    VarSet lhs_vars;
    for (const Term& a : r.args) collect_free_vars(a, lhs_vars);
    std::string missing = missing_vars(free_vars(r.rhs), lhs_vars);
    if (!missing.empty())
      errors.push_back(label + "variable condition violated: " + missing +
                       " free on the right side only");
  }
  return errors;
}

void check_system(const Signature& sig, const RewriteSystem& rs) {
  auto errors = validate_system(sig, rs);
  if (errors.empty()) return;
  std::string msg;
  for (const auto& e : errors) msg += (msg.empty() ? "" : "\n") + e;
  fail(ErrorKind::Rule, msg);
}

void record_system_assumptions(const RewriteSystem& rs, TrustLog& log) {
  std::string counts = "term-rules=" + std::to_string(rs.term_rules.size()) +
                       " atom-rules=" + std::to_string(rs.atom_rules.size());
  log.record(TrustLog::Kind::AssumedConfluent,
             counts + (rs.confluent ? " asserted=yes" : " asserted=no"));
  log.record(TrustLog::Kind::AssumedTerminating,
             counts + (rs.terminating ? " asserted=yes" : " asserted=no"));
}

// ---------------------------------------------------------------------------
// Matching

bool match_into(const Term& pattern, const Term& subject, TermSubst& acc) {
  switch (pattern.kind()) {
    case Term::Kind::Var: {
      if (pattern.type() != type_of(subject)) return false;
      if (const Term* bound = acc.find(pattern.name())) return alpha_eq(*bound, subject);
      acc.bind(pattern, subject);
      return true;
    }
    case Term::Kind::Const:
      return subject.is_const() && subject.name() == pattern.name();
    case Term::Kind::App:
      return subject.is_app() && match_into(pattern.fn(), subject.fn(), acc) &&
             match_into(pattern.arg(), subject.arg(), acc);
    case Term::Kind::Lam: return alpha_eq(pattern, subject);
  }
  return false;
}

std::optional<TermSubst> match_syntactic(const Term& pattern, const Term& subject) {
  TermSubst acc;
  if (!match_into(pattern, subject, acc)) return std::nullopt;
  return acc;
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

class TermNormalizer {
 public:
  TermNormalizer(const RewriteSystem& rs, Fuel& fuel) : rs_(rs), fuel_(fuel) {}

  Term norm(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::Var:
      case Term::Kind::Const: return at_root(t);
      case Term::Kind::Lam: {
        Term body = norm(t.body());
        return body.same_node(t.body()) ? t : Term::lam(t.binder(), body);
      }
      case Term::Kind::App: {
        Term f = norm(t.fn());
        Term a = norm(t.arg());
        if (f.is_lam()) {
          fuel_.tick("rewriting");
          return norm(substitute(f.body(), TermSubst::single(f.binder(), a)));
        }
        Term u = (f.same_node(t.fn()) && a.same_node(t.arg())) ? t : Term::app(f, a);
        return at_root(u);
      }
    }
    return t;
  }

 private:
  // Children of t are normal.
  Term at_root(const Term& t) {
    for (const TermRule& r : rs_.term_rules) {
      auto theta = match_syntactic(r.lhs, t);
      if (!theta) continue;
      fuel_.tick("rewriting");
      return norm(substitute(r.rhs, *theta));
    }
    return t;
  }

  const RewriteSystem& rs_;
  Fuel& fuel_;
};

class FormulaNormalizer {
 public:
  FormulaNormalizer(const RewriteSystem& rs, Fuel& fuel) : rs_(rs), fuel_(fuel), terms_(rs, fuel) {}

  Formula norm(const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::Top:
      case Formula::Kind::Bot: return f;
      case Formula::Kind::Imp: return Formula::imp(norm(f.left()), norm(f.right()));
      case Formula::Kind::And: return Formula::conj(norm(f.left()), norm(f.right()));
      case Formula::Kind::Or: return Formula::disj(norm(f.left()), norm(f.right()));
      case Formula::Kind::Forall: return Formula::forall(f.binder(), norm(f.body()));
      case Formula::Kind::Exists: return Formula::exists(f.binder(), norm(f.body()));
      case Formula::Kind::Eq: return Formula::eq(terms_.norm(f.lhs()), terms_.norm(f.rhs()));
      case Formula::Kind::PredApp: return Formula::pred_app(f.pred_var(), norm_terms(f.args()));
      case Formula::Kind::Mu:
      case Formula::Kind::Nu: {
        PredOperator op{f.op().pred, f.op().params, norm(f.op().body)};
        return f.is(Formula::Kind::Mu) ? Formula::mu(op, norm_terms(f.args()))
                                       : Formula::nu(op, norm_terms(f.args()));
      }
      case Formula::Kind::Atom: return atom(f.name(), norm_terms(f.args()));
    }
    return f;
  }

 private:
  std::vector<Term> norm_terms(const std::vector<Term>& ts) {
    std::vector<Term> out;
    out.reserve(ts.size());
    for (const Term& t : ts) out.push_back(terms_.norm(t));
    return out;
  }

  Formula atom(const std::string& name, const std::vector<Term>& args) {
    for (const AtomRule& r : rs_.atom_rules) {
      if (r.pred != name || r.args.size() != args.size()) continue;
      TermSubst theta;
      bool ok = true;
      for (std::size_t i = 0; ok && i < args.size(); ++i) ok = match_into(r.args[i], args[i], theta);
      if (!ok) continue;
      fuel_.tick("rewriting");
      return norm(apply_term_subst(r.rhs, theta));
    }
    return Formula::atom(name, args);
  }

  const RewriteSystem& rs_;
  Fuel& fuel_;
  TermNormalizer terms_;
};

bool term_rule_applies(const RewriteSystem& rs, const Term& t) {
  for (const TermRule& r : rs.term_rules)
    if (match_syntactic(r.lhs, t)) return true;
  switch (t.kind()) {
    case Term::Kind::App: return term_rule_applies(rs, t.fn()) || term_rule_applies(rs, t.arg());
    case Term::Kind::Lam: return term_rule_applies(rs, t.body());
    default: return false;
  }
}

bool formula_rule_applies(const RewriteSystem& rs, const Formula& f) {
  auto any_term = [&](const std::vector<Term>& ts) {
    return std::any_of(ts.begin(), ts.end(),
                       [&](const Term& t) { return !is_beta_normal(t) || term_rule_applies(rs, t); });
  };
  switch (f.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot: return false;
    case Formula::Kind::Imp:
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return formula_rule_applies(rs, f.left()) || formula_rule_applies(rs, f.right());
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: return formula_rule_applies(rs, f.body());
    case Formula::Kind::Eq:
    case Formula::Kind::PredApp: return any_term(f.args());
    case Formula::Kind::Mu:
    case Formula::Kind::Nu: return any_term(f.args()) || formula_rule_applies(rs, f.op().body);
    case Formula::Kind::Atom: {
      if (any_term(f.args())) return true;
      for (const AtomRule& r : rs.atom_rules) {
        if (r.pred != f.name() || r.args.size() != f.args().size()) continue;
        TermSubst theta;
        bool ok = true;
        for (std::size_t i = 0; ok && i < r.args.size(); ++i)
          ok = match_into(r.args[i], f.args()[i], theta);
        if (ok) return true;
      }
      return false;
    }
  }
  return false;
}

}  // namespace

Term rw_normalize_term(const RewriteSystem& rs, const Term& t, Fuel& fuel) {
  if (rs.term_rules.empty()) return is_beta_normal(t) ? t : beta_normalize(t, fuel);
  return TermNormalizer(rs, fuel).norm(t);
}

Term rw_normalize_term(const RewriteSystem& rs, const Term& t) {
  Fuel fuel(rs.fuel);
  return rw_normalize_term(rs, t, fuel);
}

Formula rw_normalize_formula(const RewriteSystem& rs, const Formula& f, Fuel& fuel) {
  if (rs.term_rules.empty() && rs.atom_rules.empty()) return f;
  return FormulaNormalizer(rs, fuel).norm(f);
}

Formula rw_normalize_formula(const RewriteSystem& rs, const Formula& f) {
  Fuel fuel(rs.fuel);
  return rw_normalize_formula(rs, f, fuel);
}

bool is_rw_normal(const RewriteSystem& rs, const Term& t) {
  return is_beta_normal(t) && !term_rule_applies(rs, t);
}

bool is_rw_normal(const RewriteSystem& rs, const Formula& f) { return !formula_rule_applies(rs, f); }

bool congruent(const RewriteSystem& rs, const Term& a, const Term& b) {
  if (alpha_eq(a, b)) return true;
  return alpha_eq(rw_normalize_term(rs, a), rw_normalize_term(rs, b));
}

bool congruent(const RewriteSystem& rs, const Formula& a, const Formula& b) {
  if (alpha_eq(a, b)) return true;
  return alpha_eq(rw_normalize_formula(rs, a), rw_normalize_formula(rs, b));
}

}  // namespace munj
