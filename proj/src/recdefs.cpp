#include "munj/recdefs.hpp"

#include <algorithm>

#include "munj/unify.hpp"

namespace munj {

std::string to_string(const OrderSpec& order) {
  std::string out = "lex(";
  for (std::size_t i = 0; i < order.measures.size(); ++i) {
    if (i) out += ", ";
    out += order.measures[i].cmp == Comparison::StrictSubterm ? "subterm " : "subterm-or-equal ";
    out += std::to_string(order.measures[i].position);
  }
  out += ")";
  if (!order.precedence.empty()) {
    out += " precedence";
    for (const auto& p : order.precedence) out += " " + p;
  }
  return out;
}

std::string to_string(const MayOccurAtom& a, const Signature* sig) {
  std::string out = a.pred;
  for (const Term& t : a.args) {
    std::string s = to_string(t, sig);
    out += t.is_app() ? " (" + s + ")" : " " + s;
  }
  if (!a.arbitrary.empty()) {
    out += " for all";
    for (const auto& [name, type] : a.arbitrary) out += " " + name;
  }
  return out;
}

namespace {

void collect(const Formula& f, const std::set<std::string>& defined, VarSet bound,
             std::vector<MayOccurAtom>& out) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom: {
      if (defined.count(f.name()) == 0) return;
      VarSet used;
      for (const Term& t : f.args()) collect_free_vars(t, used);
      VarSet arbitrary;
      for (const auto& [name, type] : used)
        if (bound.count(name)) arbitrary.emplace(name, type);
      out.push_back({f.name(), f.args(), arbitrary});
      return;
    }
    case K::Imp:
    case K::And:
    case K::Or:
      collect(f.left(), defined, bound, out);
      collect(f.right(), defined, bound, out);
      return;
    case K::Forall:
    case K::Exists: {
      Term x = f.binder();
      bound.insert_or_assign(x.name(), x.type());
      collect(f.body(), defined, bound, out);
      return;
    }
    case K::Mu:
    case K::Nu:
      for (const Term& x : f.op().params) bound.insert_or_assign(x.name(), x.type());
      collect(f.op().body, defined, bound, out);
      return;
    default: return;
  }
}

bool strict_subterm(const Term& o, const Term& h) {
  switch (h.kind()) {
    case Term::Kind::App:
      return alpha_eq(o, h.fn()) || alpha_eq(o, h.arg()) || strict_subterm(o, h.fn()) ||
             strict_subterm(o, h.arg());
    case Term::Kind::Lam: return alpha_eq(o, h.body()) || strict_subterm(o, h.body());
    default: return false;
  }
}

std::string atom_str(const std::string& pred, const std::vector<Term>& args,
                     const Signature& sig) {
  return to_string(MayOccurAtom{pred, args, {}}, &sig);
}

AtomRule rename_apart(const AtomRule& r, const std::set<std::string>& avoid) {
  VarSet fv;
  for (const Term& t : r.args) collect_free_vars(t, fv);
  collect_free_vars(r.rhs, fv);
  std::set<std::string> taken = avoid;
  for (const auto& [name, type] : fv) taken.insert(name);
  TermSubst s;
  for (const auto& [name, type] : fv) {
    std::string fresh = fresh_name(name, taken);
    taken.insert(fresh);
    s.bind(Term::var(name, type), Term::var(fresh, type));
  }
  AtomRule out{r.pred, {}, apply_term_subst(r.rhs, s)};
  for (const Term& t : r.args) out.args.push_back(apply_term_subst(t, s));
  return out;
}

std::set<std::string> rule_vars(const AtomRule& r) {
  VarSet fv;
  for (const Term& t : r.args) collect_free_vars(t, fv);
  collect_free_vars(r.rhs, fv);
  return names_of(fv);
}

}  // namespace

std::vector<MayOccurAtom> collect_may_occur(const Formula& body,
                                            const std::set<std::string>& defined) {
  std::vector<MayOccurAtom> out;
  collect(body, defined, {}, out);
  return out;
}

void AdmissionReport::merge(const AdmissionReport& other) {
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

std::string AdmissionReport::str() const {
  std::string out;
  for (const auto& v : violations) out += "violation: " + v + "\n";
  for (const auto& w : warnings) out += "warning: " + w + "\n";
  return out;
}

AdmissionReport check_condition_1(const Signature& sig, const RewriteSystem& base,
                                  const std::vector<AtomRule>& rules) {
  AdmissionReport rep;
  for (const AtomRule& r : rules) {
    for (std::size_t k = 0; k < r.args.size(); ++k) {
      if (in_constructor_fragment(base, r.args[k])) continue;
      rep.warnings.push_back("non-constructor left side in " + to_string(r, &sig) +
                             ": argument " + std::to_string(k + 1) + " (" +
                             to_string(r.args[k], &sig) +
                             ") is not a constructor pattern; coherence modulo the term rules is "
                             "assumed");
    }
  }
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (std::size_t j = i; j < rules.size(); ++j) {
      if (rules[i].pred != rules[j].pred) continue;
      AtomRule other = rename_apart(rules[j], rule_vars(rules[i]));
      auto theta = syntactic_unify(rules[i].args, other.args);
      if (!theta) continue;
      Formula bi = apply_term_subst(rules[i].rhs, *theta);
      Formula bj = apply_term_subst(other.rhs, *theta);
      if (congruent(base, bi, bj)) continue;
      rep.violations.push_back("incoherent rules " + to_string(rules[i], &sig) + " and " +
                               to_string(rules[j], &sig) + ": under " + theta->str() +
                               " the right sides " + to_string(bi, &sig) + " and " +
                               to_string(bj, &sig) + " differ");
    }
  }
  return rep;
}

AdmissionReport check_condition_2(const Signature& sig, const RewriteSystem& base,
                                  const std::vector<AtomRule>& rules, const OrderSpec& order) {
  AdmissionReport rep;
  std::set<std::string> defined;
  for (const AtomRule& r : rules) defined.insert(r.pred);
  auto rank = [&](const std::string& p) -> long {
    auto it = std::find(order.precedence.begin(), order.precedence.end(), p);
    return it == order.precedence.end() ? -1 : static_cast<long>(it - order.precedence.begin());
  };

  for (const AtomRule& r : rules) {
    std::vector<Term> head;
    for (const Term& t : r.args) head.push_back(rw_normalize_term(base, t));
    for (const MayOccurAtom& occ : collect_may_occur(r.rhs, defined)) {
      std::vector<Term> args;
      for (const Term& t : occ.args) args.push_back(rw_normalize_term(base, t));
      std::string where = "rule " + to_string(r, &sig) + ": occurrence " + to_string(occ, &sig) +
                          " is not below " + atom_str(r.pred, r.args, sig);
      bool witnessed = false;
      std::string failure;
      for (std::size_t m = 0; m < order.measures.size() && failure.empty(); ++m) {
        const Measure& meas = order.measures[m];
        std::string label = "measure " + std::to_string(m + 1) + " (argument " +
                            std::to_string(meas.position) + ")";
        if (meas.position == 0 || meas.position > head.size() || meas.position > args.size()) {
          failure = label + " is out of range";
          break;
        }
        const Term& o = args[meas.position - 1];
        const Term& h = head[meas.position - 1];
        VarSet ofv = free_vars(o);
        bool arbitrary = std::any_of(ofv.begin(), ofv.end(), [&](const auto& kv) {
          return occ.arbitrary.count(kv.first) != 0;
        });
        if (arbitrary) {
          failure = label + " depends on a quantified variable";
        } else if (meas.cmp == Comparison::StrictSubterm && strict_subterm(o, h)) {
          witnessed = true;
          break;
        } else if (alpha_eq(o, h) ||
                   (meas.cmp == Comparison::EqualOrSubterm && strict_subterm(o, h))) {
          continue;
        } else {
          failure = label + ": " + to_string(o, &sig) + " is not a subterm of " +
                    to_string(h, &sig);
        }
      }
      if (witnessed) continue;
      if (failure.empty()) {
        long ro = rank(occ.pred);
        long rh = rank(r.pred);
        if (ro >= 0 && rh >= 0 && ro < rh) continue;
        failure = "no measure decreases strictly and " + occ.pred + " does not precede " + r.pred;
      }
      rep.violations.push_back(where + ": " + failure);
    }
  }
  return rep;
}

AdmissionReport admit(const Signature& sig, RewriteSystem& rs, const std::vector<AtomRule>& rules,
                      const OrderSpec& order, TrustLog* log) {
  AdmissionReport rep;
  std::set<std::string> defined;
  for (const AtomRule& r : rules) defined.insert(r.pred);
  for (const std::string& p : defined) {
    if (rs.has_atom_rules(p)) rep.violations.push_back(p + " already has rewrite rules");
    const auto* arity = sig.predicate_arity(p);
    if (arity == nullptr) continue;
    for (const Measure& m : order.measures)
      if (m.position == 0 || m.position > arity->size())
        rep.violations.push_back("order position " + std::to_string(m.position) +
                                 " is invalid for " + p + " of arity " +
                                 std::to_string(arity->size()));
  }
  for (const std::string& p : order.precedence)
    if (defined.count(p) == 0) rep.violations.push_back("precedence names " + p + ", which has no rules here");

  RewriteSystem probe = rs;
  probe.atom_rules = rules;
  probe.term_rules = rs.term_rules;
  for (const std::string& msg : validate_system(sig, probe)) rep.violations.push_back(msg);
  if (!rep.ok()) return rep;

  rep.merge(check_condition_1(sig, rs, rules));
  rep.merge(check_condition_2(sig, rs, rules, order));
  if (!rep.ok()) return rep;

  rs.atom_rules.insert(rs.atom_rules.end(), rules.begin(), rules.end());
  if (log) {
    std::string names;
    for (const std::string& p : defined) names += (names.empty() ? "" : ",") + p;
    log->record(TrustLog::Kind::AdmittedRecursive,
                names + " by " + to_string(order) + " (" + std::to_string(rules.size()) +
                    " rules)");
    for (const auto& w : rep.warnings) log->record(TrustLog::Kind::NonConstructorCoherence, w);
  }
  return rep;
}

}  // namespace munj
