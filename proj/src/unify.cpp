#include "munj/unify.hpp"

namespace munj {

const char* to_string(Completeness c) {
  return c == Completeness::Complete ? "complete" : "assumed-complete";
}

bool in_constructor_fragment(const RewriteSystem& rs, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var: return !t.type().is_arrow();
    case Term::Kind::Const: return rs.is_constructor(t.name());
    case Term::Kind::Lam: return false;
    case Term::Kind::App: {
      auto [head, args] = t.spine();
      if (!head.is_const() || !rs.is_constructor(head.name())) return false;
      for (const Term& a : args)
        if (!in_constructor_fragment(rs, a)) return false;
      return true;
    }
  }
  return false;
}

namespace {

// Unification problems are solved into a triangular substitution, resolved
// at the end.
class Unifier {
 public:
  bool unify(const Term& a, const Term& b) {
    Term u = walk(a);
    Term v = walk(b);
    if (u.is_var() && v.is_var() && u.name() == v.name()) return true;
    if (u.is_var()) return bind(u, v);
    if (v.is_var()) return bind(v, u);
    if (u.kind() != v.kind()) return false;
    switch (u.kind()) {
      case Term::Kind::Const: return u.name() == v.name();
      case Term::Kind::App: return unify(u.fn(), v.fn()) && unify(u.arg(), v.arg());
      case Term::Kind::Lam: return alpha_eq(resolve(u), resolve(v));
      default: return false;
    }
  }

  TermSubst result() {
    TermSubst out;
    for (const auto& [name, b] : solved_) out.bind(b.var, resolve(b.value));
    return out;
  }

 private:
  Term walk(const Term& t) {
    Term cur = t;
    while (cur.is_var()) {
      const Term* next = solved_.find(cur.name());
      if (next == nullptr) break;
      cur = *next;
    }
    return cur;
  }

  Term resolve(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::Var: {
        Term w = walk(t);
        return w.is_var() ? w : resolve(w);
      }
      case Term::Kind::App: return Term::app(resolve(t.fn()), resolve(t.arg()));
      case Term::Kind::Lam: return Term::lam(t.binder(), resolve(t.body()));
      default: return t;
    }
  }

  bool occurs(const std::string& name, const Term& t) {
    Term w = walk(t);
    switch (w.kind()) {
      case Term::Kind::Var: return w.name() == name;
      case Term::Kind::App: return occurs(name, w.fn()) || occurs(name, w.arg());
      case Term::Kind::Lam: return occurs_free(name, resolve(w));
      default: return false;
    }
  }

  bool bind(const Term& var, const Term& value) {
    if (var.type() != type_of(value)) return false;
    if (occurs(var.name(), value)) return false;
    solved_.bind(var, value);
    return true;
  }

  TermSubst solved_;
};

}  // namespace

std::optional<TermSubst> syntactic_unify(const Term& u, const Term& v) {
  return syntactic_unify(std::vector<Term>{u}, std::vector<Term>{v});
}

std::optional<TermSubst> syntactic_unify(const std::vector<Term>& us, const std::vector<Term>& vs) {
  if (us.size() != vs.size()) return std::nullopt;
  Unifier un;
  for (std::size_t i = 0; i < us.size(); ++i)
    if (!un.unify(us[i], vs[i])) return std::nullopt;
  return un.result();
}

CsuResult fo_unify(const RewriteSystem& rs, const Term& u, const Term& v) {
  for (const Term* t : {&u, &v}) {
    if (!in_constructor_fragment(rs, *t))
      fail(ErrorKind::DemandAnnotation,
           "cannot compute a complete set of unifiers for " + to_string(u) + " = " +
               to_string(v) + ": " + to_string(*t) +
               " is outside the first-order constructor fragment; supply the unifiers explicitly");
  }
  CsuResult out;
  if (auto mgu = syntactic_unify(u, v)) out.unifiers.push_back(*mgu);
  return out;
}

bool is_unifier(const RewriteSystem& rs, const TermSubst& theta, const Term& u, const Term& v) {
  return congruent(rs, apply_term_subst(u, theta), apply_term_subst(v, theta));
}

std::optional<TermSubst> match(const RewriteSystem& rs, const Term& pattern, const Term& subject) {
  Term normal = rw_normalize_term(rs, subject);
  auto theta = match_syntactic(pattern, normal);
  if (!theta) return std::nullopt;
  if (!congruent(rs, apply_term_subst(pattern, *theta), normal)) return std::nullopt;
  return theta;
}

std::optional<TermSubst> factor_subst(const RewriteSystem& rs, const TermSubst& theta,
                                      const TermSubst& theta_prime) {
  TermSubst acc;
  std::vector<std::pair<Term, Term>> pairs;
  for (const auto& [name, b] : theta) {
    const Term* p = theta_prime.find(name);
    Term pattern = p ? rw_normalize_term(rs, *p) : b.var;
    Term subject = rw_normalize_term(rs, b.value);
    if (!match_into(pattern, subject, acc)) return std::nullopt;
    pairs.emplace_back(pattern, subject);
  }
  for (const auto& [pattern, subject] : pairs)
    if (!congruent(rs, apply_term_subst(pattern, acc), subject)) return std::nullopt;
  return acc;
}

}  // namespace munj
