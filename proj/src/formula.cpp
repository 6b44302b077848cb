#include "munj/formula.hpp"

#include <algorithm>
#include <sstream>

namespace munj {

struct Formula::Node {
  explicit Node(Kind k) : kind(k) {}
  Kind kind;
  std::optional<Formula> a;  // binary: left. quantifier: body.
  std::optional<Formula> b;  // binary: right.
  std::string name;          // binder / atom / predicate variable
  std::optional<TermType> type;
  std::vector<Term> terms;
  std::optional<PredOperator> op;
  std::optional<PredVar> pvar;
  std::size_t size = 1;
};

namespace {

Term canon(const Term& t) { return is_beta_normal(t) ? t : beta_normalize(t); }

std::vector<Term> canon(std::vector<Term> ts) {
  for (Term& t : ts) t = canon(t);
  return ts;
}

std::size_t terms_size(const std::vector<Term>& ts) {
  std::size_t n = 0;
  for (const Term& t : ts) n += t.size();
  return n;
}

}  // namespace

Formula Formula::top() {
  static const Formula f(std::make_shared<const Node>(Node(Kind::Top)));
  return f;
}

Formula Formula::bot() {
  static const Formula f(std::make_shared<const Node>(Node(Kind::Bot)));
  return f;
}

Formula Formula::imp(Formula lhs, Formula rhs) {
  Node n(Kind::Imp);
  n.size = 1 + lhs.size() + rhs.size();
  n.a = std::move(lhs);
  n.b = std::move(rhs);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::conj(Formula lhs, Formula rhs) {
  Node n(Kind::And);
  n.size = 1 + lhs.size() + rhs.size();
  n.a = std::move(lhs);
  n.b = std::move(rhs);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::disj(Formula lhs, Formula rhs) {
  Node n(Kind::Or);
  n.size = 1 + lhs.size() + rhs.size();
  n.a = std::move(lhs);
  n.b = std::move(rhs);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::forall(const Term& var, Formula body) {
  if (!var.is_var()) fail(ErrorKind::Malformed, "quantifier binder must be a variable");
  Node n(Kind::Forall);
  n.name = var.name();
  n.type = var.type();
  n.size = 1 + body.size();
  n.a = std::move(body);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::exists(const Term& var, Formula body) {
  if (!var.is_var()) fail(ErrorKind::Malformed, "quantifier binder must be a variable");
  Node n(Kind::Exists);
  n.name = var.name();
  n.type = var.type();
  n.size = 1 + body.size();
  n.a = std::move(body);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::eq(Term lhs, Term rhs) {
  Node n(Kind::Eq);
  n.terms = canon(std::vector<Term>{std::move(lhs), std::move(rhs)});
  n.size = 1 + terms_size(n.terms);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::mu(PredOperator op, std::vector<Term> args) {
  Node n(Kind::Mu);
  n.terms = canon(std::move(args));
  n.size = 1 + op.body.size() + terms_size(n.terms);
  n.op = std::move(op);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::nu(PredOperator op, std::vector<Term> args) {
  Node n(Kind::Nu);
  n.terms = canon(std::move(args));
  n.size = 1 + op.body.size() + terms_size(n.terms);
  n.op = std::move(op);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::pred_app(PredVar p, std::vector<Term> args) {
  Node n(Kind::PredApp);
  n.name = p.name;
  n.terms = canon(std::move(args));
  n.size = 1 + terms_size(n.terms);
  n.pvar = std::move(p);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::atom(std::string name, std::vector<Term> args) {
  Node n(Kind::Atom);
  n.name = std::move(name);
  n.terms = canon(std::move(args));
  n.size = 1 + terms_size(n.terms);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula::Kind Formula::kind() const { return node_->kind; }
const Formula& Formula::left() const { return *node_->a; }
const Formula& Formula::right() const { return *node_->b; }
Term Formula::binder() const { return Term::var(node_->name, *node_->type); }
const Formula& Formula::body() const { return *node_->a; }
const Term& Formula::lhs() const { return node_->terms[0]; }
const Term& Formula::rhs() const { return node_->terms[1]; }
const PredOperator& Formula::op() const { return *node_->op; }
const std::vector<Term>& Formula::args() const { return node_->terms; }
const PredVar& Formula::pred_var() const { return *node_->pvar; }
const std::string& Formula::name() const { return node_->name; }
std::size_t Formula::size() const { return node_->size; }

namespace {

Formula rebuild_binary(const Formula& f, Formula l, Formula r) {
  if (l.same_node(f.left()) && r.same_node(f.right())) return f;
  switch (f.kind()) {
    case Formula::Kind::Imp: return Formula::imp(std::move(l), std::move(r));
    case Formula::Kind::And: return Formula::conj(std::move(l), std::move(r));
    default: return Formula::disj(std::move(l), std::move(r));
  }
}

Formula rebuild_quantifier(const Formula& f, const Term& var, Formula body) {
  if (var.name() == f.binder().name() && body.same_node(f.body())) return f;
  return f.is(Formula::Kind::Forall) ? Formula::forall(var, std::move(body))
                                     : Formula::exists(var, std::move(body));
}

Formula rebuild_fixed_point(const Formula& f, PredOperator op, std::vector<Term> args) {
  return f.is(Formula::Kind::Mu) ? Formula::mu(std::move(op), std::move(args))
                                 : Formula::nu(std::move(op), std::move(args));
}

}  // namespace

// ---------------------------------------------------------------------------
// Predicates

std::vector<TermType> Predicate::arity() const {
  std::vector<TermType> out;
  for (const Term& p : params) out.push_back(p.type());
  return out;
}

Predicate Predicate::of_mu(const PredOperator& op) {
  return Predicate{op.params, Formula::mu(op, op.params)};
}

Predicate Predicate::of_nu(const PredOperator& op) {
  return Predicate{op.params, Formula::nu(op, op.params)};
}

Predicate Predicate::of_atom(const std::string& name, const std::vector<TermType>& arity) {
  std::vector<Term> params;
  for (std::size_t i = 0; i < arity.size(); ++i)
    params.push_back(Term::var("x" + std::to_string(i + 1), arity[i]));
  return Predicate{params, Formula::atom(name, params)};
}

Predicate Predicate::of_pred_var(const PredVar& p) {
  std::vector<Term> params;
  for (std::size_t i = 0; i < p.arity.size(); ++i)
    params.push_back(Term::var("x" + std::to_string(i + 1), p.arity[i]));
  return Predicate{params, Formula::pred_app(p, params)};
}

// ---------------------------------------------------------------------------
// Polarity

Polarity join(Polarity a, Polarity b) {
  if (a == Polarity::Absent) return b;
  if (b == Polarity::Absent) return a;
  return a == b ? a : Polarity::Both;
}

Polarity flip(Polarity p) {
  switch (p) {
    case Polarity::PositiveOnly: return Polarity::NegativeOnly;
    case Polarity::NegativeOnly: return Polarity::PositiveOnly;
    default: return p;
  }
}

const char* to_string(Polarity p) {
  switch (p) {
    case Polarity::Absent: return "absent";
    case Polarity::PositiveOnly: return "positive";
    case Polarity::NegativeOnly: return "negative";
    case Polarity::Both: return "both";
  }
  return "?";
}

namespace {

Polarity polarity_rec(const std::string& p, const Formula& f, bool positive) {
  switch (f.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
    case Formula::Kind::Eq:
    case Formula::Kind::Atom: return Polarity::Absent;
    case Formula::Kind::PredApp:
      if (f.name() != p) return Polarity::Absent;
      return positive ? Polarity::PositiveOnly : Polarity::NegativeOnly;
    case Formula::Kind::Imp:
      return join(polarity_rec(p, f.left(), !positive), polarity_rec(p, f.right(), positive));
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return join(polarity_rec(p, f.left(), positive), polarity_rec(p, f.right(), positive));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: return polarity_rec(p, f.body(), positive);
    case Formula::Kind::Mu:
    case Formula::Kind::Nu:
      if (f.op().pred.name == p) return Polarity::Absent;
      return polarity_rec(p, f.op().body, positive);
  }
  return Polarity::Absent;
}

// Path to the first negative occurrence of p, if any.
std::optional<std::string> negative_path(const std::string& p, const Formula& f, bool positive,
                                         const std::string& path) {
  switch (f.kind()) {
    case Formula::Kind::PredApp:
      if (f.name() == p && !positive) return path.empty() ? std::string("body") : path;
      return std::nullopt;
    case Formula::Kind::Imp:
      if (auto l = negative_path(p, f.left(), !positive, path + "/imp.left")) return l;
      return negative_path(p, f.right(), positive, path + "/imp.right");
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::string tag = f.is(Formula::Kind::And) ? "/and" : "/or";
      if (auto l = negative_path(p, f.left(), positive, path + tag + ".left")) return l;
      return negative_path(p, f.right(), positive, path + tag + ".right");
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return negative_path(p, f.body(), positive,
                           path + (f.is(Formula::Kind::Forall) ? "/forall" : "/exists"));
    case Formula::Kind::Mu:
    case Formula::Kind::Nu:
      if (f.op().pred.name == p) return std::nullopt;
      return negative_path(p, f.op().body, positive,
                           path + (f.is(Formula::Kind::Mu) ? "/mu" : "/nu"));
    default: return std::nullopt;
  }
}

}  // namespace

Polarity polarity_of(const std::string& p, const Formula& f) { return polarity_rec(p, f, true); }

void check_monotonic(const PredOperator& op) {
  Polarity pol = polarity_of(op.pred.name, op.body);
  if (pol == Polarity::PositiveOnly || pol == Polarity::Absent) return;
  std::string path = negative_path(op.pred.name, op.body, true, "").value_or("body");
  fail(ErrorKind::NonMonotonic, "operator " + to_string(op) + " is not monotonic: " +
                                    op.pred.name + " occurs negatively at " + path);
}

// ---------------------------------------------------------------------------
// Free variables

namespace {

void fv_rec(const Formula& f, std::vector<std::string>& bound, VarSet& out);

void fv_term(const Term& t, const std::vector<std::string>& bound, VarSet& out) {
  VarSet local;
  collect_free_vars(t, local);
  for (auto& [name, type] : local)
    if (std::find(bound.begin(), bound.end(), name) == bound.end()) out.emplace(name, type);
}

void fv_rec(const Formula& f, std::vector<std::string>& bound, VarSet& out) {
  switch (f.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot: return;
    case Formula::Kind::Imp:
    case Formula::Kind::And:
    case Formula::Kind::Or:
      fv_rec(f.left(), bound, out);
      fv_rec(f.right(), bound, out);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      bound.push_back(f.binder().name());
      fv_rec(f.body(), bound, out);
      bound.pop_back();
      return;
    case Formula::Kind::Eq:
    case Formula::Kind::PredApp:
    case Formula::Kind::Atom:
      for (const Term& t : f.args()) fv_term(t, bound, out);
      return;
    case Formula::Kind::Mu:
    case Formula::Kind::Nu: {
      for (const Term& t : f.args()) fv_term(t, bound, out);
      std::size_t mark = bound.size();
      for (const Term& p : f.op().params) bound.push_back(p.name());
      fv_rec(f.op().body, bound, out);
      bound.resize(mark);
      return;
    }
  }
}

void fpv_rec(const Formula& f, std::vector<std::string>& bound, PredVarSet& out) {
  switch (f.kind()) {
    case Formula::Kind::PredApp:
      if (std::find(bound.begin(), bound.end(), f.name()) == bound.end())
        out.emplace(f.name(), f.pred_var().arity);
      return;
    case Formula::Kind::Imp:
    case Formula::Kind::And:
    case Formula::Kind::Or:
      fpv_rec(f.left(), bound, out);
      fpv_rec(f.right(), bound, out);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: fpv_rec(f.body(), bound, out); return;
    case Formula::Kind::Mu:
    case Formula::Kind::Nu:
      bound.push_back(f.op().pred.name);
      fpv_rec(f.op().body, bound, out);
      bound.pop_back();
      return;
    default: return;
  }
}

}  // namespace

void collect_free_vars(const Formula& f, VarSet& out) {
  std::vector<std::string> bound;
  fv_rec(f, bound, out);
}

VarSet free_vars(const Formula& f) {
  VarSet out;
  collect_free_vars(f, out);
  return out;
}

void collect_free_vars(const Predicate& s, VarSet& out) {
  VarSet local = free_vars(s.body);
  for (const Term& p : s.params) local.erase(p.name());
  out.insert(local.begin(), local.end());
}

void collect_free_vars(const PredOperator& op, VarSet& out) {
  collect_free_vars(Predicate{op.params, op.body}, out);
}

void collect_free_pred_vars(const Formula& f, PredVarSet& out) {
  std::vector<std::string> bound;
  fpv_rec(f, bound, out);
}

bool occurs_pred(const std::string& p, const Formula& f) {
  PredVarSet fpv;
  collect_free_pred_vars(f, fpv);
  return fpv.count(p) != 0;
}

// ---------------------------------------------------------------------------
// Term substitution

namespace {

Formula tsubst_rec(const Formula& f, const TermSubst& s);

std::vector<Term> tsubst_terms(const std::vector<Term>& ts, const TermSubst& s) {
  std::vector<Term> out;
  out.reserve(ts.size());
  for (const Term& t : ts) out.push_back(apply_term_subst(t, s));
  return out;
}

// Substitution state after entering `binders` whose scope has free
// variables `scope_fv`. Binders captured by the range are renamed.
struct Scoped {
  std::vector<Term> binders;
  TermSubst inner;
};

std::optional<Scoped> enter_binders(const std::vector<Term>& binders, const VarSet& scope_fv,
                                    const TermSubst& s) {
  Scoped out{binders, {}};
  VarSet range;
  for (const auto& [name, b] : s) {
    bool shadowed = std::any_of(binders.begin(), binders.end(),
                                [&](const Term& v) { return v.name() == name; });
    if (!shadowed && scope_fv.count(name) != 0) {
      out.inner.bind(b.var, b.value);
      collect_free_vars(b.value, range);
    }
  }
  if (out.inner.empty()) return std::nullopt;
  std::set<std::string> taken = names_of(range);
  for (const auto& [name, type] : scope_fv) taken.insert(name);
  for (const Term& v : binders) taken.insert(v.name());
  for (Term& v : out.binders) {
    if (range.count(v.name()) == 0) continue;
    Term renamed = Term::var(fresh_name(v.name(), taken), v.type());
    taken.insert(renamed.name());
    out.inner.bind(v, renamed);
    v = renamed;
  }
  return out;
}

PredOperator tsubst_op(const PredOperator& op, const TermSubst& s) {
  auto scoped = enter_binders(op.params, free_vars(op.body), s);
  if (!scoped) return op;
  return PredOperator{op.pred, scoped->binders, tsubst_rec(op.body, scoped->inner)};
}

Formula tsubst_rec(const Formula& f, const TermSubst& s) {
  switch (f.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot: return f;
    case Formula::Kind::Imp:
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return rebuild_binary(f, tsubst_rec(f.left(), s), tsubst_rec(f.right(), s));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      auto scoped = enter_binders({f.binder()}, free_vars(f.body()), s);
      if (!scoped) return f;
      return rebuild_quantifier(f, scoped->binders.front(), tsubst_rec(f.body(), scoped->inner));
    }
    case Formula::Kind::Eq:
      return Formula::eq(apply_term_subst(f.lhs(), s), apply_term_subst(f.rhs(), s));
    case Formula::Kind::PredApp: return Formula::pred_app(f.pred_var(), tsubst_terms(f.args(), s));
    case Formula::Kind::Atom: return Formula::atom(f.name(), tsubst_terms(f.args(), s));
    case Formula::Kind::Mu:
    case Formula::Kind::Nu:
      return rebuild_fixed_point(f, tsubst_op(f.op(), s), tsubst_terms(f.args(), s));
  }
  return f;
}

}  // namespace

Formula apply_term_subst(const Formula& f, const TermSubst& s) {
  if (s.empty()) return f;
  return tsubst_rec(f, s);
}

Predicate apply_term_subst(const Predicate& p, const TermSubst& s) {
  if (s.empty()) return p;
  auto scoped = enter_binders(p.params, free_vars(p.body), s);
  if (!scoped) return p;
  return Predicate{scoped->binders, tsubst_rec(p.body, scoped->inner)};
}

PredOperator apply_term_subst(const PredOperator& op, const TermSubst& s) {
  if (s.empty()) return op;
  return tsubst_op(op, s);
}

// ---------------------------------------------------------------------------
// Predicate substitution

Formula apply_predicate(const Predicate& s, const std::vector<Term>& args) {
  if (args.size() != s.params.size())
    fail(ErrorKind::Type, "predicate " + to_string(s) + " expects " +
                              std::to_string(s.params.size()) + " arguments, got " +
                              std::to_string(args.size()));
  TermSubst theta;
  for (std::size_t i = 0; i < args.size(); ++i) theta.bind(s.params[i], args[i]);
  return apply_term_subst(s.body, theta);
}

namespace {

struct PredSubst {
  const std::string& p;
  const Predicate& s;
  VarSet fv;
  PredVarSet fpv;
};

Formula psubst_rec(const Formula& f, const PredSubst& ps);

PredOperator psubst_op(const PredOperator& op, const PredSubst& ps) {
  if (op.pred.name == ps.p || !occurs_pred(ps.p, op.body)) return op;
  PredOperator cur = op;
  if (ps.fpv.count(cur.pred.name) != 0) {
    PredVarSet taken_p = ps.fpv;
    collect_free_pred_vars(cur.body, taken_p);
    std::set<std::string> taken;
    for (const auto& [n, a] : taken_p) taken.insert(n);
    taken.insert(ps.p);
    PredVar renamed{fresh_name(cur.pred.name, taken), cur.pred.arity};
    cur.body = substitute_pred(cur.body, cur.pred.name, Predicate::of_pred_var(renamed));
    cur.pred = renamed;
  }
  bool clash = std::any_of(cur.params.begin(), cur.params.end(),
                           [&](const Term& v) { return ps.fv.count(v.name()) != 0; });
  if (clash) {
    std::set<std::string> taken = names_of(ps.fv);
    for (const auto& [n, t] : free_vars(cur.body)) taken.insert(n);
    for (const Term& v : cur.params) taken.insert(v.name());
    TermSubst rename;
    for (Term& v : cur.params) {
      if (ps.fv.count(v.name()) == 0) continue;
      Term renamed = Term::var(fresh_name(v.name(), taken), v.type());
      taken.insert(renamed.name());
      rename.bind(v, renamed);
      v = renamed;
    }
    cur.body = apply_term_subst(cur.body, rename);
  }
  cur.body = psubst_rec(cur.body, ps);
  return cur;
}

Formula psubst_rec(const Formula& f, const PredSubst& ps) {
  switch (f.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
    case Formula::Kind::Eq:
    case Formula::Kind::Atom: return f;
    case Formula::Kind::PredApp:
      if (f.name() != ps.p) return f;
      return apply_predicate(ps.s, f.args());
    case Formula::Kind::Imp:
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return rebuild_binary(f, psubst_rec(f.left(), ps), psubst_rec(f.right(), ps));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      if (!occurs_pred(ps.p, f.body())) return f;
      Term var = f.binder();
      Formula body = f.body();
      if (ps.fv.count(var.name()) != 0) {
        std::set<std::string> taken = names_of(ps.fv);
        for (const auto& [n, t] : free_vars(body)) taken.insert(n);
        taken.insert(var.name());
        Term renamed = Term::var(fresh_name(var.name(), taken), var.type());
        body = apply_term_subst(body, TermSubst::single(var, renamed));
        var = renamed;
      }
      return rebuild_quantifier(f, var, psubst_rec(body, ps));
    }
    case Formula::Kind::Mu:
    case Formula::Kind::Nu: return rebuild_fixed_point(f, psubst_op(f.op(), ps), f.args());
  }
  return f;
}

}  // namespace

Formula substitute_pred(const Formula& f, const std::string& p, const Predicate& s) {
  PredSubst ps{p, s, {}, {}};
  collect_free_vars(s, ps.fv);
  collect_free_pred_vars(s.body, ps.fpv);
  return psubst_rec(f, ps);
}

Formula instantiate_operator(const PredOperator& op, const Predicate& s,
                             const std::vector<Term>& args) {
  if (s.params.size() != op.pred.arity.size())
    fail(ErrorKind::Type, "predicate " + to_string(s) + " has arity " +
                              std::to_string(s.params.size()) + " but operator expects " +
                              std::to_string(op.pred.arity.size()));
  for (std::size_t i = 0; i < s.params.size(); ++i) {
    if (s.params[i].type() != op.pred.arity[i])
      fail(ErrorKind::Type, "predicate " + to_string(s) + " argument " + std::to_string(i + 1) +
                                " has type " + s.params[i].type().str() + ", operator expects " +
                                op.pred.arity[i].str());
  }
  Formula body = apply_predicate(Predicate{op.params, op.body}, args);
  return substitute_pred(body, op.pred.name, s);
}

// ---------------------------------------------------------------------------
// α-equivalence

namespace {

long find_bound(const NameEnv& env, const std::string& name, bool left) {
  for (long i = static_cast<long>(env.size()) - 1; i >= 0; --i) {
    const auto& p = env[static_cast<std::size_t>(i)];
    if ((left ? p.first : p.second) == name) return i;
  }
  return -1;
}

bool terms_alpha_eq(const std::vector<Term>& a, const std::vector<Term>& b, NameEnv& env) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!alpha_eq(a[i], b[i], env)) return false;
  return true;
}

bool op_alpha_eq(const PredOperator& a, const PredOperator& b, NameEnv& terms, NameEnv& preds) {
  if (a.pred.arity != b.pred.arity || a.params.size() != b.params.size()) return false;
  for (std::size_t i = 0; i < a.params.size(); ++i)
    if (a.params[i].type() != b.params[i].type()) return false;
  std::size_t mark = terms.size();
  for (std::size_t i = 0; i < a.params.size(); ++i)
    terms.emplace_back(a.params[i].name(), b.params[i].name());
  preds.emplace_back(a.pred.name, b.pred.name);
  bool eq = alpha_eq(a.body, b.body, terms, preds);
  preds.pop_back();
  terms.resize(mark);
  return eq;
}

}  // namespace

bool alpha_eq(const Formula& a, const Formula& b, NameEnv& terms, NameEnv& preds) {
  if (terms.empty() && preds.empty() && a.same_node(b)) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot: return true;
    case Formula::Kind::Imp:
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return alpha_eq(a.left(), b.left(), terms, preds) &&
             alpha_eq(a.right(), b.right(), terms, preds);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      if (a.binder().type() != b.binder().type()) return false;
      terms.emplace_back(a.binder().name(), b.binder().name());
      bool eq = alpha_eq(a.body(), b.body(), terms, preds);
      terms.pop_back();
      return eq;
    }
    case Formula::Kind::Eq:
    case Formula::Kind::Atom:
      return a.name() == b.name() && terms_alpha_eq(a.args(), b.args(), terms);
    case Formula::Kind::PredApp: {
      long ia = find_bound(preds, a.name(), true);
      long ib = find_bound(preds, b.name(), false);
      if (ia != ib) return false;
      if (ia < 0 && a.name() != b.name()) return false;
      return terms_alpha_eq(a.args(), b.args(), terms);
    }
    case Formula::Kind::Mu:
    case Formula::Kind::Nu:
      return terms_alpha_eq(a.args(), b.args(), terms) && op_alpha_eq(a.op(), b.op(), terms, preds);
  }
  return false;
}

bool alpha_eq(const Formula& a, const Formula& b) {
  NameEnv terms, preds;
  return alpha_eq(a, b, terms, preds);
}

bool alpha_eq(const Predicate& a, const Predicate& b) {
  if (a.params.size() != b.params.size()) return false;
  NameEnv terms, preds;
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    if (a.params[i].type() != b.params[i].type()) return false;
    terms.emplace_back(a.params[i].name(), b.params[i].name());
  }
  return alpha_eq(a.body, b.body, terms, preds);
}

bool alpha_eq(const PredOperator& a, const PredOperator& b) {
  NameEnv terms, preds;
  return op_alpha_eq(a, b, terms, preds);
}

// ---------------------------------------------------------------------------
// Well-formedness

namespace {

void check_term_args(const Signature& sig, const TypeContext& ctx, const std::vector<Term>& args,
                     const std::vector<TermType>& arity, const std::string& what) {
  if (args.size() != arity.size())
    fail(ErrorKind::Type, what + " expects " + std::to_string(arity.size()) +
                              " arguments, got " + std::to_string(args.size()));
  for (std::size_t i = 0; i < args.size(); ++i) {
    TermType t = infer_term_type(sig, ctx, args[i]);
    if (t != arity[i])
      fail(ErrorKind::Type, what + " argument " + std::to_string(i + 1) + " `" +
                                to_string(args[i], &sig) + "` has type " + t.str() +
                                ", expected " + arity[i].str());
  }
}

void check_binder_type(const Signature& sig, const Term& v) {
  if (!v.type().is_term_type())
    fail(ErrorKind::Type, "binder " + v.name() + " must have a term type, got " + v.type().str());
  sig.check_type(v.type());
}

void check_rec(const Signature& sig, TypeContext& ctx, PredVarSet& preds, const Formula& f);

void check_op(const Signature& sig, TypeContext& ctx, PredVarSet& preds, const PredOperator& op) {
  if (op.params.size() != op.pred.arity.size())
    fail(ErrorKind::Type, "operator " + to_string(op, &sig) + " binds " +
                              std::to_string(op.params.size()) + " term variables but " +
                              op.pred.name + " has arity " + std::to_string(op.pred.arity.size()));
  for (std::size_t i = 0; i < op.params.size(); ++i) {
    check_binder_type(sig, op.params[i]);
    if (op.params[i].type() != op.pred.arity[i])
      fail(ErrorKind::Type, "operator parameter " + op.params[i].name() + " has type " +
                                op.params[i].type().str() + " but " + op.pred.name +
                                " expects " + op.pred.arity[i].str());
  }
  TypeContext inner_ctx = ctx;
  for (const Term& p : op.params) inner_ctx.insert_or_assign(p.name(), p.type());
  PredVarSet inner_preds = preds;
  inner_preds.insert_or_assign(op.pred.name, op.pred.arity);
  check_rec(sig, inner_ctx, inner_preds, op.body);
  check_monotonic(op);
}

void check_rec(const Signature& sig, TypeContext& ctx, PredVarSet& preds, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot: return;
    case Formula::Kind::Imp:
    case Formula::Kind::And:
    case Formula::Kind::Or:
      check_rec(sig, ctx, preds, f.left());
      check_rec(sig, ctx, preds, f.right());
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      Term v = f.binder();
      check_binder_type(sig, v);
      TypeContext inner = ctx;
      inner.insert_or_assign(v.name(), v.type());
      check_rec(sig, inner, preds, f.body());
      return;
    }
    case Formula::Kind::Eq: {
      TermType l = infer_term_type(sig, ctx, f.lhs());
      TermType r = infer_term_type(sig, ctx, f.rhs());
      if (l != r)
        fail(ErrorKind::Type, "equality between different types: " + to_string(f.lhs(), &sig) +
                                  " : " + l.str() + " and " + to_string(f.rhs(), &sig) + " : " +
                                  r.str());
      if (!l.is_term_type()) fail(ErrorKind::Type, "equality at non-term type " + l.str());
      return;
    }
    case Formula::Kind::Atom: {
      const auto* arity = sig.predicate_arity(f.name());
      if (arity == nullptr) fail(ErrorKind::Type, "unknown predicate constant " + f.name());
      check_term_args(sig, ctx, f.args(), *arity, "predicate " + f.name());
      return;
    }
    case Formula::Kind::PredApp: {
      auto it = preds.find(f.name());
      if (it == preds.end())
        fail(ErrorKind::StrayPredicateVar,
             "predicate variable " + f.name() + " is not bound by an enclosing operator");
      if (it->second != f.pred_var().arity)
        fail(ErrorKind::Type, "predicate variable " + f.name() + " used at a different arity");
      check_term_args(sig, ctx, f.args(), it->second, "predicate variable " + f.name());
      return;
    }
    case Formula::Kind::Mu:
    case Formula::Kind::Nu:
      check_op(sig, ctx, preds, f.op());
      check_term_args(sig, ctx, f.args(), f.op().pred.arity,
                      std::string(f.is(Formula::Kind::Mu) ? "mu" : "nu") + " operator");
      return;
  }
}

TypeContext annotations_of(const VarSet& fv) { return TypeContext(fv.begin(), fv.end()); }

}  // namespace

void check_formula(const Signature& sig, const TypeContext& ctx, const Formula& f) {
  TypeContext c = ctx;
  PredVarSet preds;
  check_rec(sig, c, preds, f);
}

void check_formula(const Signature& sig, const Formula& f) {
  VarSet fv = free_vars(f);
  for (const auto& [name, type] : fv) check_binder_type(sig, Term::var(name, type));
  check_formula(sig, annotations_of(fv), f);
}

void check_predicate(const Signature& sig, const TypeContext& ctx, const Predicate& s) {
  TypeContext c = ctx;
  for (const Term& p : s.params) {
    check_binder_type(sig, p);
    c.insert_or_assign(p.name(), p.type());
  }
  PredVarSet preds;
  check_rec(sig, c, preds, s.body);
}

void check_predicate(const Signature& sig, const Predicate& s) {
  VarSet fv;
  collect_free_vars(s, fv);
  check_predicate(sig, annotations_of(fv), s);
}

void check_operator(const Signature& sig, const PredOperator& op) {
  VarSet fv;
  collect_free_vars(op, fv);
  TypeContext ctx = annotations_of(fv);
  PredVarSet preds;
  check_op(sig, ctx, preds, op);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print_formula(const Formula& f, std::ostream& os, const Signature* sig);

std::string binders_str(const std::vector<Term>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ' ';
    out += vs[i].name() + ":" + vs[i].type().str();
  }
  return out;
}

void print_args(const std::vector<Term>& args, std::ostream& os, const Signature* sig) {
  for (const Term& t : args) {
    std::string s = to_string(t, sig);
    bool atomic = t.is_var() || t.is_const();
    os << ' ' << (atomic ? s : "(" + s + ")");
  }
}

void print_op(const PredOperator& op, std::ostream& os, const Signature* sig) {
  os << "(" << op.pred.name;
  if (!op.params.empty()) os << ", " << binders_str(op.params);
  os << ". ";
  print_formula(op.body, os, sig);
  os << ")";
}

int prec(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: return 0;
    case Formula::Kind::Imp: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    default: return 4;
  }
}

void print_child(const Formula& f, std::ostream& os, const Signature* sig, bool parens) {
  if (parens) os << '(';
  print_formula(f, os, sig);
  if (parens) os << ')';
}

void print_formula(const Formula& f, std::ostream& os, const Signature* sig) {
  switch (f.kind()) {
    case Formula::Kind::Top: os << "top"; return;
    case Formula::Kind::Bot: os << "bot"; return;
    case Formula::Kind::Imp:
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      int mine = prec(f);
      const char* sym = f.is(Formula::Kind::Imp) ? " => " : f.is(Formula::Kind::And) ? " /\\ " : " \\/ ";
      // all three connectives associate to the right
      print_child(f.left(), os, sig, prec(f.left()) <= mine);
      os << sym;
      print_child(f.right(), os, sig, prec(f.right()) < mine || f.right().is_quantifier());
      return;
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      os << (f.is(Formula::Kind::Forall) ? "forall " : "exists ") << f.binder().name() << ":"
         << f.binder().type().str() << ", ";
      print_formula(f.body(), os, sig);
      return;
    case Formula::Kind::Eq: os << to_string(f.lhs(), sig) << " = " << to_string(f.rhs(), sig); return;
    case Formula::Kind::PredApp:
    case Formula::Kind::Atom:
      os << f.name();
      print_args(f.args(), os, sig);
      return;
    case Formula::Kind::Mu:
    case Formula::Kind::Nu:
      os << (f.is(Formula::Kind::Mu) ? "mu" : "nu");
      print_op(f.op(), os, sig);
      print_args(f.args(), os, sig);
      return;
  }
}

}  // namespace

std::string to_string(const Formula& f, const Signature* sig) {
  std::ostringstream os;
  print_formula(f, os, sig);
  return os.str();
}

std::string to_string(const Predicate& s, const Signature* sig) {
  std::ostringstream os;
  os << "\\" << binders_str(s.params) << ". ";
  print_formula(s.body, os, sig);
  return os.str();
}

std::string to_string(const PredOperator& op, const Signature* sig) {
  std::ostringstream os;
  print_op(op, os, sig);
  return os.str();
}

}  // namespace munj
