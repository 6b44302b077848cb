#include "munj/proof.hpp"

#include <algorithm>
#include <sstream>

namespace munj {

// ---------------------------------------------------------------------------
// Context

Context::Context(std::initializer_list<std::pair<std::string, Formula>> entries) {
  for (const auto& [name, f] : entries) extend(name, f);
}

Context Context::extended(const std::string& name, const Formula& f) const {
  Context out = *this;
  out.extend(name, f);
  return out;
}

void Context::extend(const std::string& name, const Formula& f) {
  for (auto& entry : entries_) {
    if (entry.first == name) {
      entry.second = f;
      return;
    }
  }
  entries_.emplace_back(name, f);
}

const Formula* Context::find(const std::string& name) const {
  for (const auto& entry : entries_)
    if (entry.first == name) return &entry.second;
  return nullptr;
}

std::set<std::string> Context::names() const {
  std::set<std::string> out;
  for (const auto& entry : entries_) out.insert(entry.first);
  return out;
}

Context Context::apply_term_subst(const TermSubst& s) const {
  Context out;
  for (const auto& [name, f] : entries_) out.entries_.emplace_back(name, munj::apply_term_subst(f, s));
  return out;
}

void Context::collect_free_vars(VarSet& out) const {
  for (const auto& entry : entries_) munj::collect_free_vars(entry.second, out);
}

bool alpha_eq(const Context& a, const Context& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& ea = a.entries()[i];
    const auto& eb = b.entries()[i];
    if (ea.first != eb.first || !alpha_eq(ea.second, eb.second)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// ProofSubst

ProofSubst ProofSubst::single(const std::string& name, ProofTerm value) {
  ProofSubst s;
  s.bind(name, std::move(value));
  return s;
}

void ProofSubst::bind(const std::string& name, ProofTerm value) {
  map_.insert_or_assign(name, std::move(value));
}

const ProofTerm* ProofSubst::find(const std::string& name) const {
  auto it = map_.find(name);
  return it == map_.end() ? nullptr : &it->second;
}

std::set<std::string> ProofSubst::domain() const {
  std::set<std::string> out;
  for (const auto& [name, p] : map_) out.insert(name);
  return out;
}

std::string NameSupply::fresh(const std::string& stem) {
  std::string name = fresh_name(stem, taken_);
  taken_.insert(name);
  return name;
}

// ---------------------------------------------------------------------------
// Nodes

struct ProofTerm::Node {
  explicit Node(Kind k) : kind(k) {}
  Kind kind;
  std::string name;
  std::string name2;
  std::vector<Term> binders;
  std::vector<ProofTerm> subs;
  std::vector<Term> terms;
  std::optional<Formula> annot;
  std::optional<Predicate> invariant;
  std::optional<PredOperator> op;
  std::shared_ptr<const EqElimData> eq;
  std::size_t size = 1;
};

ProofTerm ProofTerm::make(Node node) {
  std::size_t n = 1;
  for (const ProofTerm& s : node.subs) n += s.size();
  if (node.eq)
    for (const EqBranch& b : node.eq->branches) n += b.proof.size();
  node.size = n;
  return ProofTerm(std::make_shared<const Node>(std::move(node)));
}

namespace {

void require_var(const Term& t, const char* what) {
  if (!t.is_var()) fail(ErrorKind::Malformed, std::string(what) + " binder must be a variable");
}

std::vector<Term> canon_terms(std::vector<Term> ts) {
  for (Term& t : ts)
    if (!is_beta_normal(t)) t = beta_normalize(t);
  return ts;
}

Term canon_term(const Term& t) { return is_beta_normal(t) ? t : beta_normalize(t); }

}  // namespace

ProofTerm ProofTerm::var(std::string name) {
  Node n(Kind::Var);
  n.name = std::move(name);
  return make(std::move(n));
}

ProofTerm ProofTerm::unit() {
  static const ProofTerm u = make(Node(Kind::Unit));
  return u;
}

ProofTerm ProofTerm::abort(ProofTerm p, std::optional<Formula> goal) {
  Node n(Kind::Abort);
  n.subs = {std::move(p)};
  n.annot = std::move(goal);
  return make(std::move(n));
}

ProofTerm ProofTerm::lam(std::string name, std::optional<Formula> domain, ProofTerm body) {
  Node n(Kind::Lam);
  n.name = std::move(name);
  n.annot = std::move(domain);
  n.subs = {std::move(body)};
  return make(std::move(n));
}

ProofTerm ProofTerm::app(ProofTerm fn, ProofTerm arg) {
  Node n(Kind::App);
  n.subs = {std::move(fn), std::move(arg)};
  return make(std::move(n));
}

ProofTerm ProofTerm::pair(ProofTerm a, ProofTerm b) {
  Node n(Kind::Pair);
  n.subs = {std::move(a), std::move(b)};
  return make(std::move(n));
}

ProofTerm ProofTerm::proj1(ProofTerm p) {
  Node n(Kind::Proj1);
  n.subs = {std::move(p)};
  return make(std::move(n));
}

ProofTerm ProofTerm::proj2(ProofTerm p) {
  Node n(Kind::Proj2);
  n.subs = {std::move(p)};
  return make(std::move(n));
}

ProofTerm ProofTerm::in1(ProofTerm p, std::optional<Formula> goal) {
  Node n(Kind::In1);
  n.subs = {std::move(p)};
  n.annot = std::move(goal);
  return make(std::move(n));
}

ProofTerm ProofTerm::in2(ProofTerm p, std::optional<Formula> goal) {
  Node n(Kind::In2);
  n.subs = {std::move(p)};
  n.annot = std::move(goal);
  return make(std::move(n));
}

ProofTerm ProofTerm::case_of(ProofTerm major, std::string left_name, ProofTerm left,
                             std::string right_name, ProofTerm right) {
  Node n(Kind::Case);
  n.name = std::move(left_name);
  n.name2 = std::move(right_name);
  n.subs = {std::move(major), std::move(left), std::move(right)};
  return make(std::move(n));
}

ProofTerm ProofTerm::lam_term(const Term& var, ProofTerm body) {
  require_var(var, "term abstraction");
  Node n(Kind::LamTerm);
  n.binders = {var};
  n.subs = {std::move(body)};
  return make(std::move(n));
}

ProofTerm ProofTerm::app_term(ProofTerm p, Term t) {
  Node n(Kind::AppTerm);
  n.subs = {std::move(p)};
  n.terms = {canon_term(t)};
  return make(std::move(n));
}

ProofTerm ProofTerm::witness(Term t, ProofTerm p, std::optional<Formula> goal) {
  Node n(Kind::Witness);
  n.terms = {canon_term(t)};
  n.subs = {std::move(p)};
  n.annot = std::move(goal);
  return make(std::move(n));
}

ProofTerm ProofTerm::destruct(ProofTerm major, const Term& var, std::string name, ProofTerm body) {
  require_var(var, "existential elimination");
  Node n(Kind::Destruct);
  n.binders = {var};
  n.name = std::move(name);
  n.subs = {std::move(major), std::move(body)};
  return make(std::move(n));
}

ProofTerm ProofTerm::refl(Term t) {
  Node n(Kind::Refl);
  n.terms = {canon_term(t)};
  return make(std::move(n));
}

VarSet branch_vars(const EqElimData& d, const EqBranch& b) {
  VarSet out;
  for (const auto& [name, binding] : b.unifier)
    if (d.scope.count(name) != 0) collect_free_vars(binding.value, out);
  return out;
}

ProofTerm ProofTerm::eq_elim(const EqElimData& in) {
  auto data = std::make_shared<EqElimData>(in);
  VarSet scope;
  data->ctx.collect_free_vars(scope);
  collect_free_vars(data->u, scope);
  collect_free_vars(data->v, scope);
  collect_free_vars(data->goal, scope);
  data->scope = scope;
  data->u = canon_term(data->u);
  data->v = canon_term(data->v);
  for (const auto& [name, b] : data->theta)
    if (scope.count(name) == 0)
      fail(ErrorKind::Malformed, "equality elimination: theta binds " + name +
                                     ", which is not free in the suspended context, equation or goal");
  data->theta = data->theta.totalized(scope);
  for (EqBranch& br : data->branches) {
    for (const auto& [name, b] : br.unifier)
      if (scope.count(name) == 0)
        fail(ErrorKind::Malformed, "equality elimination: branch unifier " + br.unifier.str() +
                                       " binds " + name + ", which is outside the scope");
    br.unifier = br.unifier.totalized(scope);
    VarSet allowed = branch_vars(*data, br);
    for (const auto& [name, type] : free_vars(br.proof))
      if (allowed.count(name) == 0)
        fail(ErrorKind::Malformed, "equality elimination: branch " + br.unifier.str() +
                                       " has free variable " + name +
                                       " outside the range of its unifier");
  }
  return eq_elim_canonical(data);
}

ProofTerm ProofTerm::eq_elim_canonical(std::shared_ptr<const EqElimData> data) {
  Node n(Kind::EqElim);
  for (const auto& [name, p] : data->sigma) n.subs.push_back(p);
  n.subs.push_back(data->major);
  n.eq = std::move(data);
  return make(std::move(n));
}

ProofTerm ProofTerm::mu_intro(PredOperator op, std::vector<Term> args, ProofTerm p) {
  Node n(Kind::MuIntro);
  n.op = std::move(op);
  n.terms = canon_terms(std::move(args));
  n.subs = {std::move(p)};
  return make(std::move(n));
}

ProofTerm ProofTerm::mu_elim(Predicate invariant, ProofTerm major, std::vector<Term> vars,
                             std::string name, ProofTerm step) {
  for (const Term& v : vars) require_var(v, "iteration");
  Node n(Kind::MuElim);
  n.invariant = std::move(invariant);
  n.binders = std::move(vars);
  n.name = std::move(name);
  n.subs = {std::move(major), std::move(step)};
  return make(std::move(n));
}

ProofTerm ProofTerm::nu_intro(Predicate invariant, ProofTerm seed, std::vector<Term> vars,
                              std::string name, ProofTerm step, std::optional<Formula> goal) {
  for (const Term& v : vars) require_var(v, "coiteration");
  Node n(Kind::NuIntro);
  n.invariant = std::move(invariant);
  n.binders = std::move(vars);
  n.name = std::move(name);
  n.subs = {std::move(seed), std::move(step)};
  n.annot = std::move(goal);
  return make(std::move(n));
}

ProofTerm ProofTerm::nu_elim(PredOperator op, std::vector<Term> args, ProofTerm p) {
  Node n(Kind::NuElim);
  n.op = std::move(op);
  n.terms = canon_terms(std::move(args));
  n.subs = {std::move(p)};
  return make(std::move(n));
}

ProofTerm::Kind ProofTerm::kind() const { return node_->kind; }
const std::string& ProofTerm::name() const { return node_->name; }
const std::string& ProofTerm::name2() const { return node_->name2; }
const std::vector<Term>& ProofTerm::term_binders() const { return node_->binders; }
const std::vector<ProofTerm>& ProofTerm::subs() const { return node_->subs; }
const std::vector<Term>& ProofTerm::terms() const { return node_->terms; }
const std::optional<Formula>& ProofTerm::annot() const { return node_->annot; }
const Predicate& ProofTerm::invariant() const { return *node_->invariant; }
const PredOperator& ProofTerm::op() const { return *node_->op; }
const EqElimData& ProofTerm::eq() const { return *node_->eq; }
std::size_t ProofTerm::size() const { return node_->size; }

ProofTerm ProofTerm::with_annot(std::optional<Formula> annot) const {
  Node n = *node_;
  n.annot = std::move(annot);
  return make(std::move(n));
}

ProofTerm rebuild(const ProofTerm& p, std::vector<ProofTerm> subs) {
  if (p.is(ProofTerm::Kind::EqElim)) {
    auto data = std::make_shared<EqElimData>(p.eq());
    std::size_t i = 0;
    ProofSubst sigma;
    for (const auto& [name, old] : p.eq().sigma) sigma.bind(name, subs.at(i++));
    data->sigma = std::move(sigma);
    data->major = subs.at(i);
    return ProofTerm::eq_elim_canonical(data);
  }
  ProofTerm::Node n = *p.node_;
  n.subs = std::move(subs);
  return ProofTerm::make(std::move(n));
}

// ---------------------------------------------------------------------------
// Free variables

namespace {

void fv_minus(const ProofTerm& p, const std::vector<Term>& bound, VarSet& out) {
  VarSet local;
  collect_free_vars(p, local);
  for (const Term& b : bound) local.erase(b.name());
  out.insert(local.begin(), local.end());
}

void fv_annot(const ProofTerm& p, VarSet& out) {
  if (p.annot()) collect_free_vars(*p.annot(), out);
}

}  // namespace

void collect_free_vars(const ProofTerm& p, VarSet& out) {
  using K = ProofTerm::Kind;
  switch (p.kind()) {
    case K::Var:
    case K::Unit: return;
    case K::LamTerm: fv_minus(p.sub(0), p.term_binders(), out); return;
    case K::Destruct:
      collect_free_vars(p.sub(0), out);
      fv_minus(p.sub(1), p.term_binders(), out);
      return;
    case K::MuElim:
    case K::NuIntro:
      collect_free_vars(p.invariant(), out);
      fv_annot(p, out);
      collect_free_vars(p.sub(0), out);
      fv_minus(p.sub(1), p.term_binders(), out);
      return;
    case K::EqElim:
      p.eq().theta.collect_range_vars(out);
      for (const ProofTerm& s : p.subs()) collect_free_vars(s, out);
      return;
    case K::MuIntro:
    case K::NuElim:
      collect_free_vars(p.op(), out);
      break;
    default: break;
  }
  fv_annot(p, out);
  for (const Term& t : p.terms()) collect_free_vars(t, out);
  for (const ProofTerm& s : p.subs()) collect_free_vars(s, out);
}

VarSet free_vars(const ProofTerm& p) {
  VarSet out;
  collect_free_vars(p, out);
  return out;
}

namespace {

void fpv_minus(const ProofTerm& p, const std::string& bound, std::set<std::string>& out) {
  std::set<std::string> local;
  collect_free_proof_vars(p, local);
  local.erase(bound);
  out.insert(local.begin(), local.end());
}

}  // namespace

void collect_free_proof_vars(const ProofTerm& p, std::set<std::string>& out) {
  using K = ProofTerm::Kind;
  switch (p.kind()) {
    case K::Var: out.insert(p.name()); return;
    case K::Lam: fpv_minus(p.sub(0), p.name(), out); return;
    case K::Case:
      collect_free_proof_vars(p.sub(0), out);
      fpv_minus(p.sub(1), p.name(), out);
      fpv_minus(p.sub(2), p.name2(), out);
      return;
    case K::Destruct:
    case K::MuElim:
    case K::NuIntro:
      collect_free_proof_vars(p.sub(0), out);
      fpv_minus(p.sub(1), p.name(), out);
      return;
    default:
      for (const ProofTerm& s : p.subs()) collect_free_proof_vars(s, out);
  }
}

std::set<std::string> free_proof_vars(const ProofTerm& p) {
  std::set<std::string> out;
  collect_free_proof_vars(p, out);
  return out;
}

// ---------------------------------------------------------------------------
// Term substitution

namespace {

struct Scoped {
  std::vector<Term> binders;
  ProofTerm body;
};

std::optional<Formula> subst_annot(const std::optional<Formula>& f, const TermSubst& s) {
  if (!f) return std::nullopt;
  return apply_term_subst(*f, s);
}

std::vector<Term> subst_terms(const std::vector<Term>& ts, const TermSubst& s) {
  std::vector<Term> out;
  for (const Term& t : ts) out.push_back(apply_term_subst(t, s));
  return out;
}

Scoped enter_term_binders(const std::vector<Term>& binders, const ProofTerm& body,
                          const TermSubst& s) {
  VarSet body_fv = free_vars(body);
  TermSubst inner;
  VarSet range;
  for (const auto& [name, b] : s) {
    bool shadowed = std::any_of(binders.begin(), binders.end(),
                                [&](const Term& v) { return v.name() == name; });
    if (shadowed || body_fv.count(name) == 0) continue;
    inner.bind(b.var, b.value);
    collect_free_vars(b.value, range);
  }
  if (inner.empty()) return {binders, body};
  std::set<std::string> taken = names_of(range);
  for (const auto& [name, type] : body_fv) taken.insert(name);
  for (const Term& v : binders) taken.insert(v.name());
  std::vector<Term> out = binders;
  for (Term& v : out) {
    if (range.count(v.name()) == 0) continue;
    Term renamed = Term::var(fresh_name(v.name(), taken), v.type());
    taken.insert(renamed.name());
    inner.bind(v, renamed);
    v = renamed;
  }
  return {out, apply_term_subst(body, inner)};
}

}  // namespace

ProofTerm apply_term_subst(const ProofTerm& p, const TermSubst& s) {
  if (s.empty()) return p;
  using K = ProofTerm::Kind;
  auto sub = [&](std::size_t i) { return apply_term_subst(p.sub(i), s); };
  switch (p.kind()) {
    case K::Var:
    case K::Unit: return p;
    case K::Abort: return ProofTerm::abort(sub(0), subst_annot(p.annot(), s));
    case K::Lam: return ProofTerm::lam(p.name(), subst_annot(p.annot(), s), sub(0));
    case K::App:
    case K::Pair:
    case K::Proj1:
    case K::Proj2:
    case K::Case: {
      std::vector<ProofTerm> subs;
      for (std::size_t i = 0; i < p.subs().size(); ++i) subs.push_back(sub(i));
      return rebuild(p, std::move(subs));
    }
    case K::In1: return ProofTerm::in1(sub(0), subst_annot(p.annot(), s));
    case K::In2: return ProofTerm::in2(sub(0), subst_annot(p.annot(), s));
    case K::LamTerm: {
      Scoped sc = enter_term_binders(p.term_binders(), p.sub(0), s);
      return ProofTerm::lam_term(sc.binders[0], sc.body);
    }
    case K::AppTerm: return ProofTerm::app_term(sub(0), apply_term_subst(p.terms()[0], s));
    case K::Witness:
      return ProofTerm::witness(apply_term_subst(p.terms()[0], s), sub(0),
                                subst_annot(p.annot(), s));
    case K::Destruct: {
      Scoped sc = enter_term_binders(p.term_binders(), p.sub(1), s);
      return ProofTerm::destruct(sub(0), sc.binders[0], p.name(), sc.body);
    }
    case K::Refl: return ProofTerm::refl(apply_term_subst(p.terms()[0], s));
    case K::EqElim: {
      auto data = std::make_shared<EqElimData>(p.eq());
      TermSubst theta;
      for (const auto& [name, b] : p.eq().theta) theta.bind(b.var, apply_term_subst(b.value, s));
      data->theta = std::move(theta);
      data->sigma = apply_term_subst(p.eq().sigma, s);
      data->major = apply_term_subst(p.eq().major, s);
      return ProofTerm::eq_elim_canonical(data);
    }
    case K::MuIntro:
      return ProofTerm::mu_intro(apply_term_subst(p.op(), s), subst_terms(p.terms(), s), sub(0));
    case K::NuElim:
      return ProofTerm::nu_elim(apply_term_subst(p.op(), s), subst_terms(p.terms(), s), sub(0));
    case K::MuElim: {
      Scoped sc = enter_term_binders(p.term_binders(), p.sub(1), s);
      return ProofTerm::mu_elim(apply_term_subst(p.invariant(), s), sub(0), sc.binders, p.name(),
                                sc.body);
    }
    case K::NuIntro: {
      Scoped sc = enter_term_binders(p.term_binders(), p.sub(1), s);
      return ProofTerm::nu_intro(apply_term_subst(p.invariant(), s), sub(0), sc.binders, p.name(),
                                 sc.body, subst_annot(p.annot(), s));
    }
  }
  return p;
}

ProofSubst apply_term_subst(const ProofSubst& sigma, const TermSubst& s) {
  if (s.empty()) return sigma;
  ProofSubst out;
  for (const auto& [name, p] : sigma) out.bind(name, apply_term_subst(p, s));
  return out;
}

// ---------------------------------------------------------------------------
// Proof substitution

namespace {

struct ScopedProof {
  std::vector<Term> term_binders;
  std::vector<std::string> proof_binders;
  ProofTerm body;
};

ScopedProof enter_proof_binders(const std::vector<Term>& term_binders,
                                const std::vector<std::string>& proof_binders,
                                const ProofTerm& body, const ProofSubst& s) {
  std::set<std::string> body_fpv = free_proof_vars(body);
  ProofSubst inner;
  std::set<std::string> range_p;
  VarSet range_t;
  for (const auto& [name, value] : s) {
    bool shadowed =
        std::find(proof_binders.begin(), proof_binders.end(), name) != proof_binders.end();
    if (shadowed || body_fpv.count(name) == 0) continue;
    inner.bind(name, value);
    collect_free_proof_vars(value, range_p);
    collect_free_vars(value, range_t);
  }
  if (inner.empty()) return {term_binders, proof_binders, body};

  ProofTerm cur = body;
  std::vector<Term> tb = term_binders;
  std::set<std::string> taken_t = names_of(range_t);
  for (const auto& [name, type] : free_vars(body)) taken_t.insert(name);
  for (const Term& v : tb) taken_t.insert(v.name());
  for (Term& v : tb) {
    if (range_t.count(v.name()) == 0) continue;
    Term renamed = Term::var(fresh_name(v.name(), taken_t), v.type());
    taken_t.insert(renamed.name());
    cur = apply_term_subst(cur, TermSubst::single(v, renamed));
    v = renamed;
  }

  std::vector<std::string> pb = proof_binders;
  std::set<std::string> taken_p = range_p;
  taken_p.insert(body_fpv.begin(), body_fpv.end());
  taken_p.insert(pb.begin(), pb.end());
  for (std::string& a : pb) {
    if (range_p.count(a) == 0) continue;
    std::string renamed = fresh_name(a, taken_p);
    taken_p.insert(renamed);
    inner.bind(a, ProofTerm::var(renamed));
    a = renamed;
  }
  return {tb, pb, apply_proof_subst(cur, inner)};
}

}  // namespace

ProofTerm apply_proof_subst(const ProofTerm& p, const ProofSubst& s) {
  if (s.empty()) return p;
  using K = ProofTerm::Kind;
  auto sub = [&](std::size_t i) { return apply_proof_subst(p.sub(i), s); };
  switch (p.kind()) {
    case K::Var: {
      const ProofTerm* v = s.find(p.name());
      return v ? *v : p;
    }
    case K::Unit:
    case K::Refl: return p;
    case K::Lam: {
      ScopedProof sc = enter_proof_binders({}, {p.name()}, p.sub(0), s);
      return ProofTerm::lam(sc.proof_binders[0], p.annot(), sc.body);
    }
    case K::Case: {
      ScopedProof l = enter_proof_binders({}, {p.name()}, p.sub(1), s);
      ScopedProof r = enter_proof_binders({}, {p.name2()}, p.sub(2), s);
      return ProofTerm::case_of(sub(0), l.proof_binders[0], l.body, r.proof_binders[0], r.body);
    }
    case K::LamTerm: {
      ScopedProof sc = enter_proof_binders(p.term_binders(), {}, p.sub(0), s);
      return ProofTerm::lam_term(sc.term_binders[0], sc.body);
    }
    case K::Destruct: {
      ScopedProof sc = enter_proof_binders(p.term_binders(), {p.name()}, p.sub(1), s);
      return ProofTerm::destruct(sub(0), sc.term_binders[0], sc.proof_binders[0], sc.body);
    }
    case K::MuElim: {
      ScopedProof sc = enter_proof_binders(p.term_binders(), {p.name()}, p.sub(1), s);
      return ProofTerm::mu_elim(p.invariant(), sub(0), sc.term_binders, sc.proof_binders[0],
                                sc.body);
    }
    case K::NuIntro: {
      ScopedProof sc = enter_proof_binders(p.term_binders(), {p.name()}, p.sub(1), s);
      return ProofTerm::nu_intro(p.invariant(), sub(0), sc.term_binders, sc.proof_binders[0],
                                 sc.body, p.annot());
    }
    default: {
      std::vector<ProofTerm> subs;
      for (std::size_t i = 0; i < p.subs().size(); ++i) subs.push_back(sub(i));
      return rebuild(p, std::move(subs));
    }
  }
}

ProofSubst compose(const ProofSubst& first, const ProofSubst& second) {
  ProofSubst out;
  for (const auto& [name, p] : first) out.bind(name, apply_proof_subst(p, second));
  return out;
}

// ---------------------------------------------------------------------------
// α-equivalence

namespace {

long find_bound(const NameEnv& env, const std::string& name, bool left) {
  for (long i = static_cast<long>(env.size()) - 1; i >= 0; --i) {
    const auto& e = env[static_cast<std::size_t>(i)];
    if ((left ? e.first : e.second) == name) return i;
  }
  return -1;
}

bool formula_eq(const Formula& a, const Formula& b, NameEnv& te) {
  NameEnv pe;
  return alpha_eq(a, b, te, pe);
}

bool annot_eq(const std::optional<Formula>& a, const std::optional<Formula>& b, NameEnv& te) {
  if (!a || !b) return true;
  return formula_eq(*a, *b, te);
}

bool predicate_eq(const Predicate& a, const Predicate& b, NameEnv& te) {
  if (a.params.size() != b.params.size()) return false;
  std::size_t mark = te.size();
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    if (a.params[i].type() != b.params[i].type()) return false;
    te.emplace_back(a.params[i].name(), b.params[i].name());
  }
  bool eq = formula_eq(a.body, b.body, te);
  te.resize(mark);
  return eq;
}

bool operator_eq(const PredOperator& a, const PredOperator& b, NameEnv& te) {
  return formula_eq(Formula::mu(a, {}), Formula::mu(b, {}), te);
}

bool terms_eq(const std::vector<Term>& a, const std::vector<Term>& b, NameEnv& te) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!alpha_eq(a[i], b[i], te)) return false;
  return true;
}

bool proof_eq(const ProofTerm& a, const ProofTerm& b, NameEnv& te, NameEnv& pe);

// Compares bodies under paired term and proof binders.
bool under(const ProofTerm& a, const ProofTerm& b, const std::vector<Term>& ta,
           const std::vector<Term>& tb, const std::vector<std::string>& pa,
           const std::vector<std::string>& pb, NameEnv& te, NameEnv& pe) {
  if (ta.size() != tb.size()) return false;
  std::size_t tmark = te.size();
  std::size_t pmark = pe.size();
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (ta[i].type() != tb[i].type()) {
      te.resize(tmark);
      return false;
    }
    te.emplace_back(ta[i].name(), tb[i].name());
  }
  for (std::size_t i = 0; i < pa.size(); ++i) pe.emplace_back(pa[i], pb[i]);
  bool eq = proof_eq(a, b, te, pe);
  te.resize(tmark);
  pe.resize(pmark);
  return eq;
}

bool eq_elim_eq(const EqElimData& a, const EqElimData& b, NameEnv& te, NameEnv& pe) {
  if (!alpha_eq(a.ctx, b.ctx) || !alpha_eq(a.u, b.u) || !alpha_eq(a.v, b.v) ||
      !alpha_eq(a.goal, b.goal))
    return false;
  if (a.theta.size() != b.theta.size() || a.sigma.size() != b.sigma.size() ||
      a.branches.size() != b.branches.size())
    return false;
  for (auto ia = a.theta.begin(), ib = b.theta.begin(); ia != a.theta.end(); ++ia, ++ib)
    if (ia->first != ib->first || !alpha_eq(ia->second.value, ib->second.value, te)) return false;
  for (auto ia = a.sigma.begin(), ib = b.sigma.begin(); ia != a.sigma.end(); ++ia, ++ib)
    if (ia->first != ib->first || !proof_eq(ia->second, ib->second, te, pe)) return false;
  if (!proof_eq(a.major, b.major, te, pe)) return false;
  for (std::size_t i = 0; i < a.branches.size(); ++i) {
    if (!alpha_eq(a.branches[i].unifier, b.branches[i].unifier)) return false;
    if (!alpha_eq(a.branches[i].proof, b.branches[i].proof)) return false;
  }
  return true;
}

bool proof_eq(const ProofTerm& a, const ProofTerm& b, NameEnv& te, NameEnv& pe) {
  if (te.empty() && pe.empty() && a.same_node(b)) return true;
  if (a.kind() != b.kind()) return false;
  using K = ProofTerm::Kind;
  auto subs_eq = [&](std::size_t from) {
    for (std::size_t i = from; i < a.subs().size(); ++i)
      if (!proof_eq(a.sub(i), b.sub(i), te, pe)) return false;
    return true;
  };
  switch (a.kind()) {
    case K::Var: {
      long ia = find_bound(pe, a.name(), true);
      long ib = find_bound(pe, b.name(), false);
      return ia == ib && (ia >= 0 || a.name() == b.name());
    }
    case K::Unit: return true;
    case K::Abort:
    case K::In1:
    case K::In2: return annot_eq(a.annot(), b.annot(), te) && subs_eq(0);
    case K::Lam:
      return annot_eq(a.annot(), b.annot(), te) &&
             under(a.sub(0), b.sub(0), {}, {}, {a.name()}, {b.name()}, te, pe);
    case K::App:
    case K::Pair:
    case K::Proj1:
    case K::Proj2: return subs_eq(0);
    case K::Case:
      return proof_eq(a.sub(0), b.sub(0), te, pe) &&
             under(a.sub(1), b.sub(1), {}, {}, {a.name()}, {b.name()}, te, pe) &&
             under(a.sub(2), b.sub(2), {}, {}, {a.name2()}, {b.name2()}, te, pe);
    case K::LamTerm:
      return under(a.sub(0), b.sub(0), a.term_binders(), b.term_binders(), {}, {}, te, pe);
    case K::AppTerm:
    case K::Refl: return terms_eq(a.terms(), b.terms(), te) && subs_eq(0);
    case K::Witness:
      return annot_eq(a.annot(), b.annot(), te) && terms_eq(a.terms(), b.terms(), te) &&
             subs_eq(0);
    case K::Destruct:
      return proof_eq(a.sub(0), b.sub(0), te, pe) &&
             under(a.sub(1), b.sub(1), a.term_binders(), b.term_binders(), {a.name()}, {b.name()},
                   te, pe);
    case K::EqElim: return eq_elim_eq(a.eq(), b.eq(), te, pe);
    case K::MuIntro:
    case K::NuElim:
      return operator_eq(a.op(), b.op(), te) && terms_eq(a.terms(), b.terms(), te) && subs_eq(0);
    case K::MuElim:
    case K::NuIntro:
      return predicate_eq(a.invariant(), b.invariant(), te) && annot_eq(a.annot(), b.annot(), te) &&
             proof_eq(a.sub(0), b.sub(0), te, pe) &&
             under(a.sub(1), b.sub(1), a.term_binders(), b.term_binders(), {a.name()}, {b.name()},
                   te, pe);
  }
  return false;
}

}  // namespace

bool alpha_eq(const ProofTerm& a, const ProofTerm& b) {
  NameEnv te, pe;
  return proof_eq(a, b, te, pe);
}

// ---------------------------------------------------------------------------
// Printing

const char* to_string(ProofTerm::Kind kind) {
  using K = ProofTerm::Kind;
  switch (kind) {
    case K::Var: return "var";
    case K::Unit: return "unit";
    case K::Abort: return "abort";
    case K::Lam: return "lam";
    case K::App: return "app";
    case K::Pair: return "pair";
    case K::Proj1: return "fst";
    case K::Proj2: return "snd";
    case K::In1: return "inl";
    case K::In2: return "inr";
    case K::Case: return "case";
    case K::LamTerm: return "lamx";
    case K::AppTerm: return "tapp";
    case K::Witness: return "wit";
    case K::Destruct: return "dest";
    case K::Refl: return "refl";
    case K::EqElim: return "eqcase";
    case K::MuIntro: return "fold";
    case K::MuElim: return "iter";
    case K::NuIntro: return "coiter";
    case K::NuElim: return "unfold";
  }
  return "?";
}

namespace {

std::string binder_str(const Term& v) { return v.name() + ":" + v.type().str(); }

std::string binders_str(const std::vector<Term>& vs) {
  std::string out;
  for (const Term& v : vs) out += binder_str(v) + " ";
  return out;
}

std::string subst_str(const TermSubst& s, const Signature* sig) {
  std::string out = "[";
  bool first = true;
  for (const auto& [name, b] : s) {
    if (!first) out += ", ";
    first = false;
    out += name + " := " + to_string(b.value, sig);
  }
  return out + "]";
}

std::string terms_str(const std::vector<Term>& ts, const Signature* sig) {
  std::string out;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i) out += ", ";
    out += to_string(ts[i], sig);
  }
  return out;
}

std::string fixed_point_str(const char* kw, const PredOperator& op, const Signature* sig) {
  return std::string(kw) + to_string(op, sig);
}

void print(const ProofTerm& p, std::ostream& os, const Signature* sig);

std::string str(const ProofTerm& p, const Signature* sig) {
  std::ostringstream os;
  print(p, os, sig);
  return os.str();
}

std::string annot_str(const std::optional<Formula>& f, const Signature* sig) {
  return f ? "{" + to_string(*f, sig) + "}" : "";
}

void print(const ProofTerm& p, std::ostream& os, const Signature* sig) {
  using K = ProofTerm::Kind;
  switch (p.kind()) {
    case K::Var: os << p.name(); return;
    case K::Unit: os << "unit"; return;
    case K::Abort: os << "abort" << annot_str(p.annot(), sig) << "(" << str(p.sub(0), sig) << ")"; return;
    case K::Lam:
      os << "(lam " << p.name();
      if (p.annot()) os << ": " << to_string(*p.annot(), sig);
      os << ". " << str(p.sub(0), sig) << ")";
      return;
    case K::App: os << "app(" << str(p.sub(0), sig) << ", " << str(p.sub(1), sig) << ")"; return;
    case K::Pair: os << "pair(" << str(p.sub(0), sig) << ", " << str(p.sub(1), sig) << ")"; return;
    case K::Proj1: os << "fst(" << str(p.sub(0), sig) << ")"; return;
    case K::Proj2: os << "snd(" << str(p.sub(0), sig) << ")"; return;
    case K::In1:
    case K::In2:
      os << to_string(p.kind()) << annot_str(p.annot(), sig) << "(" << str(p.sub(0), sig) << ")";
      return;
    case K::Case:
      os << "case(" << str(p.sub(0), sig) << ", " << p.name() << ". " << str(p.sub(1), sig) << ", "
         << p.name2() << ". " << str(p.sub(2), sig) << ")";
      return;
    case K::LamTerm:
      os << "(lamx " << binder_str(p.term_binders()[0]) << ". " << str(p.sub(0), sig) << ")";
      return;
    case K::AppTerm:
      os << "tapp(" << str(p.sub(0), sig) << ", " << to_string(p.terms()[0], sig) << ")";
      return;
    case K::Witness:
      os << "wit" << annot_str(p.annot(), sig) << "(" << to_string(p.terms()[0], sig) << ", "
         << str(p.sub(0), sig) << ")";
      return;
    case K::Destruct:
      os << "dest(" << str(p.sub(0), sig) << ", " << binder_str(p.term_binders()[0]) << ". "
         << p.name() << ". " << str(p.sub(1), sig) << ")";
      return;
    case K::Refl: os << "refl(" << to_string(p.terms()[0], sig) << ")"; return;
    case K::EqElim: {
      const EqElimData& d = p.eq();
      os << "eqcase { vars";
      for (const auto& [name, type] : d.scope) os << " " << name << ":" << type.str();
      os << "; ctx";
      bool first = true;
      for (const auto& [name, f] : d.ctx.entries()) {
        os << (first ? " " : ", ") << name << ": " << to_string(f, sig);
        first = false;
      }
      os << "; theta " << subst_str(d.theta, sig) << "; sigma [";
      first = true;
      for (const auto& [name, q] : d.sigma) {
        os << (first ? "" : ", ") << name << " := " << str(q, sig);
        first = false;
      }
      os << "]; eq " << to_string(d.u, sig) << " = " << to_string(d.v, sig) << "; goal "
         << to_string(d.goal, sig) << "; major " << str(d.major, sig) << ";";
      for (const EqBranch& b : d.branches) {
        os << " branch {";
        first = true;
        for (const auto& [name, type] : branch_vars(d, b)) {
          os << (first ? "" : " ") << name << ":" << type.str();
          first = false;
        }
        os << "} " << subst_str(b.unifier, sig) << " => " << str(b.proof, sig) << ";";
      }
      os << " }";
      return;
    }
    case K::MuIntro:
    case K::NuElim:
      os << to_string(p.kind()) << "["
         << fixed_point_str(p.is(K::MuIntro) ? "mu" : "nu", p.op(), sig) << "]("
         << terms_str(p.terms(), sig) << "; " << str(p.sub(0), sig) << ")";
      return;
    case K::MuElim:
    case K::NuIntro:
      os << to_string(p.kind()) << "[" << to_string(p.invariant(), sig) << "]"
         << annot_str(p.annot(), sig) << "(" << str(p.sub(0), sig) << ", "
         << binders_str(p.term_binders()) << p.name() << ". " << str(p.sub(1), sig) << ")";
      return;
  }
}

}  // namespace

std::string to_string(const ProofTerm& p, const Signature* sig) { return str(p, sig); }

std::string to_string(const Context& ctx, const Signature* sig) {
  std::string out;
  for (const auto& [name, f] : ctx.entries()) {
    if (!out.empty()) out += ", ";
    out += name + ": " + to_string(f, sig);
  }
  return out;
}

}  // namespace munj
