#include "munj/term.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace munj {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Type: return "type error";
    case ErrorKind::NonMonotonic: return "non-monotonic operator";
    case ErrorKind::StrayPredicateVar: return "stray predicate variable";
    case ErrorKind::Malformed: return "malformed";
    case ErrorKind::Rule: return "invalid rewrite rule";
    case ErrorKind::Fuel: return "fuel exhausted";
    case ErrorKind::DemandAnnotation: return "explicit unifier set required";
    case ErrorKind::Check: return "check failed";
    case ErrorKind::StuckEqualityRedex: return "stuck equality redex";
    case ErrorKind::Admission: return "admission rejected";
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

// ---------------------------------------------------------------------------
// TermType

struct TermType::Node {
  Kind kind;
  std::string name;
  std::optional<TermType> from;
  std::optional<TermType> to;
};

TermType TermType::base(std::string name) {
  return TermType(std::make_shared<const Node>(Node{Kind::Base, std::move(name), {}, {}}));
}

TermType TermType::prop() {
  static const TermType o(std::make_shared<const Node>(Node{Kind::Prop, "o", {}, {}}));
  return o;
}

TermType TermType::arrow(TermType from, TermType to) {
  return TermType(
      std::make_shared<const Node>(Node{Kind::Arrow, "", std::move(from), std::move(to)}));
}

TermType TermType::arrows(const std::vector<TermType>& args, TermType result) {
  for (auto it = args.rbegin(); it != args.rend(); ++it) result = arrow(*it, result);
  return result;
}

TermType::Kind TermType::kind() const { return node_->kind; }
const std::string& TermType::name() const { return node_->name; }
const TermType& TermType::from() const { return *node_->from; }
const TermType& TermType::to() const { return *node_->to; }

bool TermType::is_term_type() const {
  switch (kind()) {
    case Kind::Base: return true;
    case Kind::Prop: return false;
    case Kind::Arrow: return from().is_term_type() && to().is_term_type();
  }
  return false;
}

std::pair<std::vector<TermType>, TermType> TermType::uncurry() const {
  std::vector<TermType> args;
  TermType cur = *this;
  while (cur.is_arrow()) {
    args.push_back(cur.from());
    cur = cur.to();
  }
  return {std::move(args), cur};
}

std::string TermType::str() const {
  switch (kind()) {
    case Kind::Base: return name();
    case Kind::Prop: return "o";
    case Kind::Arrow: {
      std::string lhs = from().str();
      if (from().is_arrow()) lhs = "(" + lhs + ")";
      return lhs + " -> " + to().str();
    }
  }
  return "?";
}

bool operator==(const TermType& a, const TermType& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermType::Kind::Base: return a.name() == b.name();
    case TermType::Kind::Prop: return true;
    case TermType::Kind::Arrow: return a.from() == b.from() && a.to() == b.to();
  }
  return false;
}

// ---------------------------------------------------------------------------
// Term

struct Term::Node {
  Kind kind;
  std::string name;
  TermType type;
  std::optional<Term> left;   // App: function. Lam: body.
  std::optional<Term> right;  // App: argument.
  std::size_t size;
};

Term Term::var(std::string name, TermType type) {
  return Term(std::make_shared<const Node>(
      Node{Kind::Var, std::move(name), std::move(type), {}, {}, 1}));
}

Term Term::constant(std::string name, TermType type) {
  return Term(std::make_shared<const Node>(
      Node{Kind::Const, std::move(name), std::move(type), {}, {}, 1}));
}

Term Term::app(Term fn, Term arg) {
  std::size_t size = 1 + fn.size() + arg.size();
  return Term(std::make_shared<const Node>(
      Node{Kind::App, "", TermType::prop(), std::move(fn), std::move(arg), size}));
}

Term Term::apps(Term head, const std::vector<Term>& args) {
  for (const Term& a : args) head = app(std::move(head), a);
  return head;
}

Term Term::lam(const Term& binder, Term body) {
  if (!binder.is_var()) fail(ErrorKind::Malformed, "λ-binder must be a variable");
  std::size_t size = 1 + body.size();
  return Term(std::make_shared<const Node>(
      Node{Kind::Lam, binder.name(), binder.type(), std::move(body), {}, size}));
}

Term::Kind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const TermType& Term::type() const { return node_->type; }
const Term& Term::fn() const { return *node_->left; }
const Term& Term::arg() const { return *node_->right; }
const Term& Term::body() const { return *node_->left; }
Term Term::binder() const { return var(node_->name, node_->type); }
std::size_t Term::size() const { return node_->size; }

std::pair<Term, std::vector<Term>> Term::spine() const {
  std::vector<Term> args;
  Term cur = *this;
  while (cur.is_app()) {
    args.push_back(cur.arg());
    Term next = cur.fn();
    cur = next;
  }
  std::reverse(args.begin(), args.end());
  return {cur, std::move(args)};
}

// ---------------------------------------------------------------------------
// Free variables and names

namespace {

void free_vars_rec(const Term& t, std::vector<std::string>& bound, VarSet& out) {
  switch (t.kind()) {
    case Term::Kind::Var:
      if (std::find(bound.begin(), bound.end(), t.name()) == bound.end())
        out.emplace(t.name(), t.type());
      return;
    case Term::Kind::Const: return;
    case Term::Kind::App:
      free_vars_rec(t.fn(), bound, out);
      free_vars_rec(t.arg(), bound, out);
      return;
    case Term::Kind::Lam:
      bound.push_back(t.name());
      free_vars_rec(t.body(), bound, out);
      bound.pop_back();
      return;
  }
}

}  // namespace

void collect_free_vars(const Term& t, VarSet& out) {
  std::vector<std::string> bound;
  free_vars_rec(t, bound, out);
}

VarSet free_vars(const Term& t) {
  VarSet out;
  collect_free_vars(t, out);
  return out;
}

bool occurs_free(const std::string& name, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var: return t.name() == name;
    case Term::Kind::Const: return false;
    case Term::Kind::App: return occurs_free(name, t.fn()) || occurs_free(name, t.arg());
    case Term::Kind::Lam: return t.name() != name && occurs_free(name, t.body());
  }
  return false;
}

void collect_constants(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Var: return;
    case Term::Kind::Const: out.insert(t.name()); return;
    case Term::Kind::App:
      collect_constants(t.fn(), out);
      collect_constants(t.arg(), out);
      return;
    case Term::Kind::Lam: collect_constants(t.body(), out); return;
  }
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  if (!base.empty() && taken.count(base) == 0) return base;
  std::string stem = base;
  while (stem.size() > 1 && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
  if (stem.empty()) stem = "v";
  for (std::size_t i = 1;; ++i) {
    std::string candidate = stem + std::to_string(i);
    if (taken.count(candidate) == 0) return candidate;
  }
}

std::set<std::string> names_of(const VarSet& vars) {
  std::set<std::string> out;
  for (const auto& [name, type] : vars) out.insert(name);
  return out;
}

// ---------------------------------------------------------------------------
// Typing

TermType type_of(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const: return t.type();
    case Term::Kind::App: {
      TermType f = type_of(t.fn());
      if (!f.is_arrow()) fail(ErrorKind::Type, "not a function: " + to_string(t.fn()));
      TermType a = type_of(t.arg());
      if (f.from() != a)
        fail(ErrorKind::Type, "argument type mismatch in " + to_string(t) + ": expected " +
                                  f.from().str() + ", got " + a.str());
      return f.to();
    }
    case Term::Kind::Lam: return TermType::arrow(t.type(), type_of(t.body()));
  }
  fail(ErrorKind::Type, "unknown term");
}

namespace {

TermType infer_rec(const Signature& sig, TypeContext& ctx, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = ctx.find(t.name());
      if (it == ctx.end()) fail(ErrorKind::Type, "unbound variable " + t.name());
      if (it->second != t.type())
        fail(ErrorKind::Type, "variable " + t.name() + " used at type " + t.type().str() +
                                  " but bound at " + it->second.str());
      return it->second;
    }
    case Term::Kind::Const: {
      const TermType* declared = sig.constant_type(t.name());
      if (declared == nullptr) fail(ErrorKind::Type, "unknown constant " + t.name());
      if (*declared != t.type())
        fail(ErrorKind::Type, "constant " + t.name() + " annotated with " + t.type().str() +
                                  " but declared " + declared->str());
      return *declared;
    }
    case Term::Kind::App: {
      TermType f = infer_rec(sig, ctx, t.fn());
      if (!f.is_arrow()) fail(ErrorKind::Type, "not a function: " + to_string(t.fn()));
      TermType a = infer_rec(sig, ctx, t.arg());
      if (f.from() != a)
        fail(ErrorKind::Type, "argument type mismatch in " + to_string(t) + ": expected " +
                                  f.from().str() + ", got " + a.str());
      return f.to();
    }
    case Term::Kind::Lam: {
      if (!t.type().is_term_type())
        fail(ErrorKind::Type, "binder " + t.name() + " has non-term type " + t.type().str());
      sig.check_type(t.type());
      auto saved = ctx.find(t.name()) == ctx.end()
                       ? std::nullopt
                       : std::optional<TermType>(ctx.at(t.name()));
      ctx.insert_or_assign(t.name(), t.type());
      TermType body = infer_rec(sig, ctx, t.body());
      if (saved) ctx.insert_or_assign(t.name(), *saved);
      else ctx.erase(t.name());
      return TermType::arrow(t.type(), body);
    }
  }
  fail(ErrorKind::Type, "unknown term");
}

}  // namespace

TermType infer_term_type(const Signature& sig, const TypeContext& ctx, const Term& t) {
  TypeContext scratch = ctx;
  return infer_rec(sig, scratch, t);
}

TermType infer_term_type(const Signature& sig, const Term& t) {
  VarSet fv = free_vars(t);
  for (const auto& [name, type] : fv) {
    if (!type.is_term_type())
      fail(ErrorKind::Type, "variable " + name + " has non-term type " + type.str());
    sig.check_type(type);
  }
  return infer_term_type(sig, fv, t);
}

// ---------------------------------------------------------------------------
// α-equivalence

namespace {

// Index of the innermost binder pairing for `name` on the given side, or -1.
long lookup_bound(const std::vector<std::pair<std::string, std::string>>& env,
                  const std::string& name, bool left) {
  for (long i = static_cast<long>(env.size()) - 1; i >= 0; --i) {
    const auto& p = env[static_cast<std::size_t>(i)];
    if ((left ? p.first : p.second) == name) return i;
  }
  return -1;
}

}  // namespace

bool alpha_eq(const Term& a, const Term& b,
              std::vector<std::pair<std::string, std::string>>& env) {
  if (env.empty() && a.same_node(b)) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Var: {
      long ia = lookup_bound(env, a.name(), true);
      long ib = lookup_bound(env, b.name(), false);
      if (ia != ib) return false;
      if (ia >= 0) return true;
      return a.name() == b.name() && a.type() == b.type();
    }
    case Term::Kind::Const: return a.name() == b.name();
    case Term::Kind::App:
      return alpha_eq(a.fn(), b.fn(), env) && alpha_eq(a.arg(), b.arg(), env);
    case Term::Kind::Lam: {
      if (a.type() != b.type()) return false;
      env.emplace_back(a.name(), b.name());
      bool eq = alpha_eq(a.body(), b.body(), env);
      env.pop_back();
      return eq;
    }
  }
  return false;
}

bool alpha_eq(const Term& a, const Term& b) {
  std::vector<std::pair<std::string, std::string>> env;
  return alpha_eq(a, b, env);
}

// ---------------------------------------------------------------------------
// Substitution

TermSubst TermSubst::single(const Term& var, Term value) {
  TermSubst s;
  s.bind(var, std::move(value));
  return s;
}

void TermSubst::bind(const Term& var, Term value) {
  if (!var.is_var()) fail(ErrorKind::Malformed, "substitution domain must be a variable");
  TermType vt = type_of(value);
  if (vt != var.type())
    fail(ErrorKind::Type, "substitution for " + var.name() + " : " + var.type().str() +
                              " has type " + vt.str());
  map_.insert_or_assign(var.name(), Binding{var, std::move(value)});
}

const Term* TermSubst::find(const std::string& name) const {
  auto it = map_.find(name);
  return it == map_.end() ? nullptr : &it->second.value;
}

VarSet TermSubst::domain() const {
  VarSet out;
  for (const auto& [name, b] : map_) out.emplace(name, b.var.type());
  return out;
}

void TermSubst::collect_range_vars(VarSet& out) const {
  for (const auto& [name, b] : map_) collect_free_vars(b.value, out);
}

TermSubst TermSubst::restricted(const VarSet& vars) const {
  TermSubst out;
  for (const auto& [name, b] : map_)
    if (vars.count(name) != 0) out.map_.emplace(name, b);
  return out;
}

TermSubst TermSubst::totalized(const VarSet& vars) const {
  TermSubst out = restricted(vars);
  for (const auto& [name, type] : vars) {
    if (out.map_.count(name) == 0) {
      Term v = Term::var(name, type);
      out.map_.emplace(name, Binding{v, v});
    }
  }
  return out;
}

std::string TermSubst::str() const {
  std::string out = "[";
  bool first = true;
  for (const auto& [name, b] : map_) {
    if (!first) out += ", ";
    first = false;
    out += name + " := " + to_string(b.value);
  }
  return out + "]";
}

namespace {

Term subst_rec(const Term& t, const TermSubst& s) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      const Term* v = s.find(t.name());
      return v ? *v : t;
    }
    case Term::Kind::Const: return t;
    case Term::Kind::App: {
      Term f = subst_rec(t.fn(), s);
      Term a = subst_rec(t.arg(), s);
      if (f.same_node(t.fn()) && a.same_node(t.arg())) return t;
      return Term::app(std::move(f), std::move(a));
    }
    case Term::Kind::Lam: {
      // Only bindings for variables free in the body matter.
      VarSet body_fv = free_vars(t.body());
      body_fv.erase(t.name());
      TermSubst inner;
      VarSet range;
      for (const auto& [name, b] : s) {
        if (body_fv.count(name) != 0) {
          inner.bind(b.var, b.value);
          collect_free_vars(b.value, range);
        }
      }
      if (inner.empty()) return t;
      if (range.count(t.name()) == 0) return Term::lam(t.binder(), subst_rec(t.body(), inner));
      std::set<std::string> taken = names_of(range);
      for (const auto& [name, type] : body_fv) taken.insert(name);
      taken.insert(t.name());
      Term renamed = Term::var(fresh_name(t.name(), taken), t.type());
      inner.bind(t.binder(), renamed);
      return Term::lam(renamed, subst_rec(t.body(), inner));
    }
  }
  return t;
}

}  // namespace

Term substitute(const Term& t, const TermSubst& s) {
  if (s.empty()) return t;
  return subst_rec(t, s);
}

Term apply_term_subst(const Term& t, const TermSubst& s) {
  if (s.empty()) return t;
  return beta_normalize(substitute(t, s));
}

TermSubst compose(const TermSubst& first, const TermSubst& second) {
  TermSubst out;
  for (const auto& [name, b] : first) out.bind(b.var, apply_term_subst(b.value, second));
  for (const auto& [name, b] : second)
    if (!first.contains(name)) out.bind(b.var, b.value);
  return out;
}

bool alpha_eq(const TermSubst& a, const TermSubst& b) {
  if (a.size() != b.size()) return false;
  auto ib = b.begin();
  for (auto ia = a.begin(); ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first || !alpha_eq(ia->second.value, ib->second.value)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// β-normalization (normal order)

namespace {

Term beta_rec(const Term& t, Fuel& fuel) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const: return t;
    case Term::Kind::Lam: {
      Term body = beta_rec(t.body(), fuel);
      if (body.same_node(t.body())) return t;
      return Term::lam(t.binder(), std::move(body));
    }
    case Term::Kind::App: {
      auto [head, args] = t.spine();
      if (head.is_lam()) {
        fuel.tick("beta-normalization");
        Term reduced = substitute(head.body(), TermSubst::single(head.binder(), args.front()));
        return beta_rec(Term::apps(std::move(reduced), {args.begin() + 1, args.end()}), fuel);
      }
      bool changed = false;
      std::vector<Term> nargs;
      nargs.reserve(args.size());
      for (const Term& a : args) {
        nargs.push_back(beta_rec(a, fuel));
        changed = changed || !nargs.back().same_node(a);
      }
      if (!changed) return t;
      return Term::apps(head, nargs);
    }
  }
  return t;
}

}  // namespace

Term beta_normalize(const Term& t, Fuel& fuel) { return beta_rec(t, fuel); }

Term beta_normalize(const Term& t, std::size_t fuel) {
  Fuel f(fuel);
  return beta_rec(t, f);
}

bool is_beta_normal(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const: return true;
    case Term::Kind::Lam: return is_beta_normal(t.body());
    case Term::Kind::App:
      return !t.fn().is_lam() && is_beta_normal(t.fn()) && is_beta_normal(t.arg());
  }
  return true;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int infix_level(const std::string& symbol) { return symbol == "*" ? 2 : 1; }

// `level`: 0 = top, otherwise the minimum precedence that needs no parens
// (3 = application argument).
void print_rec(const Term& t, std::ostream& os, int level, const Signature* sig) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const: os << t.name(); return;
    case Term::Kind::App: {
      auto [head, args] = t.spine();
      const std::string* infix =
          (sig != nullptr && head.is_const() && args.size() == 2) ? sig->infix_symbol(head.name())
                                                                   : nullptr;
      if (infix != nullptr) {
        int mine = infix_level(*infix);
        bool parens = level > mine;
        if (parens) os << '(';
        print_rec(args[0], os, mine, sig);
        os << ' ' << *infix << ' ';
        print_rec(args[1], os, mine + 1, sig);
        if (parens) os << ')';
        return;
      }
      bool parens = level >= 3;
      if (parens) os << '(';
      print_rec(head, os, 3, sig);
      for (const Term& a : args) {
        os << ' ';
        print_rec(a, os, 3, sig);
      }
      if (parens) os << ')';
      return;
    }
    case Term::Kind::Lam:
      os << "(\\" << t.name() << ":" << t.type().str() << ". ";
      print_rec(t.body(), os, 0, sig);
      os << ')';
      return;
  }
}

}  // namespace

std::string to_string(const Term& t, const Signature* sig) {
  std::ostringstream os;
  print_rec(t, os, 0, sig);
  return os.str();
}

// ---------------------------------------------------------------------------
// Signature

void Signature::check_type(const TermType& type) const {
  switch (type.kind()) {
    case TermType::Kind::Base:
      if (!has_sort(type.name())) fail(ErrorKind::Type, "unknown sort " + type.name());
      return;
    case TermType::Kind::Prop: return;
    case TermType::Kind::Arrow:
      check_type(type.from());
      check_type(type.to());
      return;
  }
}

bool Signature::declares(const std::string& name) const {
  return constant_index_.count(name) != 0 || predicate_index_.count(name) != 0;
}

void Signature::add_sort(const std::string& name) {
  if (name == "o") fail(ErrorKind::Type, "`o` is reserved for propositions");
  if (!sorts_.insert(name).second) fail(ErrorKind::Type, "duplicate sort " + name);
}

void Signature::add_constant(const std::string& name, const TermType& type) {
  if (declares(name)) fail(ErrorKind::Type, "duplicate name " + name);
  if (!type.is_term_type())
    fail(ErrorKind::Type, "constant " + name + " must have a term type, got " + type.str());
  check_type(type);
  constant_index_.emplace(name, constants_.size());
  constants_.emplace_back(name, type);
}

void Signature::add_predicate(const std::string& name, const TermType& type) {
  if (declares(name)) fail(ErrorKind::Type, "duplicate name " + name);
  auto [args, result] = type.uncurry();
  if (!result.is_prop())
    fail(ErrorKind::Type, "predicate " + name + " must end in o, got " + type.str());
  for (const TermType& a : args) {
    if (!a.is_term_type())
      fail(ErrorKind::Type, "predicate " + name + " has a non-term argument type " + a.str());
    check_type(a);
  }
  predicate_index_.emplace(name, predicates_.size());
  predicates_.emplace_back(name, std::move(args));
}

void Signature::set_infix(const std::string& symbol, const std::string& constant) {
  if (constant_type(constant) == nullptr)
    fail(ErrorKind::Type, "infix symbol bound to unknown constant " + constant);
  infix_to_const_.insert_or_assign(symbol, constant);
  const_to_infix_.insert_or_assign(constant, symbol);
}

const TermType* Signature::constant_type(const std::string& name) const {
  auto it = constant_index_.find(name);
  return it == constant_index_.end() ? nullptr : &constants_[it->second].second;
}

const std::vector<TermType>* Signature::predicate_arity(const std::string& name) const {
  auto it = predicate_index_.find(name);
  return it == predicate_index_.end() ? nullptr : &predicates_[it->second].second;
}

const std::string* Signature::infix_constant(const std::string& symbol) const {
  auto it = infix_to_const_.find(symbol);
  return it == infix_to_const_.end() ? nullptr : &it->second;
}

const std::string* Signature::infix_symbol(const std::string& constant) const {
  auto it = const_to_infix_.find(constant);
  return it == const_to_infix_.end() ? nullptr : &it->second;
}

Term Signature::make_constant(const std::string& name) const {
  const TermType* t = constant_type(name);
  if (t == nullptr) fail(ErrorKind::Type, "unknown constant " + name);
  return Term::constant(name, *t);
}

}  // namespace munj
