#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "munj/error.hpp"

namespace munj {

// Step budget shared by the normalization procedures. Exhaustion raises
// ErrorKind::Fuel instead of looping.
class Fuel {
 public:
  explicit Fuel(std::size_t budget) : remaining_(budget), budget_(budget) {}

  void tick(const char* what) {
    if (remaining_ == 0) {
      fail(ErrorKind::Fuel,
           std::string(what) + ": fuel exhausted after " +
               std::to_string(budget_) + " steps");
    }
    --remaining_;
  }
  std::size_t used() const { return budget_ - remaining_; }
  std::size_t budget() const { return budget_; }

 private:
  std::size_t remaining_;
  std::size_t budget_;
};

inline constexpr std::size_t kDefaultBetaFuel = 1'000'000;

// Simple types: base sorts, the proposition sort `o`, and arrows.
class TermType {
 public:
  enum class Kind { Base, Prop, Arrow };

  static TermType base(std::string name);
  static TermType prop();
  static TermType arrow(TermType from, TermType to);
  // γ₁ → … → γₙ → result
  static TermType arrows(const std::vector<TermType>& args, TermType result);

  Kind kind() const;
  bool is_base() const { return kind() == Kind::Base; }
  bool is_prop() const { return kind() == Kind::Prop; }
  bool is_arrow() const { return kind() == Kind::Arrow; }

  const std::string& name() const;
  const TermType& from() const;
  const TermType& to() const;

  // A term type never mentions `o`.
  bool is_term_type() const;
  // Splits γ₁ → … → γₙ → r into ({γᵢ}, r) with r not an arrow.
  std::pair<std::vector<TermType>, TermType> uncurry() const;

  std::string str() const;

  friend bool operator==(const TermType& a, const TermType& b);
  friend bool operator!=(const TermType& a, const TermType& b) { return !(a == b); }

 private:
  struct Node;
  explicit TermType(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Simply-typed λ-terms. Variables and constants carry their type, so a term
// is self-describing; Signature and contexts are used to validate those
// annotations. Variable identity is the name.
class Term {
 public:
  enum class Kind { Var, Const, App, Lam };

  static Term var(std::string name, TermType type);
  static Term constant(std::string name, TermType type);
  static Term app(Term fn, Term arg);
  static Term apps(Term head, const std::vector<Term>& args);
  // `binder` must be a variable.
  static Term lam(const Term& binder, Term body);

  Kind kind() const;
  bool is_var() const { return kind() == Kind::Var; }
  bool is_const() const { return kind() == Kind::Const; }
  bool is_app() const { return kind() == Kind::App; }
  bool is_lam() const { return kind() == Kind::Lam; }

  // Var, Const: the symbol. Lam: the binder name.
  const std::string& name() const;
  // Var, Const: declared type. Lam: binder type.
  const TermType& type() const;
  const Term& fn() const;
  const Term& arg() const;
  const Term& body() const;
  Term binder() const;

  // Head symbol and arguments of an application spine.
  std::pair<Term, std::vector<Term>> spine() const;
  std::size_t size() const;

  bool same_node(const Term& other) const { return node_ == other.node_; }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Free variables with their declared types.
using VarSet = std::map<std::string, TermType>;
using TypeContext = std::map<std::string, TermType>;

void collect_free_vars(const Term& t, VarSet& out);
VarSet free_vars(const Term& t);
bool occurs_free(const std::string& name, const Term& t);
// Set of constant names appearing in t.
void collect_constants(const Term& t, std::set<std::string>& out);

// Returns `base` if unused, otherwise the first `stem<N>` not in `taken`.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);
std::set<std::string> names_of(const VarSet& vars);

class Signature;

// Type computed from the annotations alone.
TermType type_of(const Term& t);
// Full check: constants against the signature, free variables against ctx.
TermType infer_term_type(const Signature& sig, const TypeContext& ctx, const Term& t);
// Same, with the free variables' own annotations as context.
TermType infer_term_type(const Signature& sig, const Term& t);

bool alpha_eq(const Term& a, const Term& b);
// α-equality where `env` pairs bound names of a with bound names of b
// (innermost last).
bool alpha_eq(const Term& a, const Term& b,
              std::vector<std::pair<std::string, std::string>>& env);

Term beta_normalize(const Term& t, std::size_t fuel = kDefaultBetaFuel);
Term beta_normalize(const Term& t, Fuel& fuel);
bool is_beta_normal(const Term& t);

struct Binding {
  Term var;
  Term value;
};

// Finite map from term variables to terms, keyed by variable name.
class TermSubst {
 public:
  using Map = std::map<std::string, Binding>;

  TermSubst() = default;
  static TermSubst single(const Term& var, Term value);

  // Throws ErrorKind::Type when the value's type differs from the variable's.
  void bind(const Term& var, Term value);
  void erase(const std::string& name) { map_.erase(name); }

  const Term* find(const std::string& name) const;
  bool contains(const std::string& name) const { return map_.count(name) != 0; }
  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  Map::const_iterator begin() const { return map_.begin(); }
  Map::const_iterator end() const { return map_.end(); }

  VarSet domain() const;
  void collect_range_vars(VarSet& out) const;
  // Keeps only bindings whose variable is in `vars`.
  TermSubst restricted(const VarSet& vars) const;
  // Restricts to `vars` and adds x ↦ x for every unbound x in `vars`.
  TermSubst totalized(const VarSet& vars) const;

  std::string str() const;

 private:
  Map map_;
};

// x(first∘second) = (x first) second
TermSubst compose(const TermSubst& first, const TermSubst& second);
bool alpha_eq(const TermSubst& a, const TermSubst& b);

// Capture-avoiding simultaneous substitution without re-normalization.
Term substitute(const Term& t, const TermSubst& s);
// Capture-avoiding substitution followed by β-normalization.
Term apply_term_subst(const Term& t, const TermSubst& s);

class Signature;
// With a signature, constants declared infix print as `a + b`.
std::string to_string(const Term& t, const Signature* sig = nullptr);

// Sorts, term constants and predicate constants.
class Signature {
 public:
  void add_sort(const std::string& name);
  void add_constant(const std::string& name, const TermType& type);
  // `type` must have the shape γ₁ → … → γₙ → o.
  void add_predicate(const std::string& name, const TermType& type);
  void set_infix(const std::string& symbol, const std::string& constant);

  bool has_sort(const std::string& name) const { return sorts_.count(name) != 0; }
  const TermType* constant_type(const std::string& name) const;
  const std::vector<TermType>* predicate_arity(const std::string& name) const;
  bool declares(const std::string& name) const;

  const std::string* infix_constant(const std::string& symbol) const;
  const std::string* infix_symbol(const std::string& constant) const;

  // Every base sort mentioned by `type` is declared.
  void check_type(const TermType& type) const;
  Term make_constant(const std::string& name) const;

  const std::set<std::string>& sorts() const { return sorts_; }
  const std::vector<std::pair<std::string, TermType>>& constants() const { return constants_; }
  const std::vector<std::pair<std::string, std::vector<TermType>>>& predicates() const {
    return predicates_;
  }

 private:
  std::set<std::string> sorts_;
  std::vector<std::pair<std::string, TermType>> constants_;
  std::vector<std::pair<std::string, std::vector<TermType>>> predicates_;
  std::map<std::string, std::size_t> constant_index_;
  std::map<std::string, std::size_t> predicate_index_;
  std::map<std::string, std::string> infix_to_const_;
  std::map<std::string, std::string> const_to_infix_;
};

}  // namespace munj
