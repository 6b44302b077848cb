#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "munj/term.hpp"

namespace munj {

// A predicate variable p : γ₁ → … → γₙ → o.
struct PredVar {
  std::string name;
  std::vector<TermType> arity;
};

struct PredOperator;

class Formula {
 public:
  enum class Kind { Top, Bot, Imp, And, Or, Forall, Exists, Eq, Mu, Nu, PredApp, Atom };

  static Formula top();
  static Formula bot();
  static Formula imp(Formula lhs, Formula rhs);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula forall(const Term& var, Formula body);
  static Formula exists(const Term& var, Formula body);
  static Formula eq(Term lhs, Term rhs);
  static Formula mu(PredOperator op, std::vector<Term> args);
  static Formula nu(PredOperator op, std::vector<Term> args);
  static Formula pred_app(PredVar p, std::vector<Term> args);
  static Formula atom(std::string name, std::vector<Term> args);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }
  bool is_binary() const { return is(Kind::Imp) || is(Kind::And) || is(Kind::Or); }
  bool is_quantifier() const { return is(Kind::Forall) || is(Kind::Exists); }
  bool is_fixed_point() const { return is(Kind::Mu) || is(Kind::Nu); }

  const Formula& left() const;
  const Formula& right() const;
  Term binder() const;
  const Formula& body() const;
  const Term& lhs() const;
  const Term& rhs() const;
  const PredOperator& op() const;
  const std::vector<Term>& args() const;
  const PredVar& pred_var() const;
  // Atom: the predicate constant. PredApp: the variable name.
  const std::string& name() const;

  std::size_t size() const;
  bool same_node(const Formula& other) const { return node_ == other.node_; }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// λp λx̄. body
struct PredOperator {
  PredVar pred;
  std::vector<Term> params;
  Formula body;
};

// λx̄. body, an expression of type γ̄ → o.
struct Predicate {
  std::vector<Term> params;
  Formula body;

  std::vector<TermType> arity() const;

  static Predicate of_mu(const PredOperator& op);
  static Predicate of_nu(const PredOperator& op);
  static Predicate of_atom(const std::string& name, const std::vector<TermType>& arity);
  static Predicate of_pred_var(const PredVar& p);
};

enum class Polarity { Absent, PositiveOnly, NegativeOnly, Both };

Polarity join(Polarity a, Polarity b);
Polarity flip(Polarity p);
const char* to_string(Polarity p);

using PredVarSet = std::map<std::string, std::vector<TermType>>;

void collect_free_vars(const Formula& f, VarSet& out);
VarSet free_vars(const Formula& f);
void collect_free_vars(const Predicate& s, VarSet& out);
void collect_free_vars(const PredOperator& op, VarSet& out);
void collect_free_pred_vars(const Formula& f, PredVarSet& out);
bool occurs_pred(const std::string& p, const Formula& f);

// Capture-avoiding term substitution; embedded terms come out β-normal.
Formula apply_term_subst(const Formula& f, const TermSubst& s);
Predicate apply_term_subst(const Predicate& p, const TermSubst& s);
PredOperator apply_term_subst(const PredOperator& op, const TermSubst& s);

// Replaces every `p ū` by `S ū`, avoiding capture of S's free names.
Formula substitute_pred(const Formula& f, const std::string& p, const Predicate& s);
// S t̄, i.e. S's body with its parameters instantiated.
Formula apply_predicate(const Predicate& s, const std::vector<Term>& args);
// B S t̄ for B = λp λx̄. P: P with p := S and x̄ := t̄.
Formula instantiate_operator(const PredOperator& op, const Predicate& s,
                             const std::vector<Term>& args);

using NameEnv = std::vector<std::pair<std::string, std::string>>;

bool alpha_eq(const Formula& a, const Formula& b);
bool alpha_eq(const Formula& a, const Formula& b, NameEnv& terms, NameEnv& preds);
bool alpha_eq(const Predicate& a, const Predicate& b);
bool alpha_eq(const PredOperator& a, const PredOperator& b);

Polarity polarity_of(const std::string& p, const Formula& f);
// Throws ErrorKind::NonMonotonic naming the path of a negative occurrence.
void check_monotonic(const PredOperator& op);

// Well-formedness: sorts, homogeneous equalities, monotonic fixed points,
// bound predicate variables. Free term variables must appear in ctx.
void check_formula(const Signature& sig, const TypeContext& ctx, const Formula& f);
// Same, with free variables typed by their own annotations.
void check_formula(const Signature& sig, const Formula& f);
void check_predicate(const Signature& sig, const TypeContext& ctx, const Predicate& s);
void check_predicate(const Signature& sig, const Predicate& s);
void check_operator(const Signature& sig, const PredOperator& op);

std::string to_string(const Formula& f, const Signature* sig = nullptr);
std::string to_string(const Predicate& s, const Signature* sig = nullptr);
std::string to_string(const PredOperator& op, const Signature* sig = nullptr);

}  // namespace munj
