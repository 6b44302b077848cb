#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "munj/formula.hpp"

namespace munj {

class ProofTerm;

// Ordered assignment of formulas to proof variables. Extending with a name
// already present replaces its formula.
class Context {
 public:
  Context() = default;
  Context(std::initializer_list<std::pair<std::string, Formula>> entries);

  Context extended(const std::string& name, const Formula& f) const;
  void extend(const std::string& name, const Formula& f);

  const Formula* find(const std::string& name) const;
  bool contains(const std::string& name) const { return find(name) != nullptr; }
  const std::vector<std::pair<std::string, Formula>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::set<std::string> names() const;

  Context apply_term_subst(const TermSubst& s) const;
  void collect_free_vars(VarSet& out) const;

 private:
  std::vector<std::pair<std::string, Formula>> entries_;
};

bool alpha_eq(const Context& a, const Context& b);

// Finite map from proof variables to proof terms.
class ProofSubst {
 public:
  using Map = std::map<std::string, ProofTerm>;

  ProofSubst() = default;
  static ProofSubst single(const std::string& name, ProofTerm value);

  void bind(const std::string& name, ProofTerm value);
  const ProofTerm* find(const std::string& name) const;
  bool contains(const std::string& name) const { return map_.count(name) != 0; }
  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  Map::const_iterator begin() const { return map_.begin(); }
  Map::const_iterator end() const { return map_.end(); }
  std::set<std::string> domain() const;

 private:
  Map map_;
};

// θ′ᵢ.πᵢ of an equality elimination.
struct EqBranch;

// Stored tuple (Γ, θ, σ, u, v, Q, π, (θ′ᵢ.πᵢ)ᵢ). Γ, u, v, Q and the
// branches live in the scope of `scope`; θ maps that scope outward.
struct EqElimData;

class ProofTerm {
 public:
  enum class Kind {
    Var,
    Unit,
    Abort,
    Lam,
    App,
    Pair,
    Proj1,
    Proj2,
    In1,
    In2,
    Case,
    LamTerm,
    AppTerm,
    Witness,
    Destruct,
    Refl,
    EqElim,
    MuIntro,
    MuElim,
    NuIntro,
    NuElim,
  };

  static ProofTerm var(std::string name);
  static ProofTerm unit();
  // `goal` is an optional annotation making the node inferable.
  static ProofTerm abort(ProofTerm p, std::optional<Formula> goal = std::nullopt);
  static ProofTerm lam(std::string name, std::optional<Formula> domain, ProofTerm body);
  static ProofTerm app(ProofTerm fn, ProofTerm arg);
  static ProofTerm pair(ProofTerm a, ProofTerm b);
  static ProofTerm proj1(ProofTerm p);
  static ProofTerm proj2(ProofTerm p);
  static ProofTerm in1(ProofTerm p, std::optional<Formula> goal = std::nullopt);
  static ProofTerm in2(ProofTerm p, std::optional<Formula> goal = std::nullopt);
  static ProofTerm case_of(ProofTerm major, std::string left_name, ProofTerm left,
                           std::string right_name, ProofTerm right);
  static ProofTerm lam_term(const Term& var, ProofTerm body);
  static ProofTerm app_term(ProofTerm p, Term t);
  static ProofTerm witness(Term t, ProofTerm p, std::optional<Formula> goal = std::nullopt);
  static ProofTerm destruct(ProofTerm major, const Term& var, std::string name, ProofTerm body);
  static ProofTerm refl(Term t);
  // Validates and canonicalizes the tuple: θ and each θ′ᵢ are restricted
  // to the scope FV(Γ, u, v, Q) and made total on it; every free term
  // variable of πᵢ must lie in the range of θ′ᵢ.
  static ProofTerm eq_elim(const EqElimData& data);
  // Same node from an already canonical tuple, skipping validation.
  static ProofTerm eq_elim_canonical(std::shared_ptr<const EqElimData> data);
  static ProofTerm mu_intro(PredOperator op, std::vector<Term> args, ProofTerm p);
  static ProofTerm mu_elim(Predicate invariant, ProofTerm major, std::vector<Term> vars,
                           std::string name, ProofTerm step);
  static ProofTerm nu_intro(Predicate invariant, ProofTerm seed, std::vector<Term> vars,
                            std::string name, ProofTerm step,
                            std::optional<Formula> goal = std::nullopt);
  static ProofTerm nu_elim(PredOperator op, std::vector<Term> args, ProofTerm p);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }

  // Var: the variable. Lam, Destruct, MuElim, NuIntro: the proof binder.
  // Case: the left binder.
  const std::string& name() const;
  // Case: the right binder.
  const std::string& name2() const;
  // LamTerm, Destruct: one variable. MuElim, NuIntro: x̄.
  const std::vector<Term>& term_binders() const;
  const std::vector<ProofTerm>& subs() const;
  const ProofTerm& sub(std::size_t i) const { return subs()[i]; }
  // Refl, AppTerm, Witness: one term. MuIntro, NuElim: t̄.
  const std::vector<Term>& terms() const;
  // Lam: domain. Abort, In1, In2, Witness, NuIntro: goal.
  const std::optional<Formula>& annot() const;
  // MuElim, NuIntro.
  const Predicate& invariant() const;
  // MuIntro, NuElim.
  const PredOperator& op() const;
  const EqElimData& eq() const;

  std::size_t size() const;
  bool same_node(const ProofTerm& other) const { return node_ == other.node_; }

  // Same node with the annotation replaced.
  ProofTerm with_annot(std::optional<Formula> annot) const;

 private:
  struct Node;
  explicit ProofTerm(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static ProofTerm make(Node node);
  std::shared_ptr<const Node> node_;

  friend ProofTerm rebuild(const ProofTerm& p, std::vector<ProofTerm> subs);
};

struct EqBranch {
  TermSubst unifier;
  ProofTerm proof;
};

struct EqElimData {
  Context ctx;
  VarSet scope;  // filled by ProofTerm::eq_elim
  TermSubst theta;
  ProofSubst sigma;
  Term u;
  Term v;
  Formula goal;
  ProofTerm major;
  std::vector<EqBranch> branches;
};

// Variables of a branch: the free variables of θ′ restricted to the scope.
VarSet branch_vars(const EqElimData& d, const EqBranch& b);

// Same node kind with the proof children replaced (order as in subs(),
// EqElim: σ values in key order then the major premise).
ProofTerm rebuild(const ProofTerm& p, std::vector<ProofTerm> subs);

void collect_free_vars(const ProofTerm& p, VarSet& out);
VarSet free_vars(const ProofTerm& p);
void collect_free_proof_vars(const ProofTerm& p, std::set<std::string>& out);
std::set<std::string> free_proof_vars(const ProofTerm& p);

// πθ; at equality eliminations θ composes into the stored substitution and
// reaches σ and the major premise only.
ProofTerm apply_term_subst(const ProofTerm& p, const TermSubst& s);
// πσ; at equality eliminations σ composes into the stored one and reaches
// the major premise only.
ProofTerm apply_proof_subst(const ProofTerm& p, const ProofSubst& s);
ProofSubst apply_term_subst(const ProofSubst& sigma, const TermSubst& s);
// x(σ₁∘σ₂) = (x σ₁) σ₂ restricted to dom(σ₁).
ProofSubst compose(const ProofSubst& first, const ProofSubst& second);

// Up to renaming of bound term and proof variables. Annotations are compared
// only when both sides carry one.
bool alpha_eq(const ProofTerm& a, const ProofTerm& b);

std::string to_string(const ProofTerm& p, const Signature* sig = nullptr);
std::string to_string(const Context& ctx, const Signature* sig = nullptr);
const char* to_string(ProofTerm::Kind kind);

// Generates names `stem`, `stem1`, ... avoiding a growing set.
class NameSupply {
 public:
  NameSupply() = default;
  explicit NameSupply(std::set<std::string> taken) : taken_(std::move(taken)) {}
  std::string fresh(const std::string& stem);
  void reserve(const std::string& name) { taken_.insert(name); }
  void reserve(const std::set<std::string>& names) { taken_.insert(names.begin(), names.end()); }
  const std::set<std::string>& taken() const { return taken_; }

 private:
  std::set<std::string> taken_;
};

}  // namespace munj
