#pragma once

#include <optional>
#include <string>
#include <vector>

#include "munj/formula.hpp"
#include "munj/trust.hpp"

namespace munj {

inline constexpr std::size_t kDefaultRewriteFuel = 100'000;

// l ⇝ r on terms.
struct TermRule {
  Term lhs;
  Term rhs;
};

// a t̄ ⇝ B on atomic formulas.
struct AtomRule {
  std::string pred;
  std::vector<Term> args;
  Formula rhs;
};

std::string to_string(const TermRule& r, const Signature* sig = nullptr);
std::string to_string(const AtomRule& r, const Signature* sig = nullptr);

struct RewriteSystem {
  std::vector<TermRule> term_rules;
  std::vector<AtomRule> atom_rules;
  // User assertions; never verified.
  bool confluent = false;
  bool terminating = false;
  // Per-call step budget for normalization.
  std::size_t fuel = kDefaultRewriteFuel;

  // A constant is a constructor iff it never heads a term-rule left side.
  bool is_constructor(const std::string& constant) const;
  bool has_atom_rules(const std::string& pred) const;
};

// One message per violating rule; empty when the system is valid.
std::vector<std::string> validate_system(const Signature& sig, const RewriteSystem& rs);
// Throws ErrorKind::Rule with all messages when validate_system reports any.
void check_system(const Signature& sig, const RewriteSystem& rs);

// Adds the confluence and termination entries for `rs` to the log.
void record_system_assumptions(const RewriteSystem& rs, TrustLog& log);

// First-order syntactic matching. Pattern variables are the free variables
// of `pattern`; `acc` may carry earlier bindings, which must agree.
bool match_into(const Term& pattern, const Term& subject, TermSubst& acc);
std::optional<TermSubst> match_syntactic(const Term& pattern, const Term& subject);

Term rw_normalize_term(const RewriteSystem& rs, const Term& t, Fuel& fuel);
Term rw_normalize_term(const RewriteSystem& rs, const Term& t);
Formula rw_normalize_formula(const RewriteSystem& rs, const Formula& f, Fuel& fuel);
Formula rw_normalize_formula(const RewriteSystem& rs, const Formula& f);

// No term rule matches a subterm and no atom rule matches an atom.
bool is_rw_normal(const RewriteSystem& rs, const Term& t);
bool is_rw_normal(const RewriteSystem& rs, const Formula& f);

bool congruent(const RewriteSystem& rs, const Term& a, const Term& b);
bool congruent(const RewriteSystem& rs, const Formula& a, const Formula& b);

}  // namespace munj
