#pragma once

#include <optional>
#include <vector>

#include "munj/rewrite.hpp"

namespace munj {

enum class Completeness { Complete, AssumedComplete };

const char* to_string(Completeness c);

struct CsuResult {
  std::vector<TermSubst> unifiers;
  Completeness completeness = Completeness::Complete;
};

// u and v are built from variables of base type and constructors only.
bool in_constructor_fragment(const RewriteSystem& rs, const Term& t);

// Robinson unification with occurs check, ignoring the rewrite system.
// Returns an idempotent most general unifier.
std::optional<TermSubst> syntactic_unify(const Term& u, const Term& v);
std::optional<TermSubst> syntactic_unify(const std::vector<Term>& us, const std::vector<Term>& vs);

// CSU of two rewrite-normal terms. Complete when both lie in the constructor
// fragment; otherwise throws ErrorKind::DemandAnnotation.
CsuResult fo_unify(const RewriteSystem& rs, const Term& u, const Term& v);

bool is_unifier(const RewriteSystem& rs, const TermSubst& theta, const Term& u, const Term& v);

// θ with pattern·θ congruent to subject, the subject being rewrite-normalized first.
std::optional<TermSubst> match(const RewriteSystem& rs, const Term& pattern, const Term& subject);

// θ″ with x·θ′·θ″ ≡ x·θ for every x in dom(θ), by simultaneous matching of
// x·θ′ against x·θ. Variables outside dom(θ′) map to themselves.
std::optional<TermSubst> factor_subst(const RewriteSystem& rs, const TermSubst& theta,
                                      const TermSubst& theta_prime);

}  // namespace munj
