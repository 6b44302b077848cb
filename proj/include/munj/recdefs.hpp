#pragma once

#include <set>
#include <string>
#include <vector>

#include "munj/rewrite.hpp"
#include "munj/trust.hpp"

namespace munj {

enum class Comparison { StrictSubterm, EqualOrSubterm };

// One lexicographic component: compare argument `position` (1-based).
struct Measure {
  std::size_t position;
  Comparison cmp;
};

// Lexicographic subterm order over argument patterns, then the precedence
// among the defined predicates (earlier = smaller).
struct OrderSpec {
  std::vector<Measure> measures;
  std::vector<std::string> precedence;
};

std::string to_string(const OrderSpec& order);

// An atom `pred args` occurring in a rule body. Variables in `arbitrary`
// are bound inside the body and range over every instantiation.
struct MayOccurAtom {
  std::string pred;
  std::vector<Term> args;
  VarSet arbitrary;
};

std::string to_string(const MayOccurAtom& a, const Signature* sig = nullptr);

std::vector<MayOccurAtom> collect_may_occur(const Formula& body,
                                            const std::set<std::string>& defined);

struct AdmissionReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
  void merge(const AdmissionReport& other);
  std::string str() const;
};

// Coherence: overlapping left sides have congruent right sides, checked by
// syntactic critical pairs modulo the term rules of `base`. Left-side
// arguments outside the constructor fragment produce warnings.
AdmissionReport check_condition_1(const Signature& sig, const RewriteSystem& base,
                                  const std::vector<AtomRule>& rules);

// Decrease: every atom that may occur in a body lies below the head.
AdmissionReport check_condition_2(const Signature& sig, const RewriteSystem& base,
                                  const std::vector<AtomRule>& rules, const OrderSpec& order);

// Validates the rules and the order, runs both conditions and on success
// appends the rules to `rs` and records the trust entries.
AdmissionReport admit(const Signature& sig, RewriteSystem& rs, const std::vector<AtomRule>& rules,
                      const OrderSpec& order, TrustLog* log = nullptr);

}  // namespace munj
