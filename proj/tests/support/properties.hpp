#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "support.hpp"

namespace munj::testing {

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& msg) {
    if (ok) detail = msg;
    ok = false;
  }
};

// Counters for the randomized properties.
struct TrialStats {
  std::size_t trials = 0;
  std::size_t failures = 0;
  // Trials where the property was non-vacuous (a redex existed, the
  // substituted hypothesis was used, ...).
  std::size_t effective = 0;
  std::string first_failure;
  // Rule of the contracted redex, for the reduction properties.
  std::map<std::string, std::size_t> rules;

  void record_failure(const std::string& msg) {
    if (failures++ == 0) first_failure = msg;
  }
};

// πθ checks at Pθ under Γθ.
TrialStats prop_term_subst_typing(std::size_t trials, std::uint32_t seed);
// Γ ⊢ ρ : A and Γ, h : A ⊢ π : P give Γ ⊢ π[ρ/h] : P.
TrialStats prop_proof_subst_typing(std::size_t trials, std::uint32_t seed);
// π ▷ π′ implies πθ ▷ π′θ.
TrialStats prop_term_subst_commutes(std::size_t trials, std::uint32_t seed);
// π ▷ π′ implies π[ρ/h] ▷ π′[ρ/h].
TrialStats prop_proof_subst_commutes(std::size_t trials, std::uint32_t seed);

struct UnifyOracleStats {
  std::size_t pairs = 0;
  std::size_t substitutions = 0;
  std::size_t unifiers_checked = 0;
  std::size_t counterexamples = 0;
  std::string first_counterexample;
};

// Exhaustive comparison of fo_unify with brute-force enumeration over a
// signature of nullary and unary/binary constructors, variables x and y,
// terms of height at most `height` (leaves have height 1).
UnifyOracleStats unification_oracle(const std::vector<std::pair<std::string, int>>& constructors,
                                    int height);

struct FunctorCase {
  std::string name;
  PredVar p;
  Formula body;  // over the free parameter x : nat
};

// Hand-picked monotone bodies covering each connective, nested μ and ν.
std::vector<FunctorCase> functoriality_cases(const NatTheory& th);
// Random monotone bodies.
std::vector<FunctorCase> random_functoriality_cases(const NatTheory& th, std::size_t count,
                                                    std::uint32_t seed);
// Builds F for the case and checks it at B src ⊃ B tgt under k : ∀z. p z ⊃ r z.
Outcome check_functoriality_case(const NatTheory& th, const FunctorCase& c);

struct NormalizedTheorem {
  std::string file;
  std::string theorem;
  std::size_t steps = 0;
  std::string normal;
  std::vector<std::string> redexes;
};

// Normalizes every theorem of the positive corpus with per-step re-checking.
std::vector<NormalizedTheorem> normalize_corpus(bool subject_reduction, Outcome& out);
std::string baseline_text(const std::vector<NormalizedTheorem>& results);

Outcome criterion_one_step_arith();
Outcome criterion_nat_rules();
Outcome criterion_closed_world();
Outcome criterion_subject_reduction();
Outcome criterion_normalization_baselines(const std::string& baseline_file);
Outcome criterion_functoriality();
Outcome criterion_delta_mu(const std::string& oracle_dir);
Outcome criterion_recdefs();
Outcome criterion_unification_oracle();
Outcome criterion_substitution_properties(std::size_t trials);

std::string read_file(const std::string& path);

}  // namespace munj::testing
