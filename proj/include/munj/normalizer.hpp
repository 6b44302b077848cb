#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "munj/proof.hpp"
#include "munj/rewrite.hpp"

namespace munj {

inline constexpr std::size_t kDefaultProofFuel = 100'000;

// x̄.α.π with α : src x̄ ⊢ π : tgt x̄.
struct FunctorArg {
  std::vector<Term> vars;
  std::string alpha;
  ProofTerm body;
};

// F_{λp.body}(x̄.α.π): a proof of body[src] ⊃ body[tgt] when `positive`,
// of body[tgt] ⊃ body[src] otherwise. Throws ErrorKind::NonMonotonic when p
// occurs with the wrong sign.
ProofTerm functoriality(const PredVar& p, const Formula& body, bool positive, const Predicate& src,
                        const Predicate& tgt, const FunctorArg& arg);

// The formula F proves: body[src] ⊃ body[tgt] (or the reverse).
Formula functoriality_type(const PredVar& p, const Formula& body, bool positive,
                           const Predicate& src, const Predicate& tgt);

struct ReductionStep {
  ProofTerm result;
  std::string rule;
  std::string path;  // dot-separated child indices, "root" for the top node
};

// One leftmost-outermost step, never inside equality-elimination branches.
// Throws ErrorKind::StuckEqualityRedex when a refl-headed elimination has no
// branch through which the stored substitution factors.
std::optional<ReductionStep> reduce_step(const RewriteSystem& rs, const ProofTerm& p);

// Contracts `p` itself if it is a redex.
std::optional<ReductionStep> contract_root(const RewriteSystem& rs, const ProofTerm& p);

// Standalone scanner: paths of every redex outside equality branches.
std::vector<std::string> find_redexes(const ProofTerm& p);

// Every one-step reduct, trying each factoring equality branch.
std::vector<ProofTerm> all_one_step_reducts(const RewriteSystem& rs, const ProofTerm& p);

struct NormalizeOptions {
  std::size_t fuel = kDefaultProofFuel;
  // Re-check every reduct at `goal` under `ctx`.
  bool debug_subject_reduction = false;
  const Signature* sig = nullptr;
  Context ctx;
  std::optional<Formula> goal;
  std::function<void(std::size_t step, const ReductionStep&, std::size_t size)> trace;
};

struct NormalizeResult {
  ProofTerm proof;
  std::size_t steps = 0;
};

NormalizeResult normalize(const RewriteSystem& rs, const ProofTerm& p,
                          const NormalizeOptions& opts = {});

}  // namespace munj
