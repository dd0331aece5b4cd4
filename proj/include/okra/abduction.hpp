#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "okra/kripke.hpp"

namespace okra {

// Candidate explanations are conjunctions of hypothesis atoms, stored as
// bitmasks over hypotheses in declaration order.
using CandidateMask = std::uint32_t;

struct AbductionProblem {
  std::vector<Formula> background;        // operands of the only-known theory
  Formula observation = truth();
  std::vector<std::string> hypotheses;    // declaration order fixes bit layout
  std::size_t candidate_depth = 2;        // 0 = unbounded
  std::map<std::string, int> priorities;  // smaller level = more urgent
};

// Shape checks: objective background and observation, valid unique
// hypothesis names (at most 16), priority keys drawn from the hypotheses.
// Throws model_error.
void validate(const AbductionProblem& p);

std::vector<std::string> candidate_atoms(const AbductionProblem& p, CandidateMask m);
Formula candidate_formula(const AbductionProblem& p, CandidateMask m);

// Does the background plus the candidate force the observation? On an
// ordered model the most plausible supporting worlds decide, unless plain is
// set, which checks every supporting world.
bool candidate_entails(const AbductionProblem& p, const KripkeModel& base,
                       std::span<const WorldSet> better, CandidateMask m,
                       bool plain = false);

struct CandidateChecks {
  bool consistent = false;        // satisfiable with the background, and held somewhere in the model
  bool novel_background = false;  // background alone does not force the observation
  bool novel_candidate = false;   // nor does the candidate alone
  bool entails = false;           // together they force it on the model
};

CandidateChecks validate_candidate(const AbductionProblem& p,
                                   const KripkeModel& base,
                                   std::span<const WorldSet> better,
                                   CandidateMask m);

// Full additionally demands consistency and both novelty clauses, which is
// what the explain pipeline reports. EntailmentOnly is the bare family the
// defeasible consequences quantify over.
enum class CandidateFilter { EntailmentOnly, Full };

struct ExplanationFamily {
  std::vector<CandidateMask> members;  // by size, then bit pattern
};

// Enumerates hypothesis conjunctions up to the candidate depth. Throws
// eval_error when the background alone already forces the observation.
ExplanationFamily enumerate_explanations(const AbductionProblem& p,
                                         const KripkeModel& base,
                                         std::span<const WorldSet> better,
                                         CandidateFilter filter = CandidateFilter::Full);

enum class SelectionStrategy { Subset, Cardinality, Priorization };

// MinKey ranks a member by its sorted vector of priority levels and keeps
// the lexicographic minimum. LiteralOverlap keeps a member only if no member
// has some level at most one of its own; every member defeats itself under
// that reading, so the selection is provably empty. It stays available for
// comparison.
enum class PriorizationRule { MinKey, LiteralOverlap };

// Priority levels of the member's atoms, sorted ascending. Throws eval_error
// when a level is missing: priorization must be total on the family.
std::vector<int> priorization_key(const AbductionProblem& p, CandidateMask m);

std::vector<CandidateMask> select(const ExplanationFamily& fam,
                                  const AbductionProblem& p,
                                  SelectionStrategy strategy,
                                  PriorizationRule rule = PriorizationRule::MinKey);

struct StarJudgment {
  bool holds = false;
  std::vector<CandidateMask> family;    // roster over the extra premises
  std::vector<CandidateMask> selected;
  std::optional<CandidateMask> witness; // first selected member that carries it
};

// Defeasible consequence from premises background ∪ extra. The roster
// collects the nonempty subsets of extra that, with the background, entail
// the conclusion on the ordered model; the judgment holds when some selected
// roster member entails it on its own. Requires an order; every extra
// premise must be a declared hypothesis.
StarJudgment star_consequence(const AbductionProblem& p, const KripkeModel& base,
                              std::span<const WorldSet> better,
                              std::span<const std::string> extra,
                              const Formula& conclusion,
                              SelectionStrategy strategy,
                              PriorizationRule rule = PriorizationRule::MinKey);

}  // namespace okra
