#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "okra/formula.hpp"

namespace okra {

// Worlds are bit positions, so a model holds at most 64 worlds. That cap is
// generous for this tool: every construction here stays far below it.
using WorldSet = std::uint64_t;

struct KripkeModel {
  std::vector<std::string> worlds;  // index = bit position
  std::vector<std::string> atoms;   // vocabulary
  std::vector<WorldSet> access;     // access[w] = worlds accessible from w
  std::vector<WorldSet> truth;      // truth[a] = worlds where atoms[a] holds

  std::size_t world_count() const { return worlds.size(); }
  WorldSet all_worlds() const;
  std::optional<std::size_t> world_index(std::string_view name) const;
  std::optional<std::size_t> atom_index(std::string_view name) const;
};

// Throws model_error on inconsistent sizes, duplicate names, out-of-range
// masks, or more than 64 worlds.
void validate(const KripkeModel& m);

struct RelationProperties {
  bool reflexive;
  bool serial;
  bool transitive;
  bool symmetric;
  bool euclidean;
};

RelationProperties relation_properties(const KripkeModel& m);

enum class FrameClass { Arbitrary, Reflexive, S5, Order };

// Witness pool for the A modality.
//   TheoryConjunction: the single conjunction of the whole background.
//   TheorySubsets: conjunctions of nonempty background subsets, smallest
//     subsets first (ties broken by enumeration order).
//   Unrestricted: any objective formula over the model's vocabulary; on a
//     finite model that reduces to definability of the accessible set, which
//     trivialises A, so evaluators flag its use.
enum class WitnessMode { TheoryConjunction, TheorySubsets, Unrestricted };

// What g > h means when no accessible g-world exists. False keeps
// existential import (the conditional fails); True reads it vacuously.
enum class ConditionalOnEmpty { False, True };

// Which premise-satisfying worlds count for ordered entailment: the most
// plausible premise worlds, or only premise worlds that are also most
// plausible overall.
enum class MinimalityScope { PremiseRelative, GlobalMinimal };

struct EvaluationContext {
  std::vector<Formula> background;
  WitnessMode witness_mode = WitnessMode::TheorySubsets;
  std::size_t max_witness_size = 0;  // 0 = unbounded
  ConditionalOnEmpty pref_empty = ConditionalOnEmpty::False;
  MinimalityScope minimality = MinimalityScope::PremiseRelative;
};

// Background conjunction in declaration order; nullopt when empty.
std::optional<Formula> canonical_alpha(const EvaluationContext& ctx);

// Reusable memo storage so a caller sweeping many models does not pay an
// allocation per evaluator. Slots are keyed by node id and validated by epoch.
struct MemoArena {
  std::vector<std::uint64_t> stamp;
  std::vector<WorldSet> value;
  std::uint64_t epoch = 0;
};

// Evaluates formulas to world sets over one model. `better`, when non-empty,
// gives better[w] = worlds strictly more plausible than w and enables the
// conditional; without it Pref formulas raise eval_error. The model, context
// and order must outlive the evaluator.
class Evaluator {
public:
  Evaluator(const KripkeModel& model, const EvaluationContext& ctx,
            std::span<const WorldSet> better = {}, MemoArena* arena = nullptr);

  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  WorldSet truth_set(const Formula& f);
  bool satisfies(const Formula& f, std::size_t world);

  // First admissible witness making A phi succeed at world, if any.
  std::optional<Formula> witness(const Formula& phi, std::size_t world);

  bool has_order() const { return !better_.empty(); }
  bool used_unrestricted_abd() const { return used_unrestricted_abd_; }
  const KripkeModel& model() const { return model_; }
  const EvaluationContext& context() const { return ctx_; }

  // Most plausible members of s; requires an order.
  WorldSet minimal_of(WorldSet s) const;

  // True when s is a union of valuation-equivalence classes, i.e. the truth
  // set of some objective formula over the model's vocabulary.
  bool definable(WorldSet s);

private:
  WorldSet eval(const Node* n);
  WorldSet eval_abd(const Node* n);
  bool cand_admissible(WorldSet t_a, WorldSet t_phi, std::size_t w);
  WorldSet pref_set(WorldSet antecedent, WorldSet consequent, const Node* at);
  const std::vector<Formula>& candidates();
  void build_classes();

  const KripkeModel& model_;
  const EvaluationContext& ctx_;
  std::span<const WorldSet> better_;
  MemoArena own_arena_;
  MemoArena* arena_;
  std::unordered_map<std::string, std::size_t> atom_index_;
  std::vector<Formula> candidates_;
  bool candidates_built_ = false;
  std::vector<WorldSet> classes_;
  bool classes_built_ = false;
  bool used_unrestricted_abd_ = false;
};

// Disjunction of world descriptions: true exactly on s when s is definable,
// and on the smallest definable superset otherwise. Empty s gives false.
Formula characteristic_formula(const KripkeModel& m, WorldSet s);

WorldSet premise_worlds(Evaluator& ev, std::span<const Formula> premises);

// Truth at every world satisfying all premises.
bool local_consequence(Evaluator& ev, std::span<const Formula> premises,
                       const Formula& conclusion);
std::optional<std::size_t> local_counterexample(Evaluator& ev,
                                                std::span<const Formula> premises,
                                                const Formula& conclusion);

bool global_validity(Evaluator& ev, const Formula& f);
std::optional<std::size_t> validity_counterexample(Evaluator& ev,
                                                   const Formula& f);

// kept maps new world indices to old ones.
struct Submodel {
  KripkeModel model;
  std::vector<std::size_t> kept;
};

// Restriction to the worlds in keep, which must be nonempty.
Submodel induced_submodel(const KripkeModel& m, WorldSet keep);

// Submodel induced by the worlds satisfying the whole background plus g.
// nullopt when no world qualifies.
std::optional<Submodel> restrict_nonvacuous(const KripkeModel& m,
                                            const EvaluationContext& ctx,
                                            const Formula& g);

}  // namespace okra
