#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "okra/kripke.hpp"

namespace okra {

// A Kripke model carrying a strict plausibility order on its worlds.
// better[w] is the set of worlds strictly preferred to w, so w is minimal
// exactly when better[w] intersected with the candidate set is empty.
struct PlausibilityModel {
  KripkeModel base;
  std::vector<WorldSet> better;
};

struct OrderProperties {
  bool irreflexive = false;
  bool transitive = false;
  bool connected = false;  // every pair of distinct worlds comparable
};

OrderProperties order_properties(const PlausibilityModel& m);

// Base invariants plus: one mask per world, masks in range, order
// irreflexive and transitive. Connectedness is a load-time policy, not a
// structural invariant; callers check it via order_properties.
void validate(const PlausibilityModel& m);

// All (a, b) with a strictly preferred to b, ascending by (b, a).
std::vector<std::pair<std::size_t, std::size_t>> order_pairs(const PlausibilityModel& m);

// Transitive closure of the given preference pairs as better-masks.
// Cycles surface as reflexive entries, which validate then rejects.
std::vector<WorldSet> closure_from_pairs(
    std::size_t world_count,
    std::span<const std::pair<std::size_t, std::size_t>> pairs);

// Total order from a plausibility ranking: ranking[0] is the most
// plausible world, later entries are strictly worse.
std::vector<WorldSet> total_order_better(std::span<const std::size_t> ranking);

// Minimal worlds of the whole model, and of the truth set of f.
WorldSet minimal_states(const PlausibilityModel& m);
WorldSet minimal_states(const PlausibilityModel& m, const EvaluationContext& ctx,
                        const Formula& f);

bool satisfies_pref(const PlausibilityModel& m, const EvaluationContext& ctx,
                    const Formula& f, std::size_t world);

// Premise-relative scope: the conclusion must hold at the minimal worlds of
// the premise set. GlobalMinimal instead tests the globally minimal worlds
// that happen to satisfy the premises. An empty premise set of worlds makes
// the judgment vacuously true under either scope.
bool preferential_consequence(const PlausibilityModel& m,
                              const EvaluationContext& ctx,
                              std::span<const Formula> premises,
                              const Formula& conclusion);
std::optional<std::size_t> preferential_counterexample(
    const PlausibilityModel& m, const EvaluationContext& ctx,
    std::span<const Formula> premises, const Formula& conclusion);

// Submodel on the globally minimal worlds. The order does not carry over:
// no surviving world is preferred to another, which the tests check.
Submodel minimal_model(const PlausibilityModel& m);

}  // namespace okra
