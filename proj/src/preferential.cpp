#include "okra/preferential.hpp"

#include <bit>

#include "okra/errors.hpp"

namespace okra {

namespace {

WorldSet bit(std::size_t w) { return WorldSet{1} << w; }

WorldSet minimal_of(const PlausibilityModel& m, WorldSet s) {
  WorldSet out = 0;
  for (WorldSet rest = s; rest;) {
    const std::size_t w = std::countr_zero(rest);
    rest &= rest - 1;
    if ((m.better[w] & s) == 0) out |= bit(w);
  }
  return out;
}

}  // namespace

OrderProperties order_properties(const PlausibilityModel& m) {
  const std::size_t n = m.base.world_count();
  OrderProperties p;
  p.irreflexive = true;
  p.transitive = true;
  p.connected = true;
  for (std::size_t w = 0; w < n; ++w) {
    if (m.better[w] & bit(w)) p.irreflexive = false;
    // a < b and b < w must give a < w: better[w] collects everything
    // better than anything better than w.
    for (WorldSet rest = m.better[w]; rest;) {
      const std::size_t b = std::countr_zero(rest);
      rest &= rest - 1;
      if (m.better[b] & ~m.better[w]) p.transitive = false;
    }
    for (std::size_t v = 0; v < w; ++v) {
      const bool comparable = (m.better[w] & bit(v)) || (m.better[v] & bit(w));
      if (!comparable) p.connected = false;
    }
  }
  return p;
}

void validate(const PlausibilityModel& m) {
  validate(m.base);
  const std::size_t n = m.base.world_count();
  if (m.better.size() != n)
    throw model_error("order masks do not match the world count");
  const WorldSet all = m.base.all_worlds();
  for (WorldSet s : m.better)
    if (s & ~all) throw model_error("order mask refers to an unknown world");
  const OrderProperties p = order_properties(m);
  if (!p.irreflexive) throw model_error("plausibility order is not irreflexive");
  if (!p.transitive) throw model_error("plausibility order is not transitive");
}

std::vector<std::pair<std::size_t, std::size_t>> order_pairs(const PlausibilityModel& m) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t w = 0; w < m.base.world_count(); ++w)
    for (WorldSet rest = m.better[w]; rest;) {
      const std::size_t a = std::countr_zero(rest);
      rest &= rest - 1;
      out.emplace_back(a, w);
    }
  return out;
}

std::vector<WorldSet> closure_from_pairs(
    std::size_t world_count,
    std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  std::vector<WorldSet> better(world_count, 0);
  for (auto [a, b] : pairs) {
    if (a >= world_count || b >= world_count)
      throw model_error("preference pair refers to an unknown world");
    better[b] |= bit(a);
  }
  // Floyd-Warshall over bitmasks.
  for (std::size_t k = 0; k < world_count; ++k)
    for (std::size_t w = 0; w < world_count; ++w)
      if (better[w] & bit(k)) better[w] |= better[k];
  return better;
}

std::vector<WorldSet> total_order_better(std::span<const std::size_t> ranking) {
  std::vector<WorldSet> better(ranking.size(), 0);
  WorldSet seen = 0;
  for (std::size_t w : ranking) {
    better.at(w) = seen;
    seen |= bit(w);
  }
  return better;
}

WorldSet minimal_states(const PlausibilityModel& m) {
  return minimal_of(m, m.base.all_worlds());
}

WorldSet minimal_states(const PlausibilityModel& m, const EvaluationContext& ctx,
                        const Formula& f) {
  Evaluator ev(m.base, ctx, m.better);
  return minimal_of(m, ev.truth_set(f));
}

bool satisfies_pref(const PlausibilityModel& m, const EvaluationContext& ctx,
                    const Formula& f, std::size_t world) {
  Evaluator ev(m.base, ctx, m.better);
  return ev.satisfies(f, world);
}

bool preferential_consequence(const PlausibilityModel& m,
                              const EvaluationContext& ctx,
                              std::span<const Formula> premises,
                              const Formula& conclusion) {
  return !preferential_counterexample(m, ctx, premises, conclusion).has_value();
}

std::optional<std::size_t> preferential_counterexample(
    const PlausibilityModel& m, const EvaluationContext& ctx,
    std::span<const Formula> premises, const Formula& conclusion) {
  Evaluator ev(m.base, ctx, m.better);
  const WorldSet support = premise_worlds(ev, premises);
  const WorldSet tested = ctx.minimality == MinimalityScope::PremiseRelative
                              ? minimal_of(m, support)
                              : minimal_of(m, m.base.all_worlds()) & support;
  const WorldSet bad = tested & ~ev.truth_set(conclusion);
  if (!bad) return std::nullopt;
  return std::countr_zero(bad);
}

Submodel minimal_model(const PlausibilityModel& m) {
  return induced_submodel(m.base, minimal_states(m));
}

}  // namespace okra
