#pragma once

// Reference evaluator used only by tests. Deliberately slow and literal:
// truth is decided world by world by recursion, the O clause searches every
// subset of the world set for one matching both the truth set and the
// accessible set, witnesses are enumerated as index subsets, and plausibility
// minima come from pairwise comparison against an explicit pair list. Any
// agreement with the production evaluator is therefore meaningful.

#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "okra/errors.hpp"
#include "okra/formula.hpp"
#include "okra/kripke.hpp"

namespace oracle {

using okra::Formula;
using okra::Kind;
using okra::KripkeModel;

struct Input {
  const KripkeModel* model = nullptr;
  const okra::EvaluationContext* ctx = nullptr;
  bool ordered = false;
  // (a, b): a is strictly more plausible than b
  std::vector<std::pair<std::size_t, std::size_t>> better_pairs;
};

bool holds(const Input& in, const Formula& f, std::size_t w);

inline std::set<std::size_t> access_of(const KripkeModel& m, std::size_t w) {
  std::set<std::size_t> out;
  for (std::size_t v = 0; v < m.world_count(); ++v)
    if ((m.access[w] >> v) & 1) out.insert(v);
  return out;
}

inline bool atom_true(const KripkeModel& m, const std::string& name,
                      std::size_t w) {
  auto idx = m.atom_index(name);
  if (!idx) throw okra::eval_error("unknown atom '" + name + "'");
  return (m.truth[*idx] >> w) & 1;
}

inline std::set<std::size_t> truth_worlds(const Input& in, const Formula& f) {
  std::set<std::size_t> out;
  for (std::size_t v = 0; v < in.model->world_count(); ++v)
    if (holds(in, f, v)) out.insert(v);
  return out;
}

inline bool strictly_better(const Input& in, std::size_t a, std::size_t b) {
  for (const auto& pr : in.better_pairs)
    if (pr.first == a && pr.second == b) return true;
  return false;
}

inline std::set<std::size_t> minimal(const Input& in,
                                     const std::set<std::size_t>& s) {
  std::set<std::size_t> out;
  for (std::size_t v : s) {
    bool dominated = false;
    for (std::size_t u : s)
      if (strictly_better(in, u, v)) dominated = true;
    if (!dominated) out.insert(v);
  }
  return out;
}

inline void all_subsets(std::size_t n, std::size_t i, std::set<std::size_t>& cur,
                        std::vector<std::set<std::size_t>>& out) {
  if (i == n) {
    out.push_back(cur);
    return;
  }
  all_subsets(n, i + 1, cur, out);
  cur.insert(i);
  all_subsets(n, i + 1, cur, out);
  cur.erase(i);
}

inline std::vector<std::set<std::size_t>> subsets_of(std::size_t n) {
  std::vector<std::set<std::size_t>> out;
  std::set<std::size_t> cur;
  all_subsets(n, 0, cur, out);
  return out;
}

inline bool same_valuation(const KripkeModel& m, std::size_t u, std::size_t v) {
  for (std::size_t a = 0; a < m.atoms.size(); ++a)
    if (((m.truth[a] >> u) & 1) != ((m.truth[a] >> v) & 1)) return false;
  return true;
}

// The conditional with the truth set of the consequent given extensionally.
inline bool cond_with_set(const Input& in, const Formula& g,
                          const std::set<std::size_t>& h_worlds,
                          std::size_t w) {
  std::set<std::size_t> sel;
  for (std::size_t v : access_of(*in.model, w))
    if (holds(in, g, v)) sel.insert(v);
  if (sel.empty())
    return in.ctx->pref_empty == okra::ConditionalOnEmpty::True;
  for (std::size_t v : minimal(in, sel))
    if (!h_worlds.count(v)) return false;
  return true;
}

inline bool knows_with_set(const Input& in, const Formula& g,
                           const std::set<std::size_t>& h_worlds,
                           std::size_t w) {
  for (std::size_t v : access_of(*in.model, w))
    if (holds(in, g, v) && !h_worlds.count(v)) return false;
  return true;
}

// One candidate witness with truth set t: O candidate plus the blocking
// clause for phi.
inline bool candidate_works(const Input& in, const Formula& phi,
                            const std::set<std::size_t>& t, std::size_t w) {
  if (t != access_of(*in.model, w)) return false;
  if (in.ordered) return cond_with_set(in, phi, t, w);
  return knows_with_set(in, phi, t, w);
}

inline bool abd_holds(const Input& in, const Formula& phi, std::size_t w) {
  const auto& ctx = *in.ctx;
  const KripkeModel& m = *in.model;

  if (ctx.witness_mode == okra::WitnessMode::Unrestricted) {
    for (const auto& t : subsets_of(m.world_count())) {
      bool closed = true;  // t must not split a valuation class
      for (std::size_t u = 0; u < m.world_count() && closed; ++u)
        for (std::size_t v = 0; v < m.world_count() && closed; ++v)
          if (same_valuation(m, u, v) && t.count(u) != t.count(v))
            closed = false;
      if (closed && candidate_works(in, phi, t, w)) return true;
    }
    return false;
  }

  if (ctx.witness_mode == okra::WitnessMode::TheoryConjunction) {
    std::set<std::size_t> t;
    for (std::size_t v = 0; v < m.world_count(); ++v) {
      bool all = true;
      for (const Formula& th : ctx.background)
        if (!holds(in, th, v)) all = false;
      if (all) t.insert(v);
    }
    return candidate_works(in, phi, t, w);
  }

  for (const auto& pick : subsets_of(ctx.background.size())) {
    if (pick.empty()) continue;
    if (ctx.max_witness_size != 0 && pick.size() > ctx.max_witness_size)
      continue;
    std::set<std::size_t> t;
    for (std::size_t v = 0; v < m.world_count(); ++v) {
      bool all = true;
      for (std::size_t i : pick)
        if (!holds(in, ctx.background[i], v)) all = false;
      if (all) t.insert(v);
    }
    if (candidate_works(in, phi, t, w)) return true;
  }
  return false;
}

inline bool holds(const Input& in, const Formula& f, std::size_t w) {
  const KripkeModel& m = *in.model;
  switch (f.kind()) {
    case Kind::Atom:
      return atom_true(m, f.atom_name(), w);
    case Kind::True:
      return true;
    case Kind::False:
      return false;
    case Kind::Not:
      return !holds(in, f.left(), w);
    case Kind::And:
      return holds(in, f.left(), w) && holds(in, f.right(), w);
    case Kind::Or:
      return holds(in, f.left(), w) || holds(in, f.right(), w);
    case Kind::Implies:
      return !holds(in, f.left(), w) || holds(in, f.right(), w);
    case Kind::Knows: {
      for (std::size_t v : access_of(m, w))
        if (!holds(in, f.left(), v)) return false;
      return true;
    }
    case Kind::Only: {
      const std::set<std::size_t> t = truth_worlds(in, f.left());
      const std::set<std::size_t> r = access_of(m, w);
      for (const auto& x : subsets_of(m.world_count()))
        if (x == t && x == r) return true;
      return false;
    }
    case Kind::Abd:
      return abd_holds(in, f.left(), w);
    case Kind::Pref:
      return cond_with_set(in, f.left(), truth_worlds(in, f.right()), w);
  }
  return false;
}

}  // namespace oracle
