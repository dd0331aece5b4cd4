#include "okra/abduction.hpp"

#include <algorithm>
#include <bit>

#include "okra/errors.hpp"

namespace okra {

namespace {

// Truth sets the candidate machinery needs from one model, computed once.
struct Ground {
  Evaluator ev;
  WorldSet bg_support;
  WorldSet obs;
  std::vector<WorldSet> hyp;

  Ground(const AbductionProblem& p, const KripkeModel& base,
         std::span<const WorldSet> better, const EvaluationContext& ctx)
      : ev(base, ctx, better) {
    bg_support = premise_worlds(ev, p.background);
    obs = ev.truth_set(p.observation);
    for (const auto& name : p.hypotheses) hyp.push_back(ev.truth_set(atom(name)));
  }

  WorldSet support(CandidateMask m) const {
    WorldSet s = bg_support;
    for (std::size_t i = 0; i < hyp.size(); ++i)
      if ((m >> i) & 1) s &= hyp[i];
    return s;
  }

  bool entails(CandidateMask m, bool plain) {
    WorldSet s = support(m);
    if (!plain && ev.has_order()) s = ev.minimal_of(s);
    return (s & ~obs) == 0;
  }
};

EvaluationContext plain_context() { return EvaluationContext{}; }

std::size_t depth_cap(const AbductionProblem& p) {
  return p.candidate_depth == 0 ? p.hypotheses.size()
                                : std::min(p.candidate_depth, p.hypotheses.size());
}

}  // namespace

void validate(const AbductionProblem& p) {
  if (p.hypotheses.size() > 16)
    throw model_error("at most 16 hypotheses are supported");
  std::vector<std::string> seen;
  for (const auto& h : p.hypotheses) {
    if (!valid_atom_name(h))
      throw model_error("invalid hypothesis name '" + h + "'");
    if (std::find(seen.begin(), seen.end(), h) != seen.end())
      throw model_error("duplicate hypothesis '" + h + "'");
    seen.push_back(h);
  }
  for (const Formula& f : p.background)
    if (!is_objective(f))
      throw model_error("background entry '" + to_string(f) + "' is not objective");
  if (!is_objective(p.observation))
    throw model_error("observation must be objective");
  for (const auto& [name, level] : p.priorities) {
    (void)level;
    if (std::find(p.hypotheses.begin(), p.hypotheses.end(), name) ==
        p.hypotheses.end())
      throw model_error("priority for unknown hypothesis '" + name + "'");
  }
}

std::vector<std::string> candidate_atoms(const AbductionProblem& p,
                                         CandidateMask m) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < p.hypotheses.size(); ++i)
    if ((m >> i) & 1) out.push_back(p.hypotheses[i]);
  return out;
}

Formula candidate_formula(const AbductionProblem& p, CandidateMask m) {
  std::vector<Formula> parts;
  for (const auto& name : candidate_atoms(p, m)) parts.push_back(atom(name));
  return conj_all(parts);
}

bool candidate_entails(const AbductionProblem& p, const KripkeModel& base,
                       std::span<const WorldSet> better, CandidateMask m,
                       bool plain) {
  const EvaluationContext ctx = plain_context();
  Ground g(p, base, better, ctx);
  return g.entails(m, plain);
}

CandidateChecks validate_candidate(const AbductionProblem& p,
                                   const KripkeModel& base,
                                   std::span<const WorldSet> better,
                                   CandidateMask m) {
  const EvaluationContext ctx = plain_context();
  Ground g(p, base, better, ctx);

  CandidateChecks c;
  std::vector<Formula> both(p.background);
  const Formula cand = candidate_formula(p, m);
  both.push_back(cand);
  c.consistent = satisfiable(both) && g.support(m) != 0;
  c.novel_background = !taut_entails(p.background, p.observation);
  const std::vector<Formula> alone = {cand};
  c.novel_candidate = !taut_entails(alone, p.observation);
  c.entails = g.entails(m, false);
  return c;
}

ExplanationFamily enumerate_explanations(const AbductionProblem& p,
                                         const KripkeModel& base,
                                         std::span<const WorldSet> better,
                                         CandidateFilter filter) {
  validate(p);
  const EvaluationContext ctx = plain_context();
  Ground g(p, base, better, ctx);

  if (g.entails(0, false))
    throw eval_error("the background already forces the observation");

  const bool full = filter == CandidateFilter::Full;
  const bool bg_novel = !full || !taut_entails(p.background, p.observation);

  ExplanationFamily fam;
  const std::size_t cap = depth_cap(p);
  const CandidateMask end = CandidateMask{1} << p.hypotheses.size();
  for (std::size_t size = 1; size <= cap; ++size) {
    for (CandidateMask m = 1; m < end; ++m) {
      if (static_cast<std::size_t>(std::popcount(m)) != size) continue;
      if (!g.entails(m, false)) continue;
      if (full) {
        if (!bg_novel) continue;
        if (g.support(m) == 0) continue;
        const Formula cand = candidate_formula(p, m);
        std::vector<Formula> both(p.background);
        both.push_back(cand);
        if (!satisfiable(both)) continue;
        const std::vector<Formula> alone = {cand};
        if (taut_entails(alone, p.observation)) continue;
      }
      fam.members.push_back(m);
    }
  }
  return fam;
}

std::vector<int> priorization_key(const AbductionProblem& p, CandidateMask m) {
  std::vector<int> key;
  for (const auto& name : candidate_atoms(p, m)) {
    auto it = p.priorities.find(name);
    if (it == p.priorities.end())
      throw eval_error("no priority level for hypothesis '" + name + "'");
    key.push_back(it->second);
  }
  std::sort(key.begin(), key.end());
  return key;
}

std::vector<CandidateMask> select(const ExplanationFamily& fam,
                                  const AbductionProblem& p,
                                  SelectionStrategy strategy,
                                  PriorizationRule rule) {
  const auto& ms = fam.members;
  std::vector<CandidateMask> out;

  switch (strategy) {
    case SelectionStrategy::Subset:
      for (CandidateMask m : ms) {
        bool minimal = true;
        for (CandidateMask n : ms)
          if (n != m && (n & m) == n) minimal = false;
        if (minimal) out.push_back(m);
      }
      break;

    case SelectionStrategy::Cardinality: {
      int best = -1;
      for (CandidateMask m : ms) {
        const int size = std::popcount(m);
        if (best < 0 || size < best) best = size;
      }
      for (CandidateMask m : ms)
        if (std::popcount(m) == best) out.push_back(m);
      break;
    }

    case SelectionStrategy::Priorization: {
      if (rule == PriorizationRule::LiteralOverlap) {
        // Delta' defeats Delta when some level of Delta' is at most some
        // level of Delta; each member defeats itself, so nothing survives.
        for (CandidateMask m : ms) {
          const auto key_m = priorization_key(p, m);
          bool undefeated = true;
          for (CandidateMask n : ms) {
            const auto key_n = priorization_key(p, n);
            if (!key_n.empty() && !key_m.empty() &&
                key_n.front() <= key_m.back())
              undefeated = false;
          }
          if (undefeated) out.push_back(m);
        }
        break;
      }
      std::vector<int> best;
      bool have = false;
      for (CandidateMask m : ms) {
        auto key = priorization_key(p, m);
        if (!have || key < best) {
          best = std::move(key);
          have = true;
        }
      }
      for (CandidateMask m : ms)
        if (priorization_key(p, m) == best) out.push_back(m);
      break;
    }
  }
  return out;
}

StarJudgment star_consequence(const AbductionProblem& p, const KripkeModel& base,
                              std::span<const WorldSet> better,
                              std::span<const std::string> extra,
                              const Formula& conclusion,
                              SelectionStrategy strategy,
                              PriorizationRule rule) {
  validate(p);
  if (better.empty())
    throw eval_error("defeasible consequence needs a plausibility order");

  CandidateMask scope = 0;
  for (const auto& name : extra) {
    auto it = std::find(p.hypotheses.begin(), p.hypotheses.end(), name);
    if (it == p.hypotheses.end())
      throw eval_error("premise '" + name + "' is not a declared hypothesis");
    scope |= CandidateMask{1} << (it - p.hypotheses.begin());
  }

  const EvaluationContext ctx = plain_context();
  Ground g(p, base, better, ctx);
  const WorldSet concl = g.ev.truth_set(conclusion);

  StarJudgment j;
  // Roster over the nonempty subsets of the extra premises, size first.
  std::vector<CandidateMask> subsets;
  for (CandidateMask m = scope; m; m = (m - 1) & scope) subsets.push_back(m);
  std::sort(subsets.begin(), subsets.end(), [](CandidateMask a, CandidateMask b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  for (CandidateMask m : subsets) {
    WorldSet s = g.ev.minimal_of(g.support(m));
    if ((s & ~concl) == 0) j.family.push_back(m);
  }

  j.selected = select(ExplanationFamily{j.family}, p, strategy, rule);

  for (CandidateMask m : j.selected) {
    // The member must carry the conclusion without the background.
    WorldSet s = base.all_worlds();
    for (std::size_t i = 0; i < p.hypotheses.size(); ++i)
      if ((m >> i) & 1) s &= g.hyp[i];
    s = g.ev.minimal_of(s);
    if ((s & ~concl) == 0) {
      j.holds = true;
      j.witness = m;
      break;
    }
  }
  return j;
}

}  // namespace okra
