#include "okra/kripke.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "okra/errors.hpp"

namespace okra {

namespace {

constexpr WorldSet bit(std::size_t w) { return WorldSet{1} << w; }

// New-index mask for the bits of mask that survive in kept.
WorldSet compress(WorldSet mask, const std::vector<std::size_t>& kept) {
  WorldSet out = 0;
  for (std::size_t j = 0; j < kept.size(); ++j)
    if ((mask >> kept[j]) & 1) out |= bit(j);
  return out;
}

}  // namespace

WorldSet KripkeModel::all_worlds() const {
  std::size_t n = worlds.size();
  return n >= 64 ? ~WorldSet{0} : (WorldSet{1} << n) - 1;
}

std::optional<std::size_t> KripkeModel::world_index(std::string_view name) const {
  for (std::size_t i = 0; i < worlds.size(); ++i)
    if (worlds[i] == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> KripkeModel::atom_index(std::string_view name) const {
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (atoms[i] == name) return i;
  return std::nullopt;
}

void validate(const KripkeModel& m) {
  if (m.worlds.empty()) throw model_error("model needs at least one world");
  if (m.worlds.size() > 64)
    throw model_error("model has " + std::to_string(m.worlds.size()) +
                      " worlds; at most 64 are supported");
  if (m.access.size() != m.worlds.size())
    throw model_error("accessibility table does not match the world list");
  if (m.truth.size() != m.atoms.size())
    throw model_error("valuation table does not match the vocabulary");

  std::set<std::string> seen;
  for (const auto& w : m.worlds) {
    if (w.empty()) throw model_error("empty world name");
    if (!seen.insert(w).second) throw model_error("duplicate world '" + w + "'");
  }
  seen.clear();
  for (const auto& a : m.atoms) {
    if (!valid_atom_name(a)) throw model_error("invalid atom name '" + a + "'");
    if (!seen.insert(a).second) throw model_error("duplicate atom '" + a + "'");
  }

  const WorldSet all = m.all_worlds();
  for (WorldSet r : m.access)
    if (r & ~all) throw model_error("accessibility mask references unknown worlds");
  for (WorldSet t : m.truth)
    if (t & ~all) throw model_error("valuation mask references unknown worlds");
}

RelationProperties relation_properties(const KripkeModel& m) {
  RelationProperties p{true, true, true, true, true};
  for (std::size_t w = 0; w < m.world_count(); ++w) {
    const WorldSet r = m.access[w];
    if (!(r & bit(w))) p.reflexive = false;
    if (r == 0) p.serial = false;
    for (WorldSet rest = r; rest;) {
      const std::size_t v = std::countr_zero(rest);
      rest &= rest - 1;
      if (m.access[v] & ~r) p.transitive = false;
      if (!(m.access[v] & bit(w))) p.symmetric = false;
      if (r & ~m.access[v]) p.euclidean = false;
    }
  }
  return p;
}

std::optional<Formula> canonical_alpha(const EvaluationContext& ctx) {
  if (ctx.background.empty()) return std::nullopt;
  return conj_all(ctx.background);
}

Evaluator::Evaluator(const KripkeModel& model, const EvaluationContext& ctx,
                     std::span<const WorldSet> better, MemoArena* arena)
    : model_(model), ctx_(ctx), better_(better) {
  if (!better_.empty() && better_.size() != model_.world_count())
    throw eval_error("plausibility order does not match the world count");
  // A background mentioning A would make the witness pool recursive.
  for (const Formula& f : ctx_.background)
    if (contains_abd(f))
      throw eval_error("background formulas may not mention the A modality");
  for (std::size_t i = 0; i < model_.atoms.size(); ++i)
    atom_index_.emplace(model_.atoms[i], i);
  arena_ = arena ? arena : &own_arena_;
  ++arena_->epoch;
}

WorldSet Evaluator::truth_set(const Formula& f) { return eval(f.raw()); }

bool Evaluator::satisfies(const Formula& f, std::size_t world) {
  if (world >= model_.world_count()) throw eval_error("world index out of range");
  return (truth_set(f) >> world) & 1;
}

WorldSet Evaluator::eval(const Node* n) {
  const std::uint64_t id = n->id;
  if (id < arena_->stamp.size() && arena_->stamp[id] == arena_->epoch)
    return arena_->value[id];

  const WorldSet all = model_.all_worlds();
  WorldSet out = 0;
  switch (n->kind) {
    case Kind::Atom: {
      auto it = atom_index_.find(n->name);
      if (it == atom_index_.end())
        throw eval_error("unknown atom '" + n->name + "'");
      out = model_.truth[it->second];
      break;
    }
    case Kind::True:
      out = all;
      break;
    case Kind::False:
      out = 0;
      break;
    case Kind::Not:
      out = all & ~eval(n->lhs.get());
      break;
    case Kind::And:
      out = eval(n->lhs.get()) & eval(n->rhs.get());
      break;
    case Kind::Or:
      out = eval(n->lhs.get()) | eval(n->rhs.get());
      break;
    case Kind::Implies:
      out = (all & ~eval(n->lhs.get())) | eval(n->rhs.get());
      break;
    case Kind::Knows: {
      const WorldSet t = eval(n->lhs.get());
      for (std::size_t w = 0; w < model_.world_count(); ++w)
        if ((model_.access[w] & ~t) == 0) out |= bit(w);
      break;
    }
    case Kind::Only: {
      const WorldSet t = eval(n->lhs.get());
      for (std::size_t w = 0; w < model_.world_count(); ++w)
        if (model_.access[w] == t) out |= bit(w);
      break;
    }
    case Kind::Abd:
      out = eval_abd(n);
      break;
    case Kind::Pref:
      out = pref_set(eval(n->lhs.get()), eval(n->rhs.get()), n);
      break;
  }

  if (id >= arena_->stamp.size()) {
    arena_->stamp.resize(id + 1, 0);
    arena_->value.resize(id + 1, 0);
  }
  arena_->stamp[id] = arena_->epoch;
  arena_->value[id] = out;
  return out;
}

WorldSet Evaluator::pref_set(WorldSet antecedent, WorldSet consequent,
                             const Node*) {
  if (!has_order())
    throw eval_error("the conditional needs a model with a plausibility order");
  WorldSet out = 0;
  for (std::size_t w = 0; w < model_.world_count(); ++w) {
    const WorldSet reachable = model_.access[w] & antecedent;
    bool value;
    if (reachable == 0) {
      value = ctx_.pref_empty == ConditionalOnEmpty::True;
    } else {
      value = (minimal_of(reachable) & ~consequent) == 0;
    }
    if (value) out |= bit(w);
  }
  return out;
}

WorldSet Evaluator::minimal_of(WorldSet s) const {
  WorldSet out = 0;
  for (WorldSet rest = s; rest;) {
    const std::size_t v = std::countr_zero(rest);
    rest &= rest - 1;
    if ((better_[v] & s) == 0) out |= bit(v);
  }
  return out;
}

WorldSet Evaluator::eval_abd(const Node* n) {
  const WorldSet t_phi = eval(n->lhs.get());
  const std::size_t count = model_.world_count();
  WorldSet out = 0;

  if (ctx_.witness_mode == WitnessMode::Unrestricted) {
    used_unrestricted_abd_ = true;
    for (std::size_t w = 0; w < count; ++w) {
      // The description of the accessible set itself is the best witness any
      // objective formula can be, so A reduces to definability (plus, under
      // an order with existential import, reachability of the hypothesis).
      if (!definable(model_.access[w])) continue;
      if (has_order() && ctx_.pref_empty == ConditionalOnEmpty::False &&
          (model_.access[w] & t_phi) == 0)
        continue;
      out |= bit(w);
    }
    return out;
  }

  for (const Formula& cand : candidates()) {
    const WorldSet t_a = eval(cand.raw());
    for (std::size_t w = 0; w < count; ++w)
      if (cand_admissible(t_a, t_phi, w)) out |= bit(w);
  }
  return out;
}

// O cand together with the blocked-hypothesis clause: K(phi -> cand) on plain
// models, phi > cand on ordered ones.
bool Evaluator::cand_admissible(WorldSet t_a, WorldSet t_phi, std::size_t w) {
  const WorldSet r = model_.access[w];
  if (r != t_a) return false;  // O cand fails here
  if (has_order()) {
    const WorldSet reachable = r & t_phi;
    if (reachable == 0) return ctx_.pref_empty == ConditionalOnEmpty::True;
    return (minimal_of(reachable) & ~t_a) == 0;
  }
  return (r & t_phi & ~t_a) == 0;  // K(phi -> cand)
}

const std::vector<Formula>& Evaluator::candidates() {
  if (candidates_built_) return candidates_;
  candidates_built_ = true;
  const auto& bg = ctx_.background;
  if (ctx_.witness_mode == WitnessMode::TheoryConjunction) {
    candidates_.push_back(conj_all(bg));
    return candidates_;
  }
  if (bg.size() > 16)
    throw eval_error("background too large for subset witnesses");
  std::size_t limit = bg.size();
  if (ctx_.max_witness_size != 0) limit = std::min(limit, ctx_.max_witness_size);
  for (std::size_t size = 1; size <= limit; ++size) {
    for (std::uint32_t mask = 1; mask < (1u << bg.size()); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != size) continue;
      std::vector<Formula> parts;
      for (std::size_t i = 0; i < bg.size(); ++i)
        if ((mask >> i) & 1) parts.push_back(bg[i]);
      candidates_.push_back(conj_all(parts));
    }
  }
  return candidates_;
}

void Evaluator::build_classes() {
  if (classes_built_) return;
  classes_built_ = true;
  std::map<std::string, WorldSet> groups;
  for (std::size_t w = 0; w < model_.world_count(); ++w) {
    std::string sig(model_.atoms.size(), '0');
    for (std::size_t a = 0; a < model_.atoms.size(); ++a)
      if ((model_.truth[a] >> w) & 1) sig[a] = '1';
    groups[sig] |= bit(w);
  }
  for (auto& [sig, mask] : groups) classes_.push_back(mask);
}

bool Evaluator::definable(WorldSet s) {
  build_classes();
  for (WorldSet c : classes_) {
    const WorldSet inside = s & c;
    if (inside != 0 && inside != c) return false;
  }
  return true;
}

std::optional<Formula> Evaluator::witness(const Formula& phi, std::size_t world) {
  if (world >= model_.world_count())
    throw eval_error("world index out of range");
  const WorldSet t_phi = truth_set(phi);
  const WorldSet r = model_.access[world];

  if (ctx_.witness_mode == WitnessMode::Unrestricted) {
    used_unrestricted_abd_ = true;
    if (!definable(r)) return std::nullopt;
    if (has_order() && ctx_.pref_empty == ConditionalOnEmpty::False &&
        (r & t_phi) == 0)
      return std::nullopt;
    return characteristic_formula(model_, r);
  }

  for (const Formula& cand : candidates())
    if (cand_admissible(eval(cand.raw()), t_phi, world)) return cand;
  return std::nullopt;
}

Formula characteristic_formula(const KripkeModel& m, WorldSet s) {
  std::vector<Formula> shapes;
  std::set<std::string> described;
  for (WorldSet rest = s; rest;) {
    const std::size_t w = std::countr_zero(rest);
    rest &= rest - 1;
    std::string sig(m.atoms.size(), '0');
    std::vector<Formula> lits;
    for (std::size_t a = 0; a < m.atoms.size(); ++a) {
      if ((m.truth[a] >> w) & 1) {
        sig[a] = '1';
        lits.push_back(atom(m.atoms[a]));
      } else {
        lits.push_back(negate(atom(m.atoms[a])));
      }
    }
    if (!described.insert(sig).second) continue;  // same valuation already in
    shapes.push_back(conj_all(lits));
  }
  return disj_all(shapes);
}

WorldSet premise_worlds(Evaluator& ev, std::span<const Formula> premises) {
  WorldSet s = ev.model().all_worlds();
  for (const Formula& p : premises) s &= ev.truth_set(p);
  return s;
}

bool local_consequence(Evaluator& ev, std::span<const Formula> premises,
                       const Formula& conclusion) {
  return !local_counterexample(ev, premises, conclusion).has_value();
}

std::optional<std::size_t> local_counterexample(Evaluator& ev,
                                                std::span<const Formula> premises,
                                                const Formula& conclusion) {
  const WorldSet bad = premise_worlds(ev, premises) & ~ev.truth_set(conclusion);
  if (!bad) return std::nullopt;
  return std::countr_zero(bad);
}

bool global_validity(Evaluator& ev, const Formula& f) {
  return !validity_counterexample(ev, f).has_value();
}

std::optional<std::size_t> validity_counterexample(Evaluator& ev,
                                                   const Formula& f) {
  const WorldSet bad = ev.model().all_worlds() & ~ev.truth_set(f);
  if (!bad) return std::nullopt;
  return std::countr_zero(bad);
}

Submodel induced_submodel(const KripkeModel& m, WorldSet keep) {
  if (!keep) throw model_error("cannot restrict to an empty set of worlds");
  Submodel r;
  for (WorldSet rest = keep; rest;) {
    const std::size_t w = std::countr_zero(rest);
    rest &= rest - 1;
    r.kept.push_back(w);
  }
  r.model.atoms = m.atoms;
  for (std::size_t old : r.kept) r.model.worlds.push_back(m.worlds[old]);
  for (std::size_t old : r.kept)
    r.model.access.push_back(compress(m.access[old] & keep, r.kept));
  for (WorldSet t : m.truth) r.model.truth.push_back(compress(t & keep, r.kept));
  return r;
}

std::optional<Submodel> restrict_nonvacuous(const KripkeModel& m,
                                            const EvaluationContext& ctx,
                                            const Formula& g) {
  Evaluator ev(m, ctx);
  WorldSet keep = ev.truth_set(g);
  for (const Formula& th : ctx.background) keep &= ev.truth_set(th);
  if (!keep) return std::nullopt;
  return induced_submodel(m, keep);
}

}  // namespace okra
