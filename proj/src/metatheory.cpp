#include "okra/metatheory.hpp"

#include <algorithm>
#include <bit>
#include <iomanip>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "okra/errors.hpp"

namespace okra {

namespace {

WorldSet bit(std::size_t w) { return WorldSet{1} << w; }

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 mixed_rng(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t trial) {
  return std::mt19937_64(splitmix(splitmix(seed) ^ splitmix(stream * 0x2545F4914F6CDD1DULL + trial)));
}

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  if (hi <= lo) return lo;
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

const char* kAtomPool[8] = {"p", "q", "r", "s", "t", "u", "v", "x"};

const char* frame_name(FrameClass f) {
  switch (f) {
    case FrameClass::Arbitrary: return "arbitrary";
    case FrameClass::Reflexive: return "reflexive";
    case FrameClass::S5: return "s5";
    default: return "order";
  }
}

const char* strategy_name(SelectionStrategy s) {
  switch (s) {
    case SelectionStrategy::Subset: return "subset";
    case SelectionStrategy::Cardinality: return "cardinality";
    default: return "priorization";
  }
}

SelectionStrategy strategy_of(const std::string& s) {
  if (s == "subset") return SelectionStrategy::Subset;
  if (s == "cardinality") return SelectionStrategy::Cardinality;
  if (s == "priorization") return SelectionStrategy::Priorization;
  throw eval_error("unknown selection strategy '" + s + "'");
}

const char* mode_name(WitnessMode m) {
  switch (m) {
    case WitnessMode::TheoryConjunction: return "conjunction";
    case WitnessMode::TheorySubsets: return "subsets";
    default: return "unrestricted";
  }
}

WitnessMode mode_of(const std::string& s) {
  if (s == "conjunction") return WitnessMode::TheoryConjunction;
  if (s == "subsets") return WitnessMode::TheorySubsets;
  if (s == "unrestricted") return WitnessMode::Unrestricted;
  throw eval_error("unknown witness mode '" + s + "'");
}

nlohmann::json config_json(const AuditConfig& cfg) {
  nlohmann::json j;
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  j["max_worlds"] = cfg.max_worlds;
  j["max_atoms"] = cfg.max_atoms;
  j["formula_depth"] = cfg.formula_depth;
  j["frame"] = frame_name(cfg.frame);
  return j;
}

PlausibilityModel model_from_rng(const AuditConfig& cfg, std::mt19937_64& rng) {
  const std::size_t max_w = std::max<std::size_t>(1, std::min<std::size_t>(cfg.max_worlds, 64));
  const std::size_t max_a = std::max<std::size_t>(1, std::min<std::size_t>(cfg.max_atoms, 8));
  const std::size_t n = pick(rng, 1, max_w);
  const std::size_t a = pick(rng, 1, max_a);
  PlausibilityModel m;
  for (std::size_t i = 0; i < n; ++i) m.base.worlds.push_back("w" + std::to_string(i + 1));
  for (std::size_t i = 0; i < a; ++i) m.base.atoms.push_back(kAtomPool[i]);
  const WorldSet all = (n == 64) ? ~WorldSet{0} : bit(n) - 1;
  for (std::size_t i = 0; i < a; ++i) m.base.truth.push_back(rng() & all);
  switch (cfg.frame) {
    case FrameClass::Arbitrary:
      for (std::size_t w = 0; w < n; ++w) m.base.access.push_back(rng() & all);
      break;
    case FrameClass::Reflexive:
      for (std::size_t w = 0; w < n; ++w) m.base.access.push_back((rng() & all) | bit(w));
      break;
    case FrameClass::S5: {
      const std::size_t k = pick(rng, 1, n);
      std::vector<std::size_t> cls;
      for (std::size_t w = 0; w < n; ++w) cls.push_back(pick(rng, 0, k - 1));
      std::vector<WorldSet> group(k, 0);
      for (std::size_t w = 0; w < n; ++w) group[cls[w]] |= bit(w);
      for (std::size_t w = 0; w < n; ++w) m.base.access.push_back(group[cls[w]]);
      break;
    }
    case FrameClass::Order: {
      for (std::size_t w = 0; w < n; ++w) m.base.access.push_back(rng() & all);
      std::vector<std::size_t> ranking(n);
      std::iota(ranking.begin(), ranking.end(), 0);
      std::shuffle(ranking.begin(), ranking.end(), rng);
      m.better = total_order_better(ranking);
      break;
    }
  }
  return m;
}

Formula rnd_objective(std::mt19937_64& rng, int d, const std::vector<std::string>& atoms) {
  if (d <= 0) return atom(atoms[pick(rng, 0, atoms.size() - 1)]);
  switch (pick(rng, 0, 6)) {
    case 0:
      return negate(rnd_objective(rng, d - 1, atoms));
    case 1:
      return conj(rnd_objective(rng, d - 1, atoms), rnd_objective(rng, d - 1, atoms));
    case 2:
      return disj(rnd_objective(rng, d - 1, atoms), rnd_objective(rng, d - 1, atoms));
    case 3:
      return implies(rnd_objective(rng, d - 1, atoms), rnd_objective(rng, d - 1, atoms));
    default:
      return atom(atoms[pick(rng, 0, atoms.size() - 1)]);
  }
}

Formula rnd_formula(std::mt19937_64& rng, int d, const std::vector<std::string>& atoms,
                    bool ordered) {
  if (d <= 0) return atom(atoms[pick(rng, 0, atoms.size() - 1)]);
  switch (pick(rng, 0, ordered ? 9 : 8)) {
    case 0:
      return negate(rnd_formula(rng, d - 1, atoms, ordered));
    case 1:
      return conj(rnd_formula(rng, d - 1, atoms, ordered),
                  rnd_formula(rng, d - 1, atoms, ordered));
    case 2:
      return disj(rnd_formula(rng, d - 1, atoms, ordered),
                  rnd_formula(rng, d - 1, atoms, ordered));
    case 3:
      return implies(rnd_formula(rng, d - 1, atoms, ordered),
                     rnd_formula(rng, d - 1, atoms, ordered));
    case 4:
      return knows(rnd_formula(rng, d - 1, atoms, ordered));
    case 5:
      return only(rnd_objective(rng, d - 1, atoms));
    case 6:
      return abd(rnd_objective(rng, d - 1, atoms));
    case 9:
      return pref(rnd_objective(rng, d - 1, atoms),
                  rnd_formula(rng, d - 1, atoms, ordered));
    default:
      return atom(atoms[pick(rng, 0, atoms.size() - 1)]);
  }
}

// Everything one randomized check needs, in replayable form.
struct Instance {
  ModelDocument doc;  // model, order, background theory, hypotheses
  std::vector<Formula> premises;
  std::vector<std::string> extra;  // defeasible premises (hypothesis atoms)
  std::string added;               // the premise the monotony laws add
  Formula f = truth();
  Formula g = truth();
  Formula observation = truth();
  std::map<std::string, int> priorities;
  std::size_t depth = 1;
  SelectionStrategy strategy = SelectionStrategy::Subset;
  WitnessMode mode = WitnessMode::TheorySubsets;
  std::optional<std::size_t> world;
};

nlohmann::json serialize(const std::string& property, const Instance& in) {
  nlohmann::json j;
  j["property"] = property;
  j["model"] = to_text(in.doc);
  std::vector<std::string> prem;
  for (const Formula& p : in.premises) prem.push_back(to_string(p));
  j["premises"] = prem;
  j["extra"] = in.extra;
  j["added"] = in.added;
  j["f"] = to_string(in.f);
  j["g"] = to_string(in.g);
  j["observation"] = to_string(in.observation);
  j["priorities"] = in.priorities;
  j["depth"] = in.depth;
  j["strategy"] = strategy_name(in.strategy);
  j["mode"] = mode_name(in.mode);
  j["world"] = in.world ? nlohmann::json(in.doc.model.worlds[*in.world])
                        : nlohmann::json();
  return j;
}

Instance deserialize(const nlohmann::json& j) {
  Instance in;
  in.doc = parse_model_text(j.at("model").get<std::string>());
  for (const auto& s : j.at("premises"))
    in.premises.push_back(parse(s.get<std::string>()));
  in.extra = j.at("extra").get<std::vector<std::string>>();
  in.added = j.at("added").get<std::string>();
  in.f = parse(j.at("f").get<std::string>());
  in.g = parse(j.at("g").get<std::string>());
  in.observation = parse(j.at("observation").get<std::string>());
  in.priorities = j.at("priorities").get<std::map<std::string, int>>();
  in.depth = j.at("depth").get<std::size_t>();
  in.strategy = strategy_of(j.at("strategy").get<std::string>());
  in.mode = mode_of(j.at("mode").get<std::string>());
  if (!j.at("world").is_null())
    in.world = in.doc.model.world_index(j.at("world").get<std::string>());
  return in;
}

struct Outcome {
  bool vacuous = true;
  bool ok = true;
  std::string note;
};

EvaluationContext make_ctx(const Instance& in) {
  EvaluationContext ctx;
  ctx.background = in.doc.theory;
  ctx.witness_mode = in.mode;
  return ctx;
}

std::span<const WorldSet> order_span(const Instance& in) {
  if (!in.doc.has_order) return {};
  return in.doc.better;
}

std::vector<WorldSet> chain(std::size_t n) {
  std::vector<WorldSet> better;
  for (std::size_t i = 0; i < n; ++i) better.push_back(bit(i) - 1);
  return better;
}

// ---- preferential and plain consequence properties ----

Instance consequence_base(const AuditConfig& cfg, std::mt19937_64& rng) {
  Instance in;
  PlausibilityModel m = model_from_rng(cfg, rng);
  in.doc.model = std::move(m.base);
  in.doc.better = std::move(m.better);
  in.doc.has_order = !in.doc.better.empty();
  const auto& atoms = in.doc.model.atoms;
  in.doc.theory.push_back(rnd_objective(rng, 2, atoms));
  if (pick(rng, 0, 1)) in.doc.theory.push_back(rnd_objective(rng, 2, atoms));
  const std::size_t k = pick(rng, 1, 2);
  for (std::size_t i = 0; i < k; ++i)
    in.premises.push_back(rnd_formula(rng, cfg.formula_depth, atoms, in.doc.has_order));
  return in;
}

// Candidate conclusions biased toward ones the premises actually carry at
// the minimal premise worlds; otherwise most trials are vacuous.
std::vector<Formula> pref_pool(const Instance& in, const AuditConfig& cfg,
                               std::mt19937_64& rng,
                               std::span<const Formula> premises) {
  std::vector<Formula> pool;
  EvaluationContext ctx = make_ctx(in);
  Evaluator ev(in.doc.model, ctx, order_span(in));
  const WorldSet support = premise_worlds(ev, premises);
  if (support) {
    pool.push_back(characteristic_formula(in.doc.model, ev.minimal_of(support)));
    pool.push_back(characteristic_formula(in.doc.model, support));
  }
  pool.push_back(disj(premises[0], rnd_objective(rng, 2, in.doc.model.atoms)));
  pool.push_back(rnd_formula(rng, cfg.formula_depth, in.doc.model.atoms, in.doc.has_order));
  pool.push_back(rnd_formula(rng, 2, in.doc.model.atoms, in.doc.has_order));
  return pool;
}

std::vector<Formula> plain_pool(const Instance& in, const AuditConfig& cfg,
                                std::mt19937_64& rng,
                                std::span<const Formula> premises) {
  std::vector<Formula> pool;
  EvaluationContext ctx = make_ctx(in);
  Evaluator ev(in.doc.model, ctx, order_span(in));
  const WorldSet support = premise_worlds(ev, premises);
  if (support) pool.push_back(characteristic_formula(in.doc.model, support));
  pool.push_back(disj(premises[0], rnd_objective(rng, 2, in.doc.model.atoms)));
  pool.push_back(rnd_formula(rng, cfg.formula_depth, in.doc.model.atoms, in.doc.has_order));
  pool.push_back(rnd_formula(rng, 2, in.doc.model.atoms, in.doc.has_order));
  return pool;
}

Instance gen_supra(const AuditConfig& cfg, std::mt19937_64& rng) {
  Instance in = consequence_base(cfg, rng);
  const auto pool = plain_pool(in, cfg, rng, in.premises);
  in.f = pool[pick(rng, 0, pool.size() - 1)];
  return in;
}

Outcome check_supra(const Instance& in) {
  EvaluationContext ctx = make_ctx(in);
  Evaluator ev(in.doc.model, ctx, order_span(in));
  if (premise_worlds(ev, in.premises) == 0) return {};
  if (!local_consequence(ev, in.premises, in.f)) return {};
  Outcome out;
  out.vacuous = false;
  PlausibilityModel pm{in.doc.model, in.doc.better};
  out.ok = preferential_consequence(pm, ctx, in.premises, in.f);
  if (!out.ok) out.note = "plainly entailed but lost at the minimal premise worlds";
  return out;
}

Outcome check_supra_plain(const Instance& in) {
  EvaluationContext ctx = make_ctx(in);
  Evaluator ev(in.doc.model, ctx, order_span(in));
  if (premise_worlds(ev, in.premises) == 0) return {};
  if (!local_consequence(ev, in.premises, in.f)) return {};
  Outcome out;
  out.vacuous = false;
  out.ok = local_consequence(ev, in.premises, in.f);
  return out;
}

Instance gen_refl(const AuditConfig& cfg, std::mt19937_64& rng) {
  Instance in = consequence_base(cfg, rng);
  in.f = in.premises[pick(rng, 0, in.premises.size() - 1)];
  return in;
}

Outcome check_refl(const Instance& in) {
  EvaluationContext ctx = make_ctx(in);
  Evaluator ev(in.doc.model, ctx, order_span(in));
  if (premise_worlds(ev, in.premises) == 0) return {};
  Outcome out;
  out.vacuous = false;
  PlausibilityModel pm{in.doc.model, in.doc.better};
  out.ok = preferential_consequence(pm, ctx, in.premises, in.f);
  if (!out.ok) out.note = "a premise failed as its own consequence";
  return out;
}

Outcome check_refl_plain(const Instance& in) {
  EvaluationContext ctx = make_ctx(in);
  Evaluator ev(in.doc.model, ctx, order_span(in));
  if (premise_worlds(ev, in.premises) == 0) return {};
  Outcome out;
  out.vacuous = false;
  out.ok = local_consequence(ev, in.premises, in.f);
  return out;
}

Instance gen_cm(const AuditConfig& cfg, std::mt19937_64& rng) {
  Instance in = consequence_base(cfg, rng);
  const auto pool = pref_pool(in, cfg, rng, in.premises);
  in.g = pool[pick(rng, 0, pool.size() - 1)];
  in.f = pool[pick(rng, 0, pool.size() - 1)];
  return in;
}

Outcome check_cm(const Instance& in) {
  EvaluationContext ctx = make_ctx(in);
  Evaluator ev(in.doc.model, ctx, order_span(in));
  if (premise_worlds(ev, in.premises) == 0) return {};
  PlausibilityModel pm{in.doc.model, in.doc.better};
  if (!preferential_consequence(pm, ctx, in.premises, in.g)) return {};
  if (!preferential_consequence(pm, ctx, in.premises, in.f)) return {};
  Outcome out;
  out.vacuous = false;
  std::vector<Formula> widened = in.premises;
  widened.push_back(in.g);
  out.ok = preferential_consequence(pm, ctx, widened, in.f);
  if (!out.ok)
    out.note = "adding the established consequence " + to_string(in.g) +
               " withdrew " + to_string(in.f);
  return out;
}

Instance gen_cm_plain(const AuditConfig& cfg, std::mt19937_64& rng) {
  Instance in = consequence_base(cfg, rng);
  const auto pool = plain_pool(in, cfg, rng, in.premises);
  in.g = pool[pick(rng, 0, pool.size() - 1)];
  in.f = pool[pick(rng, 0, pool.size() - 1)];
  return in;
}

Outcome check_cm_plain(const Instance& in) {
  EvaluationContext ctx = make_ctx(in);
  Evaluator ev(in.doc.model, ctx, order_span(in));
  if (premise_worlds(ev, in.premises) == 0) return {};
  if (!local_consequence(ev, in.premises, in.g)) return {};
  if (!local_consequence(ev, in.premises, in.f)) return {};
  Outcome out;
  out.vacuous = false;
  std::vector<Formula> widened = in.premises;
  widened.push_back(in.g);
  out.ok = local_consequence(ev, widened, in.f);
  if (!out.ok) out.note = "plain consequence lost a conclusion under growth";
  return out;
}

Instance gen_ct(const AuditConfig& cfg, std::mt19937_64& rng) {
  Instance in = consequence_base(cfg, rng);
  const auto pool1 = pref_pool(in, cfg, rng, in.premises);
  in.g = pool1[pick(rng, 0, pool1.size() - 1)];
  std::vector<Formula> widened = in.premises;
  widened.push_back(in.g);
  const auto pool2 = pref_pool(in, cfg, rng, widened);
  in.f = pool2[pick(rng, 0, pool2.size() - 1)];
  return in;
}

Outcome check_ct(const Instance& in) {
  EvaluationContext ctx = make_ctx(in);
  Evaluator ev(in.doc.model, ctx, order_span(in));
  if (premise_worlds(ev, in.premises) == 0) return {};
  PlausibilityModel pm{in.doc.model, in.doc.better};
  if (!preferential_consequence(pm, ctx, in.premises, in.g)) return {};
  std::vector<Formula> widened = in.premises;
  widened.push_back(in.g);
  if (!preferential_consequence(pm, ctx, widened, in.f)) return {};
  Outcome out;
  out.vacuous = false;
  out.ok = preferential_consequence(pm, ctx, in.premises, in.f);
  if (!out.ok)
    out.note = "conclusion " + to_string(in.f) + " needs the middle step " +
               to_string(in.g) + " as an explicit premise";
  return out;
}

Instance gen_ct_plain(const AuditConfig& cfg, std::mt19937_64& rng) {
  Instance in = consequence_base(cfg, rng);
  const auto pool1 = plain_pool(in, cfg, rng, in.premises);
  in.g = pool1[pick(rng, 0, pool1.size() - 1)];
  std::vector<Formula> widened = in.premises;
  widened.push_back(in.g);
  const auto pool2 = plain_pool(in, cfg, rng, widened);
  in.f = pool2[pick(rng, 0, pool2.size() - 1)];
  return in;
}

Outcome check_ct_plain(const Instance& in) {
  EvaluationContext ctx = make_ctx(in);
  Evaluator ev(in.doc.model, ctx, order_span(in));
  if (premise_worlds(ev, in.premises) == 0) return {};
  if (!local_consequence(ev, in.premises, in.g)) return {};
  std::vector<Formula> widened = in.premises;
  widened.push_back(in.g);
  if (!local_consequence(ev, widened, in.f)) return {};
  Outcome out;
  out.vacuous = false;
  out.ok = local_consequence(ev, in.premises, in.f);
  return out;
}

Instance gen_plain_monotony(const AuditConfig& cfg, std::mt19937_64& rng) {
  Instance in = consequence_base(cfg, rng);
  const auto pool = pref_pool(in, cfg, rng, in.premises);
  in.f = pool[pick(rng, 0, pool.size() - 1)];
  in.g = rnd_formula(rng, cfg.formula_depth, in.doc.model.atoms, in.doc.has_order);
  return in;
}

Outcome check_plain_monotony(const Instance& in) {
  EvaluationContext ctx = make_ctx(in);
  Evaluator ev(in.doc.model, ctx, order_span(in));
  if (premise_worlds(ev, in.premises) == 0) return {};
  PlausibilityModel pm{in.doc.model, in.doc.better};
  if (!preferential_consequence(pm, ctx, in.premises, in.f)) return {};
  Outcome out;
  out.vacuous = false;
  std::vector<Formula> widened = in.premises;
  widened.push_back(in.g);
  out.ok = preferential_consequence(pm, ctx, widened, in.f);
  if (!out.ok)
    out.note = "the unrelated premise " + to_string(in.g) + " withdrew " +
               to_string(in.f);
  return out;
}

std::vector<Instance> preseed_plain_monotony() {
  Instance in;
  in.doc.model.worlds = {"m1", "m2"};
  in.doc.model.atoms = {"p", "q"};
  in.doc.model.access = {0b01, 0b10};
  in.doc.model.truth = {0b01, 0b10};
  in.doc.better = {0b00, 0b01};
  in.doc.has_order = true;
  in.premises = {parse("p | q")};
  in.f = parse("p");
  in.g = parse("q");
  return {in};
}

// ---- abduction properties on plain frames ----

Instance gen_known_implication(const AuditConfig& cfg, std::mt19937_64& rng) {
  Instance in;
  PlausibilityModel m = model_from_rng(cfg, rng);
  in.doc.model = std::move(m.base);
  const auto& atoms = in.doc.model.atoms;
  const Formula b = rnd_objective(rng, 2, atoms);
  WorldSet s = 0;
  {
    EvaluationContext plainctx;
    Evaluator ev(in.doc.model, plainctx);
    s = ev.truth_set(b);
  }
  // only-knowing b must succeed somewhere: point the b-worlds at the b-set
  for (std::size_t w = 0; w < in.doc.model.world_count(); ++w)
    if ((s >> w) & 1) in.doc.model.access[w] = s;
  const Formula tau = rnd_objective(rng, 1, atoms);
  const Formula psi = disj(negate(b), tau);
  in.doc.theory = {b, implies(psi, b)};
  in.premises = {only(b), only(implies(psi, b))};
  in.f = abd(psi);
  in.g = psi;
  return in;
}

Outcome check_known_implication(const Instance& in) {
  EvaluationContext ctx = make_ctx(in);
  Evaluator ev(in.doc.model, ctx, order_span(in));
  if (premise_worlds(ev, in.premises) == 0) return {};
  Outcome out;
  out.vacuous = false;
  out.ok = local_consequence(ev, in.premises, in.f);
  if (!out.ok) out.note = "the implication antecedent was not explainable";
  return out;
}

Instance gen_closure(const AuditConfig& cfg, std::mt19937_64& rng) {
  Instance in;
  PlausibilityModel m = model_from_rng(cfg, rng);
  in.doc.model = std::move(m.base);
  const auto& atoms = in.doc.model.atoms;
  const std::size_t k = pick(rng, 1, 2);
  for (std::size_t i = 0; i < k; ++i)
    in.doc.theory.push_back(
        implies(rnd_objective(rng, 1, atoms), rnd_objective(rng, 1, atoms)));
  WorldSet t = 0;
  {
    EvaluationContext plainctx;
    Evaluator ev(in.doc.model, plainctx);
    t = ev.truth_set(conj_all(in.doc.theory));
  }
  const std::size_t steered = pick(rng, 1, std::min<std::size_t>(2, in.doc.model.world_count()));
  for (std::size_t i = 0; i < steered; ++i)
    in.doc.model.access[pick(rng, 0, in.doc.model.world_count() - 1)] = t;
  in.f = rnd_objective(rng, 2, atoms);
  in.g = rnd_objective(rng, 2, atoms);
  in.observation = rnd_objective(rng, 2, atoms);
  return in;
}

Outcome check_closure(const Instance& in) {
  EvaluationContext ctx = make_ctx(in);
  Evaluator ev(in.doc.model, ctx, order_span(in));
  Outcome out;
  const std::vector<Formula> both = {abd(in.f), abd(in.g)};
  const WorldSet p1 = premise_worlds(ev, both);
  if (p1) {
    out.vacuous = false;
    if (!local_consequence(ev, both, abd(conj(in.f, in.g))) ||
        !local_consequence(ev, both, abd(disj(in.f, in.g)))) {
      out.ok = false;
      out.note = "two explainable formulas with an unexplainable combination";
      return out;
    }
  }
  const std::vector<Formula> chained = {abd(in.f), abd(implies(in.f, in.observation))};
  const WorldSet p2 = premise_worlds(ev, chained);
  if (p2) {
    out.vacuous = false;
    if (!local_consequence(ev, chained, abd(in.observation))) {
      out.ok = false;
      out.note = "chaining through a known implication broke explainability";
    }
  }
  return out;
}

Instance gen_nonvacuity(const AuditConfig& cfg, std::mt19937_64& rng) {
  Instance in;
  PlausibilityModel m = model_from_rng(cfg, rng);
  in.doc.model = std::move(m.base);
  const auto& atoms = in.doc.model.atoms;
  const std::size_t k = pick(rng, 1, 2);
  for (std::size_t i = 0; i < k; ++i)
    in.doc.theory.push_back(rnd_objective(rng, 2, atoms));
  WorldSet t = 0;
  {
    EvaluationContext plainctx;
    Evaluator ev(in.doc.model, plainctx);
    t = ev.truth_set(conj_all(in.doc.theory));
  }
  in.doc.model.access[pick(rng, 0, in.doc.model.world_count() - 1)] = t;
  in.f = rnd_objective(rng, 2, atoms);
  return in;
}

Outcome check_nonvacuity(const Instance& in) {
  EvaluationContext ctx = make_ctx(in);
  Evaluator ev(in.doc.model, ctx, order_span(in));
  const WorldSet explained = ev.truth_set(abd(in.f));
  if (!explained) return {};
  Outcome out;
  out.vacuous = false;
  const WorldSet denied = ev.truth_set(knows(negate(in.f)));
  const WorldSet bad = explained & denied;
  out.ok = (bad == 0);
  if (!out.ok) {
    const auto w = static_cast<std::size_t>(std::countr_zero(bad));
    out.note = to_string(in.f) + " is explainable at " + in.doc.model.worlds[w] +
               " although its negation is known there";
  }
  return out;
}

std::vector<Instance> preseed_nonvacuity() {
  Instance in;
  in.doc.model.worlds = {"w1"};
  in.doc.model.atoms = {"p", "q"};
  in.doc.model.access = {0b1};
  in.doc.model.truth = {0b1, 0b0};
  in.doc.theory = {parse("p")};
  in.f = parse("q");
  return {in};
}

Instance gen_witness_adequacy(const AuditConfig& cfg, std::mt19937_64& rng) {
  Instance in;
  PlausibilityModel m = model_from_rng(cfg, rng);
  in.doc.model = std::move(m.base);
  const auto& atoms = in.doc.model.atoms;
  const std::size_t k = pick(rng, 1, 3);
  for (std::size_t i = 0; i < k; ++i)
    in.doc.theory.push_back(rnd_objective(rng, 2, atoms));
  const std::uint32_t subset =
      static_cast<std::uint32_t>(pick(rng, 1, (std::uint32_t{1} << k) - 1));
  std::vector<Formula> chosen;
  for (std::size_t i = 0; i < k; ++i)
    if ((subset >> i) & 1) chosen.push_back(in.doc.theory[i]);
  WorldSet t = 0;
  {
    EvaluationContext plainctx;
    Evaluator ev(in.doc.model, plainctx);
    t = ev.truth_set(conj_all(chosen));
  }
  in.doc.model.access[pick(rng, 0, in.doc.model.world_count() - 1)] = t;
  in.f = rnd_objective(rng, 2, atoms);
  return in;
}

Outcome check_witness_adequacy(const Instance& in) {
  EvaluationContext ctx = make_ctx(in);
  Evaluator ev(in.doc.model, ctx, order_span(in));
  const WorldSet explained = ev.truth_set(abd(in.f));
  Outcome out;
  for (std::size_t w = 0; w < in.doc.model.world_count(); ++w) {
    if (!((explained >> w) & 1)) continue;
    out.vacuous = false;
    const auto alpha = ev.witness(in.f, w);
    if (!alpha) {
      out.ok = false;
      out.note = "a positive verdict at " + in.doc.model.worlds[w] +
                 " produced no witness";
      return out;
    }
    const WorldSet t_alpha = ev.truth_set(*alpha);
    const WorldSet t_impl = ev.truth_set(implies(in.f, *alpha));
    if (t_alpha != in.doc.model.access[w] ||
        (in.doc.model.access[w] & ~t_impl) != 0) {
      out.ok = false;
      out.note = "witness " + to_string(*alpha) +
                 " fails the exact-knowledge or entailment re-check at " +
                 in.doc.model.worlds[w];
      return out;
    }
  }
  return out;
}

// ---- solver-level explanation properties ----

void ensure_atoms(ModelDocument& doc, std::size_t want, std::mt19937_64& rng) {
  const WorldSet all = doc.model.all_worlds();
  while (doc.model.atoms.size() < want && doc.model.atoms.size() < 8) {
    doc.model.atoms.push_back(kAtomPool[doc.model.atoms.size()]);
    doc.model.truth.push_back(rng() & all);
  }
}

Instance gen_wellformed(const AuditConfig& cfg, std::mt19937_64& rng) {
  Instance in;
  PlausibilityModel m = model_from_rng(cfg, rng);
  in.doc.model = std::move(m.base);
  in.doc.better = std::move(m.better);
  in.doc.has_order = !in.doc.better.empty();
  ensure_atoms(in.doc, 2, rng);
  const auto& atoms = in.doc.model.atoms;
  const std::size_t h = pick(rng, 1, std::min<std::size_t>(2, atoms.size() - 1));
  std::vector<std::string> hyps(atoms.begin(), atoms.begin() + h);
  const std::vector<std::string> symptoms(atoms.begin() + h, atoms.end());
  for (const auto& hyp : hyps)
    in.doc.theory.push_back(implies(atom(hyp), rnd_objective(rng, 1, symptoms)));
  Formula obs = atom(symptoms[pick(rng, 0, symptoms.size() - 1)]);
  if (symptoms.size() > 1 && pick(rng, 0, 1))
    obs = conj(obs, atom(symptoms[pick(rng, 0, symptoms.size() - 1)]));
  in.observation = obs;
  in.doc.hypotheses = hyps;
  for (std::size_t i = 0; i < hyps.size(); ++i)
    in.priorities[hyps[i]] = static_cast<int>(i) + 1;
  in.depth = 2;
  return in;
}

AbductionProblem problem_of(const Instance& in) {
  AbductionProblem p;
  p.background = in.doc.theory;
  p.observation = in.observation;
  p.hypotheses = in.doc.hypotheses;
  p.candidate_depth = in.depth;
  p.priorities = in.priorities;
  return p;
}

Outcome check_wellformed(const Instance& in) {
  const AbductionProblem p = problem_of(in);
  ExplanationFamily fam;
  try {
    fam = enumerate_explanations(p, in.doc.model, order_span(in));
  } catch (const eval_error&) {
    return {};  // background already forces the observation: nothing to explain
  }
  if (fam.members.empty()) return {};
  EvaluationContext plainctx;
  Evaluator ev(in.doc.model, plainctx, order_span(in));
  WorldSet bg_support = in.doc.model.all_worlds();
  for (const Formula& th : in.doc.theory) bg_support &= ev.truth_set(th);
  const WorldSet obs_worlds = ev.truth_set(in.observation);
  Outcome out;
  out.vacuous = false;
  for (const CandidateMask mask : fam.members) {
    const Formula cand = candidate_formula(p, mask);
    std::vector<Formula> together = in.doc.theory;
    together.push_back(cand);
    const WorldSet support = bg_support & ev.truth_set(cand);
    const bool consistent = satisfiable(together) && support != 0;
    const bool novel_bg = !taut_entails(in.doc.theory, in.observation);
    const std::vector<Formula> alone = {cand};
    const bool novel_cand = !taut_entails(alone, in.observation);
    const WorldSet decisive = in.doc.has_order ? ev.minimal_of(support) : support;
    const bool entails = (decisive & ~obs_worlds) == 0;
    if (!(consistent && novel_bg && novel_cand && entails)) {
      out.ok = false;
      out.note = "reported explanation " + to_string(cand) +
                 " fails an independent well-formedness re-check";
      return out;
    }
  }
  return out;
}

Instance gen_restriction(const AuditConfig& cfg, std::mt19937_64& rng) {
  Instance in;
  PlausibilityModel m = model_from_rng(cfg, rng);
  in.doc.model = std::move(m.base);
  const auto& atoms = in.doc.model.atoms;
  if (pick(rng, 0, 1)) {
    // the hypothesis contradicts the only-known theory: restriction must
    // come back empty, and the checker verifies the emptiness is genuine
    const Formula c = rnd_objective(rng, 2, atoms);
    WorldSet cset = 0;
    {
      EvaluationContext plainctx;
      Evaluator ev(in.doc.model, plainctx);
      cset = ev.truth_set(c);
    }
    const std::size_t w0 = pick(rng, 0, in.doc.model.world_count() - 1);
    in.doc.model.access[w0] = cset;
    in.doc.theory = {c};
    in.f = conj(negate(c), rnd_objective(rng, 1, atoms));
    in.mode = WitnessMode::TheorySubsets;
    in.world = w0;
  } else {
    // hypothesis worlds survive the restriction but live outside the
    // considered set, so the unrestricted verdict coexists with K of the
    // negation until the restriction removes the mismatch
    ensure_atoms(in.doc, 2, rng);
    const Formula a0 = atom(in.doc.model.atoms[0]);
    const Formula a1 = atom(in.doc.model.atoms[1]);
    const Formula t_side = conj(a0, negate(a1));
    const Formula u_side = conj(a1, negate(a0));
    WorldSet u = 0;
    {
      EvaluationContext plainctx;
      Evaluator ev(in.doc.model, plainctx);
      u = ev.truth_set(u_side);
    }
    const std::size_t w0 = pick(rng, 0, in.doc.model.world_count() - 1);
    in.doc.model.access[w0] = u;
    in.doc.theory = {disj(t_side, u_side)};
    in.f = t_side;
    in.mode = WitnessMode::Unrestricted;
    in.world = w0;
  }
  return in;
}

Outcome check_restriction(const Instance& in) {
  EvaluationContext ctx = make_ctx(in);
  Evaluator ev(in.doc.model, ctx, order_span(in));
  const std::size_t w0 = in.world.value_or(0);
  if (!ev.satisfies(abd(in.f), w0) || !ev.satisfies(knows(negate(in.f)), w0))
    return {};
  Outcome out;
  out.vacuous = false;
  const auto sub = restrict_nonvacuous(in.doc.model, ctx, in.f);
  if (!sub) {
    WorldSet support = in.doc.model.all_worlds();
    for (const Formula& th : in.doc.theory) support &= ev.truth_set(th);
    support &= ev.truth_set(in.f);
    out.ok = (support == 0);
    if (!out.ok)
      out.note = "restriction refused although supporting worlds exist";
    return out;
  }
  EvaluationContext subctx;
  subctx.background = in.doc.theory;
  Evaluator sev(sub->model, subctx);
  for (std::size_t w = 0; w < sub->model.world_count(); ++w) {
    if (sev.satisfies(abd(in.f), w) && sev.satisfies(knows(negate(in.f)), w)) {
      out.ok = false;
      out.note = "retained world " + sub->model.worlds[w] +
                 " still knows the negation of the explained formula";
      return out;
    }
  }
  return out;
}

Instance gen_family(const AuditConfig& cfg, std::mt19937_64& rng) {
  Instance in;
  PlausibilityModel m = model_from_rng(cfg, rng);
  in.doc.model = std::move(m.base);
  in.doc.better = std::move(m.better);
  in.doc.has_order = !in.doc.better.empty();
  ensure_atoms(in.doc, 2, rng);
  const auto& atoms = in.doc.model.atoms;
  const std::size_t h = pick(rng, 2, std::min<std::size_t>(3, atoms.size()));
  in.doc.hypotheses.assign(atoms.begin(), atoms.begin() + h);
  const std::size_t k = pick(rng, 0, 2);
  for (std::size_t i = 0; i < k; ++i)
    in.doc.theory.push_back(rnd_objective(rng, 2, atoms));
  in.observation = rnd_objective(rng, 2, atoms);
  std::vector<int> levels(h);
  std::iota(levels.begin(), levels.end(), 1);
  std::shuffle(levels.begin(), levels.end(), rng);
  for (std::size_t i = 0; i < h; ++i) in.priorities[in.doc.hypotheses[i]] = levels[i];
  in.depth = 0;  // the whole hypothesis lattice
  return in;
}

Outcome check_family_minimality(const Instance& in) {
  const AbductionProblem p = problem_of(in);
  ExplanationFamily fam;
  try {
    fam = enumerate_explanations(p, in.doc.model, order_span(in),
                                 CandidateFilter::EntailmentOnly);
  } catch (const eval_error&) {
    return {};
  }
  if (fam.members.empty()) return {};
  const std::set<CandidateMask> family(fam.members.begin(), fam.members.end());
  const auto picked = select(fam, p, SelectionStrategy::Subset);
  const std::set<CandidateMask> chosen(picked.begin(), picked.end());
  Outcome out;
  out.vacuous = false;
  for (const CandidateMask d : fam.members) {
    bool no_smaller = true;
    for (CandidateMask sub = (d - 1) & d; sub; sub = (sub - 1) & d)
      if (family.count(sub)) {
        no_smaller = false;
        break;
      }
    if (no_smaller != (chosen.count(d) != 0)) {
      out.ok = false;
      out.note = "subset selection and proper-subset membership disagree on " +
                 to_string(candidate_formula(p, d));
      return out;
    }
  }
  for (const CandidateMask d : picked)
    for (CandidateMask sub = (d - 1) & d; sub; sub = (sub - 1) & d)
      if (candidate_entails(p, in.doc.model, order_span(in), sub, true)) {
        out.ok = false;
        out.note = "a selected explanation has a classically sufficient proper subset";
        return out;
      }
  return out;
}

Outcome check_coincidence(const Instance& in) {
  const AbductionProblem p = problem_of(in);
  ExplanationFamily fam;
  try {
    fam = enumerate_explanations(p, in.doc.model, order_span(in),
                                 CandidateFilter::EntailmentOnly);
  } catch (const eval_error&) {
    return {};
  }
  if (fam.members.empty()) return {};
  const auto by_subset = select(fam, p, SelectionStrategy::Subset);
  const auto by_size = select(fam, p, SelectionStrategy::Cardinality);
  Outcome out;
  out.vacuous = false;
  out.ok = (by_subset == by_size);
  if (!out.ok) {
    out.note = "subset selection keeps " + std::to_string(by_subset.size()) +
               " sets, cardinality keeps " + std::to_string(by_size.size());
    for (const CandidateMask d : by_subset)
      if (std::find(by_size.begin(), by_size.end(), d) == by_size.end()) {
        out.note += "; " + to_string(candidate_formula(p, d)) +
                    " survives only the subset rule";
        break;
      }
  }
  return out;
}

std::vector<Instance> preseed_coincidence() {
  Instance in;
  in.doc.model.worlds = {"m1", "m2", "m3", "m4", "m5"};
  in.doc.model.atoms = {"x", "y", "z", "obs"};
  for (std::size_t i = 0; i < 5; ++i) in.doc.model.access.push_back(bit(i));
  in.doc.model.truth = {2, 20, 24, 18};
  in.doc.better = chain(5);
  in.doc.has_order = true;
  in.doc.hypotheses = {"x", "y", "z"};
  in.priorities = {{"x", 1}, {"y", 2}, {"z", 3}};
  in.observation = parse("obs");
  in.depth = 0;
  return {in};
}

// ---- the selection-guided consequence relations ----

Instance star_base(const AuditConfig& cfg, std::mt19937_64& rng,
                   std::size_t hyp_count) {
  Instance in;
  PlausibilityModel m = model_from_rng(cfg, rng);
  in.doc.model = std::move(m.base);
  in.doc.better = std::move(m.better);
  in.doc.has_order = !in.doc.better.empty();
  ensure_atoms(in.doc, hyp_count + 1, rng);
  const auto& atoms = in.doc.model.atoms;
  const std::size_t h = std::min(hyp_count, atoms.size() - 1);
  in.doc.hypotheses.assign(atoms.begin(), atoms.begin() + h);
  const std::vector<std::string> symptoms(atoms.begin() + h, atoms.end());
  for (const auto& hyp : in.doc.hypotheses)
    in.doc.theory.push_back(implies(atom(hyp), rnd_objective(rng, 1, symptoms)));
  std::vector<int> levels(h);
  std::iota(levels.begin(), levels.end(), 1);
  std::shuffle(levels.begin(), levels.end(), rng);
  for (std::size_t i = 0; i < h; ++i) in.priorities[in.doc.hypotheses[i]] = levels[i];
  in.f = atom(symptoms[pick(rng, 0, symptoms.size() - 1)]);
  switch (pick(rng, 0, 2)) {
    case 0: in.strategy = SelectionStrategy::Subset; break;
    case 1: in.strategy = SelectionStrategy::Cardinality; break;
    default: in.strategy = SelectionStrategy::Priorization; break;
  }
  return in;
}

Instance gen_star_identity(const AuditConfig& cfg, std::mt19937_64& rng) {
  Instance in = star_base(cfg, rng, 2);
  const std::size_t first = pick(rng, 0, in.doc.hypotheses.size() - 1);
  in.extra = {in.doc.hypotheses[first]};
  if (in.doc.hypotheses.size() > 1 && pick(rng, 0, 1))
    in.extra.push_back(in.doc.hypotheses[1 - first]);
  in.f = atom(in.extra[0]);
  for (auto& [name, level] : in.priorities) level = (name == in.extra[0]) ? 1 : 2;
  return in;
}

Outcome check_star_supra(const Instance& in) {
  EvaluationContext ctx = make_ctx(in);
  Evaluator ev(in.doc.model, ctx, order_span(in));
  std::vector<Formula> prem = in.doc.theory;
  for (const auto& e : in.extra) prem.push_back(atom(e));
  if (!local_consequence(ev, prem, in.f)) return {};
  Outcome out;
  out.vacuous = false;
  out.ok = star_consequence(problem_of(in), in.doc.model, order_span(in),
                            in.extra, in.f, in.strategy)
               .holds;
  if (!out.ok) out.note = "a plainly entailed conclusion failed the selection route";
  return out;
}

Outcome check_star_refl(const Instance& in) {
  Outcome out;
  out.vacuous = false;
  out.ok = star_consequence(problem_of(in), in.doc.model, order_span(in),
                            in.extra, in.f, in.strategy)
               .holds;
  if (!out.ok) out.note = "a hypothesis premise failed as its own consequence";
  return out;
}

Instance gen_star_cm(const AuditConfig& cfg, std::mt19937_64& rng) {
  Instance in = star_base(cfg, rng, 3);
  if (in.doc.hypotheses.size() < 3) {
    // too few atoms for a third hypothesis; the trial will be vacuous
    in.extra = {in.doc.hypotheses[0]};
    in.added = in.doc.hypotheses.back();
    return in;
  }
  std::vector<std::size_t> idx = {0, 1, 2};
  std::shuffle(idx.begin(), idx.end(), rng);
  in.extra = {in.doc.hypotheses[idx[0]], in.doc.hypotheses[idx[1]]};
  in.added = in.doc.hypotheses[idx[2]];
  return in;
}

Outcome check_star_cm(const Instance& in) {
  const AbductionProblem p = problem_of(in);
  const auto better = order_span(in);
  if (!star_consequence(p, in.doc.model, better, in.extra, atom(in.added),
                        in.strategy)
           .holds)
    return {};
  if (!star_consequence(p, in.doc.model, better, in.extra, in.f, in.strategy).holds)
    return {};
  Outcome out;
  out.vacuous = false;
  std::vector<std::string> widened = in.extra;
  widened.push_back(in.added);
  out.ok = star_consequence(p, in.doc.model, better, widened, in.f, in.strategy)
               .holds;
  if (!out.ok)
    out.note = "adding " + in.added + " withdrew " + to_string(in.f) +
               " under the " + strategy_name(in.strategy) + " selection";
  return out;
}

Instance gen_star_ct(const AuditConfig& cfg, std::mt19937_64& rng) {
  Instance in = star_base(cfg, rng, 2);
  const std::size_t first = pick(rng, 0, in.doc.hypotheses.size() - 1);
  in.extra = {in.doc.hypotheses[first]};
  in.added = in.doc.hypotheses[in.doc.hypotheses.size() == 1 ? first : 1 - first];
  return in;
}

Outcome check_star_ct(const Instance& in) {
  const AbductionProblem p = problem_of(in);
  const auto better = order_span(in);
  if (!star_consequence(p, in.doc.model, better, in.extra, atom(in.added),
                        in.strategy)
           .holds)
    return {};
  std::vector<std::string> widened = in.extra;
  widened.push_back(in.added);
  if (!star_consequence(p, in.doc.model, better, widened, in.f, in.strategy).holds)
    return {};
  Outcome out;
  out.vacuous = false;
  out.ok = star_consequence(p, in.doc.model, better, in.extra, in.f, in.strategy)
               .holds;
  if (!out.ok)
    out.note = "the conclusion " + to_string(in.f) + " needs " + in.added +
               " as an explicit premise under the " +
               strategy_name(in.strategy) + " selection";
  return out;
}

std::vector<Formula> triage_rules() {
  return {parse("common_cold -> (sore_throat | cough)"),
          parse("strep_throat -> (sore_throat & fever)"),
          parse("allergies -> (headache | itchy_eyes)")};
}

Instance cm_witness(SelectionStrategy s) {
  Instance in;
  KripkeModel& b = in.doc.model;
  b.worlds = {"u1", "u2", "u3", "u4", "u5"};
  b.atoms = {"common_cold", "strep_throat", "allergies", "cough",
             "headache",    "sore_throat",  "fever",     "itchy_eyes"};
  for (std::size_t i = 0; i < 5; ++i) b.access.push_back(bit(i));
  b.truth = {19, 24, 20, 2, 18, 24, 24, 4};
  in.doc.better = chain(5);
  in.doc.has_order = true;
  in.doc.theory = triage_rules();
  in.doc.hypotheses = {"common_cold", "strep_throat", "allergies"};
  in.priorities = {{"common_cold", 1}, {"strep_throat", 2}, {"allergies", 3}};
  in.extra = {"strep_throat", "allergies"};
  in.added = "common_cold";
  in.f = parse("headache");
  in.strategy = s;
  return in;
}

Instance ct_witness(SelectionStrategy s) {
  Instance in;
  KripkeModel& b = in.doc.model;
  b.worlds = {"v0", "v1", "v2"};
  b.atoms = {"common_cold", "strep_throat", "allergies",  "sore_throat",
             "fever",       "headache",     "itchy_eyes", "cough"};
  for (std::size_t i = 0; i < 3; ++i) b.access.push_back(bit(i));
  b.truth = {0, 7, 6, 5, 5, 0, 4, 0};
  in.doc.better = chain(3);
  in.doc.has_order = true;
  in.doc.theory = triage_rules();
  in.doc.hypotheses = {"strep_throat", "allergies"};
  in.priorities = {{"strep_throat", 1}, {"allergies", 2}};
  in.extra = {"allergies"};
  in.added = "strep_throat";
  in.f = parse("fever");
  in.strategy = s;
  return in;
}

std::vector<Instance> preseed_star_cm() {
  return {cm_witness(SelectionStrategy::Subset),
          cm_witness(SelectionStrategy::Cardinality),
          cm_witness(SelectionStrategy::Priorization)};
}

std::vector<Instance> preseed_star_ct() {
  return {ct_witness(SelectionStrategy::Subset),
          ct_witness(SelectionStrategy::Cardinality),
          ct_witness(SelectionStrategy::Priorization)};
}

// ---- registry ----

using Gen = Instance (*)(const AuditConfig&, std::mt19937_64&);
using Chk = Outcome (*)(const Instance&);
using Pre = std::vector<Instance> (*)();

struct PropertySpec {
  const char* name;
  const char* claim;
  Gen gen;
  Chk check;
  Pre preseeds;            // may be null
  FrameClass frame;        // generation frame when forced
  bool force_frame;
};

const std::vector<PropertySpec>& registry() {
  static const std::vector<PropertySpec> props = {
      {"supraclassicality",
       "plainly entailed conclusions survive as preferential consequences",
       gen_supra, check_supra, nullptr, FrameClass::Order, true},
      {"reflexivity",
       "every premise is a preferential consequence of its own premise set",
       gen_refl, check_refl, nullptr, FrameClass::Order, true},
      {"cautious_monotony",
       "adding an established preferential consequence preserves the others",
       gen_cm, check_cm, nullptr, FrameClass::Order, true},
      {"cautious_transitivity",
       "conclusions reachable through an established consequence are reachable without it",
       gen_ct, check_ct, nullptr, FrameClass::Order, true},
      {"plain_monotony",
       "adding arbitrary premises never withdraws a preferential consequence",
       gen_plain_monotony, check_plain_monotony, preseed_plain_monotony,
       FrameClass::Order, true},
      {"abduction_from_known_implication",
       "on reflexive frames, only-knowing a formula and an implication into it "
       "makes the implication's antecedent explainable",
       gen_known_implication, check_known_implication, nullptr,
       FrameClass::Reflexive, true},
      {"abduction_closure",
       "explainable formulas are closed under conjunction, disjunction, and "
       "chaining through known implications",
       gen_closure, check_closure, nullptr, FrameClass::Arbitrary, false},
      {"abduction_nonvacuity",
       "an explainable formula is never known to be false",
       gen_nonvacuity, check_nonvacuity, preseed_nonvacuity,
       FrameClass::Arbitrary, false},
      {"theory_witness_adequacy",
       "every positive explainability verdict is backed by a theory-subset "
       "witness passing the exact-knowledge and entailment checks",
       gen_witness_adequacy, check_witness_adequacy, nullptr,
       FrameClass::Arbitrary, false},
      {"explanation_wellformedness",
       "reported explanations are consistent with the background, genuinely "
       "needed, and sufficient for the observation",
       gen_wellformed, check_wellformed, nullptr, FrameClass::Arbitrary, false},
      {"restriction_restores_nonvacuity",
       "restricting to background worlds compatible with the hypothesis leaves "
       "no world that both explains it and knows its negation",
       gen_restriction, check_restriction, nullptr, FrameClass::Arbitrary, false},
      {"subset_minimality_equivalence",
       "a family member is subset-selected exactly when no proper subset is in "
       "the family, and selected members have no classically sufficient proper subset",
       gen_family, check_family_minimality, nullptr, FrameClass::Order, true},
      {"selection_coincidence",
       "the subset and cardinality selections pick the same sets",
       gen_family, check_coincidence, preseed_coincidence, FrameClass::Order, true},
      {"star_cautious_monotony",
       "cautious monotony for the selection-guided consequence relations",
       gen_star_cm, check_star_cm, preseed_star_cm, FrameClass::Order, true},
      {"star_cautious_transitivity",
       "cautious transitivity for the selection-guided consequence relations",
       gen_star_ct, check_star_ct, preseed_star_ct, FrameClass::Order, true},
  };
  return props;
}

// Checks reachable through matrix witnesses but not exposed as audits.
struct HiddenSpec {
  const char* name;
  Chk check;
};

const std::vector<HiddenSpec>& hidden_checks() {
  static const std::vector<HiddenSpec> specs = {
      {"plain_supraclassicality", check_supra_plain},
      {"plain_reflexivity", check_refl_plain},
      {"plain_cautious_monotony", check_cm_plain},
      {"plain_cautious_transitivity", check_ct_plain},
      {"star_supraclassicality", check_star_supra},
      {"star_reflexivity", check_star_refl},
  };
  return specs;
}

const PropertySpec* find_property(const std::string& name) {
  for (const auto& p : registry())
    if (name == p.name) return &p;
  return nullptr;
}

Outcome run_check(Chk check, const Instance& in) {
  try {
    return check(in);
  } catch (const eval_error& e) {
    Outcome out;
    out.note = e.what();
    return out;
  } catch (const model_error& e) {
    Outcome out;
    out.note = e.what();
    return out;
  }
}

}  // namespace

nlohmann::json AuditReport::to_json() const {
  nlohmann::json j;
  j["property"] = property;
  j["claim"] = claim;
  j["config"] = config_json(config);
  j["trials"] = trials;
  j["non_vacuous"] = non_vacuous;
  j["failures"] = failures;
  j["verdict"] = verdict;
  auto arr = nlohmann::json::array();
  for (const auto& c : counterexamples)
    arr.push_back({{"instance", c.instance}, {"note", c.note}});
  j["counterexamples"] = arr;
  return j;
}

std::vector<std::string> audit_names() {
  std::vector<std::string> names;
  for (const auto& p : registry()) names.emplace_back(p.name);
  return names;
}

PlausibilityModel generate_model(const AuditConfig& cfg, std::size_t trial) {
  auto rng = mixed_rng(cfg.seed, 0, trial);
  return model_from_rng(cfg, rng);
}

AuditReport audit(const std::string& property, const AuditConfig& cfg) {
  const PropertySpec* spec = find_property(property);
  if (!spec) throw eval_error("unknown audit property '" + property + "'");
  AuditReport report;
  report.property = spec->name;
  report.claim = spec->claim;
  report.config = cfg;
  AuditConfig gen_cfg = cfg;
  if (spec->force_frame) gen_cfg.frame = spec->frame;
  const std::vector<Instance> pre = spec->preseeds ? spec->preseeds()
                                                   : std::vector<Instance>{};
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    Instance in;
    if (t < pre.size()) {
      in = pre[t];
    } else {
      auto rng = mixed_rng(cfg.seed, 1, t);
      in = spec->gen(gen_cfg, rng);
    }
    const Outcome out = run_check(spec->check, in);
    ++report.trials;
    if (out.vacuous) continue;
    ++report.non_vacuous;
    if (!out.ok) {
      ++report.failures;
      if (report.counterexamples.size() < 5)
        report.counterexamples.push_back({serialize(spec->name, in), out.note});
    }
  }
  if (report.failures > 0)
    report.verdict = "refuted";
  else
    report.verdict = report.non_vacuous > 0 ? "confirmed" : "vacuous";
  return report;
}

bool replay(const nlohmann::json& instance) {
  const std::string name = instance.at("property").get<std::string>();
  Chk check = nullptr;
  if (const PropertySpec* spec = find_property(name)) {
    check = spec->check;
  } else {
    for (const auto& h : hidden_checks())
      if (name == h.name) check = h.check;
  }
  if (!check) return false;
  try {
    const Instance in = deserialize(instance);
    const Outcome out = run_check(check, in);
    return !out.vacuous && !out.ok;
  } catch (const std::exception&) {
    return false;
  }
}

nlohmann::json PropertyMatrix::to_json() const {
  nlohmann::json j;
  j["config"] = config_json(config);
  j["rows"] = rows;
  j["columns"] = columns;
  auto cell_rows = nlohmann::json::array();
  auto diffs = nlohmann::json::array();
  for (std::size_t r = 0; r < cells.size(); ++r) {
    auto row = nlohmann::json::array();
    for (std::size_t c = 0; c < cells[r].size(); ++c) {
      const MatrixCell& cell = cells[r][c];
      row.push_back({{"published", cell.published},
                     {"observed", cell.observed},
                     {"trials", cell.trials},
                     {"non_vacuous", cell.non_vacuous},
                     {"failures", cell.failures}});
      if (cell.published != cell.observed)
        diffs.push_back({{"row", rows[r]},
                         {"column", columns[c]},
                         {"published", cell.published},
                         {"observed", cell.observed}});
    }
    cell_rows.push_back(row);
  }
  j["cells"] = cell_rows;
  j["diffs"] = diffs;
  auto arr = nlohmann::json::array();
  for (const auto& w : witnesses)
    arr.push_back({{"instance", w.instance}, {"note", w.note}});
  j["witnesses"] = arr;
  return j;
}

std::string PropertyMatrix::to_text() const {
  std::ostringstream out;
  out << std::left << std::setw(24) << "property";
  for (const auto& c : columns) out << std::setw(14) << c;
  out << '\n';
  bool any_diff = false;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    out << std::setw(24) << rows[r];
    for (const MatrixCell& cell : cells[r]) {
      std::string mark = cell.observed ? "yes" : "no";
      if (cell.published != cell.observed) {
        mark += "*";
        any_diff = true;
      }
      out << std::setw(14) << mark;
    }
    out << '\n';
  }
  if (any_diff) {
    out << "* computed value differs from the published one\n";
    for (std::size_t r = 0; r < cells.size(); ++r)
      for (std::size_t c = 0; c < cells[r].size(); ++c) {
        const MatrixCell& cell = cells[r][c];
        if (cell.published == cell.observed) continue;
        out << "diff: " << rows[r] << " under " << columns[c] << ": computed "
            << (cell.observed ? "yes" : "no") << ", published "
            << (cell.published ? "yes" : "no") << '\n';
      }
  }
  for (const auto& w : witnesses) out << "witness: " << w.note << '\n';
  return out.str();
}

PropertyMatrix property_matrix(const AuditConfig& cfg) {
  PropertyMatrix mx;
  mx.config = cfg;
  mx.rows = {"supraclassicality", "reflexivity", "cautious_monotony",
             "cautious_transitivity"};
  mx.columns = {"plain", "preferential", "subset", "cardinality", "priorization"};
  static const bool published[4][5] = {
      {true, true, true, true, true},
      {true, true, true, true, true},
      {false, true, false, false, false},
      {false, true, true, true, false},
  };
  static const Gen gens[4][5] = {
      {gen_supra, gen_supra, gen_star_identity, gen_star_identity, gen_star_identity},
      {gen_refl, gen_refl, gen_star_identity, gen_star_identity, gen_star_identity},
      {gen_cm_plain, gen_cm, gen_star_cm, gen_star_cm, gen_star_cm},
      {gen_ct_plain, gen_ct, gen_star_ct, gen_star_ct, gen_star_ct},
  };
  static const Chk checks[4][5] = {
      {check_supra_plain, check_supra, check_star_supra, check_star_supra,
       check_star_supra},
      {check_refl_plain, check_refl, check_star_refl, check_star_refl,
       check_star_refl},
      {check_cm_plain, check_cm, check_star_cm, check_star_cm, check_star_cm},
      {check_ct_plain, check_ct, check_star_ct, check_star_ct, check_star_ct},
  };
  static const char* witness_names[4][5] = {
      {"plain_supraclassicality", "supraclassicality", "star_supraclassicality",
       "star_supraclassicality", "star_supraclassicality"},
      {"plain_reflexivity", "reflexivity", "star_reflexivity",
       "star_reflexivity", "star_reflexivity"},
      {"plain_cautious_monotony", "cautious_monotony", "star_cautious_monotony",
       "star_cautious_monotony", "star_cautious_monotony"},
      {"plain_cautious_transitivity", "cautious_transitivity",
       "star_cautious_transitivity", "star_cautious_transitivity",
       "star_cautious_transitivity"},
  };
  const SelectionStrategy strategies[3] = {SelectionStrategy::Subset,
                                           SelectionStrategy::Cardinality,
                                           SelectionStrategy::Priorization};
  AuditConfig gen_cfg = cfg;
  gen_cfg.frame = FrameClass::Order;
  for (std::size_t r = 0; r < 4; ++r) {
    std::vector<MatrixCell> row;
    for (std::size_t c = 0; c < 5; ++c) {
      MatrixCell cell;
      cell.published = published[r][c];
      std::vector<Instance> pre;
      if (c >= 2 && r == 2) pre = {cm_witness(strategies[c - 2])};
      if (c >= 2 && r == 3) pre = {ct_witness(strategies[c - 2])};
      bool stored = false;
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        Instance in;
        if (t < pre.size()) {
          in = pre[t];
        } else {
          auto rng = mixed_rng(cfg.seed, 100 + r * 8 + c, t);
          in = gens[r][c](gen_cfg, rng);
          if (c >= 2) in.strategy = strategies[c - 2];
        }
        const Outcome out = run_check(checks[r][c], in);
        ++cell.trials;
        if (out.vacuous) continue;
        ++cell.non_vacuous;
        if (!out.ok) {
          ++cell.failures;
          if (!stored) {
            stored = true;
            mx.witnesses.push_back(
                {serialize(witness_names[r][c], in),
                 mx.rows[r] + " under " + mx.columns[c] + ": " + out.note});
          }
        }
      }
      cell.observed = (cell.failures == 0);
      row.push_back(cell);
    }
    mx.cells.push_back(std::move(row));
  }
  return mx;
}

}  // namespace okra
