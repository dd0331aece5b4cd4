#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "okra/errors.hpp"
#include "okra/formula.hpp"
#include "okra/kripke.hpp"
#include "support/oracle.hpp"

using namespace okra;

namespace {

// w0 sees both worlds, w1 sees only itself. p at w0, q at w1.
KripkeModel two_worlds() {
  KripkeModel m;
  m.worlds = {"w0", "w1"};
  m.atoms = {"p", "q"};
  m.access = {0b11, 0b10};
  m.truth = {0b01, 0b10};
  return m;
}

// Single world with a loop; fever and flu both hold.
KripkeModel blocked_one() {
  KripkeModel m;
  m.worlds = {"w1"};
  m.atoms = {"fever", "flu"};
  m.access = {0b1};
  m.truth = {0b1, 0b1};
  return m;
}

// Adds an accessible second world where cold, not flu, explains the fever.
KripkeModel blocked_two() {
  KripkeModel m;
  m.worlds = {"w1", "w2"};
  m.atoms = {"fever", "flu", "cold"};
  m.access = {0b11, 0b00};
  m.truth = {0b11, 0b01, 0b10};
  return m;
}

EvaluationContext with_background(std::vector<Formula> bg) {
  EvaluationContext ctx;
  ctx.background = std::move(bg);
  return ctx;
}

}  // namespace

TEST_CASE("boolean and epistemic clauses") {
  KripkeModel m = two_worlds();
  validate(m);
  EvaluationContext ctx;
  Evaluator ev(m, ctx);

  CHECK(ev.truth_set(parse("p")) == 0b01);
  CHECK(ev.truth_set(parse("~p")) == 0b10);
  CHECK(ev.truth_set(parse("p | q")) == 0b11);
  CHECK(ev.truth_set(parse("p & q")) == 0b00);
  CHECK(ev.truth_set(parse("p -> q")) == 0b10);
  CHECK(ev.truth_set(parse("true")) == 0b11);
  CHECK(ev.truth_set(parse("false")) == 0b00);

  CHECK(ev.truth_set(parse("K p")) == 0b00);
  CHECK(ev.truth_set(parse("K q")) == 0b10);
  CHECK(ev.truth_set(parse("K (p | q)")) == 0b11);

  CHECK(ev.satisfies(parse("K q"), 1));
  CHECK(!ev.satisfies(parse("K q"), 0));
  CHECK_THROWS_AS(ev.satisfies(parse("p"), 2), eval_error);
  CHECK_THROWS_AS(ev.truth_set(parse("zz")), eval_error);
}

TEST_CASE("O needs exact match, not containment") {
  KripkeModel m;
  m.worlds = {"u0", "u1"};
  m.atoms = {"p"};
  m.access = {0b01, 0b11};
  m.truth = {0b11};
  EvaluationContext ctx;
  Evaluator ev(m, ctx);

  // p holds everywhere, u0 sees only itself: K p yes, O p no.
  CHECK(ev.satisfies(parse("K p"), 0));
  CHECK(!ev.satisfies(parse("O p"), 0));
  CHECK(ev.satisfies(parse("O p"), 1));

  KripkeModel m2 = two_worlds();
  Evaluator ev2(m2, ctx);
  CHECK(ev2.truth_set(parse("O q")) == 0b10);
  CHECK(ev2.truth_set(parse("O (p | q)")) == 0b01);
  CHECK(ev2.truth_set(parse("O p")) == 0b00);
}

TEST_CASE("A with subset witnesses from the background") {
  KripkeModel m = two_worlds();
  EvaluationContext ctx = with_background({parse("q")});
  Evaluator ev(m, ctx);

  // O q only holds at w1, so that is where A succeeds; what is being
  // explained does not matter once some candidate is only-known.
  CHECK(ev.truth_set(parse("A q")) == 0b10);
  CHECK(ev.truth_set(parse("A p")) == 0b10);
  CHECK(ev.truth_set(parse("A false")) == 0b10);

  EvaluationContext ctx_p = with_background({parse("p")});
  Evaluator ev_p(m, ctx_p);
  CHECK(ev_p.truth_set(parse("A q")) == 0b00);

  EvaluationContext empty = with_background({});
  Evaluator ev_e(m, empty);
  CHECK(ev_e.truth_set(parse("A q")) == 0b00);

  auto w = ev.witness(parse("p"), 1);
  REQUIRE(w.has_value());
  CHECK(to_string(*w) == "q");
  CHECK(!ev.witness(parse("p"), 0).has_value());
}

TEST_CASE("an alternative cause blocks the abductive step") {
  EvaluationContext ctx = with_background({parse("flu")});

  KripkeModel one = blocked_one();
  Evaluator ev1(one, ctx);
  CHECK(ev1.satisfies(parse("A fever"), 0));

  KripkeModel two = blocked_two();
  Evaluator ev2(two, ctx);
  CHECK(!ev2.satisfies(parse("A fever"), 0));
  CHECK(!ev2.used_unrestricted_abd());

  // Unrestricted witnesses see that the accessible set is definable, so the
  // blocking disappears; the evaluator records that A was trivialised.
  EvaluationContext open = ctx;
  open.witness_mode = WitnessMode::Unrestricted;
  Evaluator ev3(two, open);
  CHECK(ev3.satisfies(parse("A fever"), 0));
  CHECK(ev3.satisfies(parse("A fever"), 1));  // empty accessible set
  CHECK(ev3.used_unrestricted_abd());

  auto w = ev3.witness(parse("fever"), 0);
  REQUIRE(w.has_value());
  CHECK(to_string(*w) == "fever & flu & ~cold | fever & ~flu & cold");
}

TEST_CASE("witness mode and size knobs") {
  KripkeModel m = blocked_one();
  // Two background pieces whose conjunction is only-known, neither alone.
  KripkeModel m2;
  m2.worlds = {"x", "y", "z"};
  m2.atoms = {"a", "b"};
  m2.access = {0b001, 0b001, 0b001};
  m2.truth = {0b011, 0b101};
  EvaluationContext ctx = with_background({parse("a"), parse("b")});
  {
    Evaluator ev(m2, ctx);
    CHECK(ev.satisfies(parse("A a"), 0));  // witness a & b
    auto w = ev.witness(parse("a"), 0);
    REQUIRE(w.has_value());
    CHECK(to_string(*w) == "a & b");
  }
  {
    EvaluationContext small = ctx;
    small.max_witness_size = 1;
    Evaluator ev(m2, small);
    CHECK(!ev.satisfies(parse("A a"), 0));
  }
  {
    EvaluationContext conj = ctx;
    conj.witness_mode = WitnessMode::TheoryConjunction;
    Evaluator ev(m2, conj);
    CHECK(ev.satisfies(parse("A a"), 0));
  }
  {
    // Conjunction mode with an empty background only-knows 'true'.
    EvaluationContext conj;
    conj.witness_mode = WitnessMode::TheoryConjunction;
    KripkeModel full = two_worlds();
    Evaluator ev(full, conj);
    CHECK(ev.truth_set(parse("A p")) == 0b01);  // w0 sees everything
  }
  (void)m;
}

TEST_CASE("background may not mention A") {
  KripkeModel m = two_worlds();
  EvaluationContext ctx = with_background({parse("A p")});
  CHECK_THROWS_AS(Evaluator(m, ctx), eval_error);
}

TEST_CASE("conditionals need an order") {
  KripkeModel m = two_worlds();
  EvaluationContext ctx;
  Evaluator ev(m, ctx);
  CHECK_THROWS_AS(ev.truth_set(parse("p > q")), eval_error);
}

TEST_CASE("validate rejects malformed models") {
  KripkeModel m = two_worlds();
  CHECK_NOTHROW(validate(m));

  KripkeModel bad = m;
  bad.access = {0b11};
  CHECK_THROWS_AS(validate(bad), model_error);

  bad = m;
  bad.worlds = {"w0", "w0"};
  CHECK_THROWS_AS(validate(bad), model_error);

  bad = m;
  bad.atoms = {"p", "true"};
  CHECK_THROWS_AS(validate(bad), model_error);

  bad = m;
  bad.truth = {0b01, 0b100};
  CHECK_THROWS_AS(validate(bad), model_error);

  bad = m;
  bad.worlds.clear();
  bad.access.clear();
  CHECK_THROWS_AS(validate(bad), model_error);
}

TEST_CASE("relation properties") {
  KripkeModel m;
  m.worlds = {"a", "b"};
  m.atoms = {};
  m.truth = {};
  m.access = {0b11, 0b11};
  auto p = relation_properties(m);
  CHECK(p.reflexive);
  CHECK(p.serial);
  CHECK(p.transitive);
  CHECK(p.symmetric);
  CHECK(p.euclidean);

  m.access = {0b11, 0b10};
  p = relation_properties(m);
  CHECK(p.reflexive);
  CHECK(p.transitive);
  CHECK(!p.symmetric);
  CHECK(!p.euclidean);

  m.access = {0b10, 0b00};
  p = relation_properties(m);
  CHECK(!p.reflexive);
  CHECK(!p.serial);
}

TEST_CASE("consequence and validity helpers") {
  KripkeModel m = two_worlds();
  EvaluationContext ctx;
  Evaluator ev(m, ctx);

  std::vector<Formula> prem{parse("K q")};
  CHECK(local_consequence(ev, prem, parse("q")));
  CHECK(!local_counterexample(ev, prem, parse("q")).has_value());

  std::vector<Formula> both{parse("p | q")};
  CHECK(!local_consequence(ev, both, parse("p")));
  CHECK(local_counterexample(ev, both, parse("p")) == std::size_t{1});

  // Premises nobody satisfies entail anything, and the premise-world set
  // defaults to every world when there are no premises.
  std::vector<Formula> none{parse("p & q")};
  CHECK(local_consequence(ev, none, parse("false")));
  CHECK(premise_worlds(ev, {}) == 0b11);

  CHECK(global_validity(ev, parse("p | q")));
  CHECK(!global_validity(ev, parse("q")));
  CHECK(validity_counterexample(ev, parse("q")) == std::size_t{0});
}

TEST_CASE("restriction to explaining worlds") {
  KripkeModel two = blocked_two();
  EvaluationContext ctx = with_background({parse("flu")});

  auto r = restrict_nonvacuous(two, ctx, parse("fever"));
  REQUIRE(r.has_value());
  CHECK(r->kept == std::vector<std::size_t>{0});
  CHECK(r->model.worlds == std::vector<std::string>{"w1"});
  CHECK(r->model.access == std::vector<WorldSet>{0b1});
  CHECK(r->model.truth == std::vector<WorldSet>{0b1, 0b1, 0b0});

  Evaluator ev(r->model, ctx);
  CHECK(ev.satisfies(parse("A fever"), 0));
  CHECK(!ev.satisfies(parse("K ~fever"), 0));

  CHECK(!restrict_nonvacuous(two, ctx, parse("cold & flu")).has_value());

  // Whole-model restriction keeps indices and masks intact.
  EvaluationContext free;
  auto all = restrict_nonvacuous(two, free, parse("fever"));
  REQUIRE(all.has_value());
  CHECK(all->model.access == two.access);
}

TEST_CASE("definability and characteristic formulas") {
  KripkeModel m;
  m.worlds = {"a", "b"};
  m.atoms = {"p"};
  m.access = {0b01, 0b01};
  m.truth = {0b11};  // both worlds look the same
  EvaluationContext ctx;
  Evaluator ev(m, ctx);
  CHECK(ev.definable(0b00));
  CHECK(ev.definable(0b11));
  CHECK(!ev.definable(0b01));
  CHECK(to_string(characteristic_formula(m, 0b00)) == "false");
  CHECK(to_string(characteristic_formula(m, 0b11)) == "p");

  EvaluationContext open;
  open.witness_mode = WitnessMode::Unrestricted;
  Evaluator evo(m, open);
  CHECK(evo.truth_set(parse("A p")) == 0b00);  // accessible set not definable
}

namespace {

KripkeModel random_model(std::mt19937_64& rng, std::size_t max_worlds,
                         std::size_t max_atoms) {
  static const std::vector<std::string> names{"a", "b", "c", "d"};
  KripkeModel m;
  std::size_t n = 1 + rng() % max_worlds;
  std::size_t k = 1 + rng() % max_atoms;
  for (std::size_t i = 0; i < n; ++i) m.worlds.push_back("w" + std::to_string(i));
  for (std::size_t i = 0; i < k; ++i) m.atoms.push_back(names[i]);
  const WorldSet all = (WorldSet{1} << n) - 1;
  for (std::size_t i = 0; i < n; ++i) m.access.push_back(rng() & all);
  for (std::size_t i = 0; i < k; ++i) m.truth.push_back(rng() & all);
  return m;
}

Formula random_objective(std::mt19937_64& rng, const KripkeModel& m, int budget) {
  if (budget == 0 || rng() % 3 == 0)
    return atom(m.atoms[rng() % m.atoms.size()]);
  switch (rng() % 4) {
    case 0: return negate(random_objective(rng, m, budget - 1));
    case 1:
      return conj(random_objective(rng, m, budget - 1),
                  random_objective(rng, m, budget - 1));
    case 2:
      return disj(random_objective(rng, m, budget - 1),
                  random_objective(rng, m, budget - 1));
    default:
      return implies(random_objective(rng, m, budget - 1),
                     random_objective(rng, m, budget - 1));
  }
}

Formula random_query(std::mt19937_64& rng, const KripkeModel& m, int budget) {
  if (budget == 0) return random_objective(rng, m, 0);
  switch (rng() % 8) {
    case 0: return knows(random_query(rng, m, budget - 1));
    case 1: return only(random_query(rng, m, budget - 1));
    case 2: return abd(random_query(rng, m, budget - 1));
    case 3: return negate(random_query(rng, m, budget - 1));
    case 4:
      return conj(random_query(rng, m, budget - 1),
                  random_query(rng, m, budget - 1));
    case 5:
      return disj(random_query(rng, m, budget - 1),
                  random_query(rng, m, budget - 1));
    default:
      return random_objective(rng, m, budget);
  }
}

}  // namespace

TEST_CASE("random models agree with the reference evaluator") {
  std::mt19937_64 rng(77001u);
  for (int trial = 0; trial < 400; ++trial) {
    KripkeModel m = random_model(rng, 4, 3);
    EvaluationContext ctx;
    std::size_t bg_size = rng() % 4;
    for (std::size_t i = 0; i < bg_size; ++i)
      ctx.background.push_back(random_objective(rng, m, 2));
    if (trial % 5 == 0) ctx.witness_mode = WitnessMode::Unrestricted;
    if (trial % 7 == 0) ctx.witness_mode = WitnessMode::TheoryConjunction;
    if (trial % 11 == 0) ctx.max_witness_size = 1 + rng() % 2;

    oracle::Input in;
    in.model = &m;
    in.ctx = &ctx;

    Evaluator ev(m, ctx);
    for (int q = 0; q < 4; ++q) {
      Formula f = random_query(rng, m, 3);
      const WorldSet got = ev.truth_set(f);
      for (std::size_t w = 0; w < m.world_count(); ++w) {
        const bool expect = oracle::holds(in, f, w);
        if (expect != static_cast<bool>((got >> w) & 1)) {
          CAPTURE(trial);
          CAPTURE(to_string(f));
          CAPTURE(w);
          CHECK(expect == static_cast<bool>((got >> w) & 1));
        }
      }
    }
  }
}

TEST_CASE("plain A ignores its operand once a candidate is only-known") {
  std::mt19937_64 rng(77002u);
  for (int trial = 0; trial < 200; ++trial) {
    KripkeModel m = random_model(rng, 4, 3);
    EvaluationContext ctx;
    std::size_t bg_size = 1 + rng() % 3;
    for (std::size_t i = 0; i < bg_size; ++i)
      ctx.background.push_back(random_objective(rng, m, 2));
    Evaluator ev(m, ctx);
    Formula f1 = random_objective(rng, m, 2);
    Formula f2 = random_objective(rng, m, 2);
    CHECK(ev.truth_set(abd(f1)) == ev.truth_set(abd(f2)));
  }
}

TEST_CASE("memo arenas can be shared across evaluators") {
  MemoArena arena;
  Formula f = parse("K (p | q) & ~O p");
  KripkeModel a = two_worlds();
  KripkeModel b = two_worlds();
  b.access = {0b01, 0b01};
  EvaluationContext ctx;
  Evaluator ea(a, ctx, {}, &arena);
  const WorldSet ra = ea.truth_set(f);
  Evaluator eb(b, ctx, {}, &arena);
  const WorldSet rb = eb.truth_set(f);
  Evaluator ea2(a, ctx, {}, &arena);
  CHECK(ea2.truth_set(f) == ra);
  CHECK(ra != rb);  // epochs keep the entries apart
  CHECK(ra == 0b11);
}
