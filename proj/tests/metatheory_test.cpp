#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "okra/errors.hpp"
#include "okra/kripke.hpp"
#include "okra/metatheory.hpp"
#include "okra/model_io.hpp"
#include "okra/preferential.hpp"

using namespace okra;

namespace {

AuditConfig small_cfg() {
  AuditConfig cfg;
  cfg.seed = 4242;
  cfg.trials = 300;
  return cfg;
}

}  // namespace

TEST_CASE("the audit registry lists the fifteen properties in order") {
  const std::vector<std::string> want = {
      "supraclassicality",
      "reflexivity",
      "cautious_monotony",
      "cautious_transitivity",
      "plain_monotony",
      "abduction_from_known_implication",
      "abduction_closure",
      "abduction_nonvacuity",
      "theory_witness_adequacy",
      "explanation_wellformedness",
      "restriction_restores_nonvacuity",
      "subset_minimality_equivalence",
      "selection_coincidence",
      "star_cautious_monotony",
      "star_cautious_transitivity",
  };
  CHECK(audit_names() == want);
  CHECK_THROWS_AS(audit("monotony", small_cfg()), eval_error);
}

TEST_CASE("generated frames have the promised shape") {
  AuditConfig cfg;
  cfg.frame = FrameClass::S5;
  for (std::size_t t = 0; t < 50; ++t) {
    const PlausibilityModel pm = generate_model(cfg, t);
    CHECK(pm.better.empty());
    const RelationProperties rp = relation_properties(pm.base);
    CHECK(rp.reflexive);
    CHECK(rp.transitive);
    CHECK(rp.symmetric);
    CHECK(rp.euclidean);
  }
  cfg.frame = FrameClass::Reflexive;
  for (std::size_t t = 0; t < 30; ++t)
    CHECK(relation_properties(generate_model(cfg, t).base).reflexive);
  cfg.frame = FrameClass::Order;
  for (std::size_t t = 0; t < 50; ++t) {
    const PlausibilityModel pm = generate_model(cfg, t);
    REQUIRE(pm.better.size() == pm.base.world_count());
    const OrderProperties op = order_properties(pm);
    CHECK(op.irreflexive);
    CHECK(op.transitive);
    CHECK(op.connected);
  }
  cfg.frame = FrameClass::Arbitrary;
  for (std::size_t t = 0; t < 20; ++t)
    CHECK(generate_model(cfg, t).better.empty());
}

TEST_CASE("generation covers a broad census of models") {
  AuditConfig cfg;
  cfg.seed = 7;
  std::set<std::string> texts;
  for (std::size_t t = 0; t < 100; ++t) {
    const PlausibilityModel pm = generate_model(cfg, t);
    ModelDocument doc;
    doc.model = pm.base;
    doc.better = pm.better;
    doc.has_order = !pm.better.empty();
    texts.insert(to_text(doc));
  }
  CHECK(texts.size() >= 80);
}

TEST_CASE("the provable laws confirm with healthy non-vacuous rates") {
  const AuditConfig cfg = small_cfg();
  // name -> non-vacuous floor; generators steer premises, so well below
  // the observed rates but far above noise
  const std::map<std::string, std::size_t> floor = {
      {"supraclassicality", 60},
      {"reflexivity", 80},
      {"cautious_monotony", 50},
      {"cautious_transitivity", 45},
      {"abduction_from_known_implication", 150},
      {"abduction_closure", 300},
      {"theory_witness_adequacy", 300},
      {"explanation_wellformedness", 30},
      {"restriction_restores_nonvacuity", 300},
      {"subset_minimality_equivalence", 40},
  };
  for (const auto& [name, nv] : floor) {
    const AuditReport r = audit(name, cfg);
    INFO(name);
    CHECK(r.verdict == "confirmed");
    CHECK(r.trials == 300);
    CHECK(r.failures == 0);
    CHECK(r.counterexamples.empty());
    CHECK(r.non_vacuous >= nv);
  }
}

TEST_CASE("the failing laws refute with replayable counterexamples") {
  const AuditConfig cfg = small_cfg();

  const AuditReport pm = audit("plain_monotony", cfg);
  CHECK(pm.verdict == "refuted");
  CHECK(pm.failures >= 1);
  REQUIRE(!pm.counterexamples.empty());
  // the first counterexample is the pinned two-world chain
  CHECK(pm.counterexamples[0].note == "the unrelated premise q withdrew p");
  CHECK(pm.counterexamples[0].instance.at("model").get<std::string>().find("m1") !=
        std::string::npos);

  const AuditReport nv = audit("abduction_nonvacuity", cfg);
  CHECK(nv.verdict == "refuted");
  CHECK(nv.failures >= 30);  // the gap is structural, not a corner case
  REQUIRE(!nv.counterexamples.empty());
  CHECK(nv.counterexamples[0].note ==
        "q is explainable at w1 although its negation is known there");

  const AuditReport sc = audit("selection_coincidence", cfg);
  CHECK(sc.verdict == "refuted");
  REQUIRE(!sc.counterexamples.empty());
  CHECK(sc.counterexamples[0].note ==
        "subset selection keeps 2 sets, cardinality keeps 1; y & z survives "
        "only the subset rule");

  const AuditReport scm = audit("star_cautious_monotony", cfg);
  CHECK(scm.verdict == "refuted");
  REQUIRE(scm.counterexamples.size() >= 2);
  // preseed order: subset survives, cardinality and priorization fail
  CHECK(scm.counterexamples[0].note ==
        "adding common_cold withdrew headache under the cardinality selection");
  CHECK(scm.counterexamples[1].note ==
        "adding common_cold withdrew headache under the priorization selection");

  const AuditReport sct = audit("star_cautious_transitivity", cfg);
  CHECK(sct.verdict == "refuted");
  REQUIRE(sct.counterexamples.size() >= 3);
  CHECK(sct.counterexamples[0].note ==
        "the conclusion fever needs strep_throat as an explicit premise under "
        "the subset selection");

  for (const AuditReport* r : {&pm, &nv, &sc, &scm, &sct}) {
    CHECK(r->counterexamples.size() <= 5);
    for (const auto& cx : r->counterexamples) {
      CHECK(cx.instance.at("property").get<std::string>() == r->property);
      // the stored model text must load on its own
      CHECK_NOTHROW(parse_model_text(cx.instance.at("model").get<std::string>()));
      CHECK(replay(cx.instance));
    }
  }
}

TEST_CASE("replay rejects foreign or malformed instances") {
  nlohmann::json j;
  j["property"] = "no_such_property";
  CHECK(!replay(j));
  nlohmann::json missing;
  missing["property"] = "plain_monotony";
  CHECK(!replay(missing));
}

TEST_CASE("audits force the frame their claim needs") {
  AuditConfig cfg = small_cfg();
  cfg.trials = 200;
  cfg.frame = FrameClass::S5;  // useless for an order-based law
  const AuditReport r = audit("cautious_monotony", cfg);
  CHECK(r.verdict == "confirmed");
  CHECK(r.non_vacuous > 0);
}

TEST_CASE("audit reports serialize deterministically with a fixed shape") {
  const AuditConfig cfg = small_cfg();
  const AuditReport a = audit("star_cautious_transitivity", cfg);
  const AuditReport b = audit("star_cautious_transitivity", cfg);
  CHECK(a.to_json().dump() == b.to_json().dump());
  const nlohmann::json j = a.to_json();
  for (const char* key : {"property", "claim", "config", "trials", "non_vacuous",
                          "failures", "verdict", "counterexamples"})
    CHECK(j.contains(key));
  CHECK(j.at("config").at("seed").get<std::uint64_t>() == 4242);
  CHECK(j.at("config").at("frame").get<std::string>() == "arbitrary");
}

TEST_CASE("the matrix reproduces the published grid up to five diffs") {
  AuditConfig cfg;
  cfg.seed = 4242;
  cfg.trials = 60;
  const PropertyMatrix mx = property_matrix(cfg);
  const std::vector<std::string> rows = {"supraclassicality", "reflexivity",
                                         "cautious_monotony",
                                         "cautious_transitivity"};
  const std::vector<std::string> cols = {"plain", "preferential", "subset",
                                         "cardinality", "priorization"};
  REQUIRE(mx.rows == rows);
  REQUIRE(mx.columns == cols);
  const bool published[4][5] = {
      {true, true, true, true, true},
      {true, true, true, true, true},
      {false, true, false, false, false},
      {false, true, true, true, false},
  };
  const bool observed[4][5] = {
      {true, true, true, true, true},
      {true, true, true, true, true},
      {true, true, true, false, false},
      {true, true, false, false, false},
  };
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 5; ++c) {
      INFO(rows[r] << " under " << cols[c]);
      CHECK(mx.cells[r][c].published == published[r][c]);
      CHECK(mx.cells[r][c].observed == observed[r][c]);
      CHECK(mx.cells[r][c].trials == 60);
      CHECK(mx.cells[r][c].non_vacuous >= 3);
    }
  // premise-identity columns are never vacuous
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 2; c < 5; ++c)
      CHECK(mx.cells[r][c].non_vacuous == 60);

  const nlohmann::json j = mx.to_json();
  REQUIRE(j.at("diffs").size() == 5);
  std::set<std::pair<std::string, std::string>> diffs;
  for (const auto& d : j.at("diffs"))
    diffs.insert({d.at("row").get<std::string>(), d.at("column").get<std::string>()});
  const std::set<std::pair<std::string, std::string>> want = {
      {"cautious_monotony", "plain"},
      {"cautious_monotony", "subset"},
      {"cautious_transitivity", "plain"},
      {"cautious_transitivity", "subset"},
      {"cautious_transitivity", "cardinality"},
  };
  CHECK(diffs == want);

  REQUIRE(mx.witnesses.size() == 5);
  const std::vector<std::string> witness_props = {
      "star_cautious_monotony", "star_cautious_monotony",
      "star_cautious_transitivity", "star_cautious_transitivity",
      "star_cautious_transitivity"};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(mx.witnesses[i].instance.at("property").get<std::string>() ==
          witness_props[i]);
    CHECK(replay(mx.witnesses[i].instance));
  }

  const std::string text = mx.to_text();
  for (const auto& r : rows) CHECK(text.find(r) != std::string::npos);
  CHECK(text.find("* computed value differs from the published one") !=
        std::string::npos);
  CHECK(text.find("diff: cautious_transitivity under cardinality: computed no, "
                  "published yes") != std::string::npos);

  const PropertyMatrix again = property_matrix(cfg);
  CHECK(again.to_json().dump() == j.dump());
}
