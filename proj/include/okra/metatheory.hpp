#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "okra/abduction.hpp"
#include "okra/model_io.hpp"
#include "okra/preferential.hpp"

namespace okra {

struct AuditConfig {
  std::uint64_t seed = 0;
  std::size_t trials = 1000;
  std::size_t max_worlds = 5;
  std::size_t max_atoms = 4;
  int formula_depth = 3;
  FrameClass frame = FrameClass::Arbitrary;
};

// A failing instance, stored in full so it can be re-run later. The json
// carries the model text, every formula, and the knobs the check used.
struct Counterexample {
  nlohmann::json instance;
  std::string note;
};

// Trials where the property's premise never held count as vacuous; a
// property is confirmed only by at least one non-vacuous, failure-free run.
struct AuditReport {
  std::string property;
  std::string claim;  // one-line statement of what was checked
  AuditConfig config;
  std::size_t trials = 0;
  std::size_t non_vacuous = 0;
  std::size_t failures = 0;
  std::vector<Counterexample> counterexamples;  // at most five are kept
  std::string verdict;                          // confirmed | refuted | vacuous
  nlohmann::json to_json() const;
};

std::vector<std::string> audit_names();

// Runs the named randomized audit. Some properties force their own frame
// class (an order where the consequence needs one, reflexivity where the
// claim assumes it); the rest honor cfg.frame. Unknown names raise
// eval_error. Identical configs produce byte-identical reports.
AuditReport audit(const std::string& property, const AuditConfig& cfg);

// Re-runs the stored check of a serialized counterexample; true when the
// violation still reproduces.
bool replay(const nlohmann::json& instance);

// Deterministic in (cfg.seed, trial). The better component is filled only
// for the Order frame class.
PlausibilityModel generate_model(const AuditConfig& cfg, std::size_t trial);

struct MatrixCell {
  bool published = false;  // the value the source table claims
  bool observed = false;   // what the trials found
  std::size_t trials = 0;
  std::size_t non_vacuous = 0;
  std::size_t failures = 0;
};

// Four structural properties of five consequence relations: plain local
// consequence, the preferential one, and the three selection-guided
// defeasible relations. Cells that fail carry a replayable witness;
// disagreements with the published values are reported as diffs, never
// patched over.
struct PropertyMatrix {
  AuditConfig config;
  std::vector<std::string> rows;     // properties
  std::vector<std::string> columns;  // consequence relations
  std::vector<std::vector<MatrixCell>> cells;
  std::vector<Counterexample> witnesses;
  nlohmann::json to_json() const;
  std::string to_text() const;
};

// cfg.trials counts per cell here.
PropertyMatrix property_matrix(const AuditConfig& cfg);

}  // namespace okra
