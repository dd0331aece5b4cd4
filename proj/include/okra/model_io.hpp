#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "okra/abduction.hpp"
#include "okra/preferential.hpp"

namespace okra {

// One parsed model file: the Kripke structure, the plausibility order when
// declared, and the abduction blocks that ride along with it.
struct ModelDocument {
  KripkeModel model;
  std::vector<WorldSet> better;  // sized to the worlds when has_order
  bool has_order = false;
  std::vector<Formula> theory;  // operands of the declared only-known formulas
  std::vector<std::string> hypotheses;
  std::optional<std::size_t> actual;
};

// Line oriented; '#' starts a comment. Directives, each repeatable unless
// noted, in any order:
//   worlds: w1 w2 ...
//   atoms: fever cough            (optional; mentions add atoms anyway)
//   rel: w1 -> w2, w2 -> w2
//   order: w1 < w2 < w3, w4 < w6  (a chain contributes all its pairs)
//   actual: w1                    (at most once)
//   val w1: fever cough
//   theory: f1; f2
//   hypotheses: flu cold
// The order must be transitive as given and, unless allow_partial_order,
// connected. Syntax trouble raises parse_error carrying the line number;
// semantic trouble raises model_error.
ModelDocument parse_model_text(std::string_view text,
                               bool allow_partial_order = false);
ModelDocument load_model_file(const std::string& path,
                              bool allow_partial_order = false);

// Deterministic rendering that parses back to an equivalent document.
std::string to_text(const ModelDocument& doc);

PlausibilityModel plausibility(const ModelDocument& doc);  // requires the order

// Problem files use the same line discipline:
//   observe: fever cough          (atoms, conjoined)
//   priority: allergies=1 strep_throat=2
//   depth: 2                      (at most once)
struct ProblemDocument {
  std::vector<std::string> observe;
  std::map<std::string, int> priorities;
  std::size_t depth = 2;
};

ProblemDocument parse_problem_text(std::string_view text);
ProblemDocument load_problem_file(const std::string& path);

// The abduction problem the two documents describe. Observation atoms must
// belong to the model's vocabulary.
AbductionProblem assemble_problem(const ModelDocument& doc,
                                  const ProblemDocument& pr);

}  // namespace okra
