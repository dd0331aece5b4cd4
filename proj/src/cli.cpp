#include "okra/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "okra/abduction.hpp"
#include "okra/errors.hpp"
#include "okra/metatheory.hpp"
#include "okra/model_io.hpp"
#include "okra/preferential.hpp"

namespace okra {
namespace {

WitnessMode to_mode(const std::string& s) {
  if (s == "conjunction") return WitnessMode::TheoryConjunction;
  if (s == "unrestricted") return WitnessMode::Unrestricted;
  return WitnessMode::TheorySubsets;
}

SelectionStrategy to_strategy(const std::string& s) {
  if (s == "cardinality") return SelectionStrategy::Cardinality;
  if (s == "priorization") return SelectionStrategy::Priorization;
  return SelectionStrategy::Subset;
}

FrameClass to_frame(const std::string& s) {
  if (s == "reflexive") return FrameClass::Reflexive;
  if (s == "s5") return FrameClass::S5;
  if (s == "order") return FrameClass::Order;
  return FrameClass::Arbitrary;
}

// Evaluation knobs shared by check and entail.
struct EvalOpts {
  std::string witness_mode = "subsets";
  std::size_t witness_size = 0;
  std::string minimality = "premise";
  bool vacuous_conditional = false;
};

EvaluationContext context_for(const ModelDocument& doc, const EvalOpts& o) {
  EvaluationContext ctx;
  ctx.background = doc.theory;
  ctx.witness_mode = to_mode(o.witness_mode);
  ctx.max_witness_size = o.witness_size;
  ctx.pref_empty = o.vacuous_conditional ? ConditionalOnEmpty::True
                                         : ConditionalOnEmpty::False;
  ctx.minimality = o.minimality == "global" ? MinimalityScope::GlobalMinimal
                                            : MinimalityScope::PremiseRelative;
  return ctx;
}

std::span<const WorldSet> order_of(const ModelDocument& doc) {
  if (!doc.has_order) return {};
  return doc.better;
}

void emit(std::ostream& out, const nlohmann::json& j) { out << j.dump(2) << '\n'; }

nlohmann::json member_json(const AbductionProblem& p,
                           const std::vector<CandidateMask>& members) {
  auto arr = nlohmann::json::array();
  for (const CandidateMask m : members)
    arr.push_back({{"atoms", candidate_atoms(p, m)},
                   {"formula", to_string(candidate_formula(p, m))}});
  return arr;
}

// Carries the reduced model plus whatever document context still applies.
ModelDocument reduce_document(const ModelDocument& doc, const Submodel& sub) {
  ModelDocument r;
  r.model = sub.model;
  std::vector<int> renamed(doc.model.world_count(), -1);
  for (std::size_t i = 0; i < sub.kept.size(); ++i)
    renamed[sub.kept[i]] = static_cast<int>(i);
  if (doc.has_order) {
    bool any = false;
    for (std::size_t i = 0; i < sub.kept.size(); ++i) {
      WorldSet mask = 0;
      const WorldSet old = doc.better[sub.kept[i]];
      for (std::size_t j = 0; j < sub.kept.size(); ++j)
        if ((old >> sub.kept[j]) & 1) mask |= WorldSet{1} << j;
      r.better.push_back(mask);
      any = any || mask != 0;
    }
    r.has_order = any;  // a single surviving world needs no order block
    if (!any) r.better.clear();
  }
  r.theory = doc.theory;
  r.hypotheses = doc.hypotheses;
  if (doc.actual && renamed[*doc.actual] >= 0)
    r.actual = static_cast<std::size_t>(renamed[*doc.actual]);
  return r;
}

struct Options {
  std::string model_path;
  std::string problem_path;
  std::string world;
  std::string formula;
  std::string route = "local";
  std::string strategy = "subset";
  std::string filter = "full";
  std::string property;
  std::vector<std::string> premises;
  EvalOpts eval;
  bool json = false;
  bool allow_partial = false;
  bool list = false;
  std::int64_t depth = -1;
  AuditConfig audit;
};

int run_check(const Options& o, std::ostream& out, std::ostream& err) {
  const ModelDocument doc = load_model_file(o.model_path, o.allow_partial);
  const Formula f = parse(o.formula);
  std::size_t w = 0;
  if (!o.world.empty()) {
    const auto idx = doc.model.world_index(o.world);
    if (!idx) throw model_error("unknown world '" + o.world + "'");
    w = *idx;
  } else if (doc.actual) {
    w = *doc.actual;
  } else {
    err << "no world given and the model declares no actual world\n";
    return 2;
  }
  const EvaluationContext ctx = context_for(doc, o.eval);
  Evaluator ev(doc.model, ctx, order_of(doc));
  const bool value = ev.satisfies(f, w);
  std::optional<Formula> alpha;
  if (f.kind() == Kind::Abd && value) alpha = ev.witness(f.left(), w);
  const bool collapsed = ev.used_unrestricted_abd();
  if (collapsed)
    err << "note: unrestricted witness mode decides explainability by "
           "definability of the considered set alone\n";
  if (o.json) {
    nlohmann::json j;
    j["command"] = "check";
    j["model"] = o.model_path;
    j["world"] = doc.model.worlds[w];
    j["formula"] = to_string(f);
    j["value"] = value;
    j["witness"] = alpha ? nlohmann::json(to_string(*alpha)) : nlohmann::json();
    j["unrestricted_witness"] = collapsed;
    emit(out, j);
  } else {
    out << (value ? "true" : "false") << '\n';
  }
  return value ? 0 : 1;
}

int run_entail(const Options& o, std::ostream& out, std::ostream& err) {
  const ModelDocument doc = load_model_file(o.model_path, o.allow_partial);
  const Formula conclusion = parse(o.formula);
  const EvaluationContext ctx = context_for(doc, o.eval);

  nlohmann::json j;
  j["command"] = "entail";
  j["model"] = o.model_path;
  j["route"] = o.route;
  j["premises"] = o.premises;
  j["conclusion"] = to_string(conclusion);
  j["counterexample"] = nullptr;
  j["family"] = nullptr;
  j["selected"] = nullptr;
  j["witness"] = nullptr;

  bool value = false;
  if (o.route == "local" || o.route == "preferential") {
    std::vector<Formula> premises = doc.theory;
    for (const auto& text : o.premises) premises.push_back(parse(text));
    Evaluator ev(doc.model, ctx, order_of(doc));
    std::optional<std::size_t> cx;
    if (o.route == "local") {
      value = local_consequence(ev, premises, conclusion);
      if (!value) cx = local_counterexample(ev, premises, conclusion);
    } else {
      const PlausibilityModel pm = plausibility(doc);
      value = preferential_consequence(pm, ctx, premises, conclusion);
      if (!value) cx = preferential_counterexample(pm, ctx, premises, conclusion);
    }
    if (cx) {
      j["counterexample"] = doc.model.worlds[*cx];
      if (!o.json) err << "counterexample: " << doc.model.worlds[*cx] << '\n';
    }
  } else {
    AbductionProblem p;
    p.background = doc.theory;
    p.hypotheses = doc.hypotheses;
    if (!o.problem_path.empty())
      p.priorities = load_problem_file(o.problem_path).priorities;
    const std::string strategy = o.route == "s"   ? "subset"
                                 : o.route == "c" ? "cardinality"
                                                  : "priorization";
    const StarJudgment sj =
        star_consequence(p, doc.model, order_of(doc), o.premises, conclusion,
                         to_strategy(strategy));
    value = sj.holds;
    j["family"] = member_json(p, sj.family);
    j["selected"] = member_json(p, sj.selected);
    if (sj.witness)
      j["witness"] = {{"atoms", candidate_atoms(p, *sj.witness)},
                      {"formula", to_string(candidate_formula(p, *sj.witness))}};
  }
  j["value"] = value;
  if (o.json)
    emit(out, j);
  else
    out << (value ? "true" : "false") << '\n';
  return value ? 0 : 1;
}

int run_explain(const Options& o, std::ostream& out, std::ostream&) {
  const ModelDocument doc = load_model_file(o.model_path, o.allow_partial);
  const ProblemDocument pr = load_problem_file(o.problem_path);
  AbductionProblem p = assemble_problem(doc, pr);
  if (o.depth >= 0) p.candidate_depth = static_cast<std::size_t>(o.depth);
  const CandidateFilter filter = o.filter == "entailment"
                                     ? CandidateFilter::EntailmentOnly
                                     : CandidateFilter::Full;
  const ExplanationFamily fam = enumerate_explanations(p, doc.model, order_of(doc), filter);
  const auto picked = select(fam, p, to_strategy(o.strategy));
  nlohmann::json j;
  j["command"] = "explain";
  j["model"] = o.model_path;
  j["problem"] = o.problem_path;
  j["observation"] = to_string(p.observation);
  j["strategy"] = o.strategy;
  j["filter"] = o.filter;
  j["depth"] = p.candidate_depth;
  j["family"] = member_json(p, fam.members);
  j["selected"] = member_json(p, picked);
  emit(out, j);
  return 0;
}

int run_minimize(const Options& o, std::ostream& out, std::ostream&) {
  const ModelDocument doc = load_model_file(o.model_path, o.allow_partial);
  const PlausibilityModel pm = plausibility(doc);
  const Submodel sub = minimal_model(pm);
  const ModelDocument reduced = reduce_document(doc, sub);
  if (o.json) {
    nlohmann::json j;
    j["command"] = "minimize";
    j["model"] = o.model_path;
    j["kept"] = reduced.model.worlds;
    j["text"] = to_text(reduced);
    emit(out, j);
  } else {
    out << to_text(reduced);
  }
  return 0;
}

int run_restrict(const Options& o, std::ostream& out, std::ostream& err) {
  const ModelDocument doc = load_model_file(o.model_path, o.allow_partial);
  const Formula g = parse(o.formula);
  const EvaluationContext ctx = context_for(doc, o.eval);
  const auto sub = restrict_nonvacuous(doc.model, ctx, g);
  if (o.json) {
    nlohmann::json j;
    j["command"] = "restrict";
    j["model"] = o.model_path;
    j["hypothesis"] = to_string(g);
    j["present"] = sub.has_value();
    j["kept"] = sub ? nlohmann::json(sub->model.worlds)
                    : nlohmann::json(std::vector<std::string>{});
    j["text"] = sub ? nlohmann::json(to_text(reduce_document(doc, *sub)))
                    : nlohmann::json();
    emit(out, j);
  } else if (sub) {
    out << to_text(reduce_document(doc, *sub));
  } else {
    err << "restriction is empty: the background rules out every world "
           "satisfying "
        << to_string(g) << '\n';
  }
  return sub ? 0 : 1;
}

int run_audit(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.list) {
    for (const auto& name : audit_names()) out << name << '\n';
    return 0;
  }
  if (o.property.empty()) {
    err << "audit needs a property name or --list\n";
    return 2;
  }
  const AuditReport r = audit(o.property, o.audit);
  if (o.json) {
    nlohmann::json j = r.to_json();
    j["command"] = "audit";
    emit(out, j);
  } else {
    out << "property: " << r.property << '\n'
        << "claim: " << r.claim << '\n'
        << "verdict: " << r.verdict << '\n'
        << "trials: " << r.trials << " (non-vacuous " << r.non_vacuous << ")\n"
        << "failures: " << r.failures << '\n';
    for (const auto& cx : r.counterexamples)
      out << "counterexample: " << cx.note << '\n';
  }
  return 0;
}

int run_matrix(const Options& o, std::ostream& out, std::ostream&) {
  const PropertyMatrix mx = property_matrix(o.audit);
  if (o.json) {
    nlohmann::json j = mx.to_json();
    j["command"] = "matrix";
    emit(out, j);
  } else {
    out << mx.to_text();
  }
  return 0;
}

void add_eval_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--witness-mode", o.eval.witness_mode,
                  "Witness pool for A formulas")
      ->check(CLI::IsMember({"conjunction", "subsets", "unrestricted"}));
  cmd->add_option("--witness-size", o.eval.witness_size,
                  "Cap on witness subset size, 0 = unbounded");
  cmd->add_option("--minimality", o.eval.minimality,
                  "Which premise worlds count for ordered entailment")
      ->check(CLI::IsMember({"premise", "global"}));
  cmd->add_flag("--vacuous-conditional", o.eval.vacuous_conditional,
                "Read g > h as true when no world supports g");
}

void add_audit_bounds(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.audit.seed, "Trial generator seed");
  cmd->add_option("--trials", o.audit.trials, "Trial count");
  cmd->add_option("--max-worlds", o.audit.max_worlds, "World count bound");
  cmd->add_option("--max-atoms", o.audit.max_atoms, "Vocabulary bound");
  cmd->add_option("--formula-depth", o.audit.formula_depth,
                  "Random formula depth");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reasoner for only-knowing, abduction, and preference over "
               "finite modal models"};
  app.require_subcommand(1);
  Options o;
  std::string frame = "arbitrary";

  CLI::App* check = app.add_subcommand("check", "Evaluate a formula at a world");
  check->add_option("-m,--model", o.model_path, "Model file")->required();
  check->add_option("-w,--world", o.world, "World name, defaults to the actual world");
  check->add_option("formula", o.formula, "Formula to evaluate")->required();

  CLI::App* entail = app.add_subcommand("entail", "Decide a consequence query");
  entail->add_option("-m,--model", o.model_path, "Model file")->required();
  entail->add_option("-p,--problem", o.problem_path,
                     "Problem file supplying priorities");
  entail->add_option("--route", o.route,
                     "local, preferential, or the defeasible s/c/p readings")
      ->check(CLI::IsMember({"local", "preferential", "s", "c", "p"}));
  entail->add_option("--premise", o.premises,
                     "Extra premise; hypothesis atoms on the s/c/p routes");
  entail->add_option("formula", o.formula, "Conclusion")->required();

  CLI::App* explain = app.add_subcommand("explain", "Enumerate and select explanations");
  explain->add_option("-m,--model", o.model_path, "Model file")->required();
  explain->add_option("-p,--problem", o.problem_path, "Problem file")->required();
  explain->add_option("--strategy", o.strategy, "Selection strategy")
      ->check(CLI::IsMember({"subset", "cardinality", "priorization"}));
  explain->add_option("--filter", o.filter, "Family filter")
      ->check(CLI::IsMember({"full", "entailment"}));
  explain->add_option("--depth", o.depth, "Override the problem's candidate depth");

  CLI::App* minimize = app.add_subcommand("minimize", "Emit the most plausible submodel");
  minimize->add_option("-m,--model", o.model_path, "Model file")->required();

  CLI::App* restrict_cmd = app.add_subcommand(
      "restrict", "Emit the submodel compatible with a hypothesis");
  restrict_cmd->add_option("-m,--model", o.model_path, "Model file")->required();
  restrict_cmd->add_option("formula", o.formula, "Hypothesis")->required();

  CLI::App* audit_cmd = app.add_subcommand("audit", "Randomized property audit");
  audit_cmd->add_option("property", o.property, "Property name, see --list");
  audit_cmd->add_flag("--list", o.list, "List audited properties");
  audit_cmd->add_option("--frame", frame, "Frame class for generated models")
      ->check(CLI::IsMember({"arbitrary", "reflexive", "s5", "order"}));
  add_audit_bounds(audit_cmd, o);

  CLI::App* matrix_cmd =
      app.add_subcommand("matrix", "Recompute the consequence-property grid");
  add_audit_bounds(matrix_cmd, o);

  for (CLI::App* cmd : {check, entail, restrict_cmd}) add_eval_flags(cmd, o);
  for (CLI::App* cmd :
       {check, entail, explain, minimize, restrict_cmd, audit_cmd, matrix_cmd}) {
    cmd->add_flag("--json", o.json, "Machine readable output");
    if (cmd != audit_cmd && cmd != matrix_cmd)
      cmd->add_flag("--allow-partial-order", o.allow_partial,
                    "Accept a non-connected plausibility order");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  o.audit.frame = to_frame(frame);
  if (matrix_cmd->parsed() && matrix_cmd->count("--trials") == 0)
    o.audit.trials = 120;  // per-cell budget, keeps the grid under a minute

  try {
    if (check->parsed()) return run_check(o, out, err);
    if (entail->parsed()) return run_entail(o, out, err);
    if (explain->parsed()) return run_explain(o, out, err);
    if (minimize->parsed()) return run_minimize(o, out, err);
    if (restrict_cmd->parsed()) return run_restrict(o, out, err);
    if (audit_cmd->parsed()) return run_audit(o, out, err);
    return run_matrix(o, out, err);
  } catch (const parse_error& e) {
    err << e.what() << '\n';
    return 2;
  } catch (const model_error& e) {
    err << "model error: " << e.what() << '\n';
    return 3;
  } catch (const eval_error& e) {
    err << "evaluation error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace okra
