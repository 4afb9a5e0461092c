// fcm: command-line front end for inference, hierarchical classification,
// NHL training and evaluation.
//
// Exit codes: 0 success, 1 usage or data error, 2 non-convergence.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "fcm/cascade.hpp"
#include "fcm/error.hpp"
#include "fcm/evaluation.hpp"
#include "fcm/fixtures.hpp"
#include "fcm/inference.hpp"
#include "fcm/nhl.hpp"
#include "fcm/persistence.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNonConvergent = 2;

struct RuleFlags {
  std::optional<std::string> rule;
  std::optional<double> lambda;
  std::optional<double> epsilon;
  std::optional<std::size_t> max_iters;
  std::optional<std::string> scope;
  std::optional<std::string> clamp;
  std::optional<bool> include_diagonal;

  void attach(CLI::App* cmd) {
    cmd->add_option("--rule", rule, "Update rule: additive-memory | source-sum | rescaled");
    cmd->add_option("--lambda", lambda, "Sigmoid steepness (> 0)");
    cmd->add_option("--epsilon", epsilon, "Convergence tolerance (> 0)");
    cmd->add_option("--max-iters", max_iters, "Iteration budget (>= 1)");
    cmd->add_option("--scope", scope, "Convergence scope: outputs-only | all-concepts");
    cmd->add_option("--clamp", clamp, "Clamp policy: none | zero-indegree | input-concepts");
    cmd->add_option("--include-diagonal", include_diagonal,
                    "Include self-loops in the weighted sum (true | false)");
  }

  fcm::RuleConfig apply(fcm::RuleConfig cfg) const {
    if (rule) {
      const auto r = fcm::parse_update_rule(*rule);
      if (!r) throw fcm::PreconditionError(fmt::format("unknown --rule '{}'", *rule));
      cfg.rule = *r;
    }
    if (lambda) cfg.steepness = *lambda;
    if (epsilon) cfg.epsilon = *epsilon;
    if (max_iters) cfg.max_iterations = *max_iters;
    if (scope) {
      const auto s = fcm::parse_scope(*scope);
      if (!s) throw fcm::PreconditionError(fmt::format("unknown --scope '{}'", *scope));
      cfg.scope = *s;
    }
    if (clamp) {
      const auto c = fcm::parse_clamp(*clamp);
      if (!c) throw fcm::PreconditionError(fmt::format("unknown --clamp '{}'", *clamp));
      cfg.clamp = *c;
    }
    if (include_diagonal) cfg.include_diagonal = *include_diagonal;
    fcm::validate_rule_config(cfg);
    return cfg;
  }
};

std::string read_stdin() {
  return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
}

// A file path, or the name of a built-in model.
fcm::FcmModel resolve_model(const std::string& source) {
  if (fs::exists(source)) return fcm::load_model(fcm::read_text_file(source));
  const auto names = fcm::fixtures::model_names();
  if (std::find(names.begin(), names.end(), source) != names.end()) {
    return fcm::fixtures::model_by_name(source);
  }
  throw fcm::Error(fmt::format("model '{}' is neither a file nor a built-in model", source));
}

// "-" for stdin, a file path, or the name of a built-in symptom set.
fcm::SymptomMap resolve_symptoms(const std::string& source) {
  if (source == "-") return fcm::load_symptoms(read_stdin());
  if (fs::exists(source)) return fcm::load_symptoms(fcm::read_text_file(source));
  const auto names = fcm::fixtures::symptom_names();
  if (std::find(names.begin(), names.end(), source) != names.end()) {
    return fcm::fixtures::symptoms_by_name(source);
  }
  throw fcm::Error(fmt::format("symptoms '{}' are neither '-', a file nor a built-in set", source));
}

fcm::HierarchySpec resolve_hierarchy(const std::string& source) {
  if (source == "reference") return fcm::fixtures::reference_hierarchy();
  if (!fs::exists(source)) {
    throw fcm::Error(fmt::format("hierarchy '{}' is neither a file nor 'reference'", source));
  }
  return fcm::load_hierarchy_file(source);
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto cell = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      std::size_t used = 0;
      values.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw fcm::ParseError(fmt::format("--input: '{}' is not a number", cell));
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

fcm::PriorBias parse_biases(const std::vector<std::string>& flags) {
  fcm::PriorBias biases;
  for (const auto& f : flags) {
    const auto eq = f.rfind('=');
    if (eq == std::string::npos || eq == 0) {
      throw fcm::ParseError(fmt::format("--bias expects Label=value, got '{}'", f));
    }
    biases[f.substr(0, eq)] = parse_vector(f.substr(eq + 1)).at(0);
  }
  return biases;
}

void warn_unused(const std::vector<std::string>& unused, const std::string& where) {
  for (const auto& u : unused) {
    fmt::print(stderr, "warning: symptom '{}' is not an input of {}\n", u, where);
  }
}

std::string describe(const fcm::RuleConfig& cfg) {
  return fmt::format("{} lambda={} epsilon={} max-iters={} scope={} clamp={} include-diagonal={}",
                     fcm::to_string(cfg.rule), cfg.steepness, cfg.epsilon, cfg.max_iterations,
                     fcm::to_string(cfg.scope), fcm::to_string(cfg.clamp), cfg.include_diagonal);
}

json winner_json(const fcm::Winner& w) {
  return {{"label", w.label},         {"value", w.value},        {"runner_up", w.runner_up_value},
          {"margin", w.margin},       {"ambiguous", w.ambiguous}};
}

// --- infer ------------------------------------------------------------------

struct InferArgs {
  std::string model;
  std::optional<std::string> input;
  std::optional<std::string> symptoms;
  std::optional<std::string> fill;
  std::optional<double> initial_output;
  std::vector<std::string> biases;
  std::optional<std::string> trace;
  RuleFlags rule;
};

int cmd_infer(const InferArgs& args) {
  const auto model = resolve_model(args.model);
  const auto cfg = args.rule.apply(model.default_rule_config);

  fcm::StateVector initial;
  if (args.input) {
    initial = fcm::StateVector(parse_vector(*args.input));
  } else {
    const auto fill = args.fill ? fcm::parse_fill_policy(*args.fill) : fcm::default_fill_policy(cfg.rule);
    if (!fill) throw fcm::PreconditionError(fmt::format("unknown --fill '{}'", *args.fill));
    const auto symptoms = args.symptoms ? resolve_symptoms(*args.symptoms) : fcm::SymptomMap{};
    auto mapped = fcm::map_symptoms(symptoms, model, *fill,
                                    args.initial_output.value_or(fcm::default_initial_output(cfg.rule)));
    warn_unused(mapped.unused_symptoms, model.metadata.name);
    initial = std::move(mapped.state);
  }
  initial = fcm::apply_prior_bias(initial, parse_biases(args.biases), model);

  const auto result = fcm::run(model, initial, cfg);
  if (args.trace) fcm::write_text_file(*args.trace, fcm::write_trace(result, model));

  const bool converged = result.status == fcm::RunStatus::Converged;
  fmt::print("model: {}\n", model.metadata.name);
  fmt::print("rule: {}\n", describe(cfg));
  fmt::print("status: {} after {} iterations\n", converged ? "converged" : "max-iterations",
             result.iterations_used);
  std::size_t width = 0;
  for (const auto& c : model.concepts) width = std::max(width, c.label.size());
  for (const auto& c : model.concepts) {
    fmt::print("  {:<{}}  {:.5f}\n", c.label, width, result.final_state()[c.id]);
  }
  if (model.output_indices().size() >= 2) {
    const auto w = fcm::decide_winner(result, model);
    fmt::print("winner: {} ({:.5f}, margin {:.5f}){}\n", w.label, w.value, w.margin,
               w.ambiguous ? " ambiguous" : "");
  }
  return converged ? kExitOk : kExitNonConvergent;
}

// --- classify ---------------------------------------------------------------

struct ClassifyArgs {
  std::string hierarchy;
  std::string symptoms;
  std::vector<std::string> biases;
  bool json_output = false;
};

int cmd_classify(const ClassifyArgs& args) {
  const auto hierarchy = resolve_hierarchy(args.hierarchy);
  const auto symptoms = resolve_symptoms(args.symptoms);
  const auto path = fcm::classify(hierarchy, symptoms, parse_biases(args.biases));
  const bool complete = path.status == fcm::PathStatus::Complete;

  if (args.json_output) {
    json steps = json::array();
    for (const auto& s : path.steps) {
      steps.push_back({{"node", s.node},
                       {"winner", winner_json(s.winner)},
                       {"iterations", s.inference.iterations_used},
                       {"converged", s.inference.status == fcm::RunStatus::Converged},
                       {"final", s.inference.final_state().values},
                       {"unused_symptoms", s.unused_symptoms}});
    }
    json doc = {{"status", complete ? "complete" : "non-convergent"},
                {"diagnosis", path.diagnosis},
                {"ambiguous", path.any_ambiguous()},
                {"steps", steps}};
    fmt::print("{}\n", doc.dump(2));
  } else {
    for (std::size_t i = 0; i < path.steps.size(); ++i) {
      const auto& s = path.steps[i];
      const bool ok = s.inference.status == fcm::RunStatus::Converged;
      fmt::print("level {} [{}]: winner {} {:.5f} (runner-up {:.5f}, margin {:.5f}) after {} iterations{}{}\n",
                 i + 1, s.node, s.winner.label, s.winner.value, s.winner.runner_up_value,
                 s.winner.margin, s.inference.iterations_used, s.winner.ambiguous ? " ambiguous" : "",
                 ok ? "" : " NOT CONVERGED");
    }
    if (complete) {
      fmt::print("diagnosis: {}\n", path.diagnosis);
    } else {
      fmt::print("diagnosis: none (node '{}' did not converge)\n", path.steps.back().node);
    }
  }
  return complete ? kExitOk : kExitNonConvergent;
}

// --- train ------------------------------------------------------------------

struct TrainArgs {
  std::string model;
  std::vector<std::string> exemplars;
  double eta = 0.01;
  double gamma = 0.98;
  double epsilon = 0.001;
  std::size_t epochs = 500;
  double inhibition = -1.0;
  std::string output;
  std::optional<std::string> progress;
  RuleFlags rule;
};

int cmd_train(const TrainArgs& args) {
  const auto model = resolve_model(args.model);

  fcm::NhlParams params;
  params.eta = args.eta;
  params.gamma = args.gamma;
  params.epsilon = args.epsilon;
  params.max_epochs = args.epochs;
  params.rule_config = args.rule.apply(params.rule_config);

  std::map<std::string, fcm::StateVector> exemplars;
  const auto fill = fcm::default_fill_policy(params.rule_config.rule);
  const double initial_output = fcm::default_initial_output(params.rule_config.rule);
  for (const auto& e : args.exemplars) {
    const auto eq = e.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw fcm::ParseError(fmt::format("--exemplar expects Label=symptoms, got '{}'", e));
    }
    auto mapped = fcm::map_symptoms(resolve_symptoms(e.substr(eq + 1)), model, fill, initial_output);
    warn_unused(mapped.unused_symptoms, model.metadata.name);
    exemplars[e.substr(0, eq)] = std::move(mapped.state);
  }

  if (args.progress) {
    std::string log = fcm::progress_header(fcm::strip_competition(model));
    for (const auto& [label, exemplar] : exemplars) {
      log += "# region " + label + "\n";
      fcm::train_region(fcm::strip_competition(model), exemplar, params,
                        [&](const fcm::EpochProgress& p) { log += fcm::progress_row(p); });
    }
    fcm::write_text_file(*args.progress, log);
  }

  auto trained = fcm::train_competitive(model, exemplars, params, args.inhibition);
  trained.metadata.name = fs::path(args.output).stem().string();
  fcm::write_text_file(args.output, fcm::save_model(trained));
  fmt::print("wrote {}\n", args.output);

  // Report how each exemplar now classifies.
  for (const auto& [label, exemplar] : exemplars) {
    const auto result = fcm::run(trained, exemplar, params.rule_config);
    const auto w = fcm::decide_winner(result, trained);
    fmt::print("exemplar {}: winner {} ({:.5f}, margin {:.5f})\n", label, w.label, w.value, w.margin);
  }
  return kExitOk;
}

// --- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::string target;
  std::optional<std::string> dataset;
  std::optional<std::string> counts;
  std::vector<std::string> labels;
  RuleFlags rule;
};

void print_confusion(const fcm::ConfusionMatrix& cm) {
  bool any_unclassified = false;
  for (std::size_t a = 0; a < cm.labels().size(); ++a) any_unclassified |= cm.unclassified(a) > 0;

  std::size_t width = 6;
  for (const auto& l : cm.labels()) width = std::max(width, l.size());
  fmt::print("{:<{}}", "", width + 2);
  for (const auto& l : cm.labels()) fmt::print("  {:>{}}", l, width);
  if (any_unclassified) fmt::print("  {:>{}}", "unclassified", 12);
  fmt::print("\n");
  for (std::size_t a = 0; a < cm.labels().size(); ++a) {
    fmt::print("{:<{}}", cm.labels()[a], width + 2);
    for (std::size_t p = 0; p < cm.labels().size(); ++p) fmt::print("  {:>{}}", cm.count(a, p), width);
    if (any_unclassified) fmt::print("  {:>{}}", cm.unclassified(a), 12);
    fmt::print("\n");
  }
  if (cm.total() > 0) {
    fmt::print("{}\n", fcm::format_accuracy_line(cm));
  } else {
    fmt::print("Accuracy undefined (no cases)\n");
  }
}

fcm::ConfusionMatrix parse_counts(const std::string& text, std::vector<std::string> labels) {
  std::vector<std::vector<std::uint64_t>> rows;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto semi = text.find(';', start);
    auto& row = rows.emplace_back();
    for (double v : parse_vector(text.substr(start, semi == std::string::npos ? std::string::npos : semi - start))) {
      if (v < 0 || v != static_cast<double>(static_cast<std::uint64_t>(v))) {
        throw fcm::ParseError(fmt::format("--counts: {} is not a non-negative integer", v));
      }
      row.push_back(static_cast<std::uint64_t>(v));
    }
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  if (labels.empty()) {
    for (std::size_t i = 0; i < rows.size(); ++i) labels.push_back(fmt::format("class {}", i + 1));
  }
  return fcm::ConfusionMatrix::from_counts(std::move(labels), std::move(rows));
}

bool looks_like_hierarchy(const std::string& target) {
  if (target == "reference") return true;
  if (!fs::exists(target)) return false;
  try {
    return json::parse(fcm::read_text_file(target)).contains("root");
  } catch (const json::exception&) {
    return false;
  }
}

int cmd_evaluate(const EvaluateArgs& args) {
  if (args.counts) {
    print_confusion(parse_counts(*args.counts, args.labels));
    return kExitOk;
  }
  if (!args.dataset) throw fcm::PreconditionError("evaluate needs a dataset (or --counts)");

  const auto dataset = *args.dataset == "fcm1_demo"
                           ? fcm::fixtures::fcm1_demo_dataset()
                           : fcm::load_dataset(fcm::read_text_file(*args.dataset));
  fcm::ConfusionMatrix cm;
  if (looks_like_hierarchy(args.target)) {
    cm = fcm::evaluate(resolve_hierarchy(args.target), dataset);
  } else {
    const auto model = resolve_model(args.target);
    cm = fcm::evaluate(model, args.rule.apply(model.default_rule_config), dataset);
  }
  print_confusion(cm);
  return kExitOk;
}

// --- fixtures ---------------------------------------------------------------

int cmd_fixtures_list() {
  fmt::print("models:\n");
  for (const auto& name : fcm::fixtures::model_names()) {
    const auto m = fcm::fixtures::model_by_name(name);
    fmt::print("  {:<14} {} concepts, rule {}\n", name, m.size(), fcm::to_string(m.default_rule_config.rule));
    for (const auto& note : m.metadata.provenance) fmt::print("      {}\n", note);
  }
  fmt::print("symptom sets:\n");
  for (const auto& name : fcm::fixtures::symptom_names()) fmt::print("  {}\n", name);
  fmt::print("hierarchies:\n  reference\ndatasets:\n  fcm1_demo\n");
  return kExitOk;
}

int cmd_fixtures_export(const std::string& dir) {
  fs::create_directories(dir);
  const fs::path out(dir);
  for (const auto& name : fcm::fixtures::model_names()) {
    fcm::write_text_file(out / (name + ".json"), fcm::save_model(fcm::fixtures::model_by_name(name)));
  }
  for (const auto& name : fcm::fixtures::symptom_names()) {
    fcm::write_text_file(out / (name + ".json"), fcm::save_symptoms(fcm::fixtures::symptoms_by_name(name)));
  }
  fcm::write_text_file(out / "hierarchy.json", fcm::save_hierarchy(fcm::fixtures::reference_hierarchy()));
  fcm::write_text_file(out / "fcm1_demo_dataset.csv", fcm::save_dataset(fcm::fixtures::fcm1_demo_dataset()));
  fmt::print("exported fixtures to {}\n", dir);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy cognitive map inference, hierarchical classification and NHL training"};
  app.require_subcommand(1);
  int exit_code = kExitOk;

  InferArgs infer;
  auto* infer_cmd = app.add_subcommand("infer", "Iterate one model to a steady state");
  infer_cmd->add_option("model", infer.model, "Model file or built-in model name")->required();
  auto* input_opt = infer_cmd->add_option("--input", infer.input, "Initial state as comma-separated values");
  infer_cmd->add_option("--symptoms", infer.symptoms, "Symptom file (JSON or CSV), built-in set, or - for stdin")
      ->excludes(input_opt);
  infer_cmd->add_option("--fill", infer.fill, "Missing-symptom fill: zero | neutral");
  infer_cmd->add_option("--initial-output", infer.initial_output, "Initial value of output concepts");
  infer_cmd->add_option("--bias", infer.biases, "Prior bias on an output concept, Label=value (repeatable)");
  infer_cmd->add_option("--trace", infer.trace, "Write the iteration trace as CSV");
  infer.rule.attach(infer_cmd);
  infer_cmd->callback([&] { exit_code = cmd_infer(infer); });

  ClassifyArgs classify;
  auto* classify_cmd = app.add_subcommand("classify", "Route symptoms through a model hierarchy");
  classify_cmd->add_option("hierarchy", classify.hierarchy, "Hierarchy file, or 'reference' for the built-in one")
      ->required();
  classify_cmd->add_option("--symptoms", classify.symptoms, "Symptom file (JSON or CSV), built-in set, or -")
      ->required();
  classify_cmd->add_option("--bias", classify.biases, "Prior bias on an output concept, Label=value (repeatable)");
  classify_cmd->add_flag("--json", classify.json_output, "Machine-readable output");
  classify_cmd->callback([&] { exit_code = cmd_classify(classify); });

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Competitive NHL training, one region per output concept");
  train_cmd->add_option("model", train.model, "Model file or built-in model name")->required();
  train_cmd->add_option("--exemplar", train.exemplars, "Output label and its exemplar symptoms, Label=source")
      ->required();
  train_cmd->add_option("--eta", train.eta, "Learning rate")->capture_default_str();
  train_cmd->add_option("--gamma", train.gamma, "Weight decay coefficient in (0, 1]")->capture_default_str();
  train_cmd->add_option("--nhl-epsilon", train.epsilon, "Termination tolerance on output concepts")
      ->capture_default_str();
  train_cmd->add_option("--epochs", train.epochs, "Maximum epochs per region")->capture_default_str();
  train_cmd->add_option("--inhibition", train.inhibition, "Weight wired between outputs after averaging")
      ->capture_default_str();
  train_cmd->add_option("-o,--output", train.output, "Trained model file")->required();
  train_cmd->add_option("--progress", train.progress, "Write per-epoch progress CSV");
  train.rule.attach(train_cmd);
  train_cmd->callback([&] { exit_code = cmd_train(train); });

  EvaluateArgs evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Confusion matrix and accuracy over a labelled dataset");
  evaluate_cmd->add_option("target", evaluate.target, "Model or hierarchy file, built-in model, or 'reference'")
      ->required();
  evaluate_cmd->add_option("dataset", evaluate.dataset, "Dataset CSV, or 'fcm1_demo'");
  evaluate_cmd->add_option("--counts", evaluate.counts, "Score a given matrix instead, rows split by ';'");
  evaluate_cmd->add_option("--labels", evaluate.labels, "Labels for --counts")->delimiter(',');
  evaluate.rule.attach(evaluate_cmd);
  evaluate_cmd->callback([&] { exit_code = cmd_evaluate(evaluate); });

  auto* fixtures_cmd = app.add_subcommand("fixtures", "Built-in reference models and data");
  fixtures_cmd->require_subcommand(1);
  fixtures_cmd->add_subcommand("list", "List built-in fixtures")->callback([&] { exit_code = cmd_fixtures_list(); });
  std::string export_dir;
  auto* export_cmd = fixtures_cmd->add_subcommand("export", "Write every fixture to a directory");
  export_cmd->add_option("dir", export_dir, "Output directory")->required();
  export_cmd->callback([&] { exit_code = cmd_fixtures_export(export_dir); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  } catch (const fcm::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitError;
  }
  return exit_code;
}
