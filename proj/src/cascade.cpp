#include "fcm/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "fcm/error.hpp"

namespace fcm {

std::string_view to_string(FillPolicy fill) { return fill == FillPolicy::Zero ? "zero" : "neutral"; }

std::optional<FillPolicy> parse_fill_policy(std::string_view text) {
  if (text == "zero") return FillPolicy::Zero;
  if (text == "neutral") return FillPolicy::Neutral;
  return std::nullopt;
}

FillPolicy default_fill_policy(UpdateRule rule) {
  return rule == UpdateRule::Rescaled ? FillPolicy::Neutral : FillPolicy::Zero;
}

double default_initial_output(UpdateRule rule) { return rule == UpdateRule::Rescaled ? 0.5 : 0.0; }

namespace {

void check_unit(double v, std::string_view what, std::string_view label) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw RangeError(fmt::format("{} '{}' = {} outside [0, 1]", what, label, v));
  }
}

}  // namespace

MappedInput map_symptoms(const SymptomMap& symptoms, const FcmModel& model, FillPolicy fill,
                         double initial_output) {
  check_unit(initial_output, "initial output value", "*");
  MappedInput mapped;
  mapped.state.values.resize(model.size());
  const double missing = fill == FillPolicy::Zero ? 0.0 : 0.5;
  for (const auto& c : model.concepts) {
    mapped.state[c.id] = c.kind == ConceptKind::Output ? initial_output : missing;
  }
  for (const auto& [label, severity] : symptoms) {
    if (label.empty()) throw RangeError("symptom label is empty");
    check_unit(severity, "severity of", label);
    const auto idx = model.find(label);
    if (idx && model.concepts[*idx].kind == ConceptKind::Input) {
      mapped.state[*idx] = severity;
    } else {
      mapped.unused_symptoms.push_back(label);
    }
  }
  return mapped;
}

Winner decide_winner(const StateVector& final_state, const FcmModel& model) {
  const auto outputs = model.output_indices();
  if (outputs.size() < 2) {
    throw StructuralError(fmt::format("winner decision needs at least 2 output concepts, model "
                                      "'{}' has {}",
                                      model.metadata.name, outputs.size()));
  }
  // Stable ordering: value descending, then concept index ascending.
  std::vector<std::size_t> order = outputs;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return final_state[a] > final_state[b];
  });
  // Values within the tie threshold of the maximum count as tied; the lowest
  // index among them wins.
  const double best = final_state[order[0]];
  std::size_t winner = order[0];
  for (auto o : outputs) {
    if (best - final_state[o] < kTieThreshold) {
      winner = o;
      break;
    }
  }
  double runner_up = -1.0;
  for (auto o : outputs) {
    if (o != winner) runner_up = std::max(runner_up, final_state[o]);
  }

  Winner w;
  w.label = model.concepts[winner].label;
  w.index = winner;
  w.value = final_state[winner];
  w.runner_up_value = runner_up;
  w.margin = std::max(0.0, w.value - runner_up);
  w.ambiguous = std::abs(best - runner_up) < kTieThreshold;
  return w;
}

Winner decide_winner(const InferenceResult& result, const FcmModel& model) {
  return decide_winner(result.final_state(), model);
}

StateVector apply_prior_bias(const StateVector& state, const PriorBias& biases,
                             const FcmModel& model) {
  StateVector biased = state;
  for (const auto& [label, value] : biases) {
    const auto idx = model.find(label);
    if (!idx || model.concepts[*idx].kind != ConceptKind::Output) {
      throw UnknownLabelError(fmt::format("bias label '{}' is not an output concept of '{}'", label,
                                          model.metadata.name));
    }
    check_unit(value, "bias for", label);
    biased[*idx] = value;
  }
  return biased;
}

// --- hierarchy --------------------------------------------------------------

RuleConfig RuleOverrides::apply(RuleConfig base) const {
  if (rule) base.rule = *rule;
  if (steepness) base.steepness = *steepness;
  if (epsilon) base.epsilon = *epsilon;
  if (max_iterations) base.max_iterations = *max_iterations;
  if (scope) base.scope = *scope;
  if (clamp) base.clamp = *clamp;
  if (include_diagonal) base.include_diagonal = *include_diagonal;
  return base;
}

FillPolicy HierarchyNode::fill_policy() const {
  return overrides.fill.value_or(default_fill_policy(rule_config().rule));
}

double HierarchyNode::initial_output() const {
  return overrides.initial_output.value_or(default_initial_output(rule_config().rule));
}

std::vector<std::string> HierarchySpec::leaf_labels() const {
  std::vector<std::string> leaves;
  std::set<std::string> visited;
  // Depth-first in route order; guarded against cycles.
  const auto visit = [&](auto& self, const std::string& id) -> void {
    if (!visited.insert(id).second) return;
    const auto it = nodes.find(id);
    if (it == nodes.end()) return;
    const auto& node = it->second;
    const auto outputs = node.model ? node.model->output_indices() : std::vector<std::size_t>{};
    for (auto o : outputs) {
      const auto r = node.routes.find(node.model->concepts[o].label);
      if (r == node.routes.end()) continue;
      if (const auto* leaf = std::get_if<RouteToLeaf>(&r->second)) {
        if (std::find(leaves.begin(), leaves.end(), leaf->diagnosis) == leaves.end()) {
          leaves.push_back(leaf->diagnosis);
        }
      } else {
        self(self, std::get<RouteToNode>(r->second).node);
      }
    }
  };
  visit(visit, root);
  return leaves;
}

std::vector<std::string> validate_hierarchy(const HierarchySpec& hierarchy) {
  std::vector<std::string> problems;
  if (!hierarchy.nodes.contains(hierarchy.root)) {
    problems.push_back(fmt::format("root node '{}' does not exist", hierarchy.root));
    return problems;
  }

  std::map<std::string, int> parents;
  for (const auto& [id, node] : hierarchy.nodes) {
    if (!node.model) {
      problems.push_back(fmt::format("node '{}' has no model", id));
      continue;
    }
    for (const auto& v : validate_model(*node.model)) {
      problems.push_back(fmt::format("node '{}': {}", id, v.message));
    }
    try {
      validate_rule_config(node.rule_config());
    } catch (const PreconditionError& e) {
      problems.push_back(fmt::format("node '{}': {}", id, e.what()));
    }
    if (node.overrides.initial_output && !(*node.overrides.initial_output >= 0.0 &&
                                           *node.overrides.initial_output <= 1.0)) {
      problems.push_back(fmt::format("node '{}': initial_output outside [0, 1]", id));
    }
    const auto outputs = node.model->output_indices();
    if (outputs.size() < 2) {
      problems.push_back(fmt::format("node '{}': model needs at least 2 output concepts", id));
    }
    for (auto o : outputs) {
      if (!node.routes.contains(node.model->concepts[o].label)) {
        problems.push_back(fmt::format("node '{}': no route for output '{}'", id,
                                       node.model->concepts[o].label));
      }
    }
    for (const auto& [label, route] : node.routes) {
      const auto idx = node.model->find(label);
      if (!idx || node.model->concepts[*idx].kind != ConceptKind::Output) {
        problems.push_back(fmt::format("node '{}': route label '{}' is not an output concept", id,
                                       label));
      }
      if (const auto* next = std::get_if<RouteToNode>(&route)) {
        if (!hierarchy.nodes.contains(next->node)) {
          problems.push_back(fmt::format("node '{}': route '{}' points to missing node '{}'", id,
                                         label, next->node));
        } else {
          ++parents[next->node];
        }
      } else if (std::get<RouteToLeaf>(route).diagnosis.empty()) {
        problems.push_back(fmt::format("node '{}': route '{}' has an empty diagnosis", id, label));
      }
    }
  }

  if (parents.contains(hierarchy.root)) {
    problems.push_back(fmt::format("root node '{}' is the target of a route", hierarchy.root));
  }
  for (const auto& [id, count] : parents) {
    if (count > 1) problems.push_back(fmt::format("node '{}' has {} parents", id, count));
  }

  // Reachability from the root. With one parent per node and no edge into
  // the root, every reachable node is visited once and the graph is a tree.
  std::set<std::string> reached;
  std::vector<std::string> frontier{hierarchy.root};
  while (!frontier.empty()) {
    const auto id = frontier.back();
    frontier.pop_back();
    if (!reached.insert(id).second) continue;
    const auto it = hierarchy.nodes.find(id);
    if (it == hierarchy.nodes.end()) continue;
    for (const auto& [_, route] : it->second.routes) {
      if (const auto* next = std::get_if<RouteToNode>(&route)) frontier.push_back(next->node);
    }
  }
  for (const auto& [id, _] : hierarchy.nodes) {
    if (!reached.contains(id)) problems.push_back(fmt::format("node '{}' is unreachable from the root", id));
  }
  return problems;
}

void require_valid(const HierarchySpec& hierarchy) {
  const auto problems = validate_hierarchy(hierarchy);
  if (problems.empty()) return;
  std::string msg = "invalid hierarchy:";
  for (const auto& p : problems) msg += "\n  " + p;
  throw StructuralError(msg);
}

bool DiagnosisPath::any_ambiguous() const {
  return std::any_of(steps.begin(), steps.end(), [](const auto& s) { return s.winner.ambiguous; });
}

NodeDecision classify_node(const FcmModel& model, const RuleConfig& cfg, FillPolicy fill,
                           double initial_output, const SymptomMap& symptoms,
                           const PriorBias& biases) {
  auto mapped = map_symptoms(symptoms, model, fill, initial_output);
  const auto initial = apply_prior_bias(mapped.state, biases, model);
  NodeDecision decision;
  decision.inference = run(model, initial, cfg);
  decision.winner = decide_winner(decision.inference, model);
  decision.unused_symptoms = std::move(mapped.unused_symptoms);
  return decision;
}

DiagnosisPath classify(const HierarchySpec& hierarchy, const SymptomMap& symptoms,
                       const PriorBias& biases) {
  require_valid(hierarchy);

  for (const auto& [label, _] : biases) {
    const bool owned = std::any_of(hierarchy.nodes.begin(), hierarchy.nodes.end(), [&](const auto& kv) {
      const auto idx = kv.second.model->find(label);
      return idx && kv.second.model->concepts[*idx].kind == ConceptKind::Output;
    });
    if (!owned) {
      throw UnknownLabelError(fmt::format("bias label '{}' is not an output concept of any node", label));
    }
  }

  DiagnosisPath path;
  std::string current = hierarchy.root;
  // Validation guarantees a tree, so the walk ends within nodes.size() steps.
  for (std::size_t depth = 0; depth <= hierarchy.nodes.size(); ++depth) {
    const auto& node = hierarchy.nodes.at(current);
    const auto& model = *node.model;

    PriorBias node_biases;
    for (const auto& [label, value] : biases) {
      const auto idx = model.find(label);
      if (idx && model.concepts[*idx].kind == ConceptKind::Output) node_biases[label] = value;
    }

    auto decision = classify_node(model, node.rule_config(), node.fill_policy(),
                                  node.initial_output(), symptoms, node_biases);
    const bool converged = decision.inference.status == RunStatus::Converged;
    const std::string winner_label = decision.winner.label;
    path.steps.push_back({current, std::move(decision.winner), std::move(decision.inference),
                          std::move(decision.unused_symptoms)});
    if (!converged) {
      path.status = PathStatus::NonConvergent;
      path.diagnosis.clear();
      return path;
    }

    const auto& route = node.routes.at(winner_label);
    if (const auto* leaf = std::get_if<RouteToLeaf>(&route)) {
      path.diagnosis = leaf->diagnosis;
      return path;
    }
    current = std::get<RouteToNode>(route).node;
  }
  throw StructuralError("hierarchy walk did not reach a leaf");
}

}  // namespace fcm
