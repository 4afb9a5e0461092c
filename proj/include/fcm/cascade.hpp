#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fcm/inference.hpp"
#include "fcm/model.hpp"

namespace fcm {

/// Symptom label -> severity in [0, 1].
using SymptomMap = std::map<std::string, double>;

/// Output-label -> initial value in [0, 1].
using PriorBias = std::map<std::string, double>;

enum class FillPolicy { Zero, Neutral };

std::string_view to_string(FillPolicy fill);
std::optional<FillPolicy> parse_fill_policy(std::string_view text);

/// Zero for SourceSum/AdditiveMemory, Neutral for Rescaled.
FillPolicy default_fill_policy(UpdateRule rule);
/// Initial value of output concepts: 0 for SourceSum/AdditiveMemory, 0.5 for Rescaled.
double default_initial_output(UpdateRule rule);

struct MappedInput {
  StateVector state;
  /// Symptom labels that matched no Input concept of the model.
  std::vector<std::string> unused_symptoms;
};

/// Lays symptoms out as a state vector for `model`. Throws RangeError on a
/// severity outside [0, 1].
MappedInput map_symptoms(const SymptomMap& symptoms, const FcmModel& model, FillPolicy fill,
                         double initial_output);

struct Winner {
  std::string label;
  std::size_t index = 0;
  double value = 0.0;
  double runner_up_value = 0.0;
  double margin = 0.0;
  /// Top two outputs within kTieThreshold of each other.
  bool ambiguous = false;
};

inline constexpr double kTieThreshold = 1e-9;

/// Output concept with the largest final value. Ties go to the lowest index.
Winner decide_winner(const InferenceResult& result, const FcmModel& model);
Winner decide_winner(const StateVector& final_state, const FcmModel& model);

/// Overwrites the named output concepts; throws UnknownLabelError on any
/// label that is not an output concept and RangeError outside [0, 1].
StateVector apply_prior_bias(const StateVector& state, const PriorBias& biases,
                             const FcmModel& model);

// --- hierarchy --------------------------------------------------------------

struct RouteToNode {
  std::string node;
  friend bool operator==(const RouteToNode&, const RouteToNode&) = default;
};
struct RouteToLeaf {
  std::string diagnosis;
  friend bool operator==(const RouteToLeaf&, const RouteToLeaf&) = default;
};
using Route = std::variant<RouteToNode, RouteToLeaf>;

/// Partial rule configuration applied on top of a node model's defaults.
struct RuleOverrides {
  std::optional<UpdateRule> rule;
  std::optional<double> steepness;
  std::optional<double> epsilon;
  std::optional<std::size_t> max_iterations;
  std::optional<ConvergenceScope> scope;
  std::optional<ClampPolicy> clamp;
  std::optional<bool> include_diagonal;
  std::optional<FillPolicy> fill;
  std::optional<double> initial_output;

  RuleConfig apply(RuleConfig base) const;
  friend bool operator==(const RuleOverrides&, const RuleOverrides&) = default;
};

struct HierarchyNode {
  /// Where the model was loaded from; kept for serialization.
  std::string model_path;
  std::shared_ptr<const FcmModel> model;
  RuleOverrides overrides;
  std::map<std::string, Route> routes;

  RuleConfig rule_config() const { return overrides.apply(model->default_rule_config); }
  FillPolicy fill_policy() const;
  double initial_output() const;
};

struct HierarchySpec {
  std::string root;
  std::map<std::string, HierarchyNode> nodes;

  /// Every leaf diagnosis reachable from the root, in routing order.
  std::vector<std::string> leaf_labels() const;
};

/// Missing nodes, uncovered outputs, cycles, unreachable nodes, invalid
/// models. Empty = valid.
std::vector<std::string> validate_hierarchy(const HierarchySpec& hierarchy);
void require_valid(const HierarchySpec& hierarchy);

struct PathStep {
  std::string node;
  Winner winner;
  InferenceResult inference;
  std::vector<std::string> unused_symptoms;
};

enum class PathStatus { Complete, NonConvergent };

struct DiagnosisPath {
  std::vector<PathStep> steps;
  PathStatus status = PathStatus::Complete;
  /// Empty when the path stopped at a non-convergent node.
  std::string diagnosis;

  bool any_ambiguous() const;
};

/// Root-to-leaf classification. Each node maps the symptoms independently.
/// Bias labels are applied at whichever node owns them as an output concept;
/// a bias label that no node owns as an output throws UnknownLabelError.
DiagnosisPath classify(const HierarchySpec& hierarchy, const SymptomMap& symptoms,
                       const PriorBias& biases = {});

/// Single-node classification with the node's own fill/initial-output rules.
struct NodeDecision {
  Winner winner;
  InferenceResult inference;
  std::vector<std::string> unused_symptoms;
};
NodeDecision classify_node(const FcmModel& model, const RuleConfig& cfg, FillPolicy fill,
                           double initial_output, const SymptomMap& symptoms,
                           const PriorBias& biases = {});

}  // namespace fcm
