#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fcm/inference.hpp"
#include "fcm/model.hpp"

namespace fcm {

/// Nonlinear Hebbian Learning parameters.
struct NhlParams {
  double eta = 0.01;    ///< learning rate
  double gamma = 0.98;  ///< weight decay coefficient, in (0, 1]
  double epsilon = 0.001;
  std::size_t max_epochs = 500;
  /// State update used between weight sweeps.
  RuleConfig rule_config{.rule = UpdateRule::Rescaled, .clamp = ClampPolicy::ZeroInDegree};
};

void validate_nhl_params(const NhlParams& params);

struct EpochProgress {
  std::size_t epoch = 0;
  std::vector<double> output_values;
  double max_weight_delta = 0.0;
};

using ProgressSink = std::function<void(const EpochProgress&)>;

struct TrainingOutcome {
  FcmModel model;
  std::size_t epochs_used = 0;
  /// True when the output deltas dropped below epsilon before max_epochs.
  bool terminated = false;
  std::vector<double> final_outputs;
};

/// gamma * w + eta * a_target * (a_source - sgn(w) * w * a_target), clipped
/// to [-1, 1]. Zero weights stay zero.
double nhl_weight_update(double w, double a_source, double a_target, const NhlParams& params);

/// Trains the model on one exemplar. Each epoch computes the next state with
/// the current weights and sweeps every nonzero off-diagonal weight using the
/// previous state's activations. Stops once every output concept moves less
/// than params.epsilon.
TrainingOutcome train_region(const FcmModel& model, const StateVector& exemplar,
                             const NhlParams& params, const ProgressSink& progress = {});

/// Trains one copy of the model per output label (links between outputs
/// removed), averages the trained matrices entrywise and wires the outputs
/// against each other with `inhibition`.
FcmModel train_competitive(const FcmModel& model,
                           const std::map<std::string, StateVector>& exemplars,
                           const NhlParams& params, double inhibition);

}  // namespace fcm
