#include "fcm/nhl.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fcm/error.hpp"

namespace fcm {

void validate_nhl_params(const NhlParams& params) {
  if (!(params.eta >= 0.0) || !std::isfinite(params.eta)) {
    throw PreconditionError(fmt::format("learning rate must be non-negative, got {}", params.eta));
  }
  if (!(params.gamma > 0.0 && params.gamma <= 1.0)) {
    throw PreconditionError(fmt::format("decay coefficient must be in (0, 1], got {}", params.gamma));
  }
  if (!(params.epsilon > 0.0)) {
    throw PreconditionError(fmt::format("epsilon must be positive, got {}", params.epsilon));
  }
  if (params.max_epochs < 1) throw PreconditionError("max_epochs must be at least 1");
  validate_rule_config(params.rule_config);
}

double nhl_weight_update(double w, double a_source, double a_target, const NhlParams& params) {
  if (w == 0.0) return 0.0;
  const double sign = w > 0.0 ? 1.0 : -1.0;
  const double updated =
      params.gamma * w + params.eta * a_target * (a_source - sign * w * a_target);
  return std::clamp(updated, -1.0, 1.0);
}

TrainingOutcome train_region(const FcmModel& model, const StateVector& exemplar,
                             const NhlParams& params, const ProgressSink& progress) {
  validate_nhl_params(params);
  require_valid(model);
  validate_state(exemplar, model);

  const std::size_t n = model.size();
  const auto outputs = model.output_indices();
  const auto clamped = clamp_mask(model, params.rule_config.clamp);

  FcmModel trained = model;
  StateVector state = exemplar;
  TrainingOutcome outcome;

  for (std::size_t epoch = 1; epoch <= params.max_epochs; ++epoch) {
    StateVector next = step(state, trained, params.rule_config, clamped);

    double max_delta = 0.0;
    for (std::size_t source = 0; source < n; ++source) {
      for (std::size_t target = 0; target < n; ++target) {
        if (source == target) continue;
        double& w = trained.weights.at(source, target);
        const double updated = nhl_weight_update(w, state[source], state[target], params);
        max_delta = std::max(max_delta, std::abs(updated - w));
        w = updated;
        if (!std::isfinite(w)) {
          throw NumericFault(fmt::format("non-finite weight ({},{}) in epoch {}", source + 1,
                                         target + 1, epoch));
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(next[i])) {
        throw NumericFault(fmt::format("non-finite activation at concept '{}' in epoch {}",
                                       model.concepts[i].label, epoch));
      }
    }

    double output_delta = 0.0;
    for (auto o : outputs) output_delta = std::max(output_delta, std::abs(next[o] - state[o]));
    state = std::move(next);
    outcome.epochs_used = epoch;

    if (progress) {
      EpochProgress p{epoch, {}, max_delta};
      for (auto o : outputs) p.output_values.push_back(state[o]);
      progress(p);
    }
    if (output_delta < params.epsilon) {
      outcome.terminated = true;
      break;
    }
  }

  for (auto o : outputs) outcome.final_outputs.push_back(state[o]);
  outcome.model = std::move(trained);
  return outcome;
}

FcmModel train_competitive(const FcmModel& model,
                           const std::map<std::string, StateVector>& exemplars,
                           const NhlParams& params, double inhibition) {
  const auto outputs = model.output_indices();
  if (outputs.size() < 2) {
    throw StructuralError(fmt::format("competitive training needs at least 2 output concepts, "
                                      "model '{}' has {}",
                                      model.metadata.name, outputs.size()));
  }
  for (const auto& [label, _] : exemplars) {
    const auto idx = model.find(label);
    if (!idx || model.concepts[*idx].kind != ConceptKind::Output) {
      throw UnknownLabelError(fmt::format("exemplar label '{}' is not an output concept", label));
    }
  }

  const FcmModel base = strip_competition(model);
  std::vector<FcmModel> trained;
  for (auto o : outputs) {
    const auto& label = model.concepts[o].label;
    const auto it = exemplars.find(label);
    if (it == exemplars.end()) {
      throw UnknownLabelError(fmt::format("missing exemplar for output '{}'", label));
    }
    trained.push_back(train_region(base, it->second, params).model);
  }

  FcmModel combined = base;
  const std::size_t n = model.size();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      double sum = 0.0;
      for (const auto& m : trained) sum += m.weights.at(r, c);
      combined.weights.at(r, c) = sum / static_cast<double>(trained.size());
    }
  }
  combined = wire_competition(combined, inhibition);
  combined.metadata.provenance.push_back(fmt::format(
      "competitive NHL training: eta={} gamma={} epsilon={} max_epochs={} rule={} clamp={}, "
      "{} region matrices averaged, outputs wired at {}",
      params.eta, params.gamma, params.epsilon, params.max_epochs,
      to_string(params.rule_config.rule), to_string(params.rule_config.clamp), trained.size(),
      inhibition));
  return combined;
}

}  // namespace fcm
