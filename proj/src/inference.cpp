#include "fcm/inference.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fcm/error.hpp"

namespace fcm {

void validate_state(const StateVector& state, const FcmModel& model) {
  if (state.size() != model.size()) {
    throw DimensionError(fmt::format("state has {} values, model '{}' has {} concepts", state.size(),
                                     model.metadata.name, model.size()));
  }
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double v = state[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw RangeError(fmt::format("state value {} for concept '{}' outside [0, 1]", v,
                                   model.concepts[i].label));
    }
  }
}

double activation(double x, double steepness) {
  return 1.0 / (1.0 + std::exp(-steepness * x));
}

std::vector<bool> clamp_mask(const FcmModel& model, ClampPolicy policy) {
  const std::size_t n = model.size();
  std::vector<bool> mask(n, false);
  switch (policy) {
    case ClampPolicy::None:
      break;
    case ClampPolicy::ZeroInDegree:
      for (std::size_t target = 0; target < n; ++target) {
        bool has_in_edge = false;
        for (std::size_t source = 0; source < n && !has_in_edge; ++source) {
          has_in_edge = source != target && model.weights.at(source, target) != 0.0;
        }
        mask[target] = !has_in_edge;
      }
      break;
    case ClampPolicy::InputConcepts:
      for (auto i : model.input_indices()) mask[i] = true;
      break;
  }
  return mask;
}

namespace {

void check_dimensions(const StateVector& state, const FcmModel& model,
                      const std::vector<bool>& clamped) {
  if (state.size() != model.size() || !model.weights.is_square() ||
      model.weights.size() != model.size()) {
    throw DimensionError(fmt::format("state of size {} does not fit model '{}' ({} concepts, {} weight rows)",
                                     state.size(), model.metadata.name, model.size(),
                                     model.weights.rows()));
  }
  if (!clamped.empty() && clamped.size() != state.size()) {
    throw DimensionError(fmt::format("clamp mask has {} entries, state has {}", clamped.size(),
                                     state.size()));
  }
}

bool is_clamped(const std::vector<bool>& clamped, std::size_t i) {
  return !clamped.empty() && clamped[i];
}

// new_i = f(self(A_i) + sum_j source(A_j) * w_ji), j ranging over all
// concepts or off-diagonal only.
template <typename SelfTerm, typename SourceTerm>
StateVector apply_rule(const StateVector& state, const FcmModel& model, double steepness,
                       bool include_diagonal, const std::vector<bool>& clamped, SelfTerm self,
                       SourceTerm source) {
  const std::size_t n = state.size();
  StateVector next = state;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_clamped(clamped, i)) continue;
    double net = self(state[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i && !include_diagonal) continue;
      net += source(state[j]) * model.weights.at(j, i);
    }
    next[i] = activation(net, steepness);
  }
  return next;
}

}  // namespace

StateVector step_additive(const StateVector& state, const FcmModel& model, const RuleConfig& cfg,
                          const std::vector<bool>& clamped) {
  check_dimensions(state, model, clamped);
  return apply_rule(state, model, cfg.steepness, cfg.include_diagonal, clamped,
                    [](double a) { return a; }, [](double a) { return a; });
}

StateVector step_source_sum(const StateVector& state, const FcmModel& model,
                            const RuleConfig& cfg, const std::vector<bool>& clamped) {
  check_dimensions(state, model, clamped);
  return apply_rule(state, model, cfg.steepness, cfg.include_diagonal, clamped,
                    [](double) { return 0.0; }, [](double a) { return a; });
}

StateVector step_rescaled(const StateVector& state, const FcmModel& model, const RuleConfig& cfg,
                          const std::vector<bool>& clamped) {
  check_dimensions(state, model, clamped);
  // The self term already carries the concept's own value; the diagonal
  // weight never participates.
  const auto centered = [](double a) { return 2.0 * a - 1.0; };
  return apply_rule(state, model, cfg.steepness, false, clamped, centered, centered);
}

StateVector step(const StateVector& state, const FcmModel& model, const RuleConfig& cfg,
                 const std::vector<bool>& clamped) {
  switch (cfg.rule) {
    case UpdateRule::AdditiveMemory: return step_additive(state, model, cfg, clamped);
    case UpdateRule::SourceSum: return step_source_sum(state, model, cfg, clamped);
    case UpdateRule::Rescaled: return step_rescaled(state, model, cfg, clamped);
  }
  throw PreconditionError("unknown update rule");
}

bool has_converged(const StateVector& prev, const StateVector& curr, const RuleConfig& cfg,
                   std::span<const std::size_t> output_indices) {
  if (prev.size() != curr.size()) {
    throw DimensionError(fmt::format("cannot compare states of size {} and {}", prev.size(),
                                     curr.size()));
  }
  double max_delta = 0.0;
  if (cfg.scope == ConvergenceScope::OutputsOnly) {
    for (auto i : output_indices) max_delta = std::max(max_delta, std::abs(curr[i] - prev[i]));
  } else {
    for (std::size_t i = 0; i < curr.size(); ++i) {
      max_delta = std::max(max_delta, std::abs(curr[i] - prev[i]));
    }
  }
  return max_delta < cfg.epsilon;
}

InferenceResult run(const FcmModel& model, const StateVector& initial, const RuleConfig& cfg) {
  validate_rule_config(cfg);
  if (model.size() == 0) throw StructuralError("cannot run an empty model");
  validate_state(initial, model);

  const auto clamped = clamp_mask(model, cfg.clamp);
  const auto outputs = model.output_indices();

  InferenceResult result;
  result.trace.push_back(initial);
  while (result.iterations_used < cfg.max_iterations) {
    StateVector next = step(result.trace.back(), model, cfg, clamped);
    ++result.iterations_used;
    for (std::size_t i = 0; i < next.size(); ++i) {
      if (!std::isfinite(next[i])) {
        throw NumericFault(fmt::format("non-finite value at concept '{}' in iteration {}",
                                       model.concepts[i].label, result.iterations_used));
      }
    }
    const bool done = has_converged(result.trace.back(), next, cfg, outputs);
    result.trace.push_back(std::move(next));
    if (done) {
      result.status = RunStatus::Converged;
      return result;
    }
  }
  result.status = RunStatus::MaxIterations;
  return result;
}

double fixed_point_residual(const FcmModel& model, const StateVector& state,
                            const RuleConfig& cfg) {
  const auto clamped = clamp_mask(model, cfg.clamp);
  const auto next = step(state, model, cfg, clamped);
  double residual = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    residual = std::max(residual, std::abs(next[i] - state[i]));
  }
  return residual;
}

}  // namespace fcm
