#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fcm/model.hpp"
#include "fcm/rule_config.hpp"

namespace fcm {

/// Per-concept activations in [0, 1], indexed like the model's concepts.
struct StateVector {
  std::vector<double> values;

  StateVector() = default;
  explicit StateVector(std::vector<double> v) : values(std::move(v)) {}
  StateVector(std::initializer_list<double> v) : values(v) {}

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }

  friend bool operator==(const StateVector&, const StateVector&) = default;
};

/// Throws DimensionError on a length mismatch, RangeError on a value outside [0, 1].
void validate_state(const StateVector& state, const FcmModel& model);

enum class RunStatus { Converged, MaxIterations };

struct InferenceResult {
  /// trace[0] is the initial state.
  std::vector<StateVector> trace;
  RunStatus status = RunStatus::MaxIterations;
  std::size_t iterations_used = 0;

  const StateVector& final_state() const { return trace.back(); }
};

/// Logistic sigmoid 1 / (1 + exp(-steepness * x)).
double activation(double x, double steepness);

/// Concepts held at their initial value under the given policy.
std::vector<bool> clamp_mask(const FcmModel& model, ClampPolicy policy);

// One application of each update rule. Concepts flagged in `clamped` are copied
// through unchanged; an empty mask updates every concept.
StateVector step_additive(const StateVector& state, const FcmModel& model, const RuleConfig& cfg,
                          const std::vector<bool>& clamped = {});
StateVector step_source_sum(const StateVector& state, const FcmModel& model,
                            const RuleConfig& cfg, const std::vector<bool>& clamped = {});
StateVector step_rescaled(const StateVector& state, const FcmModel& model, const RuleConfig& cfg,
                          const std::vector<bool>& clamped = {});

/// Dispatches on cfg.rule.
StateVector step(const StateVector& state, const FcmModel& model, const RuleConfig& cfg,
                 const std::vector<bool>& clamped = {});

/// Max absolute componentwise change over the configured scope is < epsilon.
/// `output_indices` is consulted only for ConvergenceScope::OutputsOnly.
bool has_converged(const StateVector& prev, const StateVector& curr, const RuleConfig& cfg,
                   std::span<const std::size_t> output_indices);

/// Iterates until convergence or cfg.max_iterations. Exhausting the budget is
/// reported through the status; NaN/Inf throws NumericFault.
InferenceResult run(const FcmModel& model, const StateVector& initial, const RuleConfig& cfg);

/// Max |step(S)_i - S_i|, with the clamp set of cfg.clamp.
double fixed_point_residual(const FcmModel& model, const StateVector& state,
                            const RuleConfig& cfg);

}  // namespace fcm
