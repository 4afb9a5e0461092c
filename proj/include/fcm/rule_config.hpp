#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace fcm {

enum class UpdateRule {
  /// f(A_i + sum_j A_j w_ji): the classic update with a self-memory term.
  AdditiveMemory,
  /// f(sum_{j != i} A_j w_ji): no self-memory, diagonal excluded.
  SourceSum,
  /// f((2A_i - 1) + sum_{j != i} (2A_j - 1) w_ji): 0.5 is the neutral value.
  Rescaled,
};

enum class ConvergenceScope { OutputsOnly, AllConcepts };

enum class ClampPolicy {
  None,
  /// Concepts without incoming off-diagonal edges keep their initial value.
  ZeroInDegree,
  /// Every Input-kind concept keeps its initial value.
  InputConcepts,
};

struct RuleConfig {
  UpdateRule rule = UpdateRule::SourceSum;
  double steepness = 1.0;
  double epsilon = 0.001;
  std::size_t max_iterations = 1000;
  ConvergenceScope scope = ConvergenceScope::AllConcepts;
  ClampPolicy clamp = ClampPolicy::None;
  bool include_diagonal = false;

  friend bool operator==(const RuleConfig&, const RuleConfig&) = default;
};

/// Throws PreconditionError unless steepness > 0, epsilon > 0 and
/// max_iterations >= 1.
void validate_rule_config(const RuleConfig& cfg);

// Stable external names, shared by the JSON formats and the CLI flags.
std::string_view to_string(UpdateRule rule);
std::string_view to_string(ConvergenceScope scope);
std::string_view to_string(ClampPolicy clamp);
std::optional<UpdateRule> parse_update_rule(std::string_view text);
std::optional<ConvergenceScope> parse_scope(std::string_view text);
std::optional<ClampPolicy> parse_clamp(std::string_view text);

}  // namespace fcm
