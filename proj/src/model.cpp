#include "fcm/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "fcm/error.hpp"

namespace fcm {

// --- rule config names ------------------------------------------------------

void validate_rule_config(const RuleConfig& cfg) {
  if (!(cfg.steepness > 0.0) || !std::isfinite(cfg.steepness)) {
    throw PreconditionError(fmt::format("steepness must be positive, got {}", cfg.steepness));
  }
  if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon)) {
    throw PreconditionError(fmt::format("epsilon must be positive, got {}", cfg.epsilon));
  }
  if (cfg.max_iterations < 1) {
    throw PreconditionError("max_iterations must be at least 1");
  }
}

std::string_view to_string(UpdateRule rule) {
  switch (rule) {
    case UpdateRule::AdditiveMemory: return "additive-memory";
    case UpdateRule::SourceSum: return "source-sum";
    case UpdateRule::Rescaled: return "rescaled";
  }
  return "?";
}

std::string_view to_string(ConvergenceScope scope) {
  return scope == ConvergenceScope::OutputsOnly ? "outputs-only" : "all-concepts";
}

std::string_view to_string(ClampPolicy clamp) {
  switch (clamp) {
    case ClampPolicy::None: return "none";
    case ClampPolicy::ZeroInDegree: return "zero-indegree";
    case ClampPolicy::InputConcepts: return "input-concepts";
  }
  return "?";
}

std::optional<UpdateRule> parse_update_rule(std::string_view text) {
  for (auto r : {UpdateRule::AdditiveMemory, UpdateRule::SourceSum, UpdateRule::Rescaled}) {
    if (to_string(r) == text) return r;
  }
  return std::nullopt;
}

std::optional<ConvergenceScope> parse_scope(std::string_view text) {
  for (auto s : {ConvergenceScope::OutputsOnly, ConvergenceScope::AllConcepts}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

std::optional<ClampPolicy> parse_clamp(std::string_view text) {
  for (auto c : {ClampPolicy::None, ClampPolicy::ZeroInDegree, ClampPolicy::InputConcepts}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

// --- model ------------------------------------------------------------------

std::string_view to_string(ConceptKind kind) {
  return kind == ConceptKind::Output ? "output" : "input";
}

std::optional<ConceptKind> parse_concept_kind(std::string_view text) {
  if (text == "output") return ConceptKind::Output;
  if (text == "input") return ConceptKind::Input;
  return std::nullopt;
}

WeightMatrix::WeightMatrix(std::size_t n) : rows_(n, std::vector<double>(n, 0.0)) {}

WeightMatrix WeightMatrix::from_rows(std::vector<std::vector<double>> rows) {
  WeightMatrix m;
  m.rows_ = std::move(rows);
  return m;
}

bool WeightMatrix::is_square() const {
  return std::all_of(rows_.begin(), rows_.end(),
                     [n = rows_.size()](const auto& r) { return r.size() == n; });
}

std::vector<std::size_t> FcmModel::output_indices() const {
  std::vector<std::size_t> out;
  for (const auto& c : concepts) {
    if (c.kind == ConceptKind::Output) out.push_back(c.id);
  }
  return out;
}

std::vector<std::size_t> FcmModel::input_indices() const {
  std::vector<std::size_t> out;
  for (const auto& c : concepts) {
    if (c.kind == ConceptKind::Input) out.push_back(c.id);
  }
  return out;
}

std::optional<std::size_t> FcmModel::find(std::string_view label) const {
  for (const auto& c : concepts) {
    if (c.label == label) return c.id;
  }
  return std::nullopt;
}

FcmModel make_model(std::string name, const std::vector<std::string>& labels,
                    const std::vector<std::string>& output_labels,
                    std::vector<std::vector<double>> weight_rows, RuleConfig rule) {
  FcmModel model;
  model.metadata.name = std::move(name);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool is_output =
        std::find(output_labels.begin(), output_labels.end(), labels[i]) != output_labels.end();
    model.concepts.push_back({i, labels[i], is_output ? ConceptKind::Output : ConceptKind::Input});
  }
  model.weights = WeightMatrix::from_rows(std::move(weight_rows));
  model.default_rule_config = rule;
  return model;
}

ValidationReport validate_model(const FcmModel& model) {
  ValidationReport report;
  const std::size_t n = model.concepts.size();
  if (n == 0) {
    report.push_back({ViolationKind::EmptyModel, "model has no concepts"});
  }

  const auto& w = model.weights;
  if (w.rows() != n) {
    report.push_back({ViolationKind::ShapeMismatch,
                      fmt::format("{} concepts but {} weight rows", n, w.rows())});
  } else {
    for (std::size_t r = 0; r < w.rows(); ++r) {
      if (w.row(r).size() != n) {
        report.push_back({ViolationKind::ShapeMismatch,
                          fmt::format("weight row {} has {} entries, expected {}", r + 1,
                                      w.row(r).size(), n)});
      }
    }
  }
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const auto row = w.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!std::isfinite(row[c])) {
        report.push_back({ViolationKind::NonFiniteWeight,
                          fmt::format("weight ({},{}) is not finite", r + 1, c + 1)});
      } else if (row[c] < -1.0 || row[c] > 1.0) {
        report.push_back({ViolationKind::WeightOutOfRange,
                          fmt::format("weight ({},{}) = {} outside [-1, 1]", r + 1, c + 1, row[c])});
      }
    }
  }

  std::set<std::string_view> seen;
  bool has_output = false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = model.concepts[i];
    if (c.id != i) {
      report.push_back({ViolationKind::NonContiguousIds,
                        fmt::format("concept '{}' has id {}, expected {}", c.label, c.id, i)});
    }
    if (c.label.empty()) {
      report.push_back({ViolationKind::EmptyLabel, fmt::format("concept {} has an empty label", i)});
    } else if (!seen.insert(c.label).second) {
      report.push_back({ViolationKind::DuplicateLabel, fmt::format("duplicate label '{}'", c.label)});
    }
    has_output = has_output || c.kind == ConceptKind::Output;
  }
  if (n > 0 && !has_output) {
    report.push_back({ViolationKind::NoOutputConcept, "model has no output concept"});
  }

  try {
    validate_rule_config(model.default_rule_config);
  } catch (const PreconditionError& e) {
    report.push_back({ViolationKind::InvalidRuleConfig, e.what()});
  }
  return report;
}

void require_valid(const FcmModel& model) {
  const auto report = validate_model(model);
  if (report.empty()) return;
  std::string msg = fmt::format("model '{}' is invalid:", model.metadata.name);
  for (const auto& v : report) msg += "\n  " + v.message;
  throw StructuralError(msg);
}

// --- competition ------------------------------------------------------------

FcmModel wire_competition(const FcmModel& model, double inhibition) {
  if (!(inhibition >= -1.0 && inhibition < 0.0)) {
    throw PreconditionError(fmt::format("inhibition must be in [-1, 0), got {}", inhibition));
  }
  const auto outputs = model.output_indices();
  if (outputs.size() < 2) {
    throw StructuralError(fmt::format("competition needs at least 2 output concepts, model '{}' has {}",
                                      model.metadata.name, outputs.size()));
  }
  FcmModel wired = model;
  for (auto a : outputs) {
    for (auto b : outputs) {
      if (a != b) wired.weights.at(a, b) = inhibition;
    }
  }
  return wired;
}

FcmModel strip_competition(const FcmModel& model) {
  FcmModel stripped = model;
  const auto outputs = model.output_indices();
  for (auto a : outputs) {
    for (auto b : outputs) {
      if (a != b) stripped.weights.at(a, b) = 0.0;
    }
  }
  return stripped;
}

// --- printed-row repair -----------------------------------------------------

std::vector<bool> sparsity_of(std::span<const double> row) {
  std::vector<bool> mask(row.size());
  std::transform(row.begin(), row.end(), mask.begin(), [](double v) { return v != 0.0; });
  return mask;
}

namespace {

// Empty optional when the candidate is incompatible with the reference;
// otherwise the positions of tolerated extra nonzeros.
std::optional<std::vector<std::size_t>> match_sparsity(std::span<const double> candidate,
                                                       const std::vector<bool>& reference,
                                                       RepairMode mode) {
  std::vector<std::size_t> extras;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const bool nonzero = candidate[i] != 0.0;
    if (reference[i] && !nonzero) return std::nullopt;
    if (!reference[i] && nonzero) {
      if (mode == RepairMode::Strict) return std::nullopt;
      extras.push_back(i);
    }
  }
  return extras;
}

std::string describe(std::span<const double> row) {
  return fmt::format("{{{}}}", fmt::join(row, ", "));
}

}  // namespace

RepairResult repair_printed_row(std::span<const double> printed_row,
                                const std::vector<bool>& reference_sparsity, RepairMode mode) {
  const std::size_t n = reference_sparsity.size();
  if (printed_row.size() != n && printed_row.size() != n + 1) {
    throw RepairError(fmt::format("printed row has {} entries; only {} or {} can be repaired",
                                  printed_row.size(), n, n + 1));
  }

  if (printed_row.size() == n) {
    auto extras = match_sparsity(printed_row, reference_sparsity, mode);
    if (!extras) {
      throw RepairError(fmt::format("row {} has the right length but its nonzero pattern "
                                    "disagrees with the reference",
                                    describe(printed_row)));
    }
    return {{printed_row.begin(), printed_row.end()}, std::nullopt, std::move(*extras)};
  }

  std::vector<RepairResult> candidates;
  for (std::size_t k = 0; k < printed_row.size(); ++k) {
    if (printed_row[k] != 0.0) continue;
    std::vector<double> candidate;
    candidate.reserve(n);
    candidate.insert(candidate.end(), printed_row.begin(), printed_row.begin() + k);
    candidate.insert(candidate.end(), printed_row.begin() + k + 1, printed_row.end());
    if (auto extras = match_sparsity(candidate, reference_sparsity, mode)) {
      candidates.push_back({std::move(candidate), k, std::move(*extras)});
    }
  }

  if (candidates.empty()) {
    std::vector<std::size_t> printed_nonzeros;
    std::vector<std::size_t> reference_nonzeros;
    for (std::size_t i = 0; i < printed_row.size(); ++i) {
      if (printed_row[i] != 0.0) printed_nonzeros.push_back(i + 1);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (reference_sparsity[i]) reference_nonzeros.push_back(i + 1);
    }
    throw RepairError(fmt::format(
        "no single-zero deletion reconciles row {}: printed nonzero columns {{{}}}, reference "
        "nonzero columns {{{}}}",
        describe(printed_row), fmt::join(printed_nonzeros, ","), fmt::join(reference_nonzeros, ",")));
  }

  // Fewest tolerated extras wins (always zero extras in Strict mode).
  const auto fewest = std::min_element(candidates.begin(), candidates.end(), [](auto& a, auto& b) {
                        return a.extra_nonzeros.size() < b.extra_nonzeros.size();
                      })->extra_nonzeros.size();
  std::erase_if(candidates, [&](const auto& c) { return c.extra_nonzeros.size() != fewest; });

  for (const auto& c : candidates) {
    if (c.row != candidates.front().row) {
      throw RepairError(fmt::format("row {} is ambiguous: deleting position {} or {} both fit the "
                                    "reference but yield different rows",
                                    describe(printed_row), *candidates.front().removed_position + 1,
                                    *c.removed_position + 1));
    }
  }
  return candidates.front();
}

MatrixRepair repair_printed_matrix(const std::vector<std::vector<double>>& printed_rows,
                                   const WeightMatrix& reference,
                                   std::span<const std::size_t> tolerant_rows) {
  if (printed_rows.size() != reference.rows()) {
    throw RepairError(fmt::format("printed matrix has {} rows, reference has {}", printed_rows.size(),
                                  reference.rows()));
  }
  MatrixRepair out;
  for (std::size_t r = 0; r < printed_rows.size(); ++r) {
    const auto sparsity = sparsity_of(reference.row(r));
    const bool tolerant =
        std::find(tolerant_rows.begin(), tolerant_rows.end(), r) != tolerant_rows.end();

    RowRepair repair{r, RepairMode::Strict, {}};
    try {
      repair.result = repair_printed_row(printed_rows[r], sparsity, RepairMode::Strict);
    } catch (const RepairError& e) {
      if (!tolerant) {
        throw RepairError(fmt::format("row {}: {}", r + 1, e.what()));
      }
      repair.mode = RepairMode::AllowExtraNonzeros;
      repair.result = repair_printed_row(printed_rows[r], sparsity, RepairMode::AllowExtraNonzeros);
    }
    out.rows.push_back(repair.result.row);
    if (repair.result.removed_position || repair.mode != RepairMode::Strict) {
      out.repairs.push_back(std::move(repair));
    }
  }
  return out;
}

// --- linguistic weights -----------------------------------------------------

double defuzzify(FuzzyWeightLabel label) {
  switch (label) {
    case FuzzyWeightLabel::NegativelyStrong: return -0.75;
    case FuzzyWeightLabel::NegativelyWeak: return -0.25;
    case FuzzyWeightLabel::Neutral: return 0.0;
    case FuzzyWeightLabel::PositivelyWeak: return 0.25;
    case FuzzyWeightLabel::PositivelyStrong: return 0.75;
  }
  return 0.0;
}

std::string_view to_string(FuzzyWeightLabel label) {
  switch (label) {
    case FuzzyWeightLabel::NegativelyStrong: return "negatively-strong";
    case FuzzyWeightLabel::NegativelyWeak: return "negatively-weak";
    case FuzzyWeightLabel::Neutral: return "neutral";
    case FuzzyWeightLabel::PositivelyWeak: return "positively-weak";
    case FuzzyWeightLabel::PositivelyStrong: return "positively-strong";
  }
  return "?";
}

std::optional<FuzzyWeightLabel> parse_fuzzy_label(std::string_view text) {
  for (auto l : {FuzzyWeightLabel::NegativelyStrong, FuzzyWeightLabel::NegativelyWeak,
                 FuzzyWeightLabel::Neutral, FuzzyWeightLabel::PositivelyWeak,
                 FuzzyWeightLabel::PositivelyStrong}) {
    if (to_string(l) == text) return l;
  }
  return std::nullopt;
}

std::vector<std::vector<double>> defuzzify_rows(
    const std::vector<std::vector<FuzzyWeightLabel>>& labels) {
  std::vector<std::vector<double>> rows;
  rows.reserve(labels.size());
  for (const auto& label_row : labels) {
    auto& row = rows.emplace_back();
    for (auto l : label_row) row.push_back(defuzzify(l));
  }
  return rows;
}

}  // namespace fcm
