#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fcm/rule_config.hpp"

namespace fcm {

enum class ConceptKind { Input, Output };

std::string_view to_string(ConceptKind kind);
std::optional<ConceptKind> parse_concept_kind(std::string_view text);

struct Concept {
  std::size_t id = 0;
  std::string label;
  ConceptKind kind = ConceptKind::Input;

  friend bool operator==(const Concept&, const Concept&) = default;
};

/// Row-major causal weight matrix. Entry (source, target) is the influence of
/// the row concept on the column concept, the same orientation as the
/// printed tables.
///
/// The matrix is allowed to be non-square so that malformed documents can be
/// represented and reported by validate_model instead of failing on load.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  /// n x n zero matrix.
  explicit WeightMatrix(std::size_t n);
  /// Builds from nested rows; rows may be ragged (validate_model reports it).
  static WeightMatrix from_rows(std::vector<std::vector<double>> rows);

  std::size_t rows() const { return rows_.size(); }
  /// Concept count for a square matrix.
  std::size_t size() const { return rows_.size(); }
  bool is_square() const;

  double at(std::size_t source, std::size_t target) const { return rows_[source][target]; }
  double& at(std::size_t source, std::size_t target) { return rows_[source][target]; }

  std::span<const double> row(std::size_t source) const { return rows_[source]; }
  const std::vector<std::vector<double>>& row_data() const { return rows_; }

  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

 private:
  std::vector<std::vector<double>> rows_;
};

struct ModelMetadata {
  std::string name;
  std::vector<std::string> provenance;

  friend bool operator==(const ModelMetadata&, const ModelMetadata&) = default;
};

struct FcmModel {
  std::vector<Concept> concepts;
  WeightMatrix weights;
  RuleConfig default_rule_config;
  ModelMetadata metadata;

  std::size_t size() const { return concepts.size(); }
  std::vector<std::size_t> output_indices() const;
  std::vector<std::size_t> input_indices() const;
  /// Index of the concept with this label, if any.
  std::optional<std::size_t> find(std::string_view label) const;

  friend bool operator==(const FcmModel&, const FcmModel&) = default;
};

/// Builds a model with contiguous ids. Output concepts are named by label.
FcmModel make_model(std::string name, const std::vector<std::string>& labels,
                    const std::vector<std::string>& output_labels,
                    std::vector<std::vector<double>> weight_rows,
                    RuleConfig rule = {});

// --- validation -------------------------------------------------------------

enum class ViolationKind {
  EmptyModel,
  ShapeMismatch,
  WeightOutOfRange,
  NonFiniteWeight,
  DuplicateLabel,
  EmptyLabel,
  NoOutputConcept,
  NonContiguousIds,
  InvalidRuleConfig,
};

struct Violation {
  ViolationKind kind;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

/// Collects every invariant violation. An empty report means the model is valid.
ValidationReport validate_model(const FcmModel& model);

/// Throws StructuralError listing all violations if the report is non-empty.
void require_valid(const FcmModel& model);

// --- competition ------------------------------------------------------------

/// Sets w[a][b] = inhibition for every ordered pair of distinct outputs.
/// Requires inhibition in [-1, 0) and at least two output concepts.
FcmModel wire_competition(const FcmModel& model, double inhibition);

/// Zeroes every link between distinct output concepts.
FcmModel strip_competition(const FcmModel& model);

// --- printed-row repair -----------------------------------------------------

enum class RepairMode {
  /// The repaired nonzero set must equal the reference exactly.
  Strict,
  /// Every reference nonzero must be nonzero after repair; extra nonzeros at
  /// reference-zero positions are tolerated and reported.
  AllowExtraNonzeros,
};

struct RepairResult {
  std::vector<double> row;
  /// Zero-based position in the printed row that was removed, if any.
  std::optional<std::size_t> removed_position;
  /// Positions (in the repaired row) that are nonzero but zero in the reference.
  std::vector<std::size_t> extra_nonzeros;
};

/// Reconciles a printed matrix row against the sparsity of the matrix it was
/// trained from. A row one entry too long has exactly one spurious zero
/// removed; Hebbian training never creates nonzeros, so the correct removal
/// is the one that realigns the nonzero positions with the reference.
/// Throws RepairError when no removal works or candidate removals disagree.
RepairResult repair_printed_row(std::span<const double> printed_row,
                                const std::vector<bool>& reference_sparsity,
                                RepairMode mode = RepairMode::Strict);

/// Nonzero mask of one matrix row.
std::vector<bool> sparsity_of(std::span<const double> row);

struct RowRepair {
  std::size_t row = 0;
  RepairMode mode = RepairMode::Strict;
  RepairResult result;
};

struct MatrixRepair {
  std::vector<std::vector<double>> rows;
  /// One entry per row that was changed or needed the tolerant mode.
  std::vector<RowRepair> repairs;
};

/// Repairs every row of a printed matrix against the reference matrix's
/// sparsity. Rows are tried in Strict mode first; rows listed in
/// `tolerant_rows` (zero-based) may fall back to AllowExtraNonzeros.
MatrixRepair repair_printed_matrix(const std::vector<std::vector<double>>& printed_rows,
                                   const WeightMatrix& reference,
                                   std::span<const std::size_t> tolerant_rows = {});

// --- linguistic weights -----------------------------------------------------

enum class FuzzyWeightLabel {
  NegativelyStrong,
  NegativelyWeak,
  Neutral,
  PositivelyWeak,
  PositivelyStrong,
};

/// Centroid of the label's region: -0.75, -0.25, 0, 0.25, 0.75.
double defuzzify(FuzzyWeightLabel label);
std::string_view to_string(FuzzyWeightLabel label);
std::optional<FuzzyWeightLabel> parse_fuzzy_label(std::string_view text);

/// Builds weight rows from expert labels (one label per entry).
std::vector<std::vector<double>> defuzzify_rows(
    const std::vector<std::vector<FuzzyWeightLabel>>& labels);

}  // namespace fcm
