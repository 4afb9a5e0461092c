#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fcm/cascade.hpp"

namespace fcm {

struct LabeledCase {
  SymptomMap symptoms;
  std::string label;

  friend bool operator==(const LabeledCase&, const LabeledCase&) = default;
};

/// Rows are actual labels, columns predicted labels. Cases whose inference
/// did not converge are tallied per actual label in `unclassified`.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::vector<std::string> labels);
  /// From a printed table; every row must have labels.size() entries.
  static ConfusionMatrix from_counts(std::vector<std::string> labels,
                                     std::vector<std::vector<std::uint64_t>> counts);

  const std::vector<std::string>& labels() const { return labels_; }
  std::uint64_t count(std::size_t actual, std::size_t predicted) const {
    return counts_[actual][predicted];
  }
  std::uint64_t unclassified(std::size_t actual) const { return unclassified_[actual]; }
  std::uint64_t total() const { return total_; }
  std::uint64_t correct() const;

  /// Throws UnknownLabelError for labels outside the label set.
  void record(const std::string& actual, const std::string& predicted);
  void record_unclassified(const std::string& actual);

  std::size_t index_of(const std::string& label) const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<std::uint64_t>> counts_;
  std::vector<std::uint64_t> unclassified_;
  std::uint64_t total_ = 0;
};

struct AccuracyReport {
  double accuracy = 0.0;
  double error = 0.0;
  std::uint64_t correct = 0;
  std::uint64_t total = 0;
};

/// accuracy = trace / total, error = 1 - accuracy. Throws
/// UndefinedMetricError when total == 0.
AccuracyReport accuracy(const ConfusionMatrix& cm);

/// "Accuracy =18/22= 81.8182 % Error =4/22=18.1818 %"
std::string format_accuracy_line(const ConfusionMatrix& cm);

/// Full cascade: labels are leaf diagnoses.
ConfusionMatrix evaluate(const HierarchySpec& hierarchy, const std::vector<LabeledCase>& dataset);

/// One model standalone: labels are its output concepts. Fill policy and
/// initial output default from the rule.
ConfusionMatrix evaluate(const FcmModel& model, const RuleConfig& cfg,
                         const std::vector<LabeledCase>& dataset);
ConfusionMatrix evaluate(const FcmModel& model, const RuleConfig& cfg, FillPolicy fill,
                         double initial_output, const std::vector<LabeledCase>& dataset);

/// `copies` jittered versions of every case: each severity moves by a
/// uniform offset in [-amplitude, amplitude] and is clipped to [0, 1].
/// Labels are inherited. Deterministic for a given seed.
std::vector<LabeledCase> perturb_cases(const std::vector<LabeledCase>& cases, double amplitude,
                                       std::size_t copies, std::uint64_t seed);

}  // namespace fcm
