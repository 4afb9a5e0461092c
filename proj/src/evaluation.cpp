#include "fcm/evaluation.hpp"

#include <algorithm>
#include <random>

#include <fmt/format.h>

#include "fcm/error.hpp"

namespace fcm {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)),
      counts_(labels_.size(), std::vector<std::uint64_t>(labels_.size(), 0)),
      unclassified_(labels_.size(), 0) {}

ConfusionMatrix ConfusionMatrix::from_counts(std::vector<std::string> labels,
                                             std::vector<std::vector<std::uint64_t>> counts) {
  ConfusionMatrix cm(std::move(labels));
  if (counts.size() != cm.labels_.size()) {
    throw DimensionError(fmt::format("{} count rows for {} labels", counts.size(), cm.labels_.size()));
  }
  for (std::size_t a = 0; a < counts.size(); ++a) {
    if (counts[a].size() != cm.labels_.size()) {
      throw DimensionError(fmt::format("count row {} has {} entries, expected {}", a + 1,
                                       counts[a].size(), cm.labels_.size()));
    }
    for (auto c : counts[a]) cm.total_ += c;
  }
  cm.counts_ = std::move(counts);
  return cm;
}

std::uint64_t ConfusionMatrix::correct() const {
  std::uint64_t trace = 0;
  for (std::size_t i = 0; i < labels_.size(); ++i) trace += counts_[i][i];
  return trace;
}

std::size_t ConfusionMatrix::index_of(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw UnknownLabelError(fmt::format("label '{}' is not in the label set", label));
  return static_cast<std::size_t>(it - labels_.begin());
}

void ConfusionMatrix::record(const std::string& actual, const std::string& predicted) {
  ++counts_[index_of(actual)][index_of(predicted)];
  ++total_;
}

void ConfusionMatrix::record_unclassified(const std::string& actual) {
  ++unclassified_[index_of(actual)];
  ++total_;
}

AccuracyReport accuracy(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw UndefinedMetricError("accuracy of an empty confusion matrix");
  AccuracyReport r;
  r.correct = cm.correct();
  r.total = cm.total();
  r.accuracy = static_cast<double>(r.correct) / static_cast<double>(r.total);
  r.error = 1.0 - r.accuracy;
  return r;
}

std::string format_accuracy_line(const ConfusionMatrix& cm) {
  const auto r = accuracy(cm);
  return fmt::format("Accuracy ={}/{}= {:.4f} % Error ={}/{}={:.4f} %", r.correct, r.total,
                     100.0 * r.accuracy, r.total - r.correct, r.total, 100.0 * r.error);
}

namespace {

template <typename Classify>
ConfusionMatrix tally(std::vector<std::string> labels, const std::vector<LabeledCase>& dataset,
                      Classify classify_case) {
  ConfusionMatrix cm(std::move(labels));
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& c = dataset[i];
    if (std::find(cm.labels().begin(), cm.labels().end(), c.label) == cm.labels().end()) {
      throw UnknownLabelError(fmt::format("case {} has unknown label '{}'", i + 1, c.label));
    }
  }
  for (const auto& c : dataset) {
    if (const auto predicted = classify_case(c)) {
      cm.record(c.label, *predicted);
    } else {
      cm.record_unclassified(c.label);
    }
  }
  return cm;
}

}  // namespace

ConfusionMatrix evaluate(const HierarchySpec& hierarchy, const std::vector<LabeledCase>& dataset) {
  require_valid(hierarchy);
  return tally(hierarchy.leaf_labels(), dataset, [&](const LabeledCase& c) -> std::optional<std::string> {
    auto path = classify(hierarchy, c.symptoms);
    if (path.status != PathStatus::Complete) return std::nullopt;
    return path.diagnosis;
  });
}

ConfusionMatrix evaluate(const FcmModel& model, const RuleConfig& cfg, FillPolicy fill,
                         double initial_output, const std::vector<LabeledCase>& dataset) {
  require_valid(model);
  std::vector<std::string> labels;
  for (auto o : model.output_indices()) labels.push_back(model.concepts[o].label);
  return tally(std::move(labels), dataset, [&](const LabeledCase& c) -> std::optional<std::string> {
    auto d = classify_node(model, cfg, fill, initial_output, c.symptoms);
    if (d.inference.status != RunStatus::Converged) return std::nullopt;
    return d.winner.label;
  });
}

ConfusionMatrix evaluate(const FcmModel& model, const RuleConfig& cfg,
                         const std::vector<LabeledCase>& dataset) {
  return evaluate(model, cfg, default_fill_policy(cfg.rule), default_initial_output(cfg.rule),
                  dataset);
}

std::vector<LabeledCase> perturb_cases(const std::vector<LabeledCase>& cases, double amplitude,
                                       std::size_t copies, std::uint64_t seed) {
  if (!(amplitude >= 0.0)) throw PreconditionError("jitter amplitude must be non-negative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> offset(-amplitude, amplitude);
  std::vector<LabeledCase> out;
  out.reserve(cases.size() * copies);
  for (const auto& c : cases) {
    for (std::size_t k = 0; k < copies; ++k) {
      LabeledCase jittered{{}, c.label};
      for (const auto& [label, severity] : c.symptoms) {
        jittered.symptoms[label] = std::clamp(severity + offset(rng), 0.0, 1.0);
      }
      out.push_back(std::move(jittered));
    }
  }
  return out;
}

}  // namespace fcm
