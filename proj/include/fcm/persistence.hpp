#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fcm/cascade.hpp"
#include "fcm/evaluation.hpp"
#include "fcm/inference.hpp"
#include "fcm/model.hpp"
#include "fcm/nhl.hpp"

namespace fcm {

inline constexpr int kModelFormatVersion = 1;

// --- models -----------------------------------------------------------------
//
// {
//   "version": 1,
//   "name": "...",
//   "concepts": [{"label": "Diabetes", "kind": "output"}, ...],
//   "weights": [[...], ...],                 // row = source, column = target
//   "rule": {"variant": "source-sum", "lambda": 1, "epsilon": 0.001,
//            "max_iterations": 1000, "scope": "all-concepts",
//            "clamp": "none", "include_diagonal": false},
//   "provenance": ["..."]                    // optional
// }

std::string save_model(const FcmModel& model);
/// Throws ParseError (syntax, missing field, unknown version) or
/// StructuralError (validation failure).
FcmModel load_model(std::string_view text);

// --- hierarchies ------------------------------------------------------------
//
// {
//   "root": "fcm1",
//   "nodes": {
//     "fcm1": {"model_path": "fcm1_trained.json",
//              "rule_overrides": {"clamp": "zero-indegree", ...},
//              "routes": {"Diabetes": {"node": "fcm2"}, "Type 1": {"leaf": "Type 1 Diabetes"}}}
//   }
// }
//
// rule_overrides accepts the model rule keys plus "fill" ("zero" | "neutral")
// and "initial_output".

using ModelResolver = std::function<FcmModel(const std::string& model_path)>;

std::string save_hierarchy(const HierarchySpec& hierarchy);
HierarchySpec load_hierarchy(std::string_view text, const ModelResolver& resolve);
/// Resolves model paths relative to the hierarchy file's directory.
HierarchySpec load_hierarchy_file(const std::filesystem::path& path);

// --- datasets ---------------------------------------------------------------
//
// Header: symptom labels, then "label". One case per row. An empty cell
// means the symptom was not reported.

std::string save_dataset(const std::vector<LabeledCase>& cases);
std::vector<LabeledCase> load_dataset(std::string_view text);

// --- symptom files ----------------------------------------------------------
//
// Either a JSON object {"Fatigue": 0.6, ...} or CSV with header
// "symptom,severity".

std::string save_symptoms(const SymptomMap& symptoms);
SymptomMap load_symptoms(std::string_view text);

// --- traces -----------------------------------------------------------------

/// "iteration,<label>,..." then one row per trace entry.
std::string write_trace(const InferenceResult& result, const std::vector<std::string>& labels);
std::string write_trace(const InferenceResult& result, const FcmModel& model);

struct TraceTable {
  std::vector<std::string> labels;
  std::vector<StateVector> rows;

  friend bool operator==(const TraceTable&, const TraceTable&) = default;
};
TraceTable read_trace(std::string_view text);

/// Header for NHL progress rows: "epoch,<output labels>,max_weight_delta".
std::string progress_header(const FcmModel& model);
std::string progress_row(const EpochProgress& progress);

// --- helpers ----------------------------------------------------------------

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace fcm
