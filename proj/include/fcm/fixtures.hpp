#pragma once

// Reference models, exemplars and expected values for the Diabetes/Thyroid
// classifier: the three expert matrices, their published NHL-trained
// counterparts, and the two-level hierarchy that chains them.

#include <string>
#include <vector>

#include "fcm/cascade.hpp"
#include "fcm/evaluation.hpp"
#include "fcm/model.hpp"

namespace fcm::fixtures {

// --- rule configurations ----------------------------------------------------

/// Untrained runs: SourceSum, lambda 1, epsilon 0.001, all concepts, no clamp.
RuleConfig source_sum_config();
/// Trained runs: Rescaled, lambda 1, epsilon 0.001, all concepts, zero in-degree clamp.
RuleConfig rescaled_config();

// --- FCM1: Diabetes vs Thyroid ----------------------------------------------

std::vector<std::string> fcm1_labels();
/// Expert matrix exactly as tabulated, including the +/-1 output links.
FcmModel fcm1_table();
/// The expert matrix without the output links (first, untrained experiment).
FcmModel fcm1_initial();
/// Published NHL-trained matrix.
FcmModel fcm1_trained();

// --- FCM2: Type 1 vs Type 2 -------------------------------------------------

std::vector<std::string> fcm2_labels();
FcmModel fcm2_initial();
FcmModel fcm2_trained();

// --- FCM3: Hyperthyroidism vs Hypothyroidism -------------------------------

std::vector<std::string> fcm3_labels();
FcmModel fcm3_initial();
/// Printed trained rows verbatim; five of them carry an extra entry.
std::vector<std::vector<double>> fcm3_trained_printed_rows();
/// Zero-based rows whose printed form needs the tolerant repair mode.
std::vector<std::size_t> fcm3_tolerant_rows();
/// The printed rows repaired against fcm3_initial()'s sparsity.
FcmModel fcm3_trained();

// --- exemplars --------------------------------------------------------------

SymptomMap diabetes_ideal();
SymptomMap thyroid_ideal();
SymptomMap type1_ideal();
SymptomMap type2_ideal();
SymptomMap hyperthyroid_ideal();
SymptomMap hypothyroid_ideal();

/// {0, 0, 0.6, 0.8, 0.7, 0.3, 0.7, 0.3, 0.3}
StateVector fcm1_diabetes_input();

// --- published steady states ------------------------------------------------

StateVector fcm1_untrained_diabetes_steady_state();
StateVector fcm1_trained_diabetes_steady_state();
StateVector fcm1_trained_thyroid_steady_state();

// --- hierarchy --------------------------------------------------------------

/// fcm1 (trained) routes Diabetes -> fcm2 and Thyroid -> fcm3; the level-2
/// nodes route to leaf diagnoses. Model paths are "<name>.json".
HierarchySpec reference_hierarchy();

// --- published confusion matrices -------------------------------------------

ConfusionMatrix fcm1_confusion();
ConfusionMatrix fcm2_confusion();
ConfusionMatrix fcm3_confusion();

/// 22 jittered exemplars labelled so that the trained FCM1 reproduces the
/// published FCM1 confusion counts.
std::vector<LabeledCase> fcm1_demo_dataset();

// --- registry ---------------------------------------------------------------

/// Names accepted by model_by_name: fcm1_table, fcm1_initial, fcm1_trained,
/// fcm2_initial, fcm2_trained, fcm3_initial, fcm3_trained.
std::vector<std::string> model_names();
/// Throws UnknownLabelError for an unknown name.
FcmModel model_by_name(const std::string& name);

/// diabetes_ideal, thyroid_ideal, type1_ideal, ...
std::vector<std::string> symptom_names();
SymptomMap symptoms_by_name(const std::string& name);

}  // namespace fcm::fixtures
