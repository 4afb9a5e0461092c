#include "fcm/fixtures.hpp"

#include <fmt/format.h>

#include "fcm/error.hpp"

namespace fcm::fixtures {

RuleConfig source_sum_config() {
  return RuleConfig{.rule = UpdateRule::SourceSum,
                    .steepness = 1.0,
                    .epsilon = 0.001,
                    .max_iterations = 1000,
                    .scope = ConvergenceScope::AllConcepts,
                    .clamp = ClampPolicy::None,
                    .include_diagonal = false};
}

RuleConfig rescaled_config() {
  auto cfg = source_sum_config();
  cfg.rule = UpdateRule::Rescaled;
  cfg.clamp = ClampPolicy::ZeroInDegree;
  return cfg;
}

// --- FCM1 -------------------------------------------------------------------

std::vector<std::string> fcm1_labels() {
  return {"Diabetes",      "Thyroid",      "Fatigue",       "Change in Appetite", "Weight Variation",
          "Vision Problems", "Skin Problems", "Irritability", "Trembling"};
}

FcmModel fcm1_table() {
  auto m = make_model("fcm1_table", fcm1_labels(), {"Diabetes", "Thyroid"},
                      {{1.0, -1.0, 0, 0, 0, 0, 0, 0, 0},
                       {-1.0, 1.0, 0, 0, 0, 0, 0, 0, 0},
                       {0.6, 0.8, 1.0, 0, 0.25, 0, 0, 0.4, 0.15},
                       {0.8, 0.5, 0.15, 1.0, 0.45, 0, 0, 0.15, 0},
                       {0.7, 0.6, 0.75, 0.3, 1.0, 0, 0, 0, 0},
                       {0.3, 0.4, 0, 0, 0, 1.0, 0, 0, 0},
                       {0.7, 0.8, 0, 0, 0, 0, 1.0, 0, 0},
                       {0.3, 0.4, 0.2, 0.2, 0.14, 0, 0, 1.0, 0.5},
                       {0.3, 0.5, 0, 0, 0, 0, 0, 0, 1.0}},
                      source_sum_config());
  m.metadata.provenance = {"Diabetes/Thyroid expert weight matrix, verbatim"};
  return m;
}

FcmModel fcm1_initial() {
  auto m = strip_competition(fcm1_table());
  m.metadata.name = "fcm1_initial";
  m.metadata.provenance = {
      "Diabetes/Thyroid expert weight matrix with the Diabetes<->Thyroid links zeroed",
      "configuration of the untrained experiment; the inhibitory links are added afterwards"};
  return m;
}

FcmModel fcm1_trained() {
  auto m = make_model(
      "fcm1_trained", fcm1_labels(), {"Diabetes", "Thyroid"},
      {{1.00000, -1.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000},
       {-1.00000, 1.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000},
       {0.52788, 0.70129, 1.00000, 0.00000, 0.22273, 0.00000, 0.00000, 0.35352, 0.13545},
       {0.70197, 0.44037, 0.13540, 1.00000, 0.39698, 0.00000, 0.00000, 0.13532, 0.00000},
       {0.61493, 0.52737, 0.65864, 0.26621, 1.00000, 0.00000, 0.00000, 0.00000, 0.00000},
       {0.26517, 0.35215, 0.00000, 0.00000, 0.00000, 1.00000, 0.00000, 0.00000, 0.00000},
       {0.61754, 0.70438, 0.00000, 0.00000, 0.00000, 0.00000, 1.00000, 0.00000, 0.00000},
       {0.26631, 0.35350, 0.17903, 0.17894, 0.12665, 0.00000, 0.00000, 1.00000, 0.44061},
       {0.26627, 0.44038, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000, 1.00000}},
      rescaled_config());
  m.metadata.provenance = {"published NHL-trained Diabetes/Thyroid matrix, verbatim"};
  return m;
}

// --- FCM2 -------------------------------------------------------------------

std::vector<std::string> fcm2_labels() {
  return {"Type 1",   "Type 2",   "Frequent Urination", "Frequent Thirst",
          "Nausea",   "Vomiting", "Gum Problems",       "Erectile Dysfunction"};
}

FcmModel fcm2_initial() {
  // The Type 2 diagonal is printed as 0.0; kept as printed (diagonals are
  // unused by the reproduction rules).
  auto m = make_model("fcm2_initial", fcm2_labels(), {"Type 1", "Type 2"},
                      {{1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
                       {-1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
                       {0.3, 0.7, 1.0, 0.5, 0, 0, 0, 0},
                       {0.7, 0.8, 0.75, 1.0, 0.25, 0.25, 0, 0},
                       {0.5, 0, 0, -0.15, 1.0, 0.8, 0, 0},
                       {0.6, 0.7, -0.5, 0.3, 0.5, 1.0, 0, 0},
                       {0, 0.7, 0, 0, 0, 0, 1.0, 0},
                       {0.1, 0.6, 0, 0, 0, 0, 0, 1.0}},
                      rescaled_config());
  m.metadata.provenance = {"Type 1/Type 2 expert weight matrix, verbatim"};
  return m;
}

FcmModel fcm2_trained() {
  auto m = make_model(
      "fcm2_trained", fcm2_labels(), {"Type 1", "Type 2"},
      {{1.00000, -1.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000},
       {-1.00000, 1.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000},
       {0.78338, 0.68548, 1.00000, 0.48992, 0.00000, 0.00000, 0.00000, 0.00000},
       {0.68554, 0.78330, 0.73457, 1.00000, 0.24524, 0.24524, 0.00000, 0.00000},
       {0.48981, 0.00000, 0.00000, -0.14640, 1.00000, 0.78347, 0.00000, 0.00000},
       {0.58767, 0.39187, -0.48934, 0.29415, 0.48988, 1.00000, 0.00000, 0.00000},
       {0.00000, 0.68556, 0.00000, 0.00000, 0.00000, 0.00000, 1.00000, 0.00000},
       {0.09813, 0.58763, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000, 1.00000}},
      rescaled_config());
  m.metadata.provenance = {"published NHL-trained Type 1/Type 2 matrix, verbatim"};
  return m;
}

// --- FCM3 -------------------------------------------------------------------

std::vector<std::string> fcm3_labels() {
  return {"Hyperthyroidism", "Hypothyroidism",  "Hair Loss",          "Heart Rate",
          "Heat/Cold Tolerance", "Constipation", "Diarrhea",          "Mental Problems",
          "Menstrual Problems",  "Breathlessness"};
}

FcmModel fcm3_initial() {
  auto m = make_model("fcm3_initial", fcm3_labels(), {"Hyperthyroidism", "Hypothyroidism"},
                      {{1, -1.0, 0, 0, 0, 0, 0, 0, 0, 0},
                       {-1.0, 1, 0, 0, 0, 0, 0, 0, 0, 0},
                       {0.7, 0.8, 1, 0, 0, 0, 0, 0, 0, 0},
                       {0.9, 0.1, 0, 1, 0, 0, 0.5, 0.5, 0, 0.8},
                       {0.8, 0.89, 0, 0.5, 1, 0, 0, 0, 0, 0.2},
                       {0.1, 0.6, 0, 0, 0, 1, -0.7, 0, 0, 0.1},
                       {0.4, 0, 0.6, 0.6, 0, -0.7, 1, 0, 0, 0.1},
                       {0.8, 0.6, 0, 0, 0, 0, 0, 1, 0, 0},
                       {0.8, 0.65, 0.5, 0.5, 0, 0.4, 0.4, 0, 1, 0.15},
                       {0.6, 0.3, 0.5, 0.7, 0, 0.5, 0, 0, 0, 1.0}},
                      rescaled_config());
  m.metadata.provenance = {"thyroid-subtype expert weight matrix, verbatim"};
  return m;
}

std::vector<std::vector<double>> fcm3_trained_printed_rows() {
  return {
      {1.00000, -1.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000},
      {-1.00000, 1.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000},
      {0.54915, 0.94061, 1.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000},
      {0.76999, 0.44610, 0.00000, 1.00000, 0.00000, 0.00000, 0.00000, 0.53060, 0.52982, 0.00000,
       0.75725},
      {0.74610, 0.95426, 0.00000, 0.52839, 1.00000, 0.00000, 0.00000, 0.00000, 0.00000, 0.30231},
      {0.10296, 0.74687, 0.00000, 0.00000, 0.00000, 0.00000, 1.00000, -0.58836, 0.00000, 0.00000,
       0.19869},
      {0.38751, 0.04500, 0.57635, 0.57329, 0.00000, -0.59076, 1.00000, 0.00000, 0.00000, 0.00000,
       0.19680},
      {0.71594, 0.63869, 0.00000, 0.00000, 0.00000, 0.00000, 0.00000, 1.00000, 0.00000, 0.00000,
       0.00000},
      {0.78953, 0.77810, 0.52446, 0.52148, 0.00000, 0.44873, 0.44341, 0.00000, 1.00000, 0.25750},
      {0.61002, 0.36152, 0.52390, 0.67270, 0.00000, 0.51977, 0.00000, 0.00000, 0.00000, 1.00000,
       0.00000},
  };
}

// Row 7 (Diarrhea) prints 0.04500 in the Hypothyroidism column, where the
// expert matrix has no link; no single deletion can remove it.
std::vector<std::size_t> fcm3_tolerant_rows() { return {6}; }

FcmModel fcm3_trained() {
  const auto tolerant = fcm3_tolerant_rows();
  const auto repaired =
      repair_printed_matrix(fcm3_trained_printed_rows(), fcm3_initial().weights, tolerant);
  auto m = make_model("fcm3_trained", fcm3_labels(), {"Hyperthyroidism", "Hypothyroidism"},
                      repaired.rows, rescaled_config());
  m.metadata.provenance.push_back("published NHL-trained thyroid-subtype matrix, repaired");
  const auto labels = fcm3_labels();
  for (const auto& r : repaired.repairs) {
    std::string note = fmt::format("row {} ({}):", r.row + 1, labels[r.row]);
    if (r.result.removed_position) {
      note += fmt::format(" removed spurious zero at printed position {}", *r.result.removed_position + 1);
    }
    for (auto extra : r.result.extra_nonzeros) {
      note += fmt::format("; kept {} in column {} ({}) although the expert matrix has no link there",
                          r.result.row[extra], extra + 1, labels[extra]);
    }
    m.metadata.provenance.push_back(note);
  }
  return m;
}

// --- exemplars --------------------------------------------------------------
// Each ideal case takes the expert association weights of one output column
// as symptom severities.

SymptomMap diabetes_ideal() {
  return {{"Fatigue", 0.6},         {"Change in Appetite", 0.8}, {"Weight Variation", 0.7},
          {"Vision Problems", 0.3}, {"Skin Problems", 0.7},      {"Irritability", 0.3},
          {"Trembling", 0.3}};
}

SymptomMap thyroid_ideal() {
  return {{"Fatigue", 0.8},         {"Change in Appetite", 0.5}, {"Weight Variation", 0.6},
          {"Vision Problems", 0.4}, {"Skin Problems", 0.8},      {"Irritability", 0.4},
          {"Trembling", 0.5}};
}

SymptomMap type1_ideal() {
  return {{"Frequent Urination", 0.3}, {"Frequent Thirst", 0.7}, {"Nausea", 0.5},
          {"Vomiting", 0.6},           {"Gum Problems", 0.0},    {"Erectile Dysfunction", 0.1}};
}

SymptomMap type2_ideal() {
  return {{"Frequent Urination", 0.7}, {"Frequent Thirst", 0.8}, {"Nausea", 0.0},
          {"Vomiting", 0.7},           {"Gum Problems", 0.7},    {"Erectile Dysfunction", 0.6}};
}

SymptomMap hyperthyroid_ideal() {
  return {{"Hair Loss", 0.7},       {"Heart Rate", 0.9},         {"Heat/Cold Tolerance", 0.8},
          {"Constipation", 0.1},    {"Diarrhea", 0.4},           {"Mental Problems", 0.8},
          {"Menstrual Problems", 0.8}, {"Breathlessness", 0.6}};
}

SymptomMap hypothyroid_ideal() {
  return {{"Hair Loss", 0.8},       {"Heart Rate", 0.1},         {"Heat/Cold Tolerance", 0.89},
          {"Constipation", 0.6},    {"Diarrhea", 0.0},           {"Mental Problems", 0.6},
          {"Menstrual Problems", 0.65}, {"Breathlessness", 0.3}};
}

StateVector fcm1_diabetes_input() { return {0.0, 0.0, 0.6, 0.8, 0.7, 0.3, 0.7, 0.3, 0.3}; }

StateVector fcm1_untrained_diabetes_steady_state() {
  return {0.89578, 0.91107, 0.66187, 0.57555, 0.62422, 0.50000, 0.50000, 0.58707, 0.59704};
}

StateVector fcm1_trained_diabetes_steady_state() {
  return {0.56406, 0.51207, 0.50291, 0.50136, 0.50215, 0.30000, 0.70000, 0.50183, 0.50182};
}

StateVector fcm1_trained_thyroid_steady_state() {
  return {0.49176, 0.66919, 0.50023, 0.50011, 0.50017, 0.40000, 0.80000, 0.50014, 0.50014};
}

// --- hierarchy --------------------------------------------------------------

HierarchySpec reference_hierarchy() {
  HierarchySpec h;
  h.root = "fcm1";
  const auto node = [](FcmModel m, std::map<std::string, Route> routes) {
    HierarchyNode n;
    n.model_path = m.metadata.name + ".json";
    n.model = std::make_shared<const FcmModel>(std::move(m));
    n.routes = std::move(routes);
    return n;
  };
  h.nodes.emplace("fcm1", node(fcm1_trained(), {{"Diabetes", RouteToNode{"fcm2"}},
                                                {"Thyroid", RouteToNode{"fcm3"}}}));
  h.nodes.emplace("fcm2", node(fcm2_trained(), {{"Type 1", RouteToLeaf{"Type 1 Diabetes"}},
                                                {"Type 2", RouteToLeaf{"Type 2 Diabetes"}}}));
  h.nodes.emplace("fcm3", node(fcm3_trained(), {{"Hyperthyroidism", RouteToLeaf{"Hyperthyroidism"}},
                                                {"Hypothyroidism", RouteToLeaf{"Hypothyroidism"}}}));
  return h;
}

// --- confusion matrices -----------------------------------------------------

ConfusionMatrix fcm1_confusion() {
  return ConfusionMatrix::from_counts({"Diabetes", "Thyroid"}, {{10, 1}, {3, 8}});
}

ConfusionMatrix fcm2_confusion() {
  return ConfusionMatrix::from_counts({"Type 1", "Type 2"}, {{9, 0}, {3, 6}});
}

ConfusionMatrix fcm3_confusion() {
  return ConfusionMatrix::from_counts({"Hyperthyroidism", "Hypothyroidism"}, {{9, 2}, {8, 5}});
}

std::vector<LabeledCase> fcm1_demo_dataset() {
  constexpr double kJitter = 0.02;
  const auto relabel = [](std::vector<LabeledCase> cases, const std::string& label) {
    for (auto& c : cases) c.label = label;
    return cases;
  };
  const std::vector<LabeledCase> diabetes{{diabetes_ideal(), "Diabetes"}};
  const std::vector<LabeledCase> thyroid{{thyroid_ideal(), "Thyroid"}};

  std::vector<LabeledCase> out;
  const auto append = [&](const std::vector<LabeledCase>& cases) {
    out.insert(out.end(), cases.begin(), cases.end());
  };
  append(perturb_cases(diabetes, kJitter, 10, 1));
  append(relabel(perturb_cases(thyroid, kJitter, 1, 2), "Diabetes"));
  append(relabel(perturb_cases(diabetes, kJitter, 3, 3), "Thyroid"));
  append(perturb_cases(thyroid, kJitter, 8, 4));
  return out;
}

// --- registry ---------------------------------------------------------------

std::vector<std::string> model_names() {
  return {"fcm1_table",   "fcm1_initial", "fcm1_trained", "fcm2_initial",
          "fcm2_trained", "fcm3_initial", "fcm3_trained"};
}

FcmModel model_by_name(const std::string& name) {
  if (name == "fcm1_table") return fcm1_table();
  if (name == "fcm1_initial") return fcm1_initial();
  if (name == "fcm1_trained") return fcm1_trained();
  if (name == "fcm2_initial") return fcm2_initial();
  if (name == "fcm2_trained") return fcm2_trained();
  if (name == "fcm3_initial") return fcm3_initial();
  if (name == "fcm3_trained") return fcm3_trained();
  throw UnknownLabelError(fmt::format("no built-in model named '{}'", name));
}

std::vector<std::string> symptom_names() {
  return {"diabetes_ideal", "thyroid_ideal",      "type1_ideal",
          "type2_ideal",    "hyperthyroid_ideal", "hypothyroid_ideal"};
}

SymptomMap symptoms_by_name(const std::string& name) {
  if (name == "diabetes_ideal") return diabetes_ideal();
  if (name == "thyroid_ideal") return thyroid_ideal();
  if (name == "type1_ideal") return type1_ideal();
  if (name == "type2_ideal") return type2_ideal();
  if (name == "hyperthyroid_ideal") return hyperthyroid_ideal();
  if (name == "hypothyroid_ideal") return hypothyroid_ideal();
  throw UnknownLabelError(fmt::format("no built-in symptom set named '{}'", name));
}

}  // namespace fcm::fixtures
