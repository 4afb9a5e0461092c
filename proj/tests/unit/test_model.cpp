#include <doctest.h>

#include <algorithm>
#include <limits>
#include <vector>

#include "fcm/error.hpp"
#include "fcm/fixtures.hpp"
#include "fcm/model.hpp"

using namespace fcm;
namespace fx = fcm::fixtures;

namespace {

bool has_violation(const ValidationReport& report, ViolationKind kind) {
  return std::any_of(report.begin(), report.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

FcmModel three_outputs() {
  return make_model("three", {"A", "B", "C", "x"}, {"A", "B", "C"},
                    {{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0.5, 0.5, 0.5, 0}});
}

}  // namespace

TEST_CASE("every fixture model validates") {
  for (const auto& name : fx::model_names()) {
    CAPTURE(name);
    CHECK(validate_model(fx::model_by_name(name)).empty());
  }
}

TEST_CASE("fixture concept counts") {
  CHECK(fx::fcm1_table().size() == 9);
  CHECK(fx::fcm2_initial().size() == 8);
  CHECK(fx::fcm3_initial().size() == 10);
  CHECK(fx::fcm1_trained().size() == 9);
  CHECK(fx::fcm2_trained().size() == 8);
  CHECK(fx::fcm3_trained().size() == 10);
}

TEST_CASE("orientation: row C3 column C1 of the expert FCM1 matrix holds 0.6") {
  CHECK(fx::fcm1_table().weights.at(2, 0) == 0.6);
}

TEST_CASE("validate_model reports an out-of-range weight") {
  auto m = fx::fcm1_initial();
  m.weights.at(3, 1) = 1.5;
  const auto report = validate_model(m);
  REQUIRE(report.size() == 1);
  CHECK(report[0].kind == ViolationKind::WeightOutOfRange);
  CHECK_THROWS_AS(require_valid(m), StructuralError);
}

TEST_CASE("validate_model reports a shape mismatch") {
  auto rows = fx::fcm1_initial().weights.row_data();
  rows.pop_back();
  for (auto& r : rows) r.pop_back();
  auto m = fx::fcm1_initial();
  m.weights = WeightMatrix::from_rows(rows);
  const auto report = validate_model(m);
  REQUIRE(report.size() == 1);
  CHECK(report[0].kind == ViolationKind::ShapeMismatch);
}

TEST_CASE("validate_model collects several violations at once") {
  auto m = make_model("bad", {"a", "a"}, {}, {{0, 2.0}, {0, 0}});
  const auto report = validate_model(m);
  CHECK(has_violation(report, ViolationKind::DuplicateLabel));
  CHECK(has_violation(report, ViolationKind::NoOutputConcept));
  CHECK(has_violation(report, ViolationKind::WeightOutOfRange));
}

TEST_CASE("validate_model flags an empty model and NaN weights") {
  CHECK(has_violation(validate_model(FcmModel{}), ViolationKind::EmptyModel));
  auto m = fx::fcm2_trained();
  m.weights.at(2, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK(has_violation(validate_model(m), ViolationKind::NonFiniteWeight));
}

TEST_CASE("single-concept model is legal") {
  auto m = make_model("one", {"only"}, {"only"}, {{0.0}});
  CHECK(validate_model(m).empty());
}

TEST_CASE("wire_competition on FCM1 sets both inhibitory links") {
  const auto base = fx::fcm1_initial();
  REQUIRE(base.weights.at(0, 1) == 0.0);
  const auto wired = wire_competition(base, -1.0);
  CHECK(wired.weights.at(0, 1) == -1.0);
  CHECK(wired.weights.at(1, 0) == -1.0);
  for (std::size_t r = 0; r < base.size(); ++r) {
    for (std::size_t c = 0; c < base.size(); ++c) {
      if ((r == 0 && c == 1) || (r == 1 && c == 0)) continue;
      CHECK(wired.weights.at(r, c) == base.weights.at(r, c));
    }
  }
  // The input model is left untouched.
  CHECK(base.weights.at(0, 1) == 0.0);
}

TEST_CASE("wire_competition rejects a non-negative inhibition") {
  CHECK_THROWS_AS(wire_competition(fx::fcm1_initial(), 0.5), PreconditionError);
  CHECK_THROWS_AS(wire_competition(fx::fcm1_initial(), 0.0), PreconditionError);
  CHECK_THROWS_AS(wire_competition(fx::fcm1_initial(), -1.5), PreconditionError);
}

TEST_CASE("wire_competition needs two outputs") {
  auto m = make_model("solo", {"out", "in"}, {"out"}, {{0, 0}, {0.4, 0}});
  CHECK_THROWS_AS(wire_competition(m, -1.0), StructuralError);
}

TEST_CASE("wire_competition with three outputs sets six entries") {
  const auto base = three_outputs();
  const auto wired = wire_competition(base, -1.0);
  int changed = 0;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      if (wired.weights.at(r, c) != base.weights.at(r, c)) ++changed;
  CHECK(changed == 6);
  for (std::size_t k = 0; k < 3; ++k) CHECK(wired.weights.at(k, k) == 0.0);
}

TEST_CASE("wire_competition is idempotent") {
  for (double inhibition : {-1.0, -0.6, -0.01}) {
    const auto once = wire_competition(fx::fcm1_initial(), inhibition);
    CHECK(wire_competition(once, inhibition) == once);
  }
}

TEST_CASE("strip_competition undoes the tabulated FCM1 links") {
  const auto stripped = strip_competition(fx::fcm1_table());
  CHECK(stripped.weights == fx::fcm1_initial().weights);
}

TEST_CASE("repair_printed_row: over-length FCM3 row 4") {
  const std::vector<double> printed = {0.76999, 0.44610, 0, 1.0, 0, 0, 0, 0.53060, 0.52982, 0, 0.75725};
  const auto sparsity = sparsity_of(fx::fcm3_initial().weights.row(3));
  const auto repaired = repair_printed_row(printed, sparsity);
  const std::vector<double> expected = {0.76999, 0.44610, 0, 1.0, 0, 0, 0.53060, 0.52982, 0, 0.75725};
  CHECK(repaired.row == expected);
  REQUIRE(repaired.removed_position.has_value());
  CHECK(sparsity_of(repaired.row) == sparsity);
}

TEST_CASE("repair_printed_row leaves a consistent row alone") {
  const auto printed = fx::fcm3_trained_printed_rows()[2];
  REQUIRE(printed.size() == 10);
  const auto sparsity = sparsity_of(fx::fcm3_initial().weights.row(2));
  const auto repaired = repair_printed_row(printed, sparsity);
  CHECK(repaired.row == printed);
  CHECK_FALSE(repaired.removed_position.has_value());
}

TEST_CASE("repair_printed_row rejects rows two entries too long") {
  std::vector<double> printed(12, 0.0);
  printed[0] = 0.5;
  std::vector<bool> sparsity(10, false);
  sparsity[0] = true;
  CHECK_THROWS_AS(repair_printed_row(printed, sparsity), RepairError);
}

TEST_CASE("repair_printed_row rejects rows whose nonzeros cannot align") {
  // Three nonzeros against a reference with two.
  const std::vector<double> printed = {0.1, 0.2, 0.3, 0};
  const std::vector<bool> sparsity = {true, true, false};
  CHECK_THROWS_AS(repair_printed_row(printed, sparsity), RepairError);
}

TEST_CASE("repair_printed_row output sparsity equals the reference") {
  const auto printed = fx::fcm3_trained_printed_rows();
  const auto reference = fx::fcm3_initial().weights;
  const auto tolerant = fx::fcm3_tolerant_rows();
  for (std::size_t r = 0; r < printed.size(); ++r) {
    if (std::find(tolerant.begin(), tolerant.end(), r) != tolerant.end()) continue;
    CAPTURE(r);
    const auto sparsity = sparsity_of(reference.row(r));
    CHECK(sparsity_of(repair_printed_row(printed[r], sparsity).row) == sparsity);
  }
}

TEST_CASE("FCM3 printed row 7 needs the tolerant mode") {
  const auto printed = fx::fcm3_trained_printed_rows()[6];
  const auto sparsity = sparsity_of(fx::fcm3_initial().weights.row(6));
  CHECK_THROWS_AS(repair_printed_row(printed, sparsity, RepairMode::Strict), RepairError);
  const auto tolerant = repair_printed_row(printed, sparsity, RepairMode::AllowExtraNonzeros);
  CHECK(tolerant.row.size() == 10);
  CHECK(tolerant.extra_nonzeros == std::vector<std::size_t>{1});
  for (std::size_t c = 0; c < 10; ++c)
    if (sparsity[c]) CHECK(tolerant.row[c] != 0.0);
}

TEST_CASE("fcm3_trained equals the repaired printed rows") {
  const auto repair = repair_printed_matrix(fx::fcm3_trained_printed_rows(),
                                            fx::fcm3_initial().weights, fx::fcm3_tolerant_rows());
  CHECK(fx::fcm3_trained().weights.row_data() == repair.rows);
  CHECK(repair.repairs.size() == 5);
}

TEST_CASE("fuzzy weight labels are strictly ordered with Neutral at 0") {
  const std::vector<FuzzyWeightLabel> order = {
      FuzzyWeightLabel::NegativelyStrong, FuzzyWeightLabel::NegativelyWeak,
      FuzzyWeightLabel::Neutral, FuzzyWeightLabel::PositivelyWeak,
      FuzzyWeightLabel::PositivelyStrong};
  for (std::size_t i = 1; i < order.size(); ++i)
    CHECK(defuzzify(order[i - 1]) < defuzzify(order[i]));
  CHECK(defuzzify(FuzzyWeightLabel::Neutral) == 0.0);
  for (auto label : order) CHECK(parse_fuzzy_label(to_string(label)) == label);
  const auto rows = defuzzify_rows({{FuzzyWeightLabel::Neutral, FuzzyWeightLabel::PositivelyStrong}});
  CHECK(rows == std::vector<std::vector<double>>{{0.0, 0.75}});
}
