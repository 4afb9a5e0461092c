#include <doctest.h>

#include <algorithm>
#include <random>

#include "fcm/error.hpp"
#include "fcm/evaluation.hpp"
#include "fcm/fixtures.hpp"

using namespace fcm;
namespace fx = fcm::fixtures;

TEST_CASE("accuracy of the published confusion matrices") {
  const auto a1 = accuracy(fx::fcm1_confusion());
  CHECK(a1.accuracy == doctest::Approx(0.818182).epsilon(1e-6));
  CHECK(a1.error == doctest::Approx(0.181818).epsilon(1e-6));
  CHECK(a1.correct == 18);
  CHECK(a1.total == 22);
  CHECK(accuracy(fx::fcm2_confusion()).accuracy == doctest::Approx(0.833333).epsilon(1e-6));
  const auto a3 = accuracy(fx::fcm3_confusion());
  CHECK(a3.accuracy == doctest::Approx(0.583333).epsilon(1e-6));
  CHECK(a3.correct == 14);
  CHECK(a3.total == 24);
}

TEST_CASE("accuracy and error sum to one") {
  for (const auto& cm : {fx::fcm1_confusion(), fx::fcm2_confusion(), fx::fcm3_confusion()}) {
    const auto a = accuracy(cm);
    CHECK(a.accuracy + a.error == 1.0);
  }
}

TEST_CASE("format_accuracy_line") {
  CHECK(format_accuracy_line(fx::fcm1_confusion()) == "Accuracy =18/22= 81.8182 % Error =4/22=18.1818 %");
  CHECK(format_accuracy_line(fx::fcm3_confusion()) == "Accuracy =14/24= 58.3333 % Error =10/24=41.6667 %");
}

TEST_CASE("accuracy is undefined on an empty matrix") {
  ConfusionMatrix empty({"A", "B"});
  CHECK(empty.total() == 0);
  CHECK_THROWS_AS(accuracy(empty), UndefinedMetricError);
}

TEST_CASE("diagonal matrices score 1") {
  const auto cm = ConfusionMatrix::from_counts({"A", "B", "C"}, {{4, 0, 0}, {0, 7, 0}, {0, 0, 1}});
  CHECK(accuracy(cm).accuracy == 1.0);
  CHECK(accuracy(cm).error == 0.0);
}

TEST_CASE("accuracy is invariant under a joint label permutation") {
  const std::vector<std::vector<std::uint64_t>> counts = {{5, 1, 2}, {0, 3, 4}, {6, 1, 9}};
  const auto base = accuracy(ConfusionMatrix::from_counts({"A", "B", "C"}, counts)).accuracy;
  std::vector<std::size_t> perm = {0, 1, 2};
  while (std::next_permutation(perm.begin(), perm.end())) {
    std::vector<std::vector<std::uint64_t>> permuted(3, std::vector<std::uint64_t>(3));
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) permuted[r][c] = counts[perm[r]][perm[c]];
    CHECK(accuracy(ConfusionMatrix::from_counts({"x", "y", "z"}, permuted)).accuracy == base);
  }
}

TEST_CASE("from_counts rejects ragged tables") {
  CHECK_THROWS(ConfusionMatrix::from_counts({"A", "B"}, {{1, 2}, {3}}));
}

TEST_CASE("record and unknown labels") {
  ConfusionMatrix cm({"A", "B"});
  cm.record("A", "B");
  CHECK(cm.count(0, 1) == 1);
  CHECK(cm.total() == 1);
  CHECK(cm.correct() == 0);
  CHECK_THROWS_AS(cm.record("C", "A"), UnknownLabelError);
  cm.record_unclassified("B");
  CHECK(cm.unclassified(1) == 1);
}

TEST_CASE("evaluate the two ideal exemplars on trained FCM1") {
  const std::vector<LabeledCase> data = {{fx::diabetes_ideal(), "Diabetes"}, {fx::thyroid_ideal(), "Thyroid"}};
  const auto cm = evaluate(fx::fcm1_trained(), fx::rescaled_config(), data);
  CHECK(cm == ConfusionMatrix::from_counts({"Diabetes", "Thyroid"}, {{1, 0}, {0, 1}}));
}

TEST_CASE("evaluate edge cases") {
  const auto model = fx::fcm1_trained();
  const auto cfg = fx::rescaled_config();
  const auto empty = evaluate(model, cfg, {});
  CHECK(empty.total() == 0);
  const auto wrong = evaluate(model, cfg, {{fx::diabetes_ideal(), "Thyroid"}});
  CHECK(wrong.count(1, 0) == 1);
  CHECK(wrong.total() == 1);
  CHECK_THROWS_AS(evaluate(model, cfg, {{fx::diabetes_ideal(), "Gout"}}), UnknownLabelError);
}

TEST_CASE("evaluate tallies every case exactly once") {
  const auto data = fx::fcm1_demo_dataset();
  const auto cm = evaluate(fx::fcm1_trained(), fx::rescaled_config(), data);
  std::uint64_t unclassified = 0;
  for (std::size_t r = 0; r < cm.labels().size(); ++r) unclassified += cm.unclassified(r);
  CHECK(cm.total() + unclassified == data.size());
}

TEST_CASE("demo dataset reproduces the published FCM1 confusion counts") {
  const auto cm = evaluate(fx::fcm1_trained(), fx::rescaled_config(), fx::fcm1_demo_dataset());
  CHECK(cm == fx::fcm1_confusion());
}

TEST_CASE("evaluate over the hierarchy uses leaf labels") {
  std::vector<LabeledCase> data;
  auto t2 = fx::diabetes_ideal();
  for (const auto& [k, v] : fx::type2_ideal()) t2[k] = v;
  data.push_back({t2, "Type 2 Diabetes"});
  const auto cm = evaluate(fx::reference_hierarchy(), data);
  CHECK(cm.labels() == fx::reference_hierarchy().leaf_labels());
  CHECK(cm.count(cm.index_of("Type 2 Diabetes"), cm.index_of("Type 2 Diabetes")) == 1);
}

TEST_CASE("perturb_cases is deterministic and stays in range") {
  const std::vector<LabeledCase> seed_cases = {{fx::diabetes_ideal(), "Diabetes"}, {fx::thyroid_ideal(), "Thyroid"}};
  const auto a = perturb_cases(seed_cases, 0.5, 4, 99);
  const auto b = perturb_cases(seed_cases, 0.5, 4, 99);
  CHECK(a == b);
  CHECK(a.size() == 8);
  for (const auto& c : a)
    for (const auto& [_, v] : c.symptoms) CHECK((v >= 0.0 && v <= 1.0));
  CHECK(perturb_cases(seed_cases, 0.5, 4, 100) != a);
}
