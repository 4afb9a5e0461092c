#include <doctest.h>

#include <cmath>
#include <random>

#include "fcm/cascade.hpp"
#include "fcm/error.hpp"
#include "fcm/fixtures.hpp"
#include "fcm/nhl.hpp"
#include "oracle.hpp"

using namespace fcm;
namespace fx = fcm::fixtures;

namespace {

StateVector exemplar(const SymptomMap& symptoms, const FcmModel& model) {
  return map_symptoms(symptoms, model, FillPolicy::Neutral, 0.5).state;
}

std::map<std::string, StateVector> fcm1_exemplars(const FcmModel& model) {
  return {{"Diabetes", exemplar(fx::diabetes_ideal(), model)},
          {"Thyroid", exemplar(fx::thyroid_ideal(), model)}};
}

}  // namespace

TEST_CASE("nhl_weight_update examples") {
  const NhlParams defaults;
  CHECK(nhl_weight_update(0.0, 0.9, 0.9, defaults) == 0.0);
  CHECK(nhl_weight_update(0.5, 0.8, 0.6, defaults) == doctest::Approx(0.493).epsilon(1e-12));
  NhlParams frozen{.eta = 0.3, .gamma = 1.0};
  CHECK(nhl_weight_update(-0.7, 0.0, 0.0, frozen) == -0.7);
}

TEST_CASE("nhl_weight_update saturates at +/-1") {
  NhlParams hot{.eta = 5.0, .gamma = 1.0};
  CHECK(nhl_weight_update(0.95, 1.0, 0.5, hot) == 1.0);
  CHECK(nhl_weight_update(-0.95, 0.0, 1.0, hot) >= -1.0);
}

TEST_CASE("nhl_weight_update randomized properties") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> weight(-1.0, 1.0);
  std::uniform_real_distribution<double> act(0.0, 1.0);
  std::uniform_real_distribution<double> eta(0.0, 2.0);
  std::uniform_real_distribution<double> gamma(0.01, 1.0);
  for (int k = 0; k < 10000; ++k) {
    NhlParams p{.eta = eta(rng), .gamma = gamma(rng)};
    const double w = (k % 10 == 0) ? 0.0 : weight(rng);
    const double as = act(rng);
    const double at = act(rng);
    const double v = nhl_weight_update(w, as, at, p);
    REQUIRE(std::abs(v) <= 1.0);
    if (w == 0.0) REQUIRE(v == 0.0);
    REQUIRE(v == doctest::Approx(oracle::nhl(w, as, at, p.eta, p.gamma)));
  }
}

TEST_CASE("validate_nhl_params") {
  CHECK_NOTHROW(validate_nhl_params(NhlParams{}));
  CHECK_NOTHROW(validate_nhl_params(NhlParams{.eta = 0.0, .gamma = 1.0}));
  CHECK_THROWS_AS(validate_nhl_params(NhlParams{.eta = -0.1}), PreconditionError);
  CHECK_THROWS_AS(validate_nhl_params(NhlParams{.gamma = 0.0}), PreconditionError);
  CHECK_THROWS_AS(validate_nhl_params(NhlParams{.gamma = 1.1}), PreconditionError);
  CHECK_THROWS_AS(validate_nhl_params(NhlParams{.epsilon = 0.0}), PreconditionError);
  CHECK_THROWS_AS(validate_nhl_params(NhlParams{.max_epochs = 0}), PreconditionError);
}

TEST_CASE("train_region with eta 0 and gamma 1 is the identity") {
  for (const auto& name : fx::model_names()) {
    CAPTURE(name);
    const auto model = fx::model_by_name(name);
    NhlParams p{.eta = 0.0, .gamma = 1.0, .epsilon = 1e-300, .max_epochs = 25};
    const StateVector start(std::vector<double>(model.size(), 0.7));
    const auto outcome = train_region(model, start, p);
    CHECK(outcome.model.weights == model.weights);
  }
}

TEST_CASE("train_region preserves the zero pattern and diagonal") {
  const auto model = fx::fcm1_initial();
  const auto outcome = train_region(model, exemplar(fx::diabetes_ideal(), model), NhlParams{});
  for (std::size_t r = 0; r < model.size(); ++r) {
    CHECK(outcome.model.weights.at(r, r) == model.weights.at(r, r));
    for (std::size_t c = 0; c < model.size(); ++c) {
      CHECK((outcome.model.weights.at(r, c) == 0.0) == (model.weights.at(r, c) == 0.0));
      CHECK(std::abs(outcome.model.weights.at(r, c)) <= 1.0);
    }
  }
}

TEST_CASE("train_region on an all-zero matrix leaves it unchanged") {
  auto model = make_model("zeros", {"a", "b", "c"}, {"a", "b"}, {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}});
  const auto outcome = train_region(model, StateVector{0.5, 0.5, 0.9}, NhlParams{});
  CHECK(outcome.model.weights == model.weights);
  CHECK(outcome.terminated);
  CHECK(outcome.final_outputs == std::vector<double>{0.5, 0.5});
}

TEST_CASE("train_region reports progress once per epoch") {
  const auto model = fx::fcm2_initial();
  std::vector<EpochProgress> seen;
  const auto outcome = train_region(model, exemplar(fx::type1_ideal(), model), NhlParams{},
                                    [&](const EpochProgress& p) { seen.push_back(p); });
  REQUIRE(seen.size() == outcome.epochs_used);
  for (std::size_t k = 0; k < seen.size(); ++k) {
    CHECK(seen[k].epoch == k + 1);
    CHECK(seen[k].output_values.size() == 2);
  }
}

TEST_CASE("train_region is deterministic") {
  const auto model = fx::fcm3_initial();
  const auto input = exemplar(fx::hypothyroid_ideal(), model);
  CHECK(train_region(model, input, NhlParams{}).model == train_region(model, input, NhlParams{}).model);
}

TEST_CASE("train_competitive: identical exemplars average to the single trained matrix") {
  const auto model = fx::fcm1_initial();
  const auto input = exemplar(fx::diabetes_ideal(), model);
  const auto combined = train_competitive(model, {{"Diabetes", input}, {"Thyroid", input}}, NhlParams{}, -1.0);
  const auto single = wire_competition(train_region(model, input, NhlParams{}).model, -1.0);
  CHECK(combined.weights == single.weights);
}

TEST_CASE("train_competitive on FCM1 separates both exemplars") {
  const auto base = fx::fcm1_initial();
  const auto trained = train_competitive(base, fcm1_exemplars(base), NhlParams{}, -1.0);
  CHECK(validate_model(trained).empty());
  CHECK(trained.weights.at(0, 1) == -1.0);
  CHECK(trained.weights.at(1, 0) == -1.0);
  const auto cfg = fx::rescaled_config();
  const auto diabetes = classify_node(trained, cfg, FillPolicy::Neutral, 0.5, fx::diabetes_ideal());
  const auto thyroid = classify_node(trained, cfg, FillPolicy::Neutral, 0.5, fx::thyroid_ideal());
  CHECK(diabetes.winner.label == "Diabetes");
  CHECK(thyroid.winner.label == "Thyroid");
}

TEST_CASE("train_competitive rejects bad exemplar maps") {
  const auto base = fx::fcm1_initial();
  auto exemplars = fcm1_exemplars(base);
  exemplars.erase("Thyroid");
  CHECK_THROWS_AS(train_competitive(base, exemplars, NhlParams{}, -1.0), UnknownLabelError);
  exemplars = fcm1_exemplars(base);
  exemplars["Fatigue"] = exemplars["Diabetes"];
  CHECK_THROWS_AS(train_competitive(base, exemplars, NhlParams{}, -1.0), UnknownLabelError);
}
