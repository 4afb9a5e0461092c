#include <doctest.h>

#include <filesystem>
#include <string>

#include "fcm/error.hpp"
#include "fcm/fixtures.hpp"
#include "fcm/persistence.hpp"

using namespace fcm;
namespace fx = fcm::fixtures;

namespace {

ModelResolver fixture_resolver() {
  return [](const std::string& path) {
    return fx::model_by_name(std::filesystem::path(path).stem().string());
  };
}

void check_same_hierarchy(const HierarchySpec& a, const HierarchySpec& b) {
  CHECK(a.root == b.root);
  REQUIRE(a.nodes.size() == b.nodes.size());
  for (const auto& [id, node] : a.nodes) {
    CAPTURE(id);
    const auto& other = b.nodes.at(id);
    CHECK(node.model_path == other.model_path);
    CHECK(*node.model == *other.model);
    CHECK(node.overrides == other.overrides);
    CHECK(node.routes == other.routes);
  }
}

}  // namespace

TEST_CASE("model round trip on every fixture") {
  for (const auto& name : fx::model_names()) {
    CAPTURE(name);
    const auto model = fx::model_by_name(name);
    const auto text = save_model(model);
    const auto back = load_model(text);
    CHECK(back == model);
    CHECK(save_model(back) == text);
  }
}

TEST_CASE("loaded FCM1 document has the expected concepts") {
  const auto model = load_model(save_model(fx::fcm1_table()));
  CHECK(model.size() == 9);
  const auto outputs = model.output_indices();
  REQUIRE(outputs.size() == 2);
  CHECK(model.concepts[outputs[0]].label == "Diabetes");
  CHECK(model.concepts[outputs[1]].label == "Thyroid");
}

TEST_CASE("load_model errors") {
  SUBCASE("nine concepts, eight rows") {
    const auto model = fx::fcm1_initial();
    auto doc = save_model(model);
    auto broken = model;
    auto rows = model.weights.row_data();
    rows.pop_back();
    broken.weights = WeightMatrix::from_rows(rows);
    CHECK_THROWS_AS(load_model(save_model(broken)), StructuralError);
  }
  SUBCASE("syntax error carries a line number") {
    try {
      load_model("{\n\"version\": 1,\n oops }");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SUBCASE("missing field names the path") {
    try {
      load_model(R"({"version": 1, "name": "x", "weights": []})");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("concepts") != std::string::npos);
    }
  }
  SUBCASE("unknown version") {
    CHECK_THROWS_AS(load_model(R"({"version": 7})"), ParseError);
  }
}

TEST_CASE("hierarchy round trip") {
  const auto hierarchy = fx::reference_hierarchy();
  const auto text = save_hierarchy(hierarchy);
  const auto back = load_hierarchy(text, fixture_resolver());
  check_same_hierarchy(hierarchy, back);
  CHECK(save_hierarchy(back) == text);
}

TEST_CASE("hierarchy overrides survive a round trip") {
  auto hierarchy = fx::reference_hierarchy();
  auto& o = hierarchy.nodes.at("fcm2").overrides;
  o.epsilon = 1e-4;
  o.scope = ConvergenceScope::OutputsOnly;
  o.fill = FillPolicy::Zero;
  o.initial_output = 0.25;
  o.include_diagonal = true;
  check_same_hierarchy(hierarchy, load_hierarchy(save_hierarchy(hierarchy), fixture_resolver()));
}

TEST_CASE("hierarchy with a route to a missing node is rejected") {
  auto hierarchy = fx::reference_hierarchy();
  hierarchy.nodes.at("fcm1").routes["Thyroid"] = RouteToNode{"fcm7"};
  CHECK_THROWS_AS(load_hierarchy(save_hierarchy(hierarchy), fixture_resolver()), StructuralError);
}

TEST_CASE("hierarchy files resolve model paths relative to the file") {
  const std::filesystem::path dir = std::filesystem::path(FCM_TEST_TMPDIR) / "hierarchy";
  std::filesystem::create_directories(dir);
  const auto hierarchy = fx::reference_hierarchy();
  for (const auto& [id, node] : hierarchy.nodes) write_text_file(dir / node.model_path, save_model(*node.model));
  write_text_file(dir / "hierarchy.json", save_hierarchy(hierarchy));
  check_same_hierarchy(hierarchy, load_hierarchy_file(dir / "hierarchy.json"));
}

TEST_CASE("dataset round trip") {
  const auto data = fx::fcm1_demo_dataset();
  const auto text = save_dataset(data);
  CHECK(load_dataset(text) == data);
  CHECK(save_dataset(load_dataset(text)) == text);
}

TEST_CASE("dataset with absent symptoms") {
  const auto data = load_dataset("Fatigue,Trembling,label\n0.5,,Diabetes\n,0.25,Thyroid\n");
  REQUIRE(data.size() == 2);
  CHECK(data[0].symptoms == SymptomMap{{"Fatigue", 0.5}});
  CHECK(data[1].symptoms == SymptomMap{{"Trembling", 0.25}});
  CHECK(load_dataset(save_dataset(data)) == data);
}

TEST_CASE("dataset errors") {
  CHECK_THROWS_AS(load_dataset(""), ParseError);
  CHECK_THROWS_AS(load_dataset("Fatigue,diagnosis\n0.5,D\n"), ParseError);
  CHECK_THROWS_AS(load_dataset("Fatigue,label\n0.5\n"), ParseError);
  CHECK_THROWS_AS(load_dataset("Fatigue,label\nhigh,D\n"), ParseError);
  CHECK_THROWS_AS(load_dataset("Fatigue,label\n1.5,D\n"), ParseError);
}

TEST_CASE("symptom round trip on every fixture set") {
  for (const auto& name : fx::symptom_names()) {
    CAPTURE(name);
    const auto symptoms = fx::symptoms_by_name(name);
    CHECK(load_symptoms(save_symptoms(symptoms)) == symptoms);
  }
  CHECK(load_symptoms("symptom,severity\nFatigue,0.6\nTrembling,0.3\n") ==
        SymptomMap{{"Fatigue", 0.6}, {"Trembling", 0.3}});
  CHECK_THROWS_AS(load_symptoms("symptom,severity\nFatigue,0.6\nFatigue,0.3\n"), ParseError);
}

TEST_CASE("trace round trip on every fixture model") {
  for (const auto& name : fx::model_names()) {
    CAPTURE(name);
    const auto model = fx::model_by_name(name);
    StateVector start(std::vector<double>(model.size(), 0.3));
    start[0] = 0.5;
    const auto result = run(model, start, model.default_rule_config);
    const auto table = read_trace(write_trace(result, model));
    CHECK(table.rows == result.trace);
    CHECK(table.rows.size() == result.iterations_used + 1);
    std::vector<std::string> labels;
    for (const auto& c : model.concepts) labels.push_back(c.label);
    CHECK(table.labels == labels);
  }
}

TEST_CASE("trace of the trained FCM1 diabetes run ends near the printed state") {
  const auto result = run(fx::fcm1_trained(), fx::fcm1_diabetes_input(), fx::rescaled_config());
  const auto table = read_trace(write_trace(result, fx::fcm1_trained()));
  const auto& last = table.rows.back();
  const auto expected = fx::fcm1_trained_diabetes_steady_state();
  for (std::size_t i = 0; i < last.size(); ++i) CHECK(last[i] == doctest::Approx(expected[i]).epsilon(5e-3));
}

TEST_CASE("zero-iteration trace has a header and one row") {
  InferenceResult result;
  result.trace.push_back(StateVector{0.25, 0.75});
  result.iterations_used = 0;
  const auto text = write_trace(result, std::vector<std::string>{"a", "b"});
  CHECK(text == "iteration,a,b\n0,0.25,0.75\n");
}

TEST_CASE("format_double round-trips awkward values") {
  for (double v : {0.1, 1.0 / 3.0, 0.56406, 1e-17, 0.0, -0.0, 0.9999999999999999}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("progress rows") {
  const auto header = progress_header(fx::fcm1_initial());
  CHECK(header == "epoch,Diabetes,Thyroid,max_weight_delta\n");
  CHECK(progress_row(EpochProgress{3, {0.5, 0.25}, 0.125}) == "3,0.5,0.25,0.125\n");
}

TEST_CASE("FCM3 trained fixture records its repair") {
  const auto model = fx::fcm3_trained();
  int repair_notes = 0;
  for (const auto& note : model.metadata.provenance)
    if (note.find("removed spurious zero") != std::string::npos) ++repair_notes;
  CHECK(repair_notes == 5);
}
