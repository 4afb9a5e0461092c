#include "fcm/persistence.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "fcm/error.hpp"

namespace fcm {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error("cannot format number");
  return {buf, end};
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw Error(fmt::format("write to '{}' failed", path.string()));
}

namespace {

// --- JSON field access with path context ------------------------------------

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(fmt::format("{}: expected an object", where));
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(fmt::format("{}: missing field '{}'", where, key));
  return *it;
}

std::string get_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError(fmt::format("{}: expected a string", where));
  return v.get<std::string>();
}

double get_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(fmt::format("{}: expected a number", where));
  return v.get<double>();
}

bool get_bool(const json& v, const std::string& where) {
  if (!v.is_boolean()) throw ParseError(fmt::format("{}: expected true or false", where));
  return v.get<bool>();
}

std::size_t get_count(const json& v, const std::string& where) {
  if (!v.is_number_unsigned()) throw ParseError(fmt::format("{}: expected a non-negative integer", where));
  return v.get<std::size_t>();
}

template <typename T, typename Parse>
T get_enum(const json& v, const std::string& where, Parse parse) {
  const auto text = get_string(v, where);
  const auto parsed = parse(text);
  if (!parsed) throw ParseError(fmt::format("{}: unknown value '{}'", where, text));
  return *parsed;
}

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line number.
    const auto offset = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + offset, '\n');
    throw ParseError(fmt::format("{} line {}: {}", what, line, e.what()));
  }
}

json rule_to_json(const RuleConfig& cfg) {
  return json{{"variant", to_string(cfg.rule)},
              {"lambda", cfg.steepness},
              {"epsilon", cfg.epsilon},
              {"max_iterations", cfg.max_iterations},
              {"scope", to_string(cfg.scope)},
              {"clamp", to_string(cfg.clamp)},
              {"include_diagonal", cfg.include_diagonal}};
}

RuleConfig rule_from_json(const json& j, const std::string& where) {
  RuleConfig cfg;
  cfg.rule = get_enum<UpdateRule>(field(j, "variant", where), where + ".variant", parse_update_rule);
  cfg.steepness = get_number(field(j, "lambda", where), where + ".lambda");
  cfg.epsilon = get_number(field(j, "epsilon", where), where + ".epsilon");
  cfg.max_iterations = get_count(field(j, "max_iterations", where), where + ".max_iterations");
  cfg.scope = get_enum<ConvergenceScope>(field(j, "scope", where), where + ".scope", parse_scope);
  cfg.clamp = get_enum<ClampPolicy>(field(j, "clamp", where), where + ".clamp", parse_clamp);
  cfg.include_diagonal = get_bool(field(j, "include_diagonal", where), where + ".include_diagonal");
  return cfg;
}

// --- CSV --------------------------------------------------------------------

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    auto cell = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
    fields.emplace_back(cell);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

// Non-blank lines with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::string_view>> csv_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    auto line = text.substr(start, nl == std::string_view::npos ? text.npos : nl - start);
    ++number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos) lines.emplace_back(number, line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

double parse_decimal(const std::string& cell, std::size_t line, std::string_view column) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    throw ParseError(fmt::format("line {}, column '{}': '{}' is not a number", line, column, cell));
  }
  return v;
}

void check_csv_label(std::string_view label) {
  if (label.empty() || label.find_first_of(",\n\r\"") != std::string_view::npos) {
    throw PreconditionError(fmt::format("label '{}' cannot be written to CSV", label));
  }
}

}  // namespace

// --- models -----------------------------------------------------------------

std::string save_model(const FcmModel& model) {
  json concepts = json::array();
  for (const auto& c : model.concepts) {
    concepts.push_back({{"label", c.label}, {"kind", to_string(c.kind)}});
  }
  json doc = {{"version", kModelFormatVersion},
              {"name", model.metadata.name},
              {"concepts", concepts},
              {"weights", model.weights.row_data()},
              {"rule", rule_to_json(model.default_rule_config)}};
  if (!model.metadata.provenance.empty()) doc["provenance"] = model.metadata.provenance;
  return doc.dump(2) + "\n";
}

FcmModel load_model(std::string_view text) {
  const json doc = parse_json(text, "model document");
  const std::string where = "model";
  const auto version = get_count(field(doc, "version", where), "model.version");
  if (version != kModelFormatVersion) {
    throw ParseError(fmt::format("model.version: unsupported format version {}", version));
  }

  FcmModel model;
  model.metadata.name = get_string(field(doc, "name", where), "model.name");

  const auto& concepts = field(doc, "concepts", where);
  if (!concepts.is_array()) throw ParseError("model.concepts: expected an array");
  for (std::size_t i = 0; i < concepts.size(); ++i) {
    const auto at = fmt::format("model.concepts[{}]", i);
    model.concepts.push_back(
        {i, get_string(field(concepts[i], "label", at), at + ".label"),
         get_enum<ConceptKind>(field(concepts[i], "kind", at), at + ".kind", parse_concept_kind)});
  }

  const auto& weights = field(doc, "weights", where);
  if (!weights.is_array()) throw ParseError("model.weights: expected an array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < weights.size(); ++r) {
    const auto at = fmt::format("model.weights[{}]", r);
    if (!weights[r].is_array()) throw ParseError(at + ": expected an array");
    auto& row = rows.emplace_back();
    for (std::size_t c = 0; c < weights[r].size(); ++c) {
      row.push_back(get_number(weights[r][c], fmt::format("{}[{}]", at, c)));
    }
  }
  model.weights = WeightMatrix::from_rows(std::move(rows));
  model.default_rule_config = rule_from_json(field(doc, "rule", where), "model.rule");

  if (const auto it = doc.find("provenance"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("model.provenance: expected an array of strings");
    for (std::size_t i = 0; i < it->size(); ++i) {
      model.metadata.provenance.push_back(get_string((*it)[i], fmt::format("model.provenance[{}]", i)));
    }
  }

  require_valid(model);
  return model;
}

// --- hierarchies ------------------------------------------------------------

std::string save_hierarchy(const HierarchySpec& hierarchy) {
  json nodes = json::object();
  for (const auto& [id, node] : hierarchy.nodes) {
    json overrides = json::object();
    const auto& o = node.overrides;
    if (o.rule) overrides["variant"] = to_string(*o.rule);
    if (o.steepness) overrides["lambda"] = *o.steepness;
    if (o.epsilon) overrides["epsilon"] = *o.epsilon;
    if (o.max_iterations) overrides["max_iterations"] = *o.max_iterations;
    if (o.scope) overrides["scope"] = to_string(*o.scope);
    if (o.clamp) overrides["clamp"] = to_string(*o.clamp);
    if (o.include_diagonal) overrides["include_diagonal"] = *o.include_diagonal;
    if (o.fill) overrides["fill"] = to_string(*o.fill);
    if (o.initial_output) overrides["initial_output"] = *o.initial_output;

    json routes = json::object();
    for (const auto& [label, route] : node.routes) {
      if (const auto* leaf = std::get_if<RouteToLeaf>(&route)) {
        routes[label] = {{"leaf", leaf->diagnosis}};
      } else {
        routes[label] = {{"node", std::get<RouteToNode>(route).node}};
      }
    }
    nodes[id] = {{"model_path", node.model_path}, {"rule_overrides", overrides}, {"routes", routes}};
  }
  return json{{"root", hierarchy.root}, {"nodes", nodes}}.dump(2) + "\n";
}

HierarchySpec load_hierarchy(std::string_view text, const ModelResolver& resolve) {
  const json doc = parse_json(text, "hierarchy document");
  HierarchySpec h;
  h.root = get_string(field(doc, "root", "hierarchy"), "hierarchy.root");
  const auto& nodes = field(doc, "nodes", "hierarchy");
  if (!nodes.is_object()) throw ParseError("hierarchy.nodes: expected an object");

  for (const auto& [id, j] : nodes.items()) {
    const auto where = fmt::format("hierarchy.nodes.{}", id);
    HierarchyNode node;
    node.model_path = get_string(field(j, "model_path", where), where + ".model_path");

    if (const auto it = j.find("rule_overrides"); it != j.end()) {
      const auto ow = where + ".rule_overrides";
      if (!it->is_object()) throw ParseError(ow + ": expected an object");
      auto& o = node.overrides;
      for (const auto& [key, v] : it->items()) {
        const auto at = ow + "." + key;
        if (key == "variant") o.rule = get_enum<UpdateRule>(v, at, parse_update_rule);
        else if (key == "lambda") o.steepness = get_number(v, at);
        else if (key == "epsilon") o.epsilon = get_number(v, at);
        else if (key == "max_iterations") o.max_iterations = get_count(v, at);
        else if (key == "scope") o.scope = get_enum<ConvergenceScope>(v, at, parse_scope);
        else if (key == "clamp") o.clamp = get_enum<ClampPolicy>(v, at, parse_clamp);
        else if (key == "include_diagonal") o.include_diagonal = get_bool(v, at);
        else if (key == "fill") o.fill = get_enum<FillPolicy>(v, at, parse_fill_policy);
        else if (key == "initial_output") o.initial_output = get_number(v, at);
        else throw ParseError(fmt::format("{}: unknown override", at));
      }
    }

    const auto& routes = field(j, "routes", where);
    if (!routes.is_object()) throw ParseError(where + ".routes: expected an object");
    for (const auto& [label, r] : routes.items()) {
      const auto at = where + ".routes." + label;
      if (!r.is_object() || r.size() != 1) {
        throw ParseError(at + ": expected {\"node\": id} or {\"leaf\": diagnosis}");
      }
      if (r.contains("node")) {
        node.routes[label] = RouteToNode{get_string(r["node"], at + ".node")};
      } else if (r.contains("leaf")) {
        node.routes[label] = RouteToLeaf{get_string(r["leaf"], at + ".leaf")};
      } else {
        throw ParseError(at + ": expected {\"node\": id} or {\"leaf\": diagnosis}");
      }
    }

    node.model = std::make_shared<const FcmModel>(resolve(node.model_path));
    h.nodes.emplace(id, std::move(node));
  }

  const auto problems = validate_hierarchy(h);
  if (!problems.empty()) {
    std::string msg = "hierarchy reference error:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw StructuralError(msg);
  }
  return h;
}

HierarchySpec load_hierarchy_file(const std::filesystem::path& path) {
  const auto dir = path.parent_path();
  return load_hierarchy(read_text_file(path), [&](const std::string& model_path) {
    const std::filesystem::path p(model_path);
    return load_model(read_text_file(p.is_absolute() ? p : dir / p));
  });
}

// --- datasets ---------------------------------------------------------------

std::string save_dataset(const std::vector<LabeledCase>& cases) {
  std::set<std::string> symptom_set;
  for (const auto& c : cases) {
    for (const auto& [label, _] : c.symptoms) symptom_set.insert(label);
  }
  std::string out;
  for (const auto& s : symptom_set) {
    check_csv_label(s);
    out += s + ",";
  }
  out += "label\n";
  for (const auto& c : cases) {
    check_csv_label(c.label);
    for (const auto& s : symptom_set) {
      if (const auto it = c.symptoms.find(s); it != c.symptoms.end()) out += format_double(it->second);
      out += ",";
    }
    out += c.label + "\n";
  }
  return out;
}

std::vector<LabeledCase> load_dataset(std::string_view text) {
  const auto lines = csv_lines(text);
  if (lines.empty()) throw ParseError("dataset: missing header row");
  const auto header = split_fields(lines.front().second);
  if (header.back() != "label") {
    throw ParseError(fmt::format("dataset line {}: last header column must be 'label'", lines.front().first));
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i + 1 < header.size(); ++i) {
    if (header[i].empty() || !seen.insert(header[i]).second) {
      throw ParseError(fmt::format("dataset header: empty or duplicate column '{}'", header[i]));
    }
  }

  std::vector<LabeledCase> cases;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto [number, line] = lines[k];
    const auto cells = split_fields(line);
    if (cells.size() != header.size()) {
      throw ParseError(fmt::format("dataset line {}: {} fields, header has {}", number, cells.size(),
                                   header.size()));
    }
    LabeledCase c;
    c.label = cells.back();
    if (c.label.empty()) throw ParseError(fmt::format("dataset line {}: empty label", number));
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
      if (cells[i].empty()) continue;
      const double v = parse_decimal(cells[i], number, header[i]);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ParseError(fmt::format("dataset line {}, column '{}': severity {} outside [0, 1]", number,
                                     header[i], v));
      }
      c.symptoms[header[i]] = v;
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

// --- symptom files ----------------------------------------------------------

std::string save_symptoms(const SymptomMap& symptoms) {
  json doc = json::object();
  for (const auto& [label, v] : symptoms) doc[label] = v;
  return doc.dump(2) + "\n";
}

SymptomMap load_symptoms(std::string_view text) {
  SymptomMap symptoms;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    const json doc = parse_json(text, "symptom document");
    for (const auto& [label, v] : doc.items()) {
      symptoms[label] = get_number(v, "symptoms." + label);
    }
    return symptoms;
  }

  const auto lines = csv_lines(text);
  if (lines.empty()) return symptoms;
  const auto header = split_fields(lines.front().second);
  if (header.size() != 2 || header[0] != "symptom" || header[1] != "severity") {
    throw ParseError(fmt::format("symptom CSV line {}: header must be 'symptom,severity'", lines.front().first));
  }
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto [number, line] = lines[k];
    const auto cells = split_fields(line);
    if (cells.size() != 2 || cells[0].empty()) {
      throw ParseError(fmt::format("symptom CSV line {}: expected 'symptom,severity'", number));
    }
    if (!symptoms.emplace(cells[0], parse_decimal(cells[1], number, "severity")).second) {
      throw ParseError(fmt::format("symptom CSV line {}: duplicate symptom '{}'", number, cells[0]));
    }
  }
  return symptoms;
}

// --- traces -----------------------------------------------------------------

std::string write_trace(const InferenceResult& result, const std::vector<std::string>& labels) {
  std::string out = "iteration";
  for (const auto& l : labels) {
    check_csv_label(l);
    out += "," + l;
  }
  out += "\n";
  for (std::size_t k = 0; k < result.trace.size(); ++k) {
    const auto& s = result.trace[k];
    if (s.size() != labels.size()) {
      throw DimensionError(fmt::format("trace row {} has {} values for {} labels", k, s.size(), labels.size()));
    }
    out += std::to_string(k);
    for (double v : s.values) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

std::string write_trace(const InferenceResult& result, const FcmModel& model) {
  std::vector<std::string> labels;
  for (const auto& c : model.concepts) labels.push_back(c.label);
  return write_trace(result, labels);
}

TraceTable read_trace(std::string_view text) {
  const auto lines = csv_lines(text);
  if (lines.empty()) throw ParseError("trace: missing header row");
  auto header = split_fields(lines.front().second);
  if (header.front() != "iteration") throw ParseError("trace line 1: first column must be 'iteration'");
  TraceTable table;
  table.labels.assign(header.begin() + 1, header.end());
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto [number, line] = lines[k];
    const auto cells = split_fields(line);
    if (cells.size() != header.size()) {
      throw ParseError(fmt::format("trace line {}: {} fields, header has {}", number, cells.size(), header.size()));
    }
    if (cells[0] != std::to_string(k - 1)) {
      throw ParseError(fmt::format("trace line {}: expected iteration {}", number, k - 1));
    }
    StateVector row;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      row.values.push_back(parse_decimal(cells[i], number, header[i]));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string progress_header(const FcmModel& model) {
  std::string out = "epoch";
  for (auto o : model.output_indices()) out += "," + model.concepts[o].label;
  return out + ",max_weight_delta\n";
}

std::string progress_row(const EpochProgress& progress) {
  std::string out = std::to_string(progress.epoch);
  for (double v : progress.output_values) out += "," + format_double(v);
  return out + "," + format_double(progress.max_weight_delta) + "\n";
}

}  // namespace fcm
