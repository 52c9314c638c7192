#include "idr/model_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "idr/errors.hpp"

namespace idr {

using nlohmann::json;

namespace {

json step_cdf_json(const StepCdf& f) {
  return json{{"jumps", std::vector<double>(f.jumps().begin(), f.jumps().end())},
              {"cum", std::vector<double>(f.cum().begin(), f.cum().end())}};
}

json model_json(const IdrModel& m, const std::vector<std::string>& columns) {
  json keys = json::array();
  for (const auto& k : m.dag().keys()) keys.push_back(k);
  json matrix = json::array();
  for (std::size_t v = 0; v < m.node_count(); ++v) {
    auto r = m.row(v);
    matrix.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return json{{"order_spec", format_order_spec(m.spec(), columns)},
              {"node_keys", std::move(keys)},
              {"thresholds", std::vector<double>(m.thresholds().begin(), m.thresholds().end())},
              {"cdf_matrix", std::move(matrix)},
              {"climatology", step_cdf_json(m.climatology())}};
}

IdrModel model_from_json(const json& j, const std::vector<std::string>& columns) {
  const auto parsed = parse_order_spec(j.at("order_spec").get<std::string>(), columns);
  if (parsed.columns != columns) throw ParseError("model: order_spec does not use the declared column layout");
  const auto keys = j.at("node_keys").get<Covariates>();
  auto dag = build_order_dag(parsed.spec, keys);
  if (dag.size() != keys.size()) throw ParseError("model: node keys are not distinct canonical keys");
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (dag.membership()[i] != i) throw ParseError("model: node keys are not in canonical order");
  auto thresholds = j.at("thresholds").get<std::vector<double>>();
  const auto rows = j.at("cdf_matrix").get<std::vector<std::vector<double>>>();
  if (rows.size() != keys.size()) throw ParseError("model: cdf_matrix row count does not match node_keys");
  std::vector<double> flat;
  flat.reserve(rows.size() * thresholds.size());
  for (const auto& r : rows) {
    if (r.size() != thresholds.size()) throw ParseError("model: cdf_matrix row length does not match thresholds");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  const auto& c = j.at("climatology");
  StepCdf clim(c.at("jumps").get<std::vector<double>>(), c.at("cum").get<std::vector<double>>());
  return IdrModel(std::move(dag), std::move(thresholds), std::move(flat), std::move(clim));
}

}  // namespace

std::vector<std::string> default_column_names(std::size_t dimension) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < dimension; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

std::string serialize_model(const ModelDocument& doc) {
  json j;
  j["version"] = std::to_string(kModelFormatMajor) + "." + std::to_string(kModelFormatMinor);
  j["columns"] = doc.columns;
  j["response"] = doc.response;
  if (const auto* single = std::get_if<IdrModel>(&doc.model)) {
    j["kind"] = "idr";
    j.update(model_json(*single, doc.columns));
  } else {
    const auto& sub = std::get<SubaggedModel>(doc.model);
    j["kind"] = "subagged";
    j["subsample_size"] = sub.subsample_size;
    j["seed"] = sub.seed;
    json members = json::array();
    for (const auto& m : sub.members) members.push_back(model_json(m, doc.columns));
    j["members"] = std::move(members);
  }
  return j.dump() + "\n";
}

ModelDocument parse_model(std::string_view text) {
  try {
    const auto j = json::parse(text);
    const auto version = j.at("version").get<std::string>();
    int major = -1;
    try {
      major = std::stoi(version.substr(0, version.find('.')));
    } catch (const std::exception&) {
      throw ParseError("model: malformed version '" + version + "'");
    }
    if (major != kModelFormatMajor) throw ParseError("model: unsupported format version " + version);

    auto columns = j.at("columns").get<std::vector<std::string>>();
    auto response = j.value("response", std::string("y"));
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "idr") return ModelDocument{model_from_json(j, columns), std::move(columns), std::move(response)};
    if (kind != "subagged") throw ParseError("model: unknown kind '" + kind + "'");
    SubaggedModel sub;
    sub.subsample_size = j.at("subsample_size").get<std::size_t>();
    sub.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& m : j.at("members")) sub.members.push_back(model_from_json(m, columns));
    if (sub.members.empty()) throw ParseError("model: subagged model without members");
    return ModelDocument{std::move(sub), std::move(columns), std::move(response)};
  } catch (const json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
}

void save_model(const ModelDocument& doc, const std::string& path) {
  const auto text = serialize_model(doc);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

ModelDocument load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

}  // namespace idr
