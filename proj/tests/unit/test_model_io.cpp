#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

#include <json.hpp>

#include "idr/errors.hpp"
#include "idr/model_io.hpp"
#include "idr/predict.hpp"
#include "idr/subagging.hpp"
#include "support/instances.hpp"

using namespace idr;

namespace {

using Vec = std::vector<double>;

TrainingSet mixed_training(std::mt19937_64& rng, std::size_t n) {
  const OrderSpec spec({OrderGroup{{0}, Relation::total}, OrderGroup{{1, 2, 3}, Relation::empirical_icx}});
  Covariates x(n, Vec(4));
  Vec y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : x[i]) v = testing::uniform_real(rng, 0, 3);
    y[i] = x[i][0] + testing::uniform_real(rng, 0, 2) / 3.0;
  }
  return TrainingSet(spec, x, y);
}

}  // namespace

TEST_CASE("round trip is prediction-exact") {
  std::mt19937_64 rng(10);
  const auto t = mixed_training(rng, 120);
  const auto m = fit_idr(t);
  const ModelDocument doc{m, {"a", "b", "c", "d"}, "y"};
  const auto text = serialize_model(doc);
  const auto back = parse_model(text);
  CHECK(back.columns == doc.columns);
  CHECK(back.response == "y");
  const auto& m2 = std::get<IdrModel>(back.model);
  CHECK(m2.spec() == m.spec());
  CHECK(m2.dag().keys() == m.dag().keys());
  CHECK(m2.dag().covers() == m.dag().covers());
  CHECK(std::equal(m2.cdf_matrix().begin(), m2.cdf_matrix().end(), m.cdf_matrix().begin(), m.cdf_matrix().end()));
  CHECK(m2.climatology() == m.climatology());
  for (int q = 0; q < 200; ++q) {
    Vec x(4);
    for (auto& v : x) v = testing::uniform_real(rng, -0.5, 3.5);
    const auto a = predict_cdf(m, x);
    const auto b = predict_cdf(m2, x);
    CHECK(a.cdf == b.cdf);
    CHECK(a.provenance == b.provenance);
  }
  CHECK(serialize_model(back) == text);
}

TEST_CASE("subagged round trip") {
  std::mt19937_64 rng(11);
  const auto t = mixed_training(rng, 90);
  const auto s = fit_subagged(t, 3, 40, 77);
  const ModelDocument doc{s, default_column_names(4), "resp"};
  CHECK(doc.columns == std::vector<std::string>{"x0", "x1", "x2", "x3"});
  const auto back = parse_model(serialize_model(doc));
  const auto& s2 = std::get<SubaggedModel>(back.model);
  CHECK(s2.members.size() == 3);
  CHECK(s2.subsample_size == 40);
  CHECK(s2.seed == 77);
  for (int q = 0; q < 50; ++q) {
    Vec x(4);
    for (auto& v : x) v = testing::uniform_real(rng, 0, 3);
    CHECK(predict_subagged(s, x).cdf == predict_subagged(s2, x).cdf);
  }
}

TEST_CASE("file round trip and I/O errors") {
  const auto m = fit_idr(TrainingSet(OrderSpec::total(), {{1}, {2}, {3}}, {3, 1, 2}));
  const ModelDocument doc{m, {"x"}, "y"};
  const auto path = (std::filesystem::temp_directory_path() / "idr_model_io_test.json").string();
  save_model(doc, path);
  const auto back = load_model(path);
  CHECK(std::get<IdrModel>(back.model).node_cdf(2) == m.node_cdf(2));
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_model(path), IoError);
  CHECK_THROWS_AS(save_model(doc, "/nonexistent-dir/x/model.json"), IoError);
}

TEST_CASE("malformed documents are rejected") {
  const auto m = fit_idr(TrainingSet(OrderSpec::total(), {{1}, {2}, {3}}, {3, 1, 2}));
  const auto good = nlohmann::json::parse(serialize_model(ModelDocument{m, {"x"}, "y"}));

  auto reject = [](const nlohmann::json& j) { CHECK_THROWS_AS(parse_model(j.dump()), ParseError); };
  CHECK_THROWS_AS(parse_model("{not json"), ParseError);
  CHECK_THROWS_AS(parse_model("[]"), ParseError);

  auto j = good;
  j["version"] = "2.0";
  reject(j);
  j = good;
  j["version"] = "1.7";
  CHECK_NOTHROW(parse_model(j.dump()));
  j = good;
  j["version"] = "one";
  reject(j);
  j = good;
  j.erase("thresholds");
  reject(j);
  j = good;
  j["kind"] = "forest";
  reject(j);
  j = good;
  j["cdf_matrix"][0][1] = 0.1;  // row decreases
  reject(j);
  j = good;
  j["cdf_matrix"][2][2] = 0.9;  // row does not end at 1
  reject(j);
  j = good;
  j["node_keys"][0][0] = 2.0;  // duplicate key
  reject(j);
  j = good;
  j["node_keys"] = {{3.0}, {2.0}, {1.0}};  // not in canonical order
  reject(j);
  j = good;
  j["order_spec"] = "x:bogus";
  reject(j);
  j = good;
  j["thresholds"] = {1.0, 1.0, 3.0};
  reject(j);
}
