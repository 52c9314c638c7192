#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "csv.hpp"
#include "idr/errors.hpp"
#include "idr/idr.hpp"
#include "idr/model_io.hpp"
#include "idr/predict.hpp"
#include "idr/scoring.hpp"
#include "idr/simulation.hpp"
#include "idr/subagging.hpp"

namespace idr::cli {
namespace {

const char* const kExitCodeHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  1  unexpected failure\n"
    "  2  parse error (command line, order specification, CSV content, model JSON)\n"
    "  3  invalid input (empty data, incompatible columns, out-of-range values)\n"
    "  4  I/O error (unreadable input, unwritable output)\n";

struct FitArgs {
  std::string data;
  std::string response;
  std::string order;
  std::string weights;
  std::string out;
  std::size_t subagg_count = 0;
  std::size_t subagg_size = 0;
  std::uint64_t seed = 0;
  std::string split = "random";
  unsigned threads = 0;
};

struct PredictArgs {
  std::string model;
  std::string data;
  std::vector<double> quantiles;
  std::vector<double> thresholds;
  bool interpolate = false;
  std::string out;
};

// Where forecasts come from when scoring: a model file or the true
// conditional distributions of the simulation model.
struct SourceArgs {
  std::string model;
  std::string reference;
  std::string data;
  std::string response;
  std::string covariate = "x";
  bool interpolate = false;
  std::uint64_t seed = 0;
  std::string out;
};

struct ScoreArgs {
  std::vector<double> thresholds;
  std::vector<double> alphas;
};

struct SimulateArgs {
  long long n = 0;
  std::uint64_t seed = 0;
  std::string out;
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-")
    out << text;
  else
    write_text(path, text);
}

Covariates covariate_rows(const CsvTable& table, const std::vector<std::string>& columns) {
  std::vector<std::vector<double>> cols;
  cols.reserve(columns.size());
  for (const auto& c : columns) cols.push_back(table.numeric_column(c));
  Covariates x(table.rows.size(), std::vector<double>(columns.size()));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < columns.size(); ++j) x[i][j] = cols[j][i];
  return x;
}

void check_probabilities(const std::vector<double>& levels, const char* what) {
  for (double a : levels)
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument(std::string(what) + " must lie in (0, 1)");
}

const OrderSpec& document_spec(const ModelDocument& doc) {
  if (const auto* m = std::get_if<IdrModel>(&doc.model)) return m->spec();
  const auto& members = std::get<SubaggedModel>(doc.model).members;
  if (members.empty()) throw std::invalid_argument("subagged model has no members");
  return members.front().spec();
}

Prediction predict_document(const ModelDocument& doc, std::span<const double> x, bool interpolate) {
  if (interpolate) {
    if (const auto* m = std::get_if<IdrModel>(&doc.model)) return interpolate_total_order(*m, x[0]);
    const auto& members = std::get<SubaggedModel>(doc.model).members;
    std::vector<StepCdf> cdfs;
    for (const auto& m : members) cdfs.push_back(interpolate_total_order(m, x[0]).cdf);
    Prediction p{average_cdfs(cdfs), std::nullopt, std::nullopt, Provenance::interpolated};
    return p;
  }
  if (const auto* m = std::get_if<IdrModel>(&doc.model)) return predict_cdf(*m, x);
  return predict_subagged(std::get<SubaggedModel>(doc.model), x);
}

int cmd_fit(const FitArgs& a, std::ostream& out) {
  const CsvTable table = read_csv(a.data);
  if (table.rows.empty()) throw std::invalid_argument("no data rows in '" + a.data + "'");
  const ParsedOrder order = parse_order_spec(a.order, table.header);
  if (std::find(order.columns.begin(), order.columns.end(), a.response) != order.columns.end())
    throw std::invalid_argument("response column '" + a.response + "' is also a covariate");
  std::vector<double> y = table.numeric_column(a.response);
  std::vector<double> w;
  if (!a.weights.empty()) w = table.numeric_column(a.weights);
  TrainingSet training(order.spec, covariate_rows(table, order.columns), std::move(y), std::move(w));

  const FitOptions options{a.threads};
  auto fitted = [&]() -> std::variant<IdrModel, SubaggedModel> {
    if (a.split == "even-odd") {
      if (training.size() < 2) throw std::invalid_argument("even-odd split needs at least 2 rows");
      return fit_even_odd(training, options);
    }
    if (a.split != "random") throw std::invalid_argument("unknown split '" + a.split + "'");
    if (a.subagg_count == 0 && a.subagg_size == 0) return fit_idr(training, options);
    if (a.subagg_count == 0 || a.subagg_size == 0)
      throw std::invalid_argument("--subagg-count and --subagg-size must be given together");
    return fit_subagged(training, a.subagg_count, a.subagg_size, a.seed, options);
  };
  ModelDocument doc{fitted(), order.columns, a.response};
  double in_sample = 0.0;
  if (const auto* m = std::get_if<IdrModel>(&doc.model)) {
    in_sample = empirical_crps_loss(*m, training);
  } else {
    const auto& sub = std::get<SubaggedModel>(doc.model);
    long double acc = 0.0L;
    long double wsum = 0.0L;
    for (std::size_t i = 0; i < training.size(); ++i) {
      const double wi = training.weights()[i];
      acc += wi * crps(predict_subagged(sub, training.covariates()[i]).cdf, training.responses()[i]);
      wsum += wi;
    }
    in_sample = static_cast<double>(acc / wsum);
  }
  save_model(doc, a.out);

  out << "n: " << training.size() << '\n'
      << "nodes: " << training.dag().size() << '\n'
      << "edges: " << training.dag().covers().size() << '\n'
      << "in_sample_crps: " << format_number(in_sample) << '\n';
  return kExitOk;
}

int cmd_predict(const PredictArgs& a, std::ostream& out) {
  check_probabilities(a.quantiles, "quantile levels");
  const ModelDocument doc = load_model(a.model);
  const CsvTable table = read_csv(a.data);
  for (const auto& c : doc.columns)
    if (!table.has_column(c)) throw std::invalid_argument("data lacks model column '" + c + "'");
  if (a.interpolate && !document_spec(doc).is_single_total())
    throw std::invalid_argument("--interpolate needs a model with one totally ordered covariate");
  const Covariates x = covariate_rows(table, doc.columns);

  std::ostringstream csv;
  csv << "row,provenance,bound_gap";
  for (double q : a.quantiles) csv << ",q_" << format_number(q);
  for (double z : a.thresholds) csv << ",cdf_" << format_number(z);
  csv << '\n';
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Prediction p = predict_document(doc, x[i], a.interpolate);
    csv << i + 1 << ',' << provenance_name(p.provenance) << ',' << format_number(p.bound_gap());
    for (double q : a.quantiles) csv << ',' << format_number(p.cdf.quantile(q));
    for (double z : a.thresholds) csv << ',' << format_number(p.cdf(z));
    csv << '\n';
  }
  emit(a.out, csv.str(), out);
  return kExitOk;
}

// Per-case forecast with the evaluations the scoring commands need.
struct Forecast {
  std::function<double(double)> cdf;
  std::function<double(double)> quantile;
  std::function<double(double)> crps;
  std::function<double(double, double)> pit;
};

struct ForecastCases {
  std::vector<Forecast> forecasts;
  std::vector<double> outcomes;
};

Forecast step_forecast(StepCdf f) {
  auto shared = std::make_shared<StepCdf>(std::move(f));
  return Forecast{[shared](double z) { return (*shared)(z); }, [shared](double a) { return shared->quantile(a); },
                  [shared](double y) { return idr::crps(*shared, y); },
                  [shared](double y, double v) { return idr::pit(*shared, y, v); }};
}

ForecastCases load_forecasts(const SourceArgs& a) {
  if (a.model.empty() == a.reference.empty())
    throw std::invalid_argument("exactly one of --model and --reference is required");
  const CsvTable table = read_csv(a.data);
  if (table.rows.empty()) throw std::invalid_argument("no data rows in '" + a.data + "'");
  ForecastCases cases;
  if (!a.reference.empty()) {
    if (a.reference != "gamma") throw std::invalid_argument("unknown reference '" + a.reference + "'");
    const auto x = table.numeric_column(a.covariate);
    cases.outcomes = table.numeric_column(a.response.empty() ? "y" : a.response);
    for (double xi : x) {
      if (!(xi > 0.0)) throw std::invalid_argument("reference covariate must be positive");
      cases.forecasts.push_back(Forecast{[xi](double z) { return simulation::true_cdf(xi, z); },
                                         [xi](double al) { return simulation::true_quantile(xi, al); },
                                         [xi](double y) { return simulation::true_crps(xi, y); },
                                         [xi](double y, double) { return simulation::true_cdf(xi, y); }});
    }
    return cases;
  }
  const ModelDocument doc = load_model(a.model);
  for (const auto& c : doc.columns)
    if (!table.has_column(c)) throw std::invalid_argument("data lacks model column '" + c + "'");
  if (a.interpolate && !document_spec(doc).is_single_total())
    throw std::invalid_argument("--interpolate needs a model with one totally ordered covariate");
  const Covariates x = covariate_rows(table, doc.columns);
  cases.outcomes = table.numeric_column(a.response.empty() ? doc.response : a.response);
  for (const auto& row : x) cases.forecasts.push_back(step_forecast(predict_document(doc, row, a.interpolate).cdf));
  return cases;
}

std::vector<double> pit_values(const ForecastCases& cases, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> out(cases.outcomes.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = cases.forecasts[i].pit(cases.outcomes[i], unif(rng));
  return out;
}

int cmd_score(const SourceArgs& src, const ScoreArgs& a, std::ostream& out) {
  check_probabilities(a.alphas, "quantile levels");
  const ForecastCases cases = load_forecasts(src);
  const auto pits = pit_values(cases, src.seed);
  const std::size_t cols = 2 + a.thresholds.size() + a.alphas.size();
  std::vector<long double> sums(cols, 0.0L);

  std::ostringstream csv;
  csv << "row,crps";
  for (double z : a.thresholds) csv << ",brier_" << format_number(z);
  for (double al : a.alphas) csv << ",qs_" << format_number(al);
  csv << ",pit\n";
  std::vector<double> vals(cols);
  for (std::size_t i = 0; i < cases.outcomes.size(); ++i) {
    const Forecast& f = cases.forecasts[i];
    const double y = cases.outcomes[i];
    std::size_t c = 0;
    vals[c++] = f.crps(y);
    for (double z : a.thresholds) {
      const double d = f.cdf(z) - (y <= z ? 1.0 : 0.0);
      vals[c++] = d * d;
    }
    for (double al : a.alphas) vals[c++] = pinball_loss(f.quantile(al), al, y);
    vals[c++] = pits[i];
    csv << i + 1;
    for (std::size_t k = 0; k < cols; ++k) {
      csv << ',' << format_number(vals[k]);
      sums[k] += vals[k];
    }
    csv << '\n';
  }
  const auto n = static_cast<long double>(cases.outcomes.size());
  csv << "mean";
  for (auto s : sums) csv << ',' << format_number(static_cast<double>(s / n));
  csv << '\n';
  emit(src.out, csv.str(), out);
  if (!src.out.empty() && src.out != "-") {
    out << "n: " << cases.outcomes.size() << '\n' << "mean_crps: " << format_number(static_cast<double>(sums[0] / n)) << '\n';
    std::size_t c = 1;
    for (double z : a.thresholds) out << "mean_brier_" << format_number(z) << ": " << format_number(static_cast<double>(sums[c++] / n)) << '\n';
    for (double al : a.alphas) out << "mean_qs_" << format_number(al) << ": " << format_number(static_cast<double>(sums[c++] / n)) << '\n';
  }
  return kExitOk;
}

int cmd_pit_hist(const SourceArgs& src, std::size_t bins, std::ostream& out) {
  if (bins == 0) throw std::invalid_argument("--bins must be positive");
  const ForecastCases cases = load_forecasts(src);
  const auto pits = pit_values(cases, src.seed);
  std::ostringstream csv;
  csv << "lower,upper,count,frequency\n";
  for (const auto& b : pit_histogram(pits, bins))
    csv << format_number(b.lower) << ',' << format_number(b.upper) << ',' << b.count << ',' << format_number(b.frequency) << '\n';
  emit(src.out, csv.str(), out);
  return kExitOk;
}

int cmd_reliability(const SourceArgs& src, double threshold, std::size_t bins, std::ostream& out) {
  const ForecastCases cases = load_forecasts(src);
  std::vector<double> probs(cases.outcomes.size());
  std::vector<int> events(cases.outcomes.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    probs[i] = cases.forecasts[i].cdf(threshold);
    events[i] = cases.outcomes[i] <= threshold ? 1 : 0;
  }
  std::ostringstream csv;
  csv << "bin_center,mean_forecast,event_frequency,count\n";
  for (const auto& b : reliability_bins(probs, events, bins))
    csv << format_number(b.center) << ',' << format_number(b.mean_forecast) << ',' << format_number(b.event_frequency) << ','
        << b.count << '\n';
  emit(src.out, csv.str(), out);
  return kExitOk;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  if (a.n < 1) throw std::invalid_argument("--n must be at least 1");
  const auto s = simulation::simulate_gamma_sample(static_cast<std::size_t>(a.n), a.seed);
  std::ostringstream csv;
  csv << "x,y\n";
  for (std::size_t i = 0; i < s.x.size(); ++i) csv << format_number(s.x[i]) << ',' << format_number(s.y[i]) << '\n';
  emit(a.out, csv.str(), out);
  return kExitOk;
}

void add_source_options(CLI::App* cmd, SourceArgs& s) {
  cmd->add_option("--model", s.model, "Model JSON file");
  cmd->add_option("--reference", s.reference, "Use true conditional distributions instead of a model (gamma)");
  cmd->add_option("--data", s.data, "CSV with covariates and outcomes")->required();
  cmd->add_option("--response", s.response, "Outcome column (default: the model's response, or y)");
  cmd->add_option("--covariate", s.covariate, "Covariate column for --reference")->capture_default_str();
  cmd->add_flag("--interpolate", s.interpolate, "Interpolate a totally ordered model between training points");
  cmd->add_option("--seed", s.seed, "Seed for randomized PIT draws")->capture_default_str();
  cmd->add_option("--out", s.out, "Output CSV (default: stdout)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Isotonic distributional regression: fit, predict and evaluate monotone conditional distributions", "idr"};
  app.footer(kExitCodeHelp);
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a model and write it as JSON");
  fit_cmd->add_option("--data", fit.data, "Training CSV")->required();
  fit_cmd->add_option("--response", fit.response, "Response column")->required();
  fit_cmd->add_option("--order", fit.order, "Order specification, e.g. \"hres:total;p1-p50:icx\"")->required();
  fit_cmd->add_option("--weights", fit.weights, "Optional positive weight column");
  fit_cmd->add_option("--out", fit.out, "Model JSON output path")->required();
  fit_cmd->add_option("--subagg-count", fit.subagg_count, "Number of subsamples for subagging");
  fit_cmd->add_option("--subagg-size", fit.subagg_size, "Rows per subsample");
  fit_cmd->add_option("--seed", fit.seed, "Seed for subsampling")->capture_default_str();
  fit_cmd->add_option("--split", fit.split, "Subsampling scheme: random or even-odd")
      ->check(CLI::IsMember({"random", "even-odd"}))
      ->capture_default_str();
  fit_cmd->add_option("--threads", fit.threads, "Worker threads (0: hardware concurrency)")->capture_default_str();

  PredictArgs pred;
  auto* pred_cmd = app.add_subcommand("predict", "Predict conditional distributions for query rows");
  pred_cmd->add_option("--model", pred.model, "Model JSON file")->required();
  pred_cmd->add_option("--data", pred.data, "Query CSV containing the model's covariate columns")->required();
  pred_cmd->add_option("--quantiles", pred.quantiles, "Comma-separated quantile levels")->delimiter(',');
  pred_cmd->add_option("--thresholds", pred.thresholds, "Comma-separated thresholds for CDF values")->delimiter(',');
  pred_cmd->add_flag("--interpolate", pred.interpolate, "Linear interpolation for one totally ordered covariate");
  pred_cmd->add_option("--out", pred.out, "Output CSV (default: stdout)");

  SourceArgs score_src;
  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Per-case CRPS, Brier and quantile scores with PIT values");
  add_source_options(score_cmd, score_src);
  score_cmd->add_option("--thresholds", score.thresholds, "Comma-separated Brier score thresholds")->delimiter(',');
  score_cmd->add_option("--alphas", score.alphas, "Comma-separated quantile levels")->delimiter(',');

  SourceArgs pit_src;
  std::size_t pit_bins = 10;
  auto* pit_cmd = app.add_subcommand("pit-hist", "Histogram of PIT values");
  add_source_options(pit_cmd, pit_src);
  pit_cmd->add_option("--bins", pit_bins, "Number of equal-width bins")->capture_default_str();

  SourceArgs rel_src;
  double rel_threshold = 0.0;
  std::size_t rel_bins = 10;
  auto* rel_cmd = app.add_subcommand("reliability", "Reliability diagram data for the event {y <= threshold}");
  add_source_options(rel_cmd, rel_src);
  rel_cmd->add_option("--threshold", rel_threshold, "Event threshold")->required();
  rel_cmd->add_option("--bins", rel_bins, "Number of forecast probability bins")->capture_default_str();

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Sample from the gamma simulation model");
  sim_cmd->add_option("--n", sim.n, "Sample size")->required();
  sim_cmd->add_option("--seed", sim.seed, "Random seed")->required();
  sim_cmd->add_option("--out", sim.out, "Output CSV (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitParse;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(fit, out);
    if (pred_cmd->parsed()) return cmd_predict(pred, out);
    if (score_cmd->parsed()) return cmd_score(score_src, score, out);
    if (pit_cmd->parsed()) return cmd_pit_hist(pit_src, pit_bins, out);
    if (rel_cmd->parsed()) return cmd_reliability(rel_src, rel_threshold, rel_bins, out);
    if (sim_cmd->parsed()) return cmd_simulate(sim, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace idr::cli
