// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "idr/idr.hpp"
#include "idr/model_io.hpp"
#include "idr/oracle.hpp"
#include "idr/partial_order.hpp"
#include "idr/predict.hpp"
#include "idr/scoring.hpp"
#include "idr/simulation.hpp"
#include "idr/subagging.hpp"
#include "support/instances.hpp"

using namespace idr;
using Clock = std::chrono::steady_clock;
using Vec = std::vector<double>;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Calibration error of every model fitted anywhere in the suite.
double g_calibration_worst = 0.0;
std::size_t g_calibration_models = 0;

void record_calibration(const IdrModel& m, const TrainingSet& t) {
  g_calibration_worst = std::max(g_calibration_worst, testing::max_calibration_error(m, t));
  ++g_calibration_models;
}

struct Instance {
  TrainingSet training;
  IdrModel model;
};

std::vector<Instance>& instances() {
  static std::vector<Instance> all = [] {
    std::vector<Instance> out;
    std::mt19937_64 rng(20240501);
    for (int i = 0; i < 200; ++i) {
      auto t = testing::random_instance(rng, static_cast<testing::InstanceKind>(i % 3), 8);
      auto m = fit_idr(t);
      record_calibration(m, t);
      out.push_back({std::move(t), std::move(m)});
    }
    return out;
  }();
  return all;
}

Vec column(const IdrModel& m, std::size_t k) {
  Vec eta(m.node_count());
  for (std::size_t v = 0; v < eta.size(); ++v) eta[v] = m.cdf(v, k);
  return eta;
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::size_t problems = 0;
  for (const auto& [t, m] : instances()) {
    const auto nw = t.node_weights();
    for (std::size_t k = 0; k < m.thresholds().size(); ++k) {
      const auto eta = oracle::brute_force_antitonic(t.dag(), testing::indicator_means(t, m.thresholds()[k]), nw);
      for (std::size_t v = 0; v < eta.size(); ++v) worst = std::max(worst, std::fabs(eta[v] - m.cdf(v, k)));
      ++problems;
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-10 && secs < 60.0,
          fmt("max |fit - oracle| = %.3g over %zu threshold problems in 200 instances, %.2f s", worst, problems, secs)};
}

Outcome brier_optimality() {
  double worst = 0.0;
  std::size_t candidates = 0;
  for (const auto& [t, m] : instances()) {
    const auto nw = t.node_weights();
    for (std::size_t k = 0; k < m.thresholds().size(); ++k) {
      const double z = m.thresholds()[k];
      const double fitted = testing::brier_sum(t, column(m, k), z);
      double best = INFINITY;
      oracle::enumerate_level_set_fits(t.dag(), testing::indicator_means(t, z), nw, [&](const Vec& cand) {
        best = std::min(best, testing::brier_sum(t, cand, z));
        ++candidates;
      });
      worst = std::max(worst, fitted - best);
    }
  }
  return {worst <= 1e-10, fmt("max (fitted - best enumerated) Brier sum = %.3g over %zu candidates", worst, candidates)};
}

Outcome quantile_optimality() {
  double worst = 0.0;
  std::size_t checks = 0;
  for (const auto& [t, m] : instances()) {
    std::vector<StepCdf> cdfs;
    for (std::size_t v = 0; v < m.node_count(); ++v) cdfs.push_back(m.node_cdf(v));
    for (int a = 1; a <= 9; ++a) {
      const double alpha = a / 10.0;
      Vec theta(m.node_count());
      for (std::size_t v = 0; v < theta.size(); ++v) theta[v] = cdfs[v].quantile(alpha);
      const auto r = oracle::isotonic_quantile_oracle(t.dag(), t.observations(), alpha);
      worst = std::max(worst, std::fabs(testing::pinball_sum(t, theta, alpha) - r.loss));
      ++checks;
    }
  }
  return {worst <= 1e-10, fmt("max |pinball(fit) - pinball(oracle)| = %.3g over %zu (instance, alpha) pairs", worst, checks)};
}

// Shared by the simulation criteria.
const simulation::Sample& test_sample() {
  static const auto s = simulation::simulate_gamma_sample(10000, 999);
  return s;
}

double mean_true_crps() {
  const auto& s = test_sample();
  long double acc = 0.0L;
  for (std::size_t i = 0; i < s.x.size(); ++i) acc += simulation::true_crps(s.x[i], s.y[i]);
  return static_cast<double>(acc / static_cast<long double>(s.x.size()));
}

double mean_crps(const std::function<StepCdf(double)>& forecast) {
  const auto& s = test_sample();
  long double acc = 0.0L;
  for (std::size_t i = 0; i < s.x.size(); ++i) acc += crps(forecast(s.x[i]), s.y[i]);
  return static_cast<double>(acc / static_cast<long double>(s.x.size()));
}

bool exactly_antitonic(const IdrModel& m) {
  for (auto [u, v] : m.dag().covers())
    for (std::size_t k = 0; k < m.thresholds().size(); ++k)
      if (!(m.cdf(u, k) >= m.cdf(v, k))) return false;
  return true;
}

Outcome simulation_study() {
  const auto t0 = Clock::now();
  const auto train = simulation::simulate_gamma(600, 1);
  const auto m = fit_idr(train);
  record_calibration(m, train);
  const double idr = mean_crps([&](double x) { return predict_cdf(m, Vec{x}).cdf; });
  const double truth = mean_true_crps();
  const bool monotone = exactly_antitonic(m);
  const double secs = seconds_since(t0);
  return {idr <= 1.20 * truth && monotone && secs < 120.0,
          fmt("mean CRPS %.4f vs true %.4f (ratio %.4f, limit 1.20), antitonic=%s, %.2f s", idr, truth, idr / truth,
              monotone ? "yes" : "no", secs)};
}

Outcome subagging() {
  const auto t0 = Clock::now();
  const auto train = simulation::simulate_gamma(4000, 2);

  const auto f0 = Clock::now();
  const auto full = fit_idr(train);
  const double full_secs = seconds_since(f0);
  const auto s0 = Clock::now();
  const auto sub = fit_subagged(train, 20, 500, 3);
  const double sub_secs = seconds_since(s0);

  record_calibration(full, train);
  const double full_crps = mean_crps([&](double x) { return predict_cdf(full, Vec{x}).cdf; });
  const double sub_crps = mean_crps([&](double x) { return predict_subagged(sub, Vec{x}).cdf; });
  const double secs = seconds_since(t0);
  return {sub_crps <= 1.05 * full_crps && sub_secs < full_secs && secs < 300.0,
          fmt("subagged CRPS %.4f vs full %.4f (ratio %.4f, limit 1.05); fit time %.3f s vs %.3f s; %.2f s total", sub_crps,
              full_crps, sub_crps / full_crps, sub_secs, full_secs, secs)};
}

Outcome mixture_identities() {
  std::mt19937_64 rng(77);
  double worst_coarse = 0.0, worst_fine = 0.0, sum_coarse = 0.0, sum_fine = 0.0;
  std::size_t decreased = 0;
  const int cases = 50;
  for (int c = 0; c < cases; ++c) {
    const std::size_t atoms = 1 + rng() % 4;
    Vec at(atoms), w(atoms);
    for (std::size_t i = 0; i < atoms; ++i) {
      at[i] = testing::uniform_real(rng, 0, 1);
      w[i] = testing::uniform_real(rng, 0.1, 1);
    }
    const auto f = StepCdf::empirical(at, w);
    const double y = c % 5 == 0 ? f.jumps()[rng() % f.size()] : testing::uniform_real(rng, -0.25, 1.25);
    const double coarse = crps_mixture_check(f, y, 1000).max();
    const double fine = crps_mixture_check(f, y, 10000).max();
    worst_coarse = std::max(worst_coarse, coarse);
    worst_fine = std::max(worst_fine, fine);
    sum_coarse += coarse;
    sum_fine += fine;
    if (fine <= coarse) ++decreased;
  }
  return {worst_coarse <= 1e-3 && worst_fine < worst_coarse && sum_fine < sum_coarse,
          fmt("max residual %.3g at grid 1e3, %.3g at 1e4; mean %.3g -> %.3g; %zu/%d cases not larger", worst_coarse, worst_fine,
              sum_coarse / cases, sum_fine / cases, decreased, cases)};
}

bool st_by_cdf(const Vec& x, const Vec& y) {
  Vec pts = x;
  pts.insert(pts.end(), y.begin(), y.end());
  for (double z : pts)
    if (std::count_if(x.begin(), x.end(), [z](double v) { return v <= z; }) <
        std::count_if(y.begin(), y.end(), [z](double v) { return v <= z; }))
      return false;
  return true;
}

bool icx_by_stop_loss(const Vec& x, const Vec& y) {
  auto stop_loss = [](const Vec& v, double t) {
    long double s = 0.0L;
    for (double a : v) s += std::max(a - t, 0.0);
    return s;
  };
  if (std::accumulate(x.begin(), x.end(), 0.0L) > std::accumulate(y.begin(), y.end(), 0.0L)) return false;
  Vec pts = x;
  pts.insert(pts.end(), y.begin(), y.end());
  for (double t : pts)
    if (stop_loss(x, t) > stop_loss(y, t)) return false;
  return true;
}

Outcome order_laws() {
  std::mt19937_64 rng(31337);
  std::size_t violations = 0, st_pairs = 0, icx_pairs = 0, cw_pairs = 0;
  const int pairs = 10000;
  for (int p = 0; p < pairs; ++p) {
    const std::size_t d = 1 + rng() % 6;
    Vec x(d), y(d);
    // Integer grid values make ties and comparabilities common.
    const bool grid = rng() % 2 == 0;
    for (auto& v : x) v = grid ? testing::uniform_int(rng, 0, 4) : testing::uniform_real(rng, -2, 2);
    switch (rng() % 3) {
      case 0:
        for (auto& v : y) v = grid ? testing::uniform_int(rng, 0, 4) : testing::uniform_real(rng, -2, 2);
        break;
      case 1:  // componentwise larger, then possibly shuffled
        for (std::size_t i = 0; i < d; ++i) y[i] = x[i] + (grid ? testing::uniform_int(rng, 0, 2) : testing::uniform_real(rng, 0, 1));
        if (rng() % 2) std::shuffle(y.begin(), y.end(), rng);
        break;
      default:  // spread out around a larger mean
        for (std::size_t i = 0; i < d; ++i) y[i] = x[i] + (grid ? testing::uniform_int(rng, -1, 2) : testing::uniform_real(rng, -0.5, 1));
        break;
    }
    const auto cw = OrderSpec::uniform(Relation::componentwise, d);
    const bool cw_le = cw.less_equal(x, y);
    const bool cw_comparable = cw_le || cw.less_equal(y, x);
    const bool st = stochastic_less_equal(x, y);
    const bool icx = icx_less_equal(x, y);
    cw_pairs += cw_le;
    st_pairs += st;
    icx_pairs += icx;

    if (st != st_by_cdf(x, y)) ++violations;
    if (icx != icx_by_stop_loss(x, y)) ++violations;
    if (cw_le && !st) ++violations;
    if (st && cw_comparable && !cw_le) ++violations;
    if (st && !icx) ++violations;
    if (icx && d >= 2) {
      const double c = (static_cast<double>(d) - 1.0) / (2.0 * (static_cast<double>(d) + 1.0));
      const double lhs = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(d) + c * gini_mean_difference(x);
      const double rhs = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(d) + c * gini_mean_difference(y);
      if (lhs > rhs + 1e-12 * (1.0 + std::fabs(rhs))) ++violations;
    }
    // Mutual st or icx dominance means permutations of each other.
    const bool mutual_st = st && stochastic_less_equal(y, x);
    const bool mutual_icx = icx && icx_less_equal(y, x);
    Vec xs = x, ys = y;
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    if ((mutual_st || mutual_icx) && xs != ys) ++violations;
  }
  return {violations == 0, fmt("%zu violations over %d pairs (cw %zu, st %zu, icx %zu related pairs)", violations, pairs, cw_pairs,
                               st_pairs, icx_pairs)};
}

Outcome extra_covariate() {
  std::mt19937_64 rng(4711);
  double worst = -INFINITY;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rng() % 15;
    const std::size_t d = 1 + rng() % 2;
    Covariates x1(n, Vec(d)), x2(n, Vec(d + 1));
    Vec y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) x1[i][j] = x2[i][j] = testing::uniform_int(rng, 0, 4);
      x2[i][d] = testing::uniform_int(rng, 0, 4);
      y[i] = rng() % 2 ? testing::uniform_int(rng, 0, 5) : testing::uniform_real(rng, 0, 5);
    }
    const TrainingSet t1(OrderSpec::uniform(Relation::componentwise, d), x1, y);
    const TrainingSet t2(OrderSpec::uniform(Relation::componentwise, d + 1), x2, y);
    const auto m1 = fit_idr(t1);
    const auto m2 = fit_idr(t2);
    record_calibration(m1, t1);
    record_calibration(m2, t2);
    worst = std::max(worst, empirical_crps_loss(m2, t2) - empirical_crps_loss(m1, t1));
  }
  return {worst <= 1e-10, fmt("max (loss with extra column - loss without) = %.3g over 100 datasets", worst)};
}

Outcome prediction_contract() {
  std::mt19937_64 rng(8080);
  const std::vector<OrderSpec> specs = {
      OrderSpec::total(), OrderSpec::uniform(Relation::componentwise, 2), OrderSpec::uniform(Relation::empirical_stochastic, 3),
      OrderSpec({OrderGroup{{0}, Relation::total}, OrderGroup{{1, 2, 3, 4}, Relation::empirical_icx}})};
  std::size_t sandwich_checks = 0, sandwich_fail = 0, both = 0, row_fail = 0, rows = 0, trip_fail = 0, trips = 0;
  for (int rep = 0; rep < 40; ++rep) {
    const auto& spec = specs[rep % specs.size()];
    const std::size_t n = 20 + rng() % 150;
    Covariates x(n, Vec(spec.dimension()));
    Vec y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (auto& v : x[i]) s += (v = rep % 2 ? testing::uniform_int(rng, 0, 5) : testing::uniform_real(rng, 0, 5));
      y[i] = s / static_cast<double>(spec.dimension()) + testing::uniform_real(rng, -1, 2);
    }
    const TrainingSet t(spec, x, y);
    const auto m = fit_idr(t);
    record_calibration(m, t);

    for (std::size_t v = 0; v < m.node_count(); ++v) {
      const auto p = predict_cdf(m, m.dag().key(v));
      ++rows;
      bool ok = p.provenance == Provenance::at_training_point;
      for (std::size_t k = 0; k < m.thresholds().size(); ++k) ok = ok && p.cdf(m.thresholds()[k]) == m.cdf(v, k);
      if (!ok) ++row_fail;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = predict_cdf(m, x[i]);
      bool ok = p.provenance == Provenance::at_training_point;
      const auto node = t.dag().membership()[i];
      for (std::size_t k = 0; k < m.thresholds().size(); ++k) ok = ok && p.cdf(m.thresholds()[k]) == m.cdf(node, k);
      ++rows;
      if (!ok) ++row_fail;
    }

    const auto back = parse_model(serialize_model(ModelDocument{m, default_column_names(spec.dimension()), "y"}));
    const auto& m2 = std::get<IdrModel>(back.model);
    const auto sub = fit_subagged(t, 4, n / 2, rep);
    const auto sub_back = parse_model(serialize_model(ModelDocument{sub, default_column_names(spec.dimension()), "y"}));
    const auto& sub2 = std::get<SubaggedModel>(sub_back.model);

    for (int q = 0; q < 100; ++q) {
      Vec xq(spec.dimension());
      for (auto& v : xq) v = testing::uniform_real(rng, -0.5, 5.5);
      const auto p = predict_cdf(m, xq);
      if (p.provenance == Provenance::both_bounds) {
        ++both;
        Vec grid(p.lower->jumps().begin(), p.lower->jumps().end());
        grid.insert(grid.end(), p.upper->jumps().begin(), p.upper->jumps().end());
        for (double z : grid) {
          ++sandwich_checks;
          if (!(p.lower->eval(z) <= p.cdf(z) && p.cdf(z) <= p.upper->eval(z))) ++sandwich_fail;
        }
      }
      const auto p2 = predict_cdf(m2, xq);
      ++trips;
      if (!(p2.cdf == p.cdf && p2.provenance == p.provenance)) ++trip_fail;
      ++trips;
      if (!(predict_subagged(sub, xq).cdf == predict_subagged(sub2, xq).cdf)) ++trip_fail;
    }
  }
  return {sandwich_fail == 0 && row_fail == 0 && trip_fail == 0 && both > 0,
          fmt("sandwich: %zu/%zu violations on %zu two-sided predictions; training rows: %zu/%zu mismatches; round trip: %zu/%zu "
              "mismatches",
              sandwich_fail, sandwich_checks, both, row_fail, rows, trip_fail, trips)};
}

Outcome calibration() {
  // Make sure the shared instances were fitted even when run alone.
  instances();
  return {g_calibration_worst <= 1e-9 && g_calibration_models > 0,
          fmt("max |event frequency - fitted value| = %.3g over %zu fitted models", g_calibration_worst, g_calibration_models)};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  // Calibration aggregates over every model fitted by the others, so it runs last.
  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence of per-threshold fits", oracle_equivalence},
      {2, "threshold (Brier) optimality", brier_optimality},
      {3, "quantile (pinball) optimality", quantile_optimality},
      {5, "gamma simulation: CRPS within 20% of the truth", simulation_study},
      {6, "subagging: accuracy and fit time", subagging},
      {7, "CRPS mixture representations", mixture_identities},
      {8, "partial order laws", order_laws},
      {9, "extra covariate never worsens the in-sample fit", extra_covariate},
      {10, "prediction contract", prediction_contract},
      {4, "threshold calibration of all fitted models", calibration},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s  [%2d] %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
