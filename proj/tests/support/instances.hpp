#pragma once

// Random small training sets and invariant checks shared by the unit and
// acceptance suites.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "idr/idr.hpp"
#include "idr/scoring.hpp"

namespace idr::testing {

enum class InstanceKind { total, componentwise, icx };

inline std::string kind_name(InstanceKind k) {
  switch (k) {
    case InstanceKind::total:
      return "total";
    case InstanceKind::componentwise:
      return "componentwise";
    case InstanceKind::icx:
      return "icx";
  }
  return "?";
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

// n <= max_n rows. Covariates are small integers so that comparabilities and
// duplicates are common; responses are integer-valued (ties) or continuous;
// weights are unit or random positive.
inline TrainingSet random_instance(std::mt19937_64& rng, InstanceKind kind, std::size_t max_n = 8) {
  const auto n = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<int>(max_n)));
  OrderSpec spec;
  std::size_t d = 1;
  switch (kind) {
    case InstanceKind::total:
      spec = OrderSpec::total();
      break;
    case InstanceKind::componentwise:
      d = static_cast<std::size_t>(uniform_int(rng, 1, 3));
      spec = OrderSpec::uniform(Relation::componentwise, d);
      break;
    case InstanceKind::icx:
      d = 4;
      spec = OrderSpec::uniform(Relation::empirical_icx, d);
      break;
  }
  const bool integer_y = rng() % 2 == 0;
  const bool unit_w = rng() % 2 == 0;
  Covariates x(n, std::vector<double>(d));
  std::vector<double> y(n);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : x[i]) v = uniform_int(rng, 0, kind == InstanceKind::total ? 6 : 3);
    y[i] = integer_y ? uniform_int(rng, 0, 4) : uniform_real(rng, -2.0, 5.0);
    w[i] = unit_w ? 1.0 : uniform_real(rng, 0.25, 3.0);
  }
  return TrainingSet(std::move(spec), std::move(x), std::move(y), std::move(w));
}

// Per-node weighted means of 1{y <= z}.
inline std::vector<double> indicator_means(const TrainingSet& t, double z) {
  const auto nw = t.node_weights();
  std::vector<double> s(nw.size(), 0.0);
  for (const auto& o : t.observations())
    if (o.y <= z) s[o.node] += o.w;
  for (std::size_t v = 0; v < s.size(); ++v) s[v] /= nw[v];
  return s;
}

// Largest |weighted event frequency - fitted value| over groups of training
// points sharing a fitted value at some threshold.
inline double max_calibration_error(const IdrModel& model, const TrainingSet& t) {
  double worst = 0.0;
  const auto obs = t.observations();
  for (std::size_t k = 0; k < model.thresholds().size(); ++k) {
    const double z = model.thresholds()[k];
    std::map<double, std::pair<long double, long double>> groups;  // value -> (sum w 1{y<=z}, sum w)
    for (const auto& o : obs) {
      auto& g = groups[model.cdf(o.node, k)];
      g.first += o.y <= z ? o.w : 0.0;
      g.second += o.w;
    }
    for (const auto& [p, g] : groups) worst = std::max(worst, std::fabs(static_cast<double>(g.first / g.second) - p));
  }
  return worst;
}

// Weighted sum of pinball losses of a node-level quantile vector.
inline double pinball_sum(const TrainingSet& t, const std::vector<double>& theta, double alpha) {
  long double acc = 0.0L;
  for (const auto& o : t.observations()) acc += o.w * pinball_loss(theta[o.node], alpha, o.y);
  return static_cast<double>(acc);
}

// Weighted Brier sum of a node-level probability vector at threshold z.
inline double brier_sum(const TrainingSet& t, const std::vector<double>& eta, double z) {
  long double acc = 0.0L;
  for (const auto& o : t.observations()) {
    const double d = eta[o.node] - (o.y <= z ? 1.0 : 0.0);
    acc += o.w * d * d;
  }
  return static_cast<double>(acc);
}

// Exact integral of (F(z) - 1{y <= z})^2 by summing over the pieces between
// consecutive breakpoints, evaluating the integrand at each piece's midpoint.
inline double crps_by_integration(const StepCdf& f, double y) {
  std::vector<double> pts(f.jumps().begin(), f.jumps().end());
  pts.push_back(y);
  std::sort(pts.begin(), pts.end());
  long double acc = 0.0L;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i];
    const double b = pts[i + 1];
    if (!(b > a)) continue;
    const double mid = 0.5 * (a + b);
    const double d = f(mid) - (y <= mid ? 1.0 : 0.0);
    acc += static_cast<long double>(d) * d * (b - a);
  }
  return static_cast<double>(acc);
}

}  // namespace idr::testing
