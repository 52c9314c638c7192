#include "idr/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace idr {

double crps(const StepCdf& cdf, double y) {
  const auto t = cdf.jumps();
  const auto p = cdf.masses();
  long double abs_err = 0.0L;
  // sum_{k<l} p_k p_l (t_l - t_k) via running mass and mass-weighted location
  long double pair = 0.0L;
  long double mass_below = 0.0L;
  long double moment_below = 0.0L;
  for (std::size_t k = 0; k < t.size(); ++k) {
    abs_err += static_cast<long double>(p[k]) * std::fabs(static_cast<long double>(t[k]) - y);
    pair += static_cast<long double>(p[k]) * (static_cast<long double>(t[k]) * mass_below - moment_below);
    mass_below += p[k];
    moment_below += static_cast<long double>(p[k]) * t[k];
  }
  return std::max(0.0, static_cast<double>(abs_err - pair));
}

double pinball_loss(double q, double alpha, double y) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("pinball loss: alpha must lie in (0, 1)");
  return y <= q ? (1.0 - alpha) * (q - y) : alpha * (y - q);
}

double quantile_score(const StepCdf& cdf, double alpha, double y) { return pinball_loss(cdf.quantile(alpha), alpha, y); }

double elementary_quantile_score(const StepCdf& cdf, double alpha, double theta, double y) {
  const double q = cdf.quantile(alpha);
  if (y <= theta && theta < q) return 1.0 - alpha;
  if (q <= theta && theta < y) return alpha;
  return 0.0;
}

double elementary_probability_score(const StepCdf& cdf, double z, double c, double y) {
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("elementary probability score: c must lie in (0, 1)");
  const double p = cdf(z);
  if (p < c && y <= z) return 1.0 - c;
  if (p >= c && y > z) return c;
  return 0.0;
}

double brier_score(const StepCdf& cdf, double z, double y) {
  const double d = cdf(z) - (y <= z ? 1.0 : 0.0);
  return d * d;
}

double pit(const StepCdf& cdf, double y, double v) {
  const double lo = cdf.left_limit(y);
  return lo + v * (cdf(y) - lo);
}

double MixtureResiduals::max() const { return std::max({quantile_mixture, elementary_quantile, elementary_probability}); }

namespace {

// Number of midpoints lo + (k + 1/2) h, k in [0, n), lying in [a, b).
std::size_t midpoints_in(double lo, double h, std::size_t n, double a, double b) {
  auto first_at_or_above = [&](double x) -> std::size_t {
    const double k = std::ceil((x - lo) / h - 0.5);
    if (k <= 0.0) return 0;
    return std::min(n, static_cast<std::size_t>(k));
  };
  const auto ka = first_at_or_above(a);
  const auto kb = first_at_or_above(b);
  return kb > ka ? kb - ka : 0;
}

}  // namespace

MixtureResiduals crps_mixture_check(const StepCdf& cdf, double y, std::size_t grid) {
  if (grid < 100) throw std::invalid_argument("crps_mixture_check: grid must have at least 100 nodes");
  const double exact = crps(cdf, y);
  const auto n = grid;
  const double h_alpha = 1.0 / static_cast<double>(n);

  // Both elementary scores vanish outside the hull of the jumps and y.
  const double lo = std::min(cdf.jumps().front(), y);
  const double hi = std::max(cdf.jumps().back(), y);
  if (!(hi > lo)) return {exact, exact, exact};
  const double h = (hi - lo) / static_cast<double>(n);

  long double qs_sum = 0.0L;
  long double sq_sum = 0.0L;
  for (std::size_t j = 0; j < n; ++j) {
    const double alpha = (static_cast<double>(j) + 0.5) * h_alpha;
    const double q = cdf.quantile(alpha);
    qs_sum += pinball_loss(q, alpha, y);
    // theta-midpoint sums of the two nonzero branches
    const auto below = midpoints_in(lo, h, n, y, q);
    const auto above = midpoints_in(lo, h, n, q, y);
    sq_sum += (1.0L - alpha) * static_cast<long double>(below) * h + static_cast<long double>(alpha) * static_cast<long double>(above) * h;
  }
  const double eq_quantile = static_cast<double>(2.0L * qs_sum * h_alpha);
  const double eq_elementary_q = static_cast<double>(2.0L * sq_sum * h_alpha);

  // c-midpoints c_j = (j + 1/2)/n. For outcome 1{y <= z} = 1 the score is
  // 1 - c on c > F(z); otherwise c on c <= F(z).
  long double sp_sum = 0.0L;
  const auto nd = static_cast<long double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double z = lo + (static_cast<double>(k) + 0.5) * h;
    const double p = cdf(z);
    // j <= J  <=>  c_j <= p
    const double jf = std::floor(p * static_cast<double>(n) - 0.5);
    const long double count_le = jf < 0.0 ? 0.0L : std::min(nd, static_cast<long double>(jf) + 1.0L);
    const long double sum_c_le = count_le * count_le / (2.0L * nd);  // sum_{j<count} (j+1/2)/n
    long double inner = 0.0L;
    if (y <= z) {
      const long double count_gt = nd - count_le;
      const long double sum_c_gt = nd / 2.0L - sum_c_le;
      inner = count_gt - sum_c_gt;
    } else {
      inner = sum_c_le;
    }
    sp_sum += inner / nd;
  }
  const double eq_elementary_p = static_cast<double>(2.0L * sp_sum * h);

  return {std::fabs(eq_quantile - exact), std::fabs(eq_elementary_q - exact), std::fabs(eq_elementary_p - exact)};
}

std::vector<ReliabilityBin> reliability_bins(std::span<const double> probabilities, std::span<const int> outcomes, std::size_t bins) {
  if (bins < 2) throw std::invalid_argument("reliability_bins: need at least two bins");
  if (probabilities.size() != outcomes.size()) throw std::invalid_argument("reliability_bins: length mismatch");
  std::vector<long double> sum_p(bins, 0.0L);
  std::vector<std::size_t> events(bins, 0);
  std::vector<ReliabilityBin> out(bins);
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const double p = probabilities[i];
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("reliability_bins: probability outside [0, 1]");
    auto b = std::min(bins - 1, static_cast<std::size_t>(p * static_cast<double>(bins)));
    sum_p[b] += p;
    events[b] += outcomes[i] != 0 ? 1 : 0;
    ++out[b].count;
  }
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].center = (static_cast<double>(b) + 0.5) / static_cast<double>(bins);
    if (out[b].count > 0) {
      out[b].mean_forecast = static_cast<double>(sum_p[b] / static_cast<long double>(out[b].count));
      out[b].event_frequency = static_cast<double>(events[b]) / static_cast<double>(out[b].count);
    }
  }
  return out;
}

std::vector<HistogramBin> pit_histogram(std::span<const double> pit_values, std::size_t bins) {
  if (bins < 1) throw std::invalid_argument("pit_histogram: need at least one bin");
  std::vector<HistogramBin> out(bins);
  for (auto v : pit_values) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("pit_histogram: PIT value outside [0, 1]");
    ++out[std::min(bins - 1, static_cast<std::size_t>(v * static_cast<double>(bins)))].count;
  }
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].lower = static_cast<double>(b) / static_cast<double>(bins);
    out[b].upper = static_cast<double>(b + 1) / static_cast<double>(bins);
    out[b].frequency = pit_values.empty() ? 0.0 : static_cast<double>(out[b].count) / static_cast<double>(pit_values.size());
  }
  return out;
}

double ks_uniform_statistic(std::span<const double> sample) {
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  const auto n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double u = std::clamp(s[i], 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - u, u - static_cast<double>(i) / n});
  }
  return d;
}

ScoreReport evaluate_forecasts(std::span<const StepCdf> forecasts, std::span<const double> outcomes, std::span<const double> weights,
                               std::span<const double> thresholds, std::span<const double> alphas, std::span<const double> pit_draws) {
  const auto n = forecasts.size();
  if (outcomes.size() != n || (!weights.empty() && weights.size() != n) || (!pit_draws.empty() && pit_draws.size() != n))
    throw std::invalid_argument("evaluate_forecasts: length mismatch");
  ScoreReport report;
  long double total_w = 0.0L;
  long double crps_acc = 0.0L;
  std::vector<long double> brier(thresholds.size(), 0.0L);
  std::vector<long double> qs(alphas.size(), 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    total_w += w;
    crps_acc += w * crps(forecasts[i], outcomes[i]);
    for (std::size_t k = 0; k < thresholds.size(); ++k) brier[k] += w * brier_score(forecasts[i], thresholds[k], outcomes[i]);
    for (std::size_t k = 0; k < alphas.size(); ++k) qs[k] += w * quantile_score(forecasts[i], alphas[k], outcomes[i]);
    if (!pit_draws.empty()) report.pit_values.push_back(pit(forecasts[i], outcomes[i], pit_draws[i]));
  }
  if (n == 0) return report;
  report.mean_crps = static_cast<double>(crps_acc / total_w);
  for (std::size_t k = 0; k < thresholds.size(); ++k) report.mean_brier[thresholds[k]] = static_cast<double>(brier[k] / total_w);
  for (std::size_t k = 0; k < alphas.size(); ++k) report.mean_quantile_score[alphas[k]] = static_cast<double>(qs[k] / total_w);
  return report;
}

}  // namespace idr
