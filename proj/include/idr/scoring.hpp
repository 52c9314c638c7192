#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "idr/step_cdf.hpp"

namespace idr {

// CRPS(F, y) = integral of (F(z) - 1{y <= z})^2 dz, evaluated in closed form
// as sum_k p_k |t_k - y| - 1/2 sum_{k,l} p_k p_l |t_k - t_l|.
double crps(const StepCdf& cdf, double y);

// Pinball loss of the quantile forecast q.
double pinball_loss(double q, double alpha, double y);
double quantile_score(const StepCdf& cdf, double alpha, double y);

double elementary_quantile_score(const StepCdf& cdf, double alpha, double theta, double y);
double elementary_probability_score(const StepCdf& cdf, double z, double c, double y);

double brier_score(const StepCdf& cdf, double z, double y);

// Randomized PIT F(y-) + v (F(y) - F(y-)).
double pit(const StepCdf& cdf, double y, double v);

/// Absolute deviations of three quadrature evaluations of the CRPS mixture
/// representations from crps(cdf, y): pinball-loss mixture over alpha,
/// elementary quantile scores over (alpha, theta), and elementary probability
/// scores over (z, c). Composite midpoint rule with `grid` nodes per axis.
struct MixtureResiduals {
  double quantile_mixture = 0.0;
  double elementary_quantile = 0.0;
  double elementary_probability = 0.0;
  double max() const;
};

MixtureResiduals crps_mixture_check(const StepCdf& cdf, double y, std::size_t grid);

struct ReliabilityBin {
  double center = 0.0;
  double mean_forecast = 0.0;
  double event_frequency = 0.0;
  std::size_t count = 0;
};

// Equal-width bins on [0, 1]; empty bins are kept with count 0.
std::vector<ReliabilityBin> reliability_bins(std::span<const double> probabilities, std::span<const int> outcomes, std::size_t bins);

struct HistogramBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
  double frequency = 0.0;
};

std::vector<HistogramBin> pit_histogram(std::span<const double> pit_values, std::size_t bins);

// Kolmogorov-Smirnov distance of the sample to the standard uniform.
double ks_uniform_statistic(std::span<const double> sample);

struct ScoreReport {
  double mean_crps = 0.0;
  std::map<double, double> mean_brier;
  std::map<double, double> mean_quantile_score;
  std::vector<double> pit_values;
};

// Weighted means over cases; pit_draws supplies one uniform draw per case.
ScoreReport evaluate_forecasts(std::span<const StepCdf> forecasts, std::span<const double> outcomes, std::span<const double> weights,
                               std::span<const double> thresholds, std::span<const double> alphas, std::span<const double> pit_draws);

}  // namespace idr
