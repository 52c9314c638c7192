#include "idr/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace idr::simulation {

double gamma_shape(double x) { return std::sqrt(x); }
double gamma_scale(double x) { return std::min(std::max(x, 1.0), 6.0); }

Sample simulate_gamma_sample(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("simulate: n must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 10.0);
  Sample s;
  s.x.reserve(n);
  s.y.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = unif(rng);
    while (!(x > 0.0)) x = unif(rng);  // open interval (0, 10)
    std::gamma_distribution<double> gamma(gamma_shape(x), gamma_scale(x));
    s.x.push_back(x);
    s.y.push_back(gamma(rng));
  }
  return s;
}

std::vector<double> sample_response(double x, std::size_t n, std::uint64_t seed) {
  if (!(x > 0.0)) throw std::invalid_argument("sample_response: x must be positive");
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> gamma(gamma_shape(x), gamma_scale(x));
  std::vector<double> y(n);
  for (auto& v : y) v = gamma(rng);
  return y;
}

TrainingSet simulate_gamma(std::size_t n, std::uint64_t seed) {
  auto s = simulate_gamma_sample(n, seed);
  Covariates x;
  x.reserve(n);
  for (auto v : s.x) x.push_back({v});
  return TrainingSet(OrderSpec::total(), std::move(x), std::move(s.y));
}

double true_cdf(double x, double y) {
  if (y <= 0.0) return 0.0;
  return boost::math::gamma_p(gamma_shape(x), y / gamma_scale(x));
}

double true_quantile(double x, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("true_quantile: alpha must lie in (0, 1)");
  return gamma_scale(x) * boost::math::gamma_p_inv(gamma_shape(x), alpha);
}

double true_mean(double x) { return gamma_shape(x) * gamma_scale(x); }

// Closed form for the gamma distribution with shape k and scale s:
//   y (2 F_k(y) - 1) - k s (2 F_{k+1}(y) - 1) - s / B(1/2, k).
double true_crps(double x, double y) {
  const double k = gamma_shape(x);
  const double s = gamma_scale(x);
  const double u = std::max(y, 0.0) / s;
  const double f_k = u > 0.0 ? boost::math::gamma_p(k, u) : 0.0;
  const double f_k1 = u > 0.0 ? boost::math::gamma_p(k + 1.0, u) : 0.0;
  return y * (2.0 * f_k - 1.0) - k * s * (2.0 * f_k1 - 1.0) - s / boost::math::beta(0.5, k);
}

}  // namespace idr::simulation
