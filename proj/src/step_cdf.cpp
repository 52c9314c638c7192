#include "idr/step_cdf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace idr {

StepCdf::StepCdf(std::vector<double> jumps, std::vector<double> cum) : jumps_(std::move(jumps)), cum_(std::move(cum)) {
  if (jumps_.empty() || jumps_.size() != cum_.size()) throw std::invalid_argument("StepCdf: jumps and cum must be nonempty and equally long");
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    if (!std::isfinite(jumps_[i])) throw std::invalid_argument("StepCdf: non-finite jump point");
    if (i > 0 && !(jumps_[i - 1] < jumps_[i])) throw std::invalid_argument("StepCdf: jump points must be strictly increasing");
    if (!(cum_[i] >= 0.0 && cum_[i] <= 1.0 + 1e-9)) throw std::invalid_argument("StepCdf: cumulative probability outside [0, 1]");
    if (i > 0 && cum_[i] < cum_[i - 1]) throw std::invalid_argument("StepCdf: cumulative probabilities must be nondecreasing");
  }
  if (std::abs(cum_.back() - 1.0) > 1e-9) throw std::invalid_argument("StepCdf: last cumulative probability must be 1, got " + std::to_string(cum_.back()));
  cum_.back() = 1.0;
  for (auto& c : cum_) c = std::min(c, 1.0);
}

StepCdf StepCdf::point_mass(double at) { return StepCdf({at}, {1.0}); }

StepCdf StepCdf::empirical(std::span<const double> values, std::span<const double> weights) {
  if (values.empty()) throw std::invalid_argument("StepCdf::empirical: no values");
  if (!weights.empty() && weights.size() != values.size()) throw std::invalid_argument("StepCdf::empirical: weight count mismatch");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
  long double total = 0.0L;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("StepCdf::empirical: weights must be positive");
    total += w;
  }
  std::vector<double> jumps;
  std::vector<double> cum;
  long double acc = 0.0L;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto i = order[k];
    acc += weights.empty() ? 1.0L : static_cast<long double>(weights[i]);
    if (k + 1 < order.size() && values[order[k + 1]] == values[i]) continue;
    jumps.push_back(values[i]);
    cum.push_back(static_cast<double>(acc / total));
  }
  cum.back() = 1.0;
  return StepCdf(std::move(jumps), std::move(cum));
}

StepCdf StepCdf::from_grid(std::span<const double> grid, std::span<const double> values) {
  if (grid.empty() || grid.size() != values.size()) throw std::invalid_argument("StepCdf::from_grid: size mismatch");
  std::vector<double> jumps;
  std::vector<double> cum;
  double prev = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (values[k] > prev) {
      jumps.push_back(grid[k]);
      cum.push_back(values[k]);
      prev = values[k];
    }
  }
  if (jumps.empty()) throw std::invalid_argument("StepCdf::from_grid: no probability mass");
  return StepCdf(std::move(jumps), std::move(cum));
}

double StepCdf::eval(double z) const {
  auto it = std::upper_bound(jumps_.begin(), jumps_.end(), z);
  if (it == jumps_.begin()) return 0.0;
  return cum_[static_cast<std::size_t>(it - jumps_.begin()) - 1];
}

double StepCdf::left_limit(double z) const {
  auto it = std::lower_bound(jumps_.begin(), jumps_.end(), z);
  if (it == jumps_.begin()) return 0.0;
  return cum_[static_cast<std::size_t>(it - jumps_.begin()) - 1];
}

double StepCdf::quantile(double alpha) const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("quantile: alpha must lie in (0, 1)");
  auto it = std::lower_bound(cum_.begin(), cum_.end(), alpha);
  return jumps_[static_cast<std::size_t>(it - cum_.begin())];
}

std::vector<double> StepCdf::masses() const {
  std::vector<double> m(cum_.size());
  std::adjacent_difference(cum_.begin(), cum_.end(), m.begin());
  return m;
}

double quantile(const StepCdf& cdf, double alpha) { return cdf.quantile(alpha); }

}  // namespace idr
