#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace idr {

/// Right-continuous step distribution function with finitely many jumps.
/// F(z) is the cumulative probability at the largest jump <= z, and 0 below
/// the first jump.
class StepCdf {
 public:
  StepCdf() = default;
  // jumps strictly increasing, cum nondecreasing in [0, 1] ending at 1.
  StepCdf(std::vector<double> jumps, std::vector<double> cum);

  static StepCdf point_mass(double at);
  // Weighted empirical distribution; weights must be positive.
  static StepCdf empirical(std::span<const double> values, std::span<const double> weights = {});
  // Builds from CDF values on a sorted grid, dropping grid points that carry
  // no probability mass.
  static StepCdf from_grid(std::span<const double> grid, std::span<const double> values);

  double operator()(double z) const { return eval(z); }
  double eval(double z) const;
  double left_limit(double z) const;  // F(z-)

  // inf { z : F(z) >= alpha }, alpha in (0, 1).
  double quantile(double alpha) const;

  std::span<const double> jumps() const { return jumps_; }
  std::span<const double> cum() const { return cum_; }
  std::vector<double> masses() const;
  std::size_t size() const { return jumps_.size(); }
  bool empty() const { return jumps_.empty(); }

  friend bool operator==(const StepCdf&, const StepCdf&) = default;

 private:
  std::vector<double> jumps_;
  std::vector<double> cum_;
};

double quantile(const StepCdf& cdf, double alpha);

}  // namespace idr
