#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "idr/idr.hpp"

// Exponential-time reference solutions for small posets, used to check the
// solver. Everything here is independent of antitonic_l2_fit.
namespace idr::oracle {

inline constexpr std::size_t kMaxNodes = 12;

// All down-closed node subsets as bitmasks (bit i = node i).
std::vector<std::uint32_t> lower_sets(const OrderDag& dag);

// Max-min formula over admissible (down-closed) sets:
//   eta_i = max_{A ∋ i} min_{A' ⊊ A} mean(A \ A').
std::vector<double> brute_force_antitonic(const OrderDag& dag, std::span<const double> values, std::span<const double> weights);

// Calls `visit` with every vector whose level sets come from a chain of
// down-closed sets with strictly decreasing block means. Such vectors are
// feasible, and the constrained minimizer is one of them.
void enumerate_level_set_fits(const OrderDag& dag, std::span<const double> values, std::span<const double> weights,
                              const std::function<void(const std::vector<double>&)>& visit);

// Minimum-SSE vector among enumerate_level_set_fits.
std::vector<double> partition_antitonic(const OrderDag& dag, std::span<const double> values, std::span<const double> weights);

// Pinball-optimal isotonic quantile vector (theta_u <= theta_v when u reaches v)
// by exhaustive search over the observed response values.
struct QuantileOracleResult {
  std::vector<double> theta;
  double loss = 0.0;  // sum_i w_i pinball(theta_node(i), alpha, y_i)
};

QuantileOracleResult isotonic_quantile_oracle(const OrderDag& dag, std::span<const Observation> observations, double alpha);

}  // namespace idr::oracle
