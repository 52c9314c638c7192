#include "idr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "idr/scoring.hpp"

namespace idr::oracle {

namespace {

void check_size(const OrderDag& dag) {
  if (dag.size() > kMaxNodes) throw std::invalid_argument("oracle: at most " + std::to_string(kMaxNodes) + " nodes");
}

struct BlockStats {
  long double sw = 0.0L;
  long double swv = 0.0L;
};

BlockStats stats(std::uint32_t mask, std::span<const double> values, std::span<const double> weights) {
  BlockStats s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (mask >> i & 1u) {
      s.sw += weights[i];
      s.swv += static_cast<long double>(weights[i]) * values[i];
    }
  }
  return s;
}

}  // namespace

std::vector<std::uint32_t> lower_sets(const OrderDag& dag) {
  check_size(dag);
  const auto n = dag.size();
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool closed = true;
    for (std::size_t u = 0; u < n && closed; ++u)
      for (std::size_t v = 0; v < n && closed; ++v)
        if ((mask >> v & 1u) && !(mask >> u & 1u) && dag.reaches(u, v)) closed = false;
    if (closed) out.push_back(mask);
  }
  return out;
}

std::vector<double> brute_force_antitonic(const OrderDag& dag, std::span<const double> values, std::span<const double> weights) {
  const auto sets = lower_sets(dag);
  const auto n = dag.size();
  if (values.size() != n || weights.size() != n) throw std::invalid_argument("oracle: size mismatch");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    long double best = -std::numeric_limits<long double>::infinity();
    for (auto a : sets) {
      if (!(a >> i & 1u)) continue;
      long double inner = std::numeric_limits<long double>::infinity();
      for (auto b : sets) {
        if ((b & a) != b || b == a) continue;
        const auto s = stats(a & ~b, values, weights);
        inner = std::min(inner, s.swv / s.sw);
      }
      best = std::max(best, inner);
    }
    out[i] = static_cast<double>(best);
  }
  return out;
}

void enumerate_level_set_fits(const OrderDag& dag, std::span<const double> values, std::span<const double> weights,
                              const std::function<void(const std::vector<double>&)>& visit) {
  const auto sets = lower_sets(dag);
  const auto n = dag.size();
  const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1u;
  std::vector<double> eta(n);

  std::function<void(std::uint32_t, long double)> extend = [&](std::uint32_t current, long double prev_mean) {
    if (current == full) {
      visit(eta);
      return;
    }
    for (auto next : sets) {
      if ((next & current) != current || next == current) continue;
      const auto block = next & ~current;
      const auto s = stats(block, values, weights);
      const long double mean = s.swv / s.sw;
      if (!(mean < prev_mean)) continue;
      for (std::size_t i = 0; i < n; ++i)
        if (block >> i & 1u) eta[i] = static_cast<double>(mean);
      extend(next, mean);
    }
  };
  extend(0u, std::numeric_limits<long double>::infinity());
}

std::vector<double> partition_antitonic(const OrderDag& dag, std::span<const double> values, std::span<const double> weights) {
  if (values.size() != dag.size() || weights.size() != dag.size()) throw std::invalid_argument("oracle: size mismatch");
  std::vector<double> best;
  long double best_sse = std::numeric_limits<long double>::infinity();
  enumerate_level_set_fits(dag, values, weights, [&](const std::vector<double>& eta) {
    long double sse = 0.0L;
    for (std::size_t i = 0; i < eta.size(); ++i) {
      const long double d = static_cast<long double>(eta[i]) - values[i];
      sse += weights[i] * d * d;
    }
    if (sse < best_sse) {
      best_sse = sse;
      best = eta;
    }
  });
  return best;
}

QuantileOracleResult isotonic_quantile_oracle(const OrderDag& dag, std::span<const Observation> observations, double alpha) {
  check_size(dag);
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("oracle: alpha must lie in (0, 1)");
  const auto n = dag.size();
  std::vector<double> candidates;
  for (const auto& o : observations) candidates.push_back(o.y);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  const auto m = candidates.size();

  // loss[v][c]: pinball loss of node v's observations at candidate c
  std::vector<std::vector<long double>> loss(n, std::vector<long double>(m, 0.0L));
  for (const auto& o : observations)
    for (std::size_t c = 0; c < m; ++c) loss[o.node][c] += o.w * pinball_loss(candidates[c], alpha, o.y);
  std::vector<long double> floor_loss(n);
  for (std::size_t v = 0; v < n; ++v) floor_loss[v] = *std::min_element(loss[v].begin(), loss[v].end());

  // Assign nodes in topological order; a node's candidate index is at least
  // that of each of its predecessors.
  const auto& topo = dag.topological_order();
  std::vector<long double> remaining(n + 1, 0.0L);
  for (std::size_t t = n; t-- > 0;) remaining[t] = remaining[t + 1] + floor_loss[topo[t]];

  std::vector<std::size_t> choice(n, 0);
  std::vector<std::size_t> best_choice;
  long double best = std::numeric_limits<long double>::infinity();
  std::function<void(std::size_t, long double)> search = [&](std::size_t t, long double acc) {
    if (acc + remaining[t] >= best - 1e-15L) return;
    if (t == n) {
      best = acc;
      best_choice = choice;
      return;
    }
    const auto v = topo[t];
    std::size_t lo = 0;
    for (auto u : dag.cover_predecessors()[v]) lo = std::max(lo, choice[u]);
    for (std::size_t c = lo; c < m; ++c) {
      choice[v] = c;
      search(t + 1, acc + loss[v][c]);
    }
  };
  search(0, 0.0L);

  QuantileOracleResult out;
  out.loss = static_cast<double>(best);
  out.theta.resize(n);
  for (std::size_t v = 0; v < n; ++v) out.theta[v] = candidates[best_choice[v]];
  return out;
}

}  // namespace idr::oracle
