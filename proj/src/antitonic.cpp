#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "idr/idr.hpp"

namespace idr {

namespace {

void check_inputs(std::span<const double> values, std::span<const double> weights, std::size_t expected) {
  if (values.size() != expected || weights.size() != expected)
    throw std::invalid_argument("antitonic fit: expected " + std::to_string(expected) + " values and weights");
  for (std::size_t i = 0; i < expected; ++i) {
    if (!std::isfinite(values[i])) throw std::invalid_argument("antitonic fit: non-finite value");
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) throw std::invalid_argument("antitonic fit: weights must be strictly positive");
  }
}

// Dinic's algorithm on real capacities. Residuals at or below eps count as
// saturated.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t n) : graph_(n), level_(n), next_(n) {}

  void add_edge(std::size_t from, std::size_t to, double cap) {
    graph_[from].push_back({to, graph_[to].size(), cap});
    graph_[to].push_back({from, graph_[from].size() - 1, 0.0});
  }

  void run(std::size_t s, std::size_t t, double eps) {
    eps_ = eps;
    while (bfs(s, t)) {
      std::fill(next_.begin(), next_.end(), 0);
      while (push(s, t, std::numeric_limits<double>::infinity()) > eps_) {
      }
    }
  }

  // Nodes reachable from s through unsaturated residual edges.
  std::vector<char> source_side(std::size_t s) const {
    std::vector<char> seen(graph_.size(), 0);
    std::vector<std::size_t> queue{s};
    seen[s] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (const auto& e : graph_[queue[head]]) {
        if (e.cap > eps_ && !seen[e.to]) {
          seen[e.to] = 1;
          queue.push_back(e.to);
        }
      }
    }
    return seen;
  }

 private:
  struct Edge {
    std::size_t to;
    std::size_t rev;
    double cap;
  };

  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<std::size_t> queue{s};
    level_[s] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const auto u = queue[head];
      for (const auto& e : graph_[u]) {
        if (e.cap > eps_ && level_[e.to] < 0) {
          level_[e.to] = level_[u] + 1;
          queue.push_back(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  double push(std::size_t u, std::size_t t, double limit) {
    if (u == t) return limit;
    for (auto& i = next_[u]; i < graph_[u].size(); ++i) {
      auto& e = graph_[u][i];
      if (e.cap > eps_ && level_[e.to] == level_[u] + 1) {
        const double pushed = push(e.to, t, std::min(limit, e.cap));
        if (pushed > eps_) {
          e.cap -= pushed;
          graph_[e.to][e.rev].cap += pushed;
          return pushed;
        }
      }
    }
    return 0.0;
  }

  std::vector<std::vector<Edge>> graph_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
  double eps_ = 0.0;
};

// Recursive partitioning: the maximum-gain down-closed subset at the block
// mean holds exactly the nodes whose solution is >= the mean, so blocks split
// until no down-closed subset has positive gain.
std::vector<double> partition_fit(const OrderDag& dag, std::span<const double> values, std::span<const double> weights) {
  const auto n = dag.size();
  std::vector<double> out(n);
  std::vector<std::ptrdiff_t> local(n, -1);
  std::vector<std::vector<std::size_t>> pending;
  pending.emplace_back(n);
  for (std::size_t i = 0; i < n; ++i) pending.back()[i] = i;

  while (!pending.empty()) {
    auto block = std::move(pending.back());
    pending.pop_back();

    long double sw = 0.0L;
    long double swv = 0.0L;
    for (auto i : block) {
      sw += weights[i];
      swv += static_cast<long double>(weights[i]) * values[i];
    }
    const long double mean = swv / sw;
    const double mean_d = static_cast<double>(mean);
    auto assign_constant = [&] {
      for (auto i : block) out[i] = mean_d;
    };
    if (block.size() == 1) {
      assign_constant();
      continue;
    }

    std::vector<double> gain(block.size());
    long double spread = 0.0L;
    for (std::size_t a = 0; a < block.size(); ++a) {
      const auto i = block[a];
      gain[a] = static_cast<double>(weights[i] * (values[i] - mean));
      spread += std::fabs(gain[a]);
    }
    if (spread == 0.0L) {
      assign_constant();
      continue;
    }
    const double eps = 1e-14 * static_cast<double>(spread);

    const auto m = block.size();
    const auto source = m;
    const auto sink = m + 1;
    MaxFlow flow(m + 2);
    for (std::size_t a = 0; a < m; ++a) local[block[a]] = static_cast<std::ptrdiff_t>(a);
    for (std::size_t a = 0; a < m; ++a) {
      if (gain[a] > 0.0) flow.add_edge(source, a, gain[a]);
      if (gain[a] < 0.0) flow.add_edge(a, sink, -gain[a]);
      // keeping the larger node in the high set forces its predecessors in
      for (auto v : dag.cover_successors()[block[a]]) {
        if (local[v] >= 0) flow.add_edge(static_cast<std::size_t>(local[v]), a, std::numeric_limits<double>::infinity());
      }
    }
    flow.run(source, sink, eps);
    const auto side = flow.source_side(source);
    for (auto i : block) local[i] = -1;

    std::vector<std::size_t> high;
    std::vector<std::size_t> low;
    long double high_gain = 0.0L;
    for (std::size_t a = 0; a < m; ++a) {
      if (side[a]) {
        high.push_back(block[a]);
        high_gain += gain[a];
      } else {
        low.push_back(block[a]);
      }
    }
    if (high.empty() || low.empty() || high_gain <= eps) {
      assign_constant();
      continue;
    }
    pending.push_back(std::move(high));
    pending.push_back(std::move(low));
  }
  return out;
}

}  // namespace

std::vector<double> pav_antitonic(std::span<const double> values, std::span<const double> weights) {
  check_inputs(values, weights, values.size());
  struct Block {
    long double sw;
    long double swv;
    std::size_t len;
    long double mean() const { return swv / sw; }
  };
  std::vector<Block> blocks;
  blocks.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    blocks.push_back({weights[i], static_cast<long double>(weights[i]) * values[i], 1});
    while (blocks.size() >= 2 && blocks[blocks.size() - 2].mean() <= blocks.back().mean()) {
      auto top = blocks.back();
      blocks.pop_back();
      blocks.back().sw += top.sw;
      blocks.back().swv += top.swv;
      blocks.back().len += top.len;
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& b : blocks) out.insert(out.end(), b.len, static_cast<double>(b.mean()));
  return out;
}

std::vector<double> antitonic_l2_fit(const OrderDag& dag, std::span<const double> values, std::span<const double> weights) {
  check_inputs(values, weights, dag.size());
  if (dag.is_chain()) return pav_antitonic(values, weights);
  if (dag.covers().empty()) return {values.begin(), values.end()};
  return partition_fit(dag, values, weights);
}

}  // namespace idr
