#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "idr/idr.hpp"
#include "idr/scoring.hpp"

namespace idr {

IdrModel::IdrModel(OrderDag dag, std::vector<double> thresholds, std::vector<double> cdf, StepCdf climatology)
    : dag_(std::move(dag)), thresholds_(std::move(thresholds)), cdf_(std::move(cdf)), climatology_(std::move(climatology)) {
  if (thresholds_.empty()) throw std::invalid_argument("IdrModel: empty threshold grid");
  if (cdf_.size() != dag_.size() * thresholds_.size()) throw std::invalid_argument("IdrModel: cdf matrix has wrong shape");
  for (std::size_t k = 1; k < thresholds_.size(); ++k)
    if (!(thresholds_[k - 1] < thresholds_[k])) throw std::invalid_argument("IdrModel: thresholds must be strictly increasing");
  for (std::size_t v = 0; v < dag_.size(); ++v) {
    auto r = row(v);
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (!(r[k] >= 0.0 && r[k] <= 1.0)) throw std::invalid_argument("IdrModel: CDF value outside [0, 1]");
      if (k > 0 && r[k] < r[k - 1]) throw std::invalid_argument("IdrModel: CDF row is not nondecreasing");
    }
    if (r.back() != 1.0) throw std::invalid_argument("IdrModel: CDF row does not end at 1");
  }
}

StepCdf IdrModel::node_cdf(std::size_t node) const { return StepCdf::from_grid(thresholds_, row(node)); }

IdrModel fit_idr(const TrainingSet& training, const FitOptions& options) {
  const auto& dag = training.dag();
  const auto n = dag.size();
  const auto obs = training.observations();

  std::vector<std::size_t> order(obs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return obs[a].y < obs[b].y; });

  std::vector<double> thresholds;
  for (auto i : order)
    if (thresholds.empty() || thresholds.back() != obs[i].y) thresholds.push_back(obs[i].y);
  const auto m = thresholds.size();

  const auto node_w = training.node_weights();
  std::vector<double> cdf(n * m);

  // Each range rebuilds its indicator sums from scratch in the same order, so
  // the result does not depend on how thresholds are split across threads.
  auto solve_range = [&](std::size_t k0, std::size_t k1) {
    std::vector<long double> sums(n, 0.0L);
    std::vector<double> values(n);
    std::size_t p = 0;
    for (std::size_t k = 0; k < k1; ++k) {
      while (p < order.size() && obs[order[p]].y <= thresholds[k]) {
        sums[obs[order[p]].node] += obs[order[p]].w;
        ++p;
      }
      if (k < k0) continue;
      for (std::size_t v = 0; v < n; ++v) values[v] = static_cast<double>(sums[v] / node_w[v]);
      const auto eta = antitonic_l2_fit(dag, values, node_w);
      for (std::size_t v = 0; v < n; ++v) cdf[v * m + k] = eta[v];
    }
  };

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, m / 64)));
  if (threads <= 1) {
    solve_range(0, m);
  } else {
    std::vector<std::jthread> workers;
    const auto chunk = (m + threads - 1) / threads;
    for (std::size_t k0 = 0; k0 < m; k0 += chunk) workers.emplace_back(solve_range, k0, std::min(m, k0 + chunk));
  }

  // Clamp rounding residue: rows nondecreasing, in [0, 1], ending at exactly 1.
  // A running maximum keeps the order between rows intact.
  for (std::size_t v = 0; v < n; ++v) {
    double running = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      running = std::max(running, std::clamp(cdf[v * m + k], 0.0, 1.0));
      cdf[v * m + k] = running;
    }
    cdf[v * m + m - 1] = 1.0;
  }

  return IdrModel(dag, std::move(thresholds), std::move(cdf), StepCdf::empirical(training.responses(), training.weights()));
}

double empirical_crps_loss(const IdrModel& model, const TrainingSet& training) {
  if (model.node_count() != training.dag().size()) throw std::invalid_argument("empirical_crps_loss: model and training set differ");
  std::vector<StepCdf> rows;
  rows.reserve(model.node_count());
  for (std::size_t v = 0; v < model.node_count(); ++v) rows.push_back(model.node_cdf(v));
  long double acc = 0.0L;
  long double total = 0.0L;
  for (const auto& o : training.observations()) {
    acc += o.w * crps(rows[o.node], o.y);
    total += o.w;
  }
  return static_cast<double>(acc / total);
}

}  // namespace idr
