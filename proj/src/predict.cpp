#include "idr/predict.hpp"

#include <algorithm>
#include <stdexcept>

namespace idr {

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::at_training_point:
      return "at_training_point";
    case Provenance::both_bounds:
      return "both_bounds";
    case Provenance::only_predecessors:
      return "only_predecessors";
    case Provenance::only_successors:
      return "only_successors";
    case Provenance::climatological:
      return "climatological";
    case Provenance::interpolated:
      return "interpolated";
  }
  return "?";
}

double Prediction::bound_gap() const {
  if (!lower || !upper) return 0.0;
  double gap = 0.0;
  for (const auto* f : {&*lower, &*upper})
    for (auto z : f->jumps()) gap = std::max(gap, (*upper)(z) - (*lower)(z));
  return gap;
}

namespace {

enum class Side { below, above };

// Maximal training nodes below x (Side::below) or minimal nodes above x.
std::vector<std::size_t> direct_neighbours(const IdrModel& model, std::span<const double> x, Side side) {
  const auto& dag = model.dag();
  const auto& spec = dag.spec();
  const auto key = spec.canonical_key(x);
  const auto n = dag.size();

  auto related = [&](std::size_t i) {
    const auto& k = dag.key(i);
    return side == Side::below ? spec.key_less_equal(k, key) : spec.key_less_equal(key, k);
  };

  if (dag.is_chain()) {
    // related nodes form a prefix (below) or suffix (above) of the chain
    if (side == Side::below) {
      std::size_t lo = 0, hi = n;  // count of related nodes
      while (lo < hi) {
        auto mid = (lo + hi) / 2;
        if (related(mid)) lo = mid + 1; else hi = mid;
      }
      if (lo == 0) return {};
      return {lo - 1};
    }
    std::size_t lo = 0, hi = n;  // first related node
    while (lo < hi) {
      auto mid = (lo + hi) / 2;
      if (related(mid)) hi = mid; else lo = mid + 1;
    }
    if (lo == n) return {};
    return {lo};
  }

  std::vector<std::size_t> set;
  for (std::size_t i = 0; i < n; ++i)
    if (related(i)) set.push_back(i);
  std::vector<std::size_t> out;
  for (auto i : set) {
    bool extremal = true;
    for (auto j : set) {
      if (j == i) continue;
      if (side == Side::below ? dag.reaches(i, j) : dag.reaches(j, i)) {
        extremal = false;
        break;
      }
    }
    if (extremal) out.push_back(i);
  }
  return out;
}

StepCdf envelope(const IdrModel& model, const std::vector<std::size_t>& nodes, bool take_max) {
  const auto m = model.thresholds().size();
  std::vector<double> values(m, take_max ? 0.0 : 1.0);
  for (auto v : nodes) {
    auto r = model.row(v);
    for (std::size_t k = 0; k < m; ++k) values[k] = take_max ? std::max(values[k], r[k]) : std::min(values[k], r[k]);
  }
  return StepCdf::from_grid(model.thresholds(), values);
}

}  // namespace

std::vector<std::size_t> direct_predecessors(const IdrModel& model, std::span<const double> x) {
  return direct_neighbours(model, x, Side::below);
}

std::vector<std::size_t> direct_successors(const IdrModel& model, std::span<const double> x) {
  return direct_neighbours(model, x, Side::above);
}

Prediction predict_cdf(const IdrModel& model, std::span<const double> x) {
  const auto key = model.spec().canonical_key(x);
  if (auto node = model.dag().find(key)) {
    auto f = model.node_cdf(*node);
    return {f, f, f, Provenance::at_training_point};
  }
  const auto preds = direct_predecessors(model, x);
  const auto succs = direct_successors(model, x);
  if (preds.empty() && succs.empty()) return {model.climatology(), std::nullopt, std::nullopt, Provenance::climatological};
  if (succs.empty()) {
    auto upper = envelope(model, preds, false);
    return {upper, std::nullopt, upper, Provenance::only_predecessors};
  }
  if (preds.empty()) {
    auto lower = envelope(model, succs, true);
    return {lower, lower, std::nullopt, Provenance::only_successors};
  }
  auto lower = envelope(model, succs, true);
  auto upper = envelope(model, preds, false);
  const auto grid = model.thresholds();
  std::vector<double> mid(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) mid[k] = 0.5 * (lower(grid[k]) + upper(grid[k]));
  return {StepCdf::from_grid(grid, mid), std::move(lower), std::move(upper), Provenance::both_bounds};
}

Prediction interpolate_total_order(const IdrModel& model, double x) {
  if (!model.spec().is_single_total()) throw std::invalid_argument("interpolation requires a model with one totally ordered covariate");
  const auto& keys = model.dag().keys();
  const auto n = keys.size();
  auto it = std::lower_bound(keys.begin(), keys.end(), x, [](const CanonicalKey& k, double v) { return k[0] < v; });
  const auto hi = static_cast<std::size_t>(it - keys.begin());
  if (hi == 0) return {model.node_cdf(0), std::nullopt, std::nullopt, Provenance::interpolated};
  if (hi == n) return {model.node_cdf(n - 1), std::nullopt, std::nullopt, Provenance::interpolated};
  if (keys[hi][0] == x) return {model.node_cdf(hi), std::nullopt, std::nullopt, Provenance::interpolated};
  const auto lo = hi - 1;
  const double x0 = keys[lo][0];
  const double x1 = keys[hi][0];
  const auto r0 = model.row(lo);
  const auto r1 = model.row(hi);
  std::vector<double> values(r0.size());
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = ((x1 - x) * r0[k] + (x - x0) * r1[k]) / (x1 - x0);
  values.back() = 1.0;
  return {StepCdf::from_grid(model.thresholds(), values), std::nullopt, std::nullopt, Provenance::interpolated};
}

}  // namespace idr
