#include "idr/subagging.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace idr {

namespace {

// Uniform integer in [0, bound) by rejection, independent of the standard
// library's distribution implementations.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    const auto r = rng();
    if (r < limit) return r % bound;
  }
}

int provenance_rank(Provenance p) {
  switch (p) {
    case Provenance::at_training_point:
      return 5;
    case Provenance::both_bounds:
      return 4;
    case Provenance::interpolated:
      return 3;
    case Provenance::only_predecessors:
      return 2;
    case Provenance::only_successors:
      return 1;
    case Provenance::climatological:
      return 0;
  }
  return 0;
}

}  // namespace

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  if (k > n) throw std::invalid_argument("sample_without_replacement: k exceeds n");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + bounded(rng, n - i)]);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

SubaggedModel fit_subagged(const TrainingSet& training, std::size_t count, std::size_t size, std::uint64_t seed,
                           const FitOptions& options) {
  if (count < 1) throw std::invalid_argument("fit_subagged: need at least one subsample");
  if (size < 1 || size > training.size())
    throw std::invalid_argument("fit_subagged: subsample size must lie in [1, " + std::to_string(training.size()) + "]");
  SubaggedModel model;
  model.subsample_size = size;
  model.seed = seed;
  std::mt19937_64 rng(seed);
  model.members.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    const auto rows = sample_without_replacement(training.size(), size, rng);
    model.members.push_back(fit_idr(training.subset(rows), options));
  }
  return model;
}

SubaggedModel fit_even_odd(const TrainingSet& training, const FitOptions& options) {
  if (training.size() < 2) throw std::invalid_argument("fit_even_odd: need at least two observations");
  SubaggedModel model;
  for (std::size_t parity = 0; parity < 2; ++parity) {
    std::vector<std::size_t> rows;
    for (auto i = parity; i < training.size(); i += 2) rows.push_back(i);
    model.members.push_back(fit_idr(training.subset(rows), options));
  }
  model.subsample_size = training.size() / 2;
  return model;
}

StepCdf average_cdfs(std::span<const StepCdf> cdfs) {
  if (cdfs.empty()) throw std::invalid_argument("average_cdfs: nothing to average");
  if (cdfs.size() == 1) return cdfs.front();
  std::vector<double> grid;
  for (const auto& f : cdfs) grid.insert(grid.end(), f.jumps().begin(), f.jumps().end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<long double> acc(grid.size(), 0.0L);
  for (const auto& f : cdfs)
    for (std::size_t k = 0; k < grid.size(); ++k) acc[k] += f(grid[k]);
  std::vector<double> values(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) values[k] = static_cast<double>(acc[k] / static_cast<long double>(cdfs.size()));
  values.back() = 1.0;
  return StepCdf::from_grid(grid, values);
}

Prediction predict_subagged(const SubaggedModel& model, std::span<const double> x) {
  if (model.members.empty()) throw std::invalid_argument("predict_subagged: model has no members");
  std::vector<StepCdf> central;
  std::vector<StepCdf> lowers;
  std::vector<StepCdf> uppers;
  bool all_at_point = true;
  bool all_bounded = true;
  Provenance weakest = Provenance::at_training_point;
  for (const auto& m : model.members) {
    auto p = predict_cdf(m, x);
    central.push_back(p.cdf);
    if (p.lower) lowers.push_back(*p.lower);
    if (p.upper) uppers.push_back(*p.upper);
    all_at_point = all_at_point && p.provenance == Provenance::at_training_point;
    all_bounded = all_bounded && (p.provenance == Provenance::at_training_point || p.provenance == Provenance::both_bounds);
    if (provenance_rank(p.provenance) < provenance_rank(weakest)) weakest = p.provenance;
  }
  Prediction out;
  out.cdf = average_cdfs(central);
  if (lowers.size() == model.members.size()) out.lower = average_cdfs(lowers);
  if (uppers.size() == model.members.size()) out.upper = average_cdfs(uppers);
  out.provenance = all_at_point ? Provenance::at_training_point : all_bounded ? Provenance::both_bounds : weakest;
  return out;
}

}  // namespace idr
