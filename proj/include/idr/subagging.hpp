#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "idr/idr.hpp"
#include "idr/predict.hpp"

namespace idr {

/// Equally weighted members fitted on subsamples drawn without replacement.
struct SubaggedModel {
  std::vector<IdrModel> members;
  std::size_t subsample_size = 0;
  std::uint64_t seed = 0;
};

// `count` independent subsets of `size` rows each.
SubaggedModel fit_subagged(const TrainingSet& training, std::size_t count, std::size_t size, std::uint64_t seed,
                           const FitOptions& options = {});

// Two members: even-indexed rows and odd-indexed rows.
SubaggedModel fit_even_odd(const TrainingSet& training, const FitOptions& options = {});

// Pointwise mean of member predictions on the union of their jump points.
// Bounds are averaged only when every member supplies them.
Prediction predict_subagged(const SubaggedModel& model, std::span<const double> x);

// Mean of member CDFs evaluated on the union grid.
StepCdf average_cdfs(std::span<const StepCdf> cdfs);

// k distinct indices from [0, n), sorted; uniform over all k-subsets.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, std::mt19937_64& rng);

}  // namespace idr
