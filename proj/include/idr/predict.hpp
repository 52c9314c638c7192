#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "idr/idr.hpp"

namespace idr {

enum class Provenance { at_training_point, both_bounds, only_predecessors, only_successors, climatological, interpolated };

std::string_view provenance_name(Provenance p);

struct Prediction {
  StepCdf cdf;
  std::optional<StepCdf> lower;  // max over direct successors
  std::optional<StepCdf> upper;  // min over direct predecessors
  Provenance provenance = Provenance::climatological;

  // max_z (upper(z) - lower(z)); 0 unless both bounds exist.
  double bound_gap() const;
};

std::vector<std::size_t> direct_predecessors(const IdrModel& model, std::span<const double> x);
std::vector<std::size_t> direct_successors(const IdrModel& model, std::span<const double> x);

Prediction predict_cdf(const IdrModel& model, std::span<const double> x);

// Linear interpolation between neighbouring training covariates; the model
// must have a single totally ordered covariate.
Prediction interpolate_total_order(const IdrModel& model, double x);

}  // namespace idr
