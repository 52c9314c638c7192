#pragma once

#include <cstdint>
#include <vector>

#include "idr/idr.hpp"

namespace idr::simulation {

// X ~ Uniform(0, 10), Y | X ~ Gamma(shape = sqrt(X), scale = min(max(X, 1), 6)).
double gamma_shape(double x);
double gamma_scale(double x);

struct Sample {
  std::vector<double> x;
  std::vector<double> y;
};

Sample simulate_gamma_sample(std::size_t n, std::uint64_t seed);

// n draws of Y given X = x.
std::vector<double> sample_response(double x, std::size_t n, std::uint64_t seed);

// Training set with a single totally ordered covariate.
TrainingSet simulate_gamma(std::size_t n, std::uint64_t seed);

// True conditional distribution of Y given X = x.
double true_cdf(double x, double y);
double true_quantile(double x, double alpha);
double true_crps(double x, double y);
double true_mean(double x);

}  // namespace idr::simulation
