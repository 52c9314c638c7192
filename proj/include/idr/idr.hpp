#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "idr/partial_order.hpp"
#include "idr/step_cdf.hpp"

namespace idr {

struct Observation {
  std::size_t node;
  double y;
  double w;
};

/// Covariates, responses and positive weights, with order-equivalent
/// covariate vectors merged into DAG nodes.
class TrainingSet {
 public:
  TrainingSet(OrderSpec spec, Covariates x, std::vector<double> y, std::vector<double> w = {});

  const OrderSpec& spec() const { return dag_.spec(); }
  const OrderDag& dag() const { return dag_; }
  const Covariates& covariates() const { return x_; }
  std::span<const double> responses() const { return y_; }
  std::span<const double> weights() const { return w_; }
  std::size_t size() const { return y_.size(); }

  std::vector<Observation> observations() const;
  // Per-node total weight.
  std::vector<double> node_weights() const;

  TrainingSet subset(std::span<const std::size_t> rows) const;

 private:
  Covariates x_;
  std::vector<double> y_;
  std::vector<double> w_;
  OrderDag dag_;
};

/// Fitted conditional CDFs for every covariate class, on the grid of unique
/// training responses. Immutable.
class IdrModel {
 public:
  IdrModel(OrderDag dag, std::vector<double> thresholds, std::vector<double> cdf, StepCdf climatology);

  const OrderSpec& spec() const { return dag_.spec(); }
  const OrderDag& dag() const { return dag_; }
  std::span<const double> thresholds() const { return thresholds_; }
  std::size_t node_count() const { return dag_.size(); }

  double cdf(std::size_t node, std::size_t k) const { return cdf_[node * thresholds_.size() + k]; }
  std::span<const double> row(std::size_t node) const {
    return std::span<const double>(cdf_).subspan(node * thresholds_.size(), thresholds_.size());
  }
  // node-major, node_count() x thresholds().size()
  std::span<const double> cdf_matrix() const { return cdf_; }

  StepCdf node_cdf(std::size_t node) const;
  const StepCdf& climatology() const { return climatology_; }

 private:
  OrderDag dag_;
  std::vector<double> thresholds_;
  std::vector<double> cdf_;
  StepCdf climatology_;
};

struct FitOptions {
  // 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;
};

// Weighted least-squares projection onto the nonincreasing cone of a chain.
std::vector<double> pav_antitonic(std::span<const double> values, std::span<const double> weights);

// Minimizer of sum w_i (eta_i - values_i)^2 subject to eta_u >= eta_v whenever
// u reaches v in the dag.
std::vector<double> antitonic_l2_fit(const OrderDag& dag, std::span<const double> values, std::span<const double> weights);

IdrModel fit_idr(const TrainingSet& training, const FitOptions& options = {});

// Weighted mean CRPS of the fitted CDFs at their own training responses.
double empirical_crps_loss(const IdrModel& model, const TrainingSet& training);

}  // namespace idr
