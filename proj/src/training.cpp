#include <cmath>
#include <stdexcept>

#include "idr/idr.hpp"

namespace idr {

TrainingSet::TrainingSet(OrderSpec spec, Covariates x, std::vector<double> y, std::vector<double> w)
    : x_(std::move(x)), y_(std::move(y)), w_(std::move(w)) {
  if (y_.empty()) throw std::invalid_argument("training set: no observations");
  if (x_.size() != y_.size()) throw std::invalid_argument("training set: covariate and response counts differ");
  if (w_.empty()) w_.assign(y_.size(), 1.0);
  if (w_.size() != y_.size()) throw std::invalid_argument("training set: weight count differs from response count");
  for (std::size_t i = 0; i < y_.size(); ++i) {
    if (!std::isfinite(y_[i])) throw std::invalid_argument("training set: response " + std::to_string(i) + " is not finite");
    if (!(w_[i] > 0.0) || !std::isfinite(w_[i]))
      throw std::invalid_argument("training set: weight " + std::to_string(i) + " is not strictly positive");
  }
  dag_ = build_order_dag(spec, x_);
}

std::vector<Observation> TrainingSet::observations() const {
  std::vector<Observation> out;
  out.reserve(y_.size());
  const auto& member = dag_.membership();
  for (std::size_t i = 0; i < y_.size(); ++i) out.push_back({member[i], y_[i], w_[i]});
  return out;
}

std::vector<double> TrainingSet::node_weights() const {
  std::vector<long double> acc(dag_.size(), 0.0L);
  const auto& member = dag_.membership();
  for (std::size_t i = 0; i < y_.size(); ++i) acc[member[i]] += w_[i];
  return {acc.begin(), acc.end()};
}

TrainingSet TrainingSet::subset(std::span<const std::size_t> rows) const {
  Covariates x;
  std::vector<double> y;
  std::vector<double> w;
  x.reserve(rows.size());
  for (auto r : rows) {
    if (r >= y_.size()) throw std::out_of_range("training set subset: row index out of range");
    x.push_back(x_[r]);
    y.push_back(y_[r]);
    w.push_back(w_[r]);
  }
  return TrainingSet(spec(), std::move(x), std::move(y), std::move(w));
}

}  // namespace idr
