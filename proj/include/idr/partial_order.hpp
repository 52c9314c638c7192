#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace idr {

enum class Relation { componentwise, empirical_stochastic, empirical_icx, total };

enum class Ordering { less, greater, equal, incomparable };

std::string_view relation_name(Relation r);

struct OrderGroup {
  std::vector<std::size_t> columns;
  Relation relation = Relation::componentwise;
};

using Covariates = std::vector<std::vector<double>>;

// Per group, the group's subvector; exchangeable groups (st, icx) are stored
// as ascending order statistics. Groups are concatenated in declaration order.
using CanonicalKey = std::vector<double>;

/// Product of per-group relations on covariate vectors. The column sets of
/// the groups partition {0, ..., dimension() - 1}.
class OrderSpec {
 public:
  OrderSpec() = default;
  explicit OrderSpec(std::vector<OrderGroup> groups);

  static OrderSpec total();
  static OrderSpec uniform(Relation relation, std::size_t dimension);

  const std::vector<OrderGroup>& groups() const { return groups_; }
  std::size_t dimension() const { return dimension_; }
  bool is_single_total() const;

  CanonicalKey canonical_key(std::span<const double> x) const;

  // Relations on canonical keys (as produced by canonical_key).
  bool key_less_equal(std::span<const double> a, std::span<const double> b) const;
  Ordering compare_keys(std::span<const double> a, std::span<const double> b) const;

  bool less_equal(std::span<const double> u, std::span<const double> v) const;
  Ordering compare(std::span<const double> u, std::span<const double> v) const;

  friend bool operator==(const OrderSpec&, const OrderSpec&);

 private:
  std::vector<OrderGroup> groups_;
  std::size_t dimension_ = 0;
};

bool operator==(const OrderGroup& a, const OrderGroup& b);

// Free-function form of OrderSpec::compare.
Ordering compare(const OrderSpec& spec, std::span<const double> u, std::span<const double> v);

double gini_mean_difference(std::span<const double> x);

// Empirical stochastic and increasing convex order between two equally long
// vectors, via their order statistics.
bool stochastic_less_equal(std::span<const double> x, std::span<const double> y);
bool icx_less_equal(std::span<const double> x, std::span<const double> y);

/// Textual order specification: `cols:relation` items separated by ';'.
/// `cols` is a comma list of column names or `first-last` header ranges.
struct ParsedOrder {
  OrderSpec spec;
  std::vector<std::string> columns;  // covariate layout, in spec order
};

ParsedOrder parse_order_spec(std::string_view text, std::span<const std::string> header);
std::string format_order_spec(const OrderSpec& spec, std::span<const std::string> columns);

/// Distinct canonical covariate classes with their comparability structure.
/// Node ids follow the lexicographic order of the canonical keys.
class OrderDag {
 public:
  OrderDag() = default;

  const OrderSpec& spec() const { return spec_; }
  std::size_t size() const { return keys_.size(); }
  const std::vector<CanonicalKey>& keys() const { return keys_; }
  const CanonicalKey& key(std::size_t node) const { return keys_[node]; }

  // raw point index -> node id
  const std::vector<std::size_t>& membership() const { return membership_; }

  // Transitive reduction of the strict order, as (smaller, larger) pairs.
  const std::vector<std::pair<std::size_t, std::size_t>>& covers() const { return covers_; }
  const std::vector<std::vector<std::size_t>>& cover_successors() const { return succ_; }
  const std::vector<std::vector<std::size_t>>& cover_predecessors() const { return pred_; }

  const std::vector<std::size_t>& topological_order() const { return topo_; }

  // u reaches v iff key(u) ⪯ key(v); reflexive.
  bool reaches(std::size_t u, std::size_t v) const;

  // True when the nodes form a single chain 0 -> 1 -> ... -> n-1.
  bool is_chain() const { return chain_; }

  std::optional<std::size_t> find(std::span<const double> key) const;

  friend OrderDag build_order_dag(const OrderSpec& spec, const Covariates& points);

 private:
  OrderSpec spec_;
  std::vector<CanonicalKey> keys_;
  std::vector<std::size_t> membership_;
  std::vector<std::pair<std::size_t, std::size_t>> covers_;
  std::vector<std::vector<std::size_t>> succ_;
  std::vector<std::vector<std::size_t>> pred_;
  std::vector<std::size_t> topo_;
  std::vector<boost::dynamic_bitset<>> reach_;  // empty when chain_
  bool chain_ = false;
};

OrderDag build_order_dag(const OrderSpec& spec, const Covariates& points);

}  // namespace idr
