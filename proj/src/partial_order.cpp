#include "idr/partial_order.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "idr/errors.hpp"

namespace idr {

std::string_view relation_name(Relation r) {
  switch (r) {
    case Relation::componentwise:
      return "cw";
    case Relation::empirical_stochastic:
      return "st";
    case Relation::empirical_icx:
      return "icx";
    case Relation::total:
      return "total";
  }
  return "?";
}

bool operator==(const OrderGroup& a, const OrderGroup& b) {
  return a.relation == b.relation && a.columns == b.columns;
}

bool operator==(const OrderSpec& a, const OrderSpec& b) { return a.groups_ == b.groups_; }

OrderSpec::OrderSpec(std::vector<OrderGroup> groups) : groups_(std::move(groups)) {
  if (groups_.empty()) throw std::invalid_argument("order spec: no groups");
  std::size_t count = 0;
  std::size_t max_col = 0;
  for (const auto& g : groups_) {
    if (g.columns.empty()) throw std::invalid_argument("order spec: empty column group");
    if (g.relation == Relation::total && g.columns.size() != 1)
      throw std::invalid_argument("order spec: a total-order group has exactly one column");
    count += g.columns.size();
    for (auto c : g.columns) max_col = std::max(max_col, c);
  }
  dimension_ = count;
  if (max_col + 1 != count) throw std::invalid_argument("order spec: column groups must partition 0..d-1");
  std::vector<bool> seen(count, false);
  for (const auto& g : groups_) {
    for (auto c : g.columns) {
      if (seen[c]) throw std::invalid_argument("order spec: column groups overlap");
      seen[c] = true;
    }
  }
}

OrderSpec OrderSpec::total() { return OrderSpec({OrderGroup{{0}, Relation::total}}); }

OrderSpec OrderSpec::uniform(Relation relation, std::size_t dimension) {
  if (relation == Relation::total) {
    std::vector<OrderGroup> groups;
    for (std::size_t c = 0; c < dimension; ++c) groups.push_back({{c}, Relation::total});
    return OrderSpec(std::move(groups));
  }
  std::vector<std::size_t> cols(dimension);
  std::iota(cols.begin(), cols.end(), std::size_t{0});
  return OrderSpec({OrderGroup{std::move(cols), relation}});
}

bool OrderSpec::is_single_total() const {
  return groups_.size() == 1 && groups_[0].relation == Relation::total;
}

CanonicalKey OrderSpec::canonical_key(std::span<const double> x) const {
  if (x.size() != dimension_)
    throw std::invalid_argument("covariate dimension " + std::to_string(x.size()) + " does not match order spec dimension " +
                                std::to_string(dimension_));
  CanonicalKey key;
  key.reserve(dimension_);
  for (const auto& g : groups_) {
    const auto start = key.size();
    for (auto c : g.columns) {
      if (!std::isfinite(x[c])) throw std::invalid_argument("covariate value is not finite");
      key.push_back(x[c]);
    }
    if (g.relation == Relation::empirical_stochastic || g.relation == Relation::empirical_icx)
      std::sort(key.begin() + static_cast<std::ptrdiff_t>(start), key.end());
  }
  return key;
}

namespace {

// Both arguments sorted ascending.
bool sorted_stochastic_le(std::span<const double> x, std::span<const double> y) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] <= y[i])) return false;
  return true;
}

// Both arguments sorted ascending; compares every upper tail sum.
bool sorted_icx_le(std::span<const double> x, std::span<const double> y) {
  long double sx = 0.0L;
  long double sy = 0.0L;
  for (std::size_t i = x.size(); i-- > 0;) {
    sx += x[i];
    sy += y[i];
    if (!(sx <= sy)) return false;
  }
  return true;
}

std::vector<double> sorted_copy(std::span<const double> x) {
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  return v;
}

void check_same_length(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("vectors differ in length");
}

}  // namespace

bool stochastic_less_equal(std::span<const double> x, std::span<const double> y) {
  check_same_length(x, y);
  return sorted_stochastic_le(sorted_copy(x), sorted_copy(y));
}

bool icx_less_equal(std::span<const double> x, std::span<const double> y) {
  check_same_length(x, y);
  return sorted_icx_le(sorted_copy(x), sorted_copy(y));
}

bool OrderSpec::key_less_equal(std::span<const double> a, std::span<const double> b) const {
  std::size_t off = 0;
  for (const auto& g : groups_) {
    const auto d = g.columns.size();
    auto ga = a.subspan(off, d);
    auto gb = b.subspan(off, d);
    off += d;
    switch (g.relation) {
      case Relation::total:
      case Relation::componentwise:
      case Relation::empirical_stochastic:
        if (!sorted_stochastic_le(ga, gb)) return false;
        break;
      case Relation::empirical_icx:
        if (!sorted_icx_le(ga, gb)) return false;
        break;
    }
  }
  return true;
}

Ordering OrderSpec::compare_keys(std::span<const double> a, std::span<const double> b) const {
  if (std::equal(a.begin(), a.end(), b.begin(), b.end())) return Ordering::equal;
  const bool le = key_less_equal(a, b);
  const bool ge = key_less_equal(b, a);
  // Both directions with distinct keys can only come from rounding in tail sums.
  if (le && !ge) return Ordering::less;
  if (ge && !le) return Ordering::greater;
  return Ordering::incomparable;
}

bool OrderSpec::less_equal(std::span<const double> u, std::span<const double> v) const {
  const auto a = canonical_key(u);
  const auto b = canonical_key(v);
  return a == b || compare_keys(a, b) == Ordering::less;
}

Ordering OrderSpec::compare(std::span<const double> u, std::span<const double> v) const {
  if (u.size() != v.size()) throw std::invalid_argument("compare: dimension mismatch");
  return compare_keys(canonical_key(u), canonical_key(v));
}

Ordering compare(const OrderSpec& spec, std::span<const double> u, std::span<const double> v) {
  return spec.compare(u, v);
}

double gini_mean_difference(std::span<const double> x) {
  const auto d = x.size();
  if (d < 2) throw std::invalid_argument("gini_mean_difference: need at least two values");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  // sum_{i,j} |x_i - x_j| = 2 * sum_i x_(i) (2i - d - 1), i = 1..d
  long double acc = 0.0L;
  for (std::size_t i = 0; i < d; ++i)
    acc += static_cast<long double>(s[i]) * (2.0L * static_cast<long double>(i + 1) - static_cast<long double>(d) - 1.0L);
  return static_cast<double>(2.0L * acc / (static_cast<long double>(d) * static_cast<long double>(d - 1)));
}

// ---------------------------------------------------------------------------
// Text form

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Relation parse_relation(std::string_view r) {
  if (r == "cw" || r == "componentwise") return Relation::componentwise;
  if (r == "st" || r == "stochastic" || r == "empirical_stochastic") return Relation::empirical_stochastic;
  if (r == "icx" || r == "empirical_icx") return Relation::empirical_icx;
  if (r == "total") return Relation::total;
  throw ParseError("order spec: unknown relation '" + std::string(r) + "'");
}

}  // namespace

ParsedOrder parse_order_spec(std::string_view text, std::span<const std::string> header) {
  auto index_of = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return std::nullopt;
  };

  ParsedOrder out;
  std::vector<OrderGroup> groups;
  for (auto item : split(text, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto colon = item.rfind(':');
    if (colon == std::string_view::npos)
      throw ParseError("order spec: item '" + std::string(item) + "' lacks ':relation'");
    OrderGroup group;
    group.relation = parse_relation(trim(item.substr(colon + 1)));
    for (auto tok : split(item.substr(0, colon), ',')) {
      tok = trim(tok);
      if (tok.empty()) throw ParseError("order spec: empty column name");
      std::vector<std::size_t> header_cols;
      if (auto idx = index_of(tok)) {
        header_cols.push_back(*idx);
      } else {
        const auto dash = tok.find('-');
        if (dash == std::string_view::npos) throw ParseError("order spec: unknown column '" + std::string(tok) + "'");
        auto first = index_of(trim(tok.substr(0, dash)));
        auto last = index_of(trim(tok.substr(dash + 1)));
        if (!first || !last || *first > *last)
          throw ParseError("order spec: invalid column range '" + std::string(tok) + "'");
        for (auto c = *first; c <= *last; ++c) header_cols.push_back(c);
      }
      for (auto hc : header_cols) {
        const auto& name = header[hc];
        if (std::find(out.columns.begin(), out.columns.end(), name) != out.columns.end())
          throw ParseError("order spec: column '" + name + "' used twice");
        group.columns.push_back(out.columns.size());
        out.columns.push_back(name);
      }
    }
    groups.push_back(std::move(group));
  }
  try {
    out.spec = OrderSpec(std::move(groups));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return out;
}

std::string format_order_spec(const OrderSpec& spec, std::span<const std::string> columns) {
  std::string s;
  for (const auto& g : spec.groups()) {
    if (!s.empty()) s += ';';
    for (std::size_t i = 0; i < g.columns.size(); ++i) {
      if (i) s += ',';
      s += g.columns[i] < columns.size() ? columns[g.columns[i]] : "x" + std::to_string(g.columns[i]);
    }
    s += ':';
    s += relation_name(g.relation);
  }
  return s;
}

// ---------------------------------------------------------------------------
// DAG

bool OrderDag::reaches(std::size_t u, std::size_t v) const {
  if (chain_) return u <= v;
  return reach_[u].test(v);
}

std::optional<std::size_t> OrderDag::find(std::span<const double> key) const {
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key, [](const CanonicalKey& a, std::span<const double> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  if (it != keys_.end() && std::equal(it->begin(), it->end(), key.begin(), key.end()))
    return static_cast<std::size_t>(it - keys_.begin());
  return std::nullopt;
}

OrderDag build_order_dag(const OrderSpec& spec, const Covariates& points) {
  if (points.empty()) throw std::invalid_argument("build_order_dag: no points");
  OrderDag dag;
  dag.spec_ = spec;

  std::vector<CanonicalKey> raw;
  raw.reserve(points.size());
  for (const auto& p : points) raw.push_back(spec.canonical_key(p));
  dag.keys_ = raw;
  std::sort(dag.keys_.begin(), dag.keys_.end());
  dag.keys_.erase(std::unique(dag.keys_.begin(), dag.keys_.end()), dag.keys_.end());
  dag.membership_.reserve(points.size());
  for (const auto& k : raw) dag.membership_.push_back(*dag.find(k));

  const auto n = dag.keys_.size();
  dag.succ_.assign(n, {});
  dag.pred_.assign(n, {});

  bool chain = true;
  for (std::size_t i = 0; i + 1 < n && chain; ++i)
    chain = spec.compare_keys(dag.keys_[i], dag.keys_[i + 1]) == Ordering::less;
  dag.chain_ = chain;

  if (chain) {
    for (std::size_t i = 0; i + 1 < n; ++i) dag.covers_.emplace_back(i, i + 1);
  } else {
    dag.reach_.assign(n, boost::dynamic_bitset<>(n));
    std::vector<boost::dynamic_bitset<>> below(n, boost::dynamic_bitset<>(n));
    for (std::size_t u = 0; u < n; ++u) {
      dag.reach_[u].set(u);
      below[u].set(u);
      for (std::size_t v = u + 1; v < n; ++v) {
        switch (spec.compare_keys(dag.keys_[u], dag.keys_[v])) {
          case Ordering::less:
            dag.reach_[u].set(v);
            below[v].set(u);
            break;
          case Ordering::greater:
            dag.reach_[v].set(u);
            below[u].set(v);
            break;
          default:
            break;
        }
      }
    }
    for (std::size_t u = 0; u < n; ++u) {
      for (auto v = dag.reach_[u].find_first(); v != boost::dynamic_bitset<>::npos; v = dag.reach_[u].find_next(v)) {
        if (v == u) continue;
        // no w strictly between u and v
        if ((dag.reach_[u] & below[v]).count() == 2) dag.covers_.emplace_back(u, v);
      }
    }
  }
  for (auto [u, v] : dag.covers_) {
    dag.succ_[u].push_back(v);
    dag.pred_[v].push_back(u);
  }

  // Kahn's algorithm, smallest node id first.
  std::vector<std::size_t> indeg(n);
  for (std::size_t v = 0; v < n; ++v) indeg[v] = dag.pred_[v].size();
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push(v);
  while (!ready.empty()) {
    auto u = ready.top();
    ready.pop();
    dag.topo_.push_back(u);
    for (auto v : dag.succ_[u])
      if (--indeg[v] == 0) ready.push(v);
  }
  return dag;
}

}  // namespace idr
