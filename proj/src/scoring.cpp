#include "bnsl/scoring.hpp"

#include <math.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "bnsl/error.hpp"

namespace bnsl {

void PriorSpec::validate() const {
  if (!(hyperparameter > 0.0) || !std::isfinite(hyperparameter))
    throw ConfigError("prior hyperparameter must be a positive finite number");
}

namespace {

// glibc's lgamma writes the global signgam; the reentrant form does not.
double log_gamma(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

void check_family(const Dataset& data, int node, std::span<const int> parents) {
  const int n = data.num_vars();
  if (node < 0 || node >= n) throw SchemaError("node index " + std::to_string(node) + " out of range");
  for (int p : parents) {
    if (p < 0 || p >= n) throw SchemaError("parent index " + std::to_string(p) + " out of range");
    if (p == node) throw SchemaError("parent set of node " + std::to_string(node) + " contains the node");
  }
  if (data.empty()) throw EmptyDataError("cannot score a dataset with zero rows");
}

std::vector<int> sorted_copy(std::span<const int> parents) {
  std::vector<int> s(parents.begin(), parents.end());
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw SchemaError("parent set has duplicates");
  return s;
}

// Relabels parent configurations to dense ids in order of first appearance,
// one parent column at a time, so the id space never exceeds the row count.
double local_score_kernel(const Dataset& data, int node, std::span<const int> parents, double alpha) {
  const std::size_t m = data.num_rows();
  const int r = data.arity(node);

  thread_local std::vector<std::uint32_t> ids;
  thread_local std::vector<std::int32_t> remap;
  thread_local std::vector<std::int64_t> counts;

  ids.assign(m, 0);
  std::size_t configs = 1;
  for (int p : parents) {
    const auto col = data.column(p);
    const std::size_t rp = static_cast<std::size_t>(data.arity(p));
    remap.assign(configs * rp, -1);
    std::int32_t next = 0;
    for (std::size_t row = 0; row < m; ++row) {
      auto& slot = remap[ids[row] * rp + static_cast<std::size_t>(col[row])];
      if (slot < 0) slot = next++;
      ids[row] = static_cast<std::uint32_t>(slot);
    }
    configs = static_cast<std::size_t>(next);
  }

  counts.assign(configs * r, 0);
  const auto child = data.column(node);
  for (std::size_t row = 0; row < m; ++row) ++counts[ids[row] * r + child[row]];

  const double alpha_row = alpha * r;
  const double lg_alpha = log_gamma(alpha);
  const double lg_alpha_row = log_gamma(alpha_row);
  double score = 0.0;
  for (std::size_t j = 0; j < configs; ++j) {
    std::int64_t total = 0;
    for (int k = 0; k < r; ++k) {
      const auto nijk = counts[j * r + k];
      total += nijk;
      if (nijk > 0) score += log_gamma(alpha + static_cast<double>(nijk)) - lg_alpha;
    }
    score += lg_alpha_row - log_gamma(alpha_row + static_cast<double>(total));
  }
  return score;
}

}  // namespace

SufficientStats count_stats(const Dataset& data, int node, std::span<const int> parent_set) {
  check_family(data, node, parent_set);
  SufficientStats s;
  s.node = node;
  s.parent_set = sorted_copy(parent_set);
  s.arity = data.arity(node);
  const auto q = parent_config_count(data.variables(), s.parent_set);
  if (q > kMaxDenseCells / static_cast<std::uint64_t>(s.arity))
    throw SchemaError("family of node " + std::to_string(node) + " has too many parent configurations for a dense table");
  s.configs = q;
  s.counts.assign(q * s.arity, 0);
  s.row_totals.assign(q, 0);
  for (std::size_t row = 0; row < data.num_rows(); ++row) {
    std::size_t j = 0;
    std::size_t radix = 1;
    for (int p : s.parent_set) {
      j += static_cast<std::size_t>(data.at(row, p)) * radix;
      radix *= static_cast<std::size_t>(data.arity(p));
    }
    ++s.counts[j * s.arity + data.at(row, node)];
    ++s.row_totals[j];
  }
  return s;
}

// ---------------------------------------------------------------------------
// LocalScoreCache

LocalScoreCache::LocalScoreCache(const Dataset& data, PriorSpec prior) : data_(&data), prior_(prior) {
  prior_.validate();
}

std::size_t LocalScoreCache::KeyHash::operator()(const Key& k) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(k.node);
  for (int p : k.parents) {
    h ^= static_cast<std::uint64_t>(p) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

LocalScoreCache::Shard& LocalScoreCache::shard_for(int node, std::span<const int> parents) const {
  std::size_t h = static_cast<std::size_t>(node) * 131u + parents.size();
  for (int p : parents) h = h * 31u + static_cast<std::size_t>(p);
  return shards_[h % kShards];
}

std::optional<double> LocalScoreCache::find(int node, std::span<const int> sorted_parents) const {
  auto& shard = shard_for(node, sorted_parents);
  const Key key{node, std::vector<int>(sorted_parents.begin(), sorted_parents.end())};
  std::shared_lock lock(shard.mutex);
  auto it = shard.table.find(key);
  if (it == shard.table.end()) {
    misses_.fetch_add(1, std::memory_order_relaxed);
    return std::nullopt;
  }
  hits_.fetch_add(1, std::memory_order_relaxed);
  return it->second;
}

void LocalScoreCache::insert(int node, std::span<const int> sorted_parents, double value) {
  auto& shard = shard_for(node, sorted_parents);
  Key key{node, std::vector<int>(sorted_parents.begin(), sorted_parents.end())};
  std::unique_lock lock(shard.mutex);
  shard.table.try_emplace(std::move(key), value);
}

std::size_t LocalScoreCache::size() const {
  std::size_t total = 0;
  for (auto& shard : shards_) {
    std::shared_lock lock(shard.mutex);
    total += shard.table.size();
  }
  return total;
}

void LocalScoreCache::clear() {
  for (auto& shard : shards_) {
    std::unique_lock lock(shard.mutex);
    shard.table.clear();
  }
  hits_ = 0;
  misses_ = 0;
}

// ---------------------------------------------------------------------------
// Scores

double local_log_score(const Dataset& data, int node, std::span<const int> parent_set,
                       const PriorSpec& prior, LocalScoreCache* cache) {
  check_family(data, node, parent_set);
  prior.validate();
  const bool sorted = std::is_sorted(parent_set.begin(), parent_set.end()) &&
                      std::adjacent_find(parent_set.begin(), parent_set.end()) == parent_set.end();
  std::vector<int> owned;
  if (!sorted) owned = sorted_copy(parent_set);
  const std::span<const int> parents = sorted ? parent_set : std::span<const int>(owned);

  if (cache == nullptr) return local_score_kernel(data, node, parents, prior.hyperparameter);
  if (!cache->bound_to(data, prior))
    throw EngineError("score cache belongs to a different dataset or prior");
  if (auto hit = cache->find(node, parents)) return *hit;
  const double value = local_score_kernel(data, node, parents, prior.hyperparameter);
  cache->insert(node, parents, value);
  return value;
}

double bde_log_score(const Dataset& data, const std::vector<std::vector<int>>& parent_sets,
                     const PriorSpec& prior, LocalScoreCache* cache) {
  if (static_cast<int>(parent_sets.size()) != data.num_vars()) {
    throw SchemaError("structure has " + std::to_string(parent_sets.size()) + " nodes, dataset has " +
                      std::to_string(data.num_vars()) + " columns");
  }
  double total = 0.0;
  for (int i = 0; i < data.num_vars(); ++i) total += local_log_score(data, i, parent_sets[i], prior, cache);
  return total;
}

double bde_log_score(const Dataset& data, const Dag& dag, const PriorSpec& prior, LocalScoreCache* cache) {
  return bde_log_score(data, dag.parent_sets(), prior, cache);
}

double prequential_log_score(const Dataset& data, const Dag& dag, const PriorSpec& prior) {
  prior.validate();
  const int n = data.num_vars();
  if (dag.size() != n) {
    throw SchemaError("structure has " + std::to_string(dag.size()) + " nodes, dataset has " +
                      std::to_string(n) + " columns");
  }
  if (data.empty()) throw EmptyDataError("cannot score a dataset with zero rows");

  const double alpha = prior.hyperparameter;
  // Per node: parent-value tuple -> running child-value counts.
  std::vector<std::map<std::vector<int>, std::vector<double>>> running(n);
  double total = 0.0;
  for (std::size_t t = 0; t < data.num_rows(); ++t) {
    for (int i = 0; i < n; ++i) {
      std::vector<int> key;
      key.reserve(dag.parents(i).size());
      for (int p : dag.parents(i)) key.push_back(data.at(t, p));
      const int r = data.arity(i);
      auto [it, inserted] = running[i].try_emplace(std::move(key), std::vector<double>(r, 0.0));
      auto& counts = it->second;
      double seen = 0.0;
      for (double c : counts) seen += c;
      const int x = data.at(t, i);
      total += std::log((alpha + counts[x]) / (alpha * r + seen));
      counts[x] += 1.0;
    }
  }
  return total;
}

}  // namespace bnsl
