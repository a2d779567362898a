#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <optional>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "bnsl/bayesnet.hpp"

namespace bnsl {

// Dirichlet hyperparameter N'_ijk, shared by every (i, j, k). The default of
// 1 gives the K2/CH form of the BDe metric.
struct PriorSpec {
  double hyperparameter = 1.0;

  void validate() const;
  double row_total(int arity) const { return hyperparameter * arity; }
};

/// Dense family counts N_ijk for one node and parent set.
///
/// Rows are joint parent configurations in the same mixed-radix order as
/// BayesianNetwork CPT rows; columns are child values.
struct SufficientStats {
  int node = 0;
  std::vector<int> parent_set;
  int arity = 0;
  std::size_t configs = 1;
  std::vector<std::int64_t> counts;
  std::vector<std::int64_t> row_totals;

  std::int64_t count(std::size_t j, int k) const { return counts[j * arity + k]; }
};

// Upper bound on q_i * r_i for count_stats; larger families are still scored
// by local_log_score, which only tracks observed configurations.
inline constexpr std::uint64_t kMaxDenseCells = std::uint64_t{1} << 24;

SufficientStats count_stats(const Dataset& data, int node, std::span<const int> parent_set);

/// Memo table of local scores for one (dataset, prior) pair, keyed by node and
/// sorted parent set. Lookups and inserts are safe from concurrent threads;
/// racing inserts of the same key store the same value.
class LocalScoreCache {
 public:
  LocalScoreCache(const Dataset& data, PriorSpec prior);

  LocalScoreCache(const LocalScoreCache&) = delete;
  LocalScoreCache& operator=(const LocalScoreCache&) = delete;

  std::optional<double> find(int node, std::span<const int> sorted_parents) const;
  void insert(int node, std::span<const int> sorted_parents, double value);

  bool bound_to(const Dataset& data, const PriorSpec& prior) const {
    return &data == data_ && prior.hyperparameter == prior_.hyperparameter;
  }

  std::uint64_t hits() const { return hits_.load(std::memory_order_relaxed); }
  std::uint64_t misses() const { return misses_.load(std::memory_order_relaxed); }
  std::size_t size() const;
  void clear();

 private:
  struct Key {
    int node;
    std::vector<int> parents;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };
  struct Shard {
    mutable std::shared_mutex mutex;
    std::unordered_map<Key, double, KeyHash> table;
  };
  static constexpr std::size_t kShards = 32;

  Shard& shard_for(int node, std::span<const int> parents) const;

  const Dataset* data_;
  PriorSpec prior_;
  mutable std::array<Shard, kShards> shards_;
  mutable std::atomic<std::uint64_t> hits_{0};
  mutable std::atomic<std::uint64_t> misses_{0};
};

/// Log of one node's factor in the closed-form marginal likelihood:
///   sum_j [ lnG(N'_ij) - lnG(N'_ij + N_ij) + sum_k ( lnG(N'_ijk + N_ijk) - lnG(N'_ijk) ) ]
/// Pass a cache bound to (data, prior) to memoize, or nullptr to always recount.
double local_log_score(const Dataset& data, int node, std::span<const int> parent_set,
                       const PriorSpec& prior, LocalScoreCache* cache = nullptr);

// Sum of local scores over all nodes.
double bde_log_score(const Dataset& data, const Dag& dag, const PriorSpec& prior,
                     LocalScoreCache* cache = nullptr);
double bde_log_score(const Dataset& data, const std::vector<std::vector<int>>& parent_sets,
                     const PriorSpec& prior, LocalScoreCache* cache = nullptr);

// Independent oracle for bde_log_score: accumulates ln p(row_t | rows before t)
// using the Dirichlet posterior-mean predictive for every node.
double prequential_log_score(const Dataset& data, const Dag& dag, const PriorSpec& prior);

}  // namespace bnsl
