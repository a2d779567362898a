#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bnsl/encoding.hpp"
#include "bnsl/scoring.hpp"

namespace bnsl {

// ---------------------------------------------------------------------------
// K2

struct K2Config {
  std::optional<PermutationGenome> ordering;  // unset: uniformly random per seed
  int max_parents = 10;
  std::uint64_t seed = 1;

  void validate() const;
};

struct K2Step {
  int node;
  int parent;
  double before;
  double after;
};

struct K2Result {
  Dag dag;
  double score;
  PermutationGenome ordering;
  std::vector<K2Step> steps;  // accepted parent additions, in order
};

/// Greedy parent search over a fixed ordering. Each node starts parentless and
/// repeatedly gains the earlier node that raises its local score the most,
/// until no addition strictly improves it or max_parents is reached. Equal
/// gains go to the candidate earliest in the ordering.
K2Result k2_learn(const Dataset& data, const K2Config& cfg, const PriorSpec& prior,
                  LocalScoreCache* cache = nullptr);

// ---------------------------------------------------------------------------
// Exhaustive search

inline constexpr int kMaxEnumerateNodes = 5;
inline constexpr int kMaxExhaustiveNodes = 4;

/// Streams every labelled DAG on n nodes exactly once, by filtering all
/// off-diagonal adjacency masks for acyclicity. Refuses n > 5.
void enumerate_dags(int n, const std::function<void(const Dag&)>& visit);
std::vector<Dag> all_dags(int n);

using BigInt = boost::multiprecision::cpp_int;

// Number of labelled DAGs on n nodes by Robinson's recursion
//   r(n) = sum_{k=1..n} (-1)^{k+1} C(n,k) 2^{k(n-k)} r(n-k),  r(0) = 1.
BigInt count_dags(int n);

struct ExhaustiveResult {
  Dag best;
  double score;
  std::size_t tied;      // structures whose score equals the optimum within tie_tolerance
  std::size_t scored;    // structures examined
  std::vector<double> scores;  // one per enumerated DAG, enumeration order

  static constexpr double tie_tolerance = 1e-9;
};

// Scores every DAG on the dataset's variables. Refuses n > 4.
ExhaustiveResult exhaustive_best(const Dataset& data, const PriorSpec& prior, bool parallel = false);

}  // namespace bnsl
