#include "bnsl/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "bnsl/error.hpp"
#include "bnsl/kernels.hpp"

namespace bnsl {

void K2Config::validate() const {
  if (max_parents < 0) throw ConfigError("max_parents must be >= 0");
}

K2Result k2_learn(const Dataset& data, const K2Config& cfg, const PriorSpec& prior, LocalScoreCache* cache) {
  cfg.validate();
  if (data.empty()) throw EmptyDataError("cannot learn a structure from a dataset with zero rows");
  const int n = data.num_vars();

  PermutationGenome ordering;
  if (cfg.ordering) {
    if (cfg.ordering->size() != n)
      throw ValidationError("K2 ordering has " + std::to_string(cfg.ordering->size()) + " nodes, dataset has " +
                            std::to_string(n));
    ordering = *cfg.ordering;
  } else {
    std::mt19937_64 rng(cfg.seed);
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    ordering = PermutationGenome(std::move(order));
  }

  std::vector<std::vector<int>> parents(static_cast<std::size_t>(n));
  std::vector<K2Step> steps;
  double total = 0.0;
  for (int pos = 0; pos < n; ++pos) {
    const int node = ordering[pos];
    auto& ps = parents[node];
    double current = local_log_score(data, node, ps, prior, cache);
    while (static_cast<int>(ps.size()) < cfg.max_parents) {
      int best_candidate = -1;
      double best_score = current;
      for (int earlier = 0; earlier < pos; ++earlier) {
        const int candidate = ordering[earlier];
        if (std::find(ps.begin(), ps.end(), candidate) != ps.end()) continue;
        auto trial = ps;
        trial.insert(std::upper_bound(trial.begin(), trial.end(), candidate), candidate);
        const double s = local_log_score(data, node, trial, prior, cache);
        if (s > best_score) {
          best_score = s;
          best_candidate = candidate;
        }
      }
      if (best_candidate < 0) break;
      ps.insert(std::upper_bound(ps.begin(), ps.end(), best_candidate), best_candidate);
      steps.push_back({node, best_candidate, current, best_score});
      current = best_score;
    }
    total += current;
  }
  return {Dag(std::move(parents)), total, std::move(ordering), std::move(steps)};
}

// ---------------------------------------------------------------------------

void enumerate_dags(int n, const std::function<void(const Dag&)>& visit) {
  if (n < 0) throw ValidationError("enumerate_dags: n must be >= 0");
  if (n > kMaxEnumerateNodes) {
    throw ValidationError("enumerate_dags: refusing n=" + std::to_string(n) + "; the number of DAGs grows "
                          "super-exponentially and n <= " + std::to_string(kMaxEnumerateNodes) + " is supported");
  }
  std::vector<std::pair<int, int>> slots;  // (from, to) for each mask bit
  for (int to = 0; to < n; ++to)
    for (int from = 0; from < n; ++from)
      if (from != to) slots.emplace_back(from, to);
  const std::uint64_t masks = std::uint64_t{1} << slots.size();
  std::vector<std::vector<int>> parents(static_cast<std::size_t>(n));
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    for (auto& ps : parents) ps.clear();
    bool two_cycle = false;
    for (std::size_t b = 0; b < slots.size() && !two_cycle; ++b) {
      if (!(mask >> b & 1)) continue;
      const auto [from, to] = slots[b];
      if (std::find(parents[from].begin(), parents[from].end(), to) != parents[from].end()) two_cycle = true;
      parents[to].push_back(from);
    }
    if (two_cycle || !Dag::is_acyclic(parents)) continue;
    visit(Dag(parents));
  }
}

std::vector<Dag> all_dags(int n) {
  std::vector<Dag> out;
  enumerate_dags(n, [&](const Dag& d) { out.push_back(d); });
  return out;
}

BigInt count_dags(int n) {
  if (n < 0) throw ValidationError("count_dags: n must be >= 0");
  std::vector<BigInt> r(static_cast<std::size_t>(n) + 1);
  r[0] = 1;
  for (int m = 1; m <= n; ++m) {
    BigInt sum = 0;
    BigInt binom = 1;  // C(m, k)
    for (int k = 1; k <= m; ++k) {
      binom = binom * (m - k + 1) / k;
      BigInt term = binom * (BigInt(1) << (k * (m - k))) * r[m - k];
      if (k % 2 == 1) {
        sum += term;
      } else {
        sum -= term;
      }
    }
    r[m] = sum;
  }
  return r[n];
}

ExhaustiveResult exhaustive_best(const Dataset& data, const PriorSpec& prior, bool parallel) {
  const int n = data.num_vars();
  if (n > kMaxExhaustiveNodes) {
    throw ValidationError("exhaustive_best: refusing n=" + std::to_string(n) + "; at most " +
                          std::to_string(kMaxExhaustiveNodes) + " variables are supported");
  }
  if (data.empty()) throw EmptyDataError("cannot score a dataset with zero rows");
  const auto dags = all_dags(n);
  LocalScoreCache cache(data, prior);
  std::vector<double> scores(dags.size());
  if (parallel) {
    score_dags_parallel(data, dags, prior, &cache, scores);
  } else {
    score_dags_serial(data, dags, prior, &cache, scores);
  }
  const auto best = static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
  std::size_t tied = 0;
  for (double s : scores)
    if (std::abs(s - scores[best]) <= ExhaustiveResult::tie_tolerance) ++tied;
  return {dags[best], scores[best], tied, dags.size(), std::move(scores)};
}

}  // namespace bnsl
