#include "bnsl/operators.hpp"

#include <numeric>

namespace bnsl {

PermutationPopulation init_permutation_pop(int n, int size, Rng& rng) {
  if (size < 2) throw ConfigError("population size must be >= 2");
  PermutationPopulation pop;
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int k = 0; k < size; ++k) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    pop.members.emplace_back(order);
  }
  return pop;
}

BinaryPopulation init_binary_pop(int n, int size, Rng& rng) {
  if (size < 2) throw ConfigError("population size must be >= 2");
  if (n < 1) throw ConfigError("binary population needs at least one node");
  BinaryPopulation pop;
  for (int k = 0; k < size; ++k) {
    BinaryGenome g(n);
    for (int j = 2; j <= n; ++j) {
      std::uniform_int_distribution<int> pick(1, j - 1);
      g.set(triangular_index(pick(rng), j, n), true);
    }
    pop.members.push_back(std::move(g));
  }
  return pop;
}

std::vector<std::size_t> tournament_indices(std::span<const double> fitness, Rng& rng) {
  const std::size_t size = fitness.size();
  if (size < 2 || size % 2 != 0) throw ConfigError("tournament selection needs an even population size >= 2");
  std::vector<std::size_t> winners;
  winners.reserve(size);
  std::vector<std::size_t> lineup(size);
  std::bernoulli_distribution coin(0.5);
  for (int round = 0; round < 2; ++round) {
    std::iota(lineup.begin(), lineup.end(), std::size_t{0});
    std::shuffle(lineup.begin(), lineup.end(), rng);
    for (std::size_t k = 0; k < size; k += 2) {
      const auto a = lineup[k];
      const auto b = lineup[k + 1];
      if (fitness[a] > fitness[b]) {
        winners.push_back(a);
      } else if (fitness[b] > fitness[a]) {
        winners.push_back(b);
      } else {
        winners.push_back(coin(rng) ? a : b);
      }
    }
  }
  return winners;
}

std::pair<BinaryGenome, BinaryGenome> two_point_crossover_at(const BinaryGenome& a, const BinaryGenome& b,
                                                             std::size_t first, std::size_t second) {
  if (a.size() != b.size() || a.nodes() != b.nodes()) throw EncodingError("two-point crossover: parent lengths differ");
  if (!(0 < first && first < second && second <= a.size()))
    throw EncodingError("two-point crossover: invalid cut points");
  BinaryGenome c1 = a;
  BinaryGenome c2 = b;
  for (std::size_t k = first; k < second; ++k) {
    c1.set(k, b[k]);
    c2.set(k, a[k]);
  }
  return {std::move(c1), std::move(c2)};
}

std::pair<BinaryGenome, BinaryGenome> two_point_crossover(const BinaryGenome& a, const BinaryGenome& b, Rng& rng) {
  if (a.size() != b.size() || a.nodes() != b.nodes()) throw EncodingError("two-point crossover: parent lengths differ");
  const std::size_t len = a.size();
  if (len < 2) return {a, b};
  if (len == 2) return two_point_crossover_at(a, b, 1, 2);
  std::uniform_int_distribution<std::size_t> cut(1, len - 1);
  std::size_t first = cut(rng);
  std::size_t second = cut(rng);
  while (second == first) second = cut(rng);
  if (second < first) std::swap(first, second);
  return two_point_crossover_at(a, b, first, second);
}

std::vector<std::vector<std::size_t>> permutation_cycles(const PermutationGenome& a, const PermutationGenome& b) {
  const auto n = static_cast<std::size_t>(a.size());
  if (b.size() != a.size()) throw EncodingError("cycle crossover: parents differ in length");
  std::vector<std::size_t> position_in_a(n);
  for (std::size_t p = 0; p < n; ++p) position_in_a[a[p]] = p;
  std::vector<bool> used(n, false);
  std::vector<std::vector<std::size_t>> cycles;
  for (std::size_t start = 0; start < n; ++start) {
    if (used[start]) continue;
    std::vector<std::size_t> cycle;
    std::size_t p = start;
    do {
      used[p] = true;
      cycle.push_back(p);
      p = position_in_a[b[p]];
    } while (p != start);
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

std::pair<PermutationGenome, PermutationGenome> cycle_crossover(const PermutationGenome& a,
                                                                const PermutationGenome& b) {
  auto c1 = a.order();
  auto c2 = b.order();
  const auto cycles = permutation_cycles(a, b);
  for (std::size_t c = 1; c < cycles.size(); c += 2) {
    for (auto p : cycles[c]) {
      c1[p] = b[p];
      c2[p] = a[p];
    }
  }
  return {PermutationGenome(std::move(c1)), PermutationGenome(std::move(c2))};
}

BinaryGenome bit_flip_mutation(BinaryGenome g, double p_flip, Rng& rng) {
  if (!(p_flip >= 0.0 && p_flip <= 1.0)) throw ConfigError("bit-flip probability must lie in [0, 1]");
  std::bernoulli_distribution flip(p_flip);
  for (std::size_t k = 0; k < g.size(); ++k)
    if (flip(rng)) g.flip(k);
  return g;
}

PermutationGenome swap_mutation(PermutationGenome g, double p_swap, Rng& rng) {
  if (!(p_swap >= 0.0 && p_swap <= 1.0)) throw ConfigError("swap probability must lie in [0, 1]");
  const int n = g.size();
  std::bernoulli_distribution act(p_swap);
  if (n < 2 || !act(rng)) return g;
  std::uniform_int_distribution<int> pos(0, n - 1);
  const int i = pos(rng);
  int j = pos(rng);
  while (j == i) j = pos(rng);
  auto order = g.order();
  std::swap(order[i], order[j]);
  return PermutationGenome(std::move(order));
}

}  // namespace bnsl
