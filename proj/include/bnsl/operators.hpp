#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "bnsl/encoding.hpp"
#include "bnsl/error.hpp"

namespace bnsl {

using Rng = std::mt19937_64;

enum class Species { permutation, binary };

template <class Genome>
struct Subpopulation {
  std::vector<Genome> members;
  std::vector<double> fitness;  // aligned with members once evaluated

  std::size_t size() const { return members.size(); }

  // Highest fitness, lowest index on ties.
  std::size_t best_index() const {
    if (fitness.size() != members.size() || members.empty())
      throw EngineError("subpopulation has not been evaluated");
    return static_cast<std::size_t>(std::max_element(fitness.begin(), fitness.end()) - fitness.begin());
  }
};

using PermutationPopulation = Subpopulation<PermutationGenome>;
using BinaryPopulation = Subpopulation<BinaryGenome>;

// Uniformly random orderings. Fitness is left empty.
PermutationPopulation init_permutation_pop(int n, int size, Rng& rng);

/// Random spanning trees relative to the ordering: for every position j >= 2
/// exactly one bit c_{i,j} is set, with i uniform in 1..j-1. Decoded graphs
/// therefore have n-1 edges and a single parentless node at position 1.
BinaryPopulation init_binary_pop(int n, int size, Rng& rng);

/// Each member plays exactly two tournaments: the population is shuffled twice
/// and adjacent members are paired. Returns the winners' indices in play order
/// (size == fitness.size()). Ties are settled by a coin flip. Size must be even.
std::vector<std::size_t> tournament_indices(std::span<const double> fitness, Rng& rng);

template <class Genome>
std::vector<Genome> tournament_select(const Subpopulation<Genome>& pop, Rng& rng) {
  if (pop.fitness.size() != pop.members.size()) throw EngineError("tournament on unevaluated subpopulation");
  std::vector<Genome> pool;
  pool.reserve(pop.size());
  for (auto idx : tournament_indices(pop.fitness, rng)) pool.push_back(pop.members[idx]);
  return pool;
}

/// Swaps the middle of three segments: [0, first) and [second, L) come from the
/// same parent, [first, second) from the other. Requires 0 < first < second <= L.
std::pair<BinaryGenome, BinaryGenome> two_point_crossover_at(const BinaryGenome& a, const BinaryGenome& b,
                                                             std::size_t first, std::size_t second);

// Cut points drawn without replacement from the interior boundaries 1..L-1.
// Genomes shorter than two bits are returned as copies.
std::pair<BinaryGenome, BinaryGenome> two_point_crossover(const BinaryGenome& a, const BinaryGenome& b, Rng& rng);

// Position cycles between two permutations, in discovery order. Positions are 0-based.
std::vector<std::vector<std::size_t>> permutation_cycles(const PermutationGenome& a, const PermutationGenome& b);

// First child takes cycles 1, 3, 5, ... from `a` and the rest from `b`; the
// second child is the complement.
std::pair<PermutationGenome, PermutationGenome> cycle_crossover(const PermutationGenome& a,
                                                                const PermutationGenome& b);

BinaryGenome bit_flip_mutation(BinaryGenome g, double p_flip, Rng& rng);
PermutationGenome swap_mutation(PermutationGenome g, double p_swap, Rng& rng);

/// Previous best member (fitness carried over) at index 0, followed by every
/// offspring except the single worst one (lowest index on ties).
template <class Genome>
Subpopulation<Genome> elitist_replace(const Subpopulation<Genome>& prev, Subpopulation<Genome> offspring) {
  if (offspring.size() != prev.size() || offspring.fitness.size() != offspring.size())
    throw EngineError("elitist_replace: offspring must match the population size and be evaluated");
  const auto elite = prev.best_index();
  const auto worst = static_cast<std::size_t>(
      std::min_element(offspring.fitness.begin(), offspring.fitness.end()) - offspring.fitness.begin());
  Subpopulation<Genome> next;
  next.members.reserve(prev.size());
  next.fitness.reserve(prev.size());
  next.members.push_back(prev.members[elite]);
  next.fitness.push_back(prev.fitness[elite]);
  for (std::size_t k = 0; k < offspring.size(); ++k) {
    if (k == worst) continue;
    next.members.push_back(std::move(offspring.members[k]));
    next.fitness.push_back(offspring.fitness[k]);
  }
  return next;
}

}  // namespace bnsl
