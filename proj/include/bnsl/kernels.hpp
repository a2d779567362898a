#pragma once

#include <span>

#include "bnsl/encoding.hpp"
#include "bnsl/scoring.hpp"

namespace bnsl {

// One complete solution to score: a permutation paired with a bitstring.
struct Assembly {
  const PermutationGenome* perm;
  const BinaryGenome* bin;
};

// Batch scoring kernels. The serial versions are the reference; the OpenMP
// versions must produce bit-identical output for the same inputs, since every
// entry is a pure function of its own assembly and the cache only memoizes.

void score_assemblies_serial(const Dataset& data, std::span<const Assembly> batch, const PriorSpec& prior,
                             LocalScoreCache* cache, std::span<double> out);
void score_assemblies_parallel(const Dataset& data, std::span<const Assembly> batch, const PriorSpec& prior,
                               LocalScoreCache* cache, std::span<double> out);

void score_dags_serial(const Dataset& data, std::span<const Dag> dags, const PriorSpec& prior,
                       LocalScoreCache* cache, std::span<double> out);
void score_dags_parallel(const Dataset& data, std::span<const Dag> dags, const PriorSpec& prior,
                         LocalScoreCache* cache, std::span<double> out);

int max_threads();

}  // namespace bnsl
