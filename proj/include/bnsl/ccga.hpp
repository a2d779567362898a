#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "bnsl/operators.hpp"
#include "bnsl/scoring.hpp"

namespace bnsl {

/// Cooperative coevolution parameters. Defaults are the reference settings:
/// 250 generations, 100 members per species, p_c = 0.6, p_mb = 1/E, p_mp = 0.5.
struct GaConfig {
  int generations = 250;
  int population_size = 100;
  double crossover_prob = 0.6;
  std::optional<double> bitflip_prob;  // unset means 1/E
  double swap_prob = 0.5;
  std::uint64_t seed = 1;
  bool parallel_eval = false;
  bool use_cache = true;
  PriorSpec prior;

  void validate() const;
  double bitflip_for(int n) const;
};

struct TraceRecord {
  int generation;
  double best_score;   // best complete solution scored so far
  double mean_score;   // mean fitness over both subpopulations
  std::size_t evaluations;  // complete solutions scored during this generation

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct ConvergenceTrace {
  std::vector<TraceRecord> records;

  void write_csv(std::ostream& out) const;
  void save_csv(const std::filesystem::path& path) const;
};

struct BestSolution {
  PermutationGenome perm;
  BinaryGenome bin;
  double score;
};

struct EvolutionState {
  int generation = 0;
  PermutationPopulation perm_pop;
  BinaryPopulation bin_pop;
  BestSolution best;
  ConvergenceTrace trace;
};

struct Evaluation {
  double score;
  // Which collaborator produced `score`: the other species' best (true) or the random draw.
  bool from_best;
};

// Complete solutions scored per member: one random collaborator in generation 0,
// then the other species' best plus one random member.
inline constexpr int kCollaboratorsInitial = 1;
inline constexpr int kCollaborators = 2;

/// CCGA-2 credit assignment for one member: the maximum score over the
/// assemblies with `other`'s best member (when best_known) and with a
/// uniformly drawn member of `other`.
Evaluation evaluate(const PermutationGenome& member, const BinaryPopulation& other, bool best_known,
                    const Dataset& data, const PriorSpec& prior, LocalScoreCache* cache, Rng& rng);
Evaluation evaluate(const BinaryGenome& member, const PermutationPopulation& other, bool best_known,
                    const Dataset& data, const PriorSpec& prior, LocalScoreCache* cache, Rng& rng);

// Runs the full coevolution loop. Pass a cache bound to (data, cfg.prior) to
// share it across calls; otherwise one is created when cfg.use_cache is set.
EvolutionState evolve(const Dataset& data, const GaConfig& cfg, LocalScoreCache* cache = nullptr);

}  // namespace bnsl
