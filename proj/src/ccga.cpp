#include "bnsl/ccga.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>

#include "bnsl/kernels.hpp"

namespace bnsl {

void GaConfig::validate() const {
  if (generations < 0) throw ConfigError("generations must be >= 0");
  if (population_size < 2 || population_size % 2 != 0)
    throw ConfigError("population_size must be even and >= 2, got " + std::to_string(population_size));
  auto check_prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
  };
  check_prob(crossover_prob, "crossover_prob");
  check_prob(swap_prob, "swap_prob");
  if (bitflip_prob) check_prob(*bitflip_prob, "bitflip_prob");
  prior.validate();
}

double GaConfig::bitflip_for(int n) const {
  if (bitflip_prob) return *bitflip_prob;
  const auto slots = edge_slots(n);
  return slots == 0 ? 0.0 : 1.0 / static_cast<double>(slots);
}

void ConvergenceTrace::write_csv(std::ostream& out) const {
  out << "generation,best_score,mean_score,evaluations\n";
  char line[128];
  for (const auto& r : records) {
    std::snprintf(line, sizeof line, "%d,%.6f,%.6f,%zu\n", r.generation, r.best_score, r.mean_score, r.evaluations);
    out << line;
  }
}

void ConvergenceTrace::save_csv(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(path.string() + ": cannot open file for writing");
  write_csv(out);
}

namespace {

Assembly assemble(const PermutationGenome& p, const BinaryGenome& b) { return {&p, &b}; }
Assembly assemble(const BinaryGenome& b, const PermutationGenome& p) { return {&p, &b}; }

struct EvalContext {
  const Dataset& data;
  const PriorSpec& prior;
  LocalScoreCache* cache;
  bool parallel;
  std::optional<BestSolution>* best;  // updated with every scored assembly, may be null
};

/// Scores every member against its collaborators. All random draws happen
/// before the (possibly parallel) scoring pass, so the RNG stream and the
/// results do not depend on thread scheduling.
template <class Genome, class OtherGenome>
std::vector<double> evaluate_members(const std::vector<Genome>& members, const Subpopulation<OtherGenome>& other,
                                     bool best_known, const EvalContext& ctx, Rng& rng, std::size_t& evaluations) {
  if (other.members.empty()) throw EngineError("collaborator subpopulation is empty");
  const int per_member = best_known ? kCollaborators : kCollaboratorsInitial;
  const std::size_t best = best_known ? other.best_index() : 0;
  std::uniform_int_distribution<std::size_t> draw(0, other.size() - 1);

  std::vector<Assembly> batch;
  batch.reserve(members.size() * per_member);
  for (const auto& m : members) {
    if (best_known) batch.push_back(assemble(m, other.members[best]));
    batch.push_back(assemble(m, other.members[draw(rng)]));
  }
  std::vector<double> scores(batch.size());
  if (ctx.parallel) {
    score_assemblies_parallel(ctx.data, batch, ctx.prior, ctx.cache, scores);
  } else {
    score_assemblies_serial(ctx.data, batch, ctx.prior, ctx.cache, scores);
  }
  evaluations += batch.size();

  if (ctx.best != nullptr) {
    auto& best_so_far = *ctx.best;
    for (std::size_t k = 0; k < batch.size(); ++k) {
      if (!best_so_far || scores[k] > best_so_far->score)
        best_so_far = BestSolution{*batch[k].perm, *batch[k].bin, scores[k]};
    }
  }

  std::vector<double> fitness(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    double f = scores[i * per_member];
    for (int c = 1; c < per_member; ++c) f = std::max(f, scores[i * per_member + c]);
    fitness[i] = f;
  }
  return fitness;
}

template <class Genome, class OtherGenome>
Evaluation evaluate_one(const Genome& member, const Subpopulation<OtherGenome>& other, bool best_known,
                        const Dataset& data, const PriorSpec& prior, LocalScoreCache* cache, Rng& rng) {
  if (other.members.empty()) throw EngineError("collaborator subpopulation is empty");
  std::uniform_int_distribution<std::size_t> draw(0, other.size() - 1);
  if (!best_known) {
    const std::array<Assembly, 1> batch{assemble(member, other.members[draw(rng)])};
    std::array<double, 1> score{};
    score_assemblies_serial(data, batch, prior, cache, score);
    return {score[0], false};
  }
  const std::size_t best = other.best_index();
  const std::array<Assembly, 2> batch{assemble(member, other.members[best]),
                                      assemble(member, other.members[draw(rng)])};
  std::array<double, 2> scores{};
  score_assemblies_serial(data, batch, prior, cache, scores);
  return {std::max(scores[0], scores[1]), scores[0] >= scores[1]};
}

double mean_fitness(const PermutationPopulation& a, const BinaryPopulation& b) {
  double sum = 0.0;
  for (double f : a.fitness) sum += f;
  for (double f : b.fitness) sum += f;
  return sum / static_cast<double>(a.fitness.size() + b.fitness.size());
}

template <class Genome, class Crossover, class Mutate>
std::vector<Genome> breed(const Subpopulation<Genome>& pop, double p_cross, Rng& rng, Crossover&& cross,
                          Mutate&& mutate) {
  auto pool = tournament_select(pop, rng);
  std::bernoulli_distribution do_cross(p_cross);
  std::vector<Genome> children;
  children.reserve(pool.size());
  for (std::size_t k = 0; k + 1 < pool.size(); k += 2) {
    if (do_cross(rng)) {
      auto [c1, c2] = cross(pool[k], pool[k + 1]);
      children.push_back(std::move(c1));
      children.push_back(std::move(c2));
    } else {
      children.push_back(pool[k]);
      children.push_back(pool[k + 1]);
    }
  }
  for (auto& c : children) c = mutate(std::move(c));
  return children;
}

}  // namespace

Evaluation evaluate(const PermutationGenome& member, const BinaryPopulation& other, bool best_known,
                    const Dataset& data, const PriorSpec& prior, LocalScoreCache* cache, Rng& rng) {
  return evaluate_one(member, other, best_known, data, prior, cache, rng);
}

Evaluation evaluate(const BinaryGenome& member, const PermutationPopulation& other, bool best_known,
                    const Dataset& data, const PriorSpec& prior, LocalScoreCache* cache, Rng& rng) {
  return evaluate_one(member, other, best_known, data, prior, cache, rng);
}

EvolutionState evolve(const Dataset& data, const GaConfig& cfg, LocalScoreCache* cache) {
  cfg.validate();
  if (data.empty()) throw EmptyDataError("cannot learn a structure from a dataset with zero rows");
  const int n = data.num_vars();
  if (n < 1) throw SchemaError("dataset has no variables");

  std::unique_ptr<LocalScoreCache> owned;
  if (cache == nullptr && cfg.use_cache) {
    owned = std::make_unique<LocalScoreCache>(data, cfg.prior);
    cache = owned.get();
  }

  Rng rng(cfg.seed);
  std::optional<BestSolution> best;
  const EvalContext ctx{data, cfg.prior, cache, cfg.parallel_eval, &best};
  const double p_flip = cfg.bitflip_for(n);

  EvolutionState state;
  state.perm_pop = init_permutation_pop(n, cfg.population_size, rng);
  state.bin_pop = init_binary_pop(n, cfg.population_size, rng);

  std::size_t evaluations = 0;
  state.perm_pop.fitness = evaluate_members(state.perm_pop.members, state.bin_pop, false, ctx, rng, evaluations);
  state.bin_pop.fitness = evaluate_members(state.bin_pop.members, state.perm_pop, false, ctx, rng, evaluations);
  state.trace.records.push_back({0, best->score, mean_fitness(state.perm_pop, state.bin_pop), evaluations});

  for (int gen = 1; gen <= cfg.generations; ++gen) {
    evaluations = 0;

    PermutationPopulation perm_children;
    perm_children.members = breed(
        state.perm_pop, cfg.crossover_prob, rng,
        [](const PermutationGenome& a, const PermutationGenome& b) { return cycle_crossover(a, b); },
        [&](PermutationGenome g) { return swap_mutation(std::move(g), cfg.swap_prob, rng); });
    perm_children.fitness = evaluate_members(perm_children.members, state.bin_pop, true, ctx, rng, evaluations);
    state.perm_pop = elitist_replace(state.perm_pop, std::move(perm_children));

    BinaryPopulation bin_children;
    bin_children.members = breed(
        state.bin_pop, cfg.crossover_prob, rng,
        [&](const BinaryGenome& a, const BinaryGenome& b) { return two_point_crossover(a, b, rng); },
        [&](BinaryGenome g) { return bit_flip_mutation(std::move(g), p_flip, rng); });
    bin_children.fitness = evaluate_members(bin_children.members, state.perm_pop, true, ctx, rng, evaluations);
    state.bin_pop = elitist_replace(state.bin_pop, std::move(bin_children));

    state.generation = gen;
    state.trace.records.push_back({gen, best->score, mean_fitness(state.perm_pop, state.bin_pop), evaluations});
  }
  state.best = std::move(*best);
  return state;
}

}  // namespace bnsl
