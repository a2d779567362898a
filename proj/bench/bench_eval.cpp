// Throughput of the batch scoring kernels: serial reference vs OpenMP, with and
// without the local-score cache, on one generation's worth of assemblies.
//
//   bnsl_bench [nodes] [rows] [population] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "bnsl/bayesnet.hpp"
#include "bnsl/kernels.hpp"
#include "bnsl/operators.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct Batch {
  bnsl::PermutationPopulation perms;
  bnsl::BinaryPopulation bins;
  std::vector<bnsl::Assembly> assemblies;
};

Batch make_batch(int n, int population, std::uint64_t seed) {
  bnsl::Rng rng(seed);
  Batch b;
  b.perms = bnsl::init_permutation_pop(n, population, rng);
  b.bins = bnsl::init_binary_pop(n, population, rng);
  // Sparse-ish random edits so the batch is not all trees.
  for (auto& g : b.bins.members) g = bnsl::bit_flip_mutation(std::move(g), 2.0 / static_cast<double>(g.size()), rng);
  std::uniform_int_distribution<int> pick(0, population - 1);
  for (int k = 0; k < 2 * population; ++k)
    b.assemblies.push_back({&b.perms.members[pick(rng)], &b.bins.members[pick(rng)]});
  return b;
}

template <class F>
double time_it(int repeats, F&& f) {
  const auto start = Clock::now();
  for (int r = 0; r < repeats; ++r) f();
  return std::chrono::duration<double>(Clock::now() - start).count() / repeats;
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 20;
  const std::size_t rows = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 2000;
  const int population = argc > 3 ? std::atoi(argv[3]) : 100;
  const int repeats = argc > 4 ? std::atoi(argv[4]) : 5;

  const auto net = bnsl::random_network(n, 3, 2.5 / n, 7);
  const auto data = bnsl::ancestral_sample(net, rows, 11);
  const auto batch = make_batch(n, population, 13);
  const bnsl::PriorSpec prior;
  std::vector<double> serial(batch.assemblies.size());
  std::vector<double> parallel(batch.assemblies.size());

  std::printf("nodes=%d rows=%zu assemblies=%zu threads=%d\n", n, rows, batch.assemblies.size(),
              bnsl::max_threads());

  const double t_serial = time_it(repeats, [&] {
    bnsl::score_assemblies_serial(data, batch.assemblies, prior, nullptr, serial);
  });
  const double t_parallel = time_it(repeats, [&] {
    bnsl::score_assemblies_parallel(data, batch.assemblies, prior, nullptr, parallel);
  });
  std::printf("uncached  serial %9.4f s  parallel %9.4f s  speedup %.2fx\n", t_serial, t_parallel,
              t_serial / t_parallel);

  bnsl::LocalScoreCache warm_serial(data, prior);
  bnsl::LocalScoreCache warm_parallel(data, prior);
  bnsl::score_assemblies_serial(data, batch.assemblies, prior, &warm_serial, serial);
  bnsl::score_assemblies_parallel(data, batch.assemblies, prior, &warm_parallel, parallel);
  const double c_serial = time_it(repeats, [&] {
    bnsl::score_assemblies_serial(data, batch.assemblies, prior, &warm_serial, serial);
  });
  const double c_parallel = time_it(repeats, [&] {
    bnsl::score_assemblies_parallel(data, batch.assemblies, prior, &warm_parallel, parallel);
  });
  std::printf("cached    serial %9.4f s  parallel %9.4f s  speedup %.2fx\n", c_serial, c_parallel,
              c_serial / c_parallel);
  std::printf("cache speedup (serial) %.1fx\n", t_serial / c_serial);

  for (std::size_t k = 0; k < serial.size(); ++k) {
    if (serial[k] != parallel[k]) {
      std::fprintf(stderr, "mismatch at %zu: %.17g vs %.17g\n", k, serial[k], parallel[k]);
      return 1;
    }
  }
  return 0;
}
