#include "bnsl/kernels.hpp"

#include <exception>

#include <omp.h>

#include "bnsl/error.hpp"

namespace bnsl {

namespace {

void check_sizes(std::size_t batch, std::size_t out) {
  if (batch != out) throw EngineError("score kernel: output span does not match batch size");
}

// Exceptions may not cross an OpenMP region; the first one is rethrown after it.
class FirstError {
 public:
  template <class F>
  void run(F&& f) {
    try {
      f();
    } catch (...) {
#pragma omp critical(bnsl_first_error)
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace

void score_assemblies_serial(const Dataset& data, std::span<const Assembly> batch, const PriorSpec& prior,
                             LocalScoreCache* cache, std::span<double> out) {
  check_sizes(batch.size(), out.size());
  std::vector<std::vector<int>> parents;
  for (std::size_t k = 0; k < batch.size(); ++k) {
    decode_parents(*batch[k].perm, *batch[k].bin, parents);
    out[k] = bde_log_score(data, parents, prior, cache);
  }
}

void score_assemblies_parallel(const Dataset& data, std::span<const Assembly> batch, const PriorSpec& prior,
                               LocalScoreCache* cache, std::span<double> out) {
  check_sizes(batch.size(), out.size());
  const auto count = static_cast<std::int64_t>(batch.size());
  FirstError errors;
#pragma omp parallel
  {
    std::vector<std::vector<int>> parents;
#pragma omp for schedule(dynamic, 4)
    for (std::int64_t k = 0; k < count; ++k) {
      errors.run([&] {
        decode_parents(*batch[k].perm, *batch[k].bin, parents);
        out[k] = bde_log_score(data, parents, prior, cache);
      });
    }
  }
  errors.rethrow();
}

void score_dags_serial(const Dataset& data, std::span<const Dag> dags, const PriorSpec& prior,
                       LocalScoreCache* cache, std::span<double> out) {
  check_sizes(dags.size(), out.size());
  for (std::size_t k = 0; k < dags.size(); ++k) out[k] = bde_log_score(data, dags[k], prior, cache);
}

void score_dags_parallel(const Dataset& data, std::span<const Dag> dags, const PriorSpec& prior,
                         LocalScoreCache* cache, std::span<double> out) {
  check_sizes(dags.size(), out.size());
  const auto count = static_cast<std::int64_t>(dags.size());
  FirstError errors;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t k = 0; k < count; ++k) {
    errors.run([&] { out[k] = bde_log_score(data, dags[k], prior, cache); });
  }
  errors.rethrow();
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace bnsl
