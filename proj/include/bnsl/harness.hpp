#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bnsl/baselines.hpp"
#include "bnsl/ccga.hpp"
#include "bnsl/network_io.hpp"

namespace bnsl {

// ---------------------------------------------------------------------------
// Seeding

enum class SeedStream : std::uint64_t { dataset = 1, ccga = 2, k2 = 3, network = 4 };

/// Per-run seed from the master seed. Each (stream, group, run) triple is
/// mixed independently, so adding runs or groups never shifts earlier seeds.
std::uint64_t derive_seed(std::uint64_t master, SeedStream stream, std::uint64_t group, std::uint64_t run);

// ---------------------------------------------------------------------------
// Statistics

struct SummaryStats {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1), 0 for a single value
  double min = 0.0;
  double max = 0.0;
};

SummaryStats summarize(std::span<const double> values);

/// One-tailed Welch test of H1: mean(a) > mean(b), with Welch-Satterthwaite
/// degrees of freedom. Throws ValidationError when either sample has fewer
/// than two values or both have zero variance.
double welch_one_tailed_t(std::span<const double> a, std::span<const double> b);

// Rounds to the 6 decimal places used in every report file.
double round6(double x);

// ---------------------------------------------------------------------------
// Experiments

struct NetworkGenerator {
  int nodes = 10;
  int max_arity = 3;
  std::optional<std::size_t> edges;  // exact edge count; takes precedence over edge_density
  double edge_density = 0.3;
  std::optional<std::uint64_t> seed;  // defaults to a stream of the master seed
};

struct ExperimentConfig {
  std::optional<std::filesystem::path> network;   // ground truth network file
  std::optional<NetworkGenerator> generator;       // or a synthetic one
  std::optional<std::filesystem::path> dataset;    // or a fixed dataset (no ground truth)
  std::vector<std::size_t> sample_sizes{1000, 3000, 5000};
  int runs = 100;
  std::uint64_t seed = 1;
  GaConfig ga;
  K2Config k2;
  std::filesystem::path out_dir = "results";
  bool fresh_dataset_per_run = true;
  bool record_wall_time = true;
  bool parallel_runs = false;
  bool save_structures = true;

  void validate() const;
  static ExperimentConfig from_json(const nlohmann::json& doc);
  static ExperimentConfig load(const std::filesystem::path& path);
};

GaConfig ga_config_from_json(const nlohmann::json& doc, GaConfig base = {});

struct RunResult {
  std::string algorithm;  // "ccga", "k2" or "truth"
  int run = 0;
  std::string dataset;
  std::size_t rows = 0;
  double best_score = 0.0;
  double seconds = 0.0;
  Dag structure;
};

struct GroupReport {
  std::size_t rows = 0;
  std::string dataset;  // dataset id when every run shares one dataset
  SummaryStats ccga;
  SummaryStats k2;
  std::optional<SummaryStats> truth;
  std::optional<double> p_value;
  double mean_difference = 0.0;  // ccga.mean - k2.mean
};

struct ComparisonReport {
  std::uint64_t seed = 0;
  int runs = 0;
  std::vector<GroupReport> groups;

  nlohmann::json to_json() const;
};

struct ComparisonOutcome {
  ComparisonReport report;
  std::vector<RunResult> runs;
  // Per group: mean over runs of each generation's best-so-far score.
  std::vector<std::vector<double>> mean_traces;
  std::vector<ConvergenceTrace> ccga_traces;  // per (group, run), group-major
};

/// Runs CCGA and K2 on the same dataset for every (sample size, run) pair and
/// writes runs.csv, report.json, the mean convergence trace and, optionally,
/// the learned structures into cfg.out_dir. Completed runs are flushed to
/// runs.csv before an error propagates.
ComparisonOutcome run_comparison(const ExperimentConfig& cfg);

void write_runs_csv(std::ostream& out, std::span<const RunResult> runs, bool with_time);
void write_mean_trace_csv(std::ostream& out, std::span<const double> trace);

// BDe log-score of a structure (or network) file on a dataset file.
double score_structure(const std::filesystem::path& structure_file, const std::filesystem::path& dataset_file,
                       const PriorSpec& prior = {});
double score_structure(const Structure& structure, const Dataset& data, const PriorSpec& prior = {});

// Maximum posterior-mean CPTs for a structure.
BayesianNetwork fit_parameters(const std::vector<Variable>& variables, const Dag& dag, const Dataset& data,
                               const PriorSpec& prior = {});

}  // namespace bnsl
