#include "bnsl/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "bnsl/error.hpp"

namespace bnsl {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Seeding

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, SeedStream stream, std::uint64_t group, std::uint64_t run) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  h = splitmix64(h ^ group);
  return splitmix64(h ^ run);
}

// ---------------------------------------------------------------------------
// Statistics

double round6(double x) { return std::round(x * 1e6) / 1e6; }

SummaryStats summarize(std::span<const double> values) {
  SummaryStats s;
  s.count = values.size();
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  // The mean of identical values can round past them.
  s.mean = std::clamp(s.mean, s.min, s.max);
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

double welch_one_tailed_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw ValidationError("Welch t-test needs at least two values per sample");
  const auto sa = summarize(a);
  const auto sb = summarize(b);
  const double va = sa.stddev * sa.stddev / static_cast<double>(a.size());
  const double vb = sb.stddev * sb.stddev / static_cast<double>(b.size());
  if (va + vb == 0.0) throw ValidationError("Welch t-test is undefined when both samples have zero variance");
  const double t = (sa.mean - sb.mean) / std::sqrt(va + vb);
  const double df = (va + vb) * (va + vb) /
                    (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
  const boost::math::students_t_distribution<double> dist(df);
  return boost::math::cdf(boost::math::complement(dist, t));
}

// ---------------------------------------------------------------------------
// Config

namespace {

template <class T>
void read_opt(const json& doc, const char* key, T& into) {
  if (auto it = doc.find(key); it != doc.end() && !it->is_null()) {
    try {
      into = it->get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
  }
}

void reject_unknown(const json& doc, std::initializer_list<const char*> known, const std::string& where) {
  if (!doc.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : doc.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
      throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

}  // namespace

GaConfig ga_config_from_json(const json& doc, GaConfig base) {
  reject_unknown(doc,
                 {"generations", "population_size", "crossover_prob", "bitflip_prob", "swap_prob", "seed",
                  "parallel_eval", "use_cache", "prior"},
                 "ga");
  read_opt(doc, "generations", base.generations);
  read_opt(doc, "population_size", base.population_size);
  read_opt(doc, "crossover_prob", base.crossover_prob);
  if (auto it = doc.find("bitflip_prob"); it != doc.end() && !it->is_null()) {
    double p = 0.0;
    read_opt(doc, "bitflip_prob", p);
    base.bitflip_prob = p;
  }
  read_opt(doc, "swap_prob", base.swap_prob);
  read_opt(doc, "seed", base.seed);
  read_opt(doc, "parallel_eval", base.parallel_eval);
  read_opt(doc, "use_cache", base.use_cache);
  read_opt(doc, "prior", base.prior.hyperparameter);
  return base;
}

void ExperimentConfig::validate() const {
  const int sources = (network ? 1 : 0) + (generator ? 1 : 0) + (dataset ? 1 : 0);
  if (sources != 1) throw ConfigError("exactly one of 'network', 'generator' or 'dataset' must be given");
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (!dataset) {
    if (sample_sizes.empty()) throw ConfigError("sample_sizes must not be empty");
    for (auto s : sample_sizes)
      if (s < 1) throw ConfigError("sample sizes must be >= 1");
  }
  if (generator) {
    if (generator->nodes < 1) throw ConfigError("generator.nodes must be >= 1");
    if (generator->max_arity < 2) throw ConfigError("generator.max_arity must be >= 2");
    if (!(generator->edge_density >= 0.0 && generator->edge_density <= 1.0))
      throw ConfigError("generator.edge_density must lie in [0, 1]");
  }
  ga.validate();
  try {
    k2.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("k2: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
  reject_unknown(doc,
                 {"network", "generator", "dataset", "sample_sizes", "runs", "seed", "ga", "k2", "prior", "out",
                  "fresh_dataset_per_run", "record_wall_time", "parallel_runs", "save_structures"},
                 "config");
  ExperimentConfig cfg;
  if (doc.contains("network")) cfg.network = doc["network"].get<std::string>();
  if (doc.contains("dataset")) cfg.dataset = doc["dataset"].get<std::string>();
  if (auto it = doc.find("generator"); it != doc.end()) {
    reject_unknown(*it, {"nodes", "max_arity", "edges", "edge_density", "seed"}, "generator");
    NetworkGenerator g;
    read_opt(*it, "nodes", g.nodes);
    read_opt(*it, "max_arity", g.max_arity);
    read_opt(*it, "edge_density", g.edge_density);
    if (it->contains("edges")) g.edges = (*it)["edges"].get<std::size_t>();
    if (it->contains("seed")) g.seed = (*it)["seed"].get<std::uint64_t>();
    cfg.generator = g;
  }
  read_opt(doc, "sample_sizes", cfg.sample_sizes);
  read_opt(doc, "runs", cfg.runs);
  read_opt(doc, "seed", cfg.seed);
  if (doc.contains("ga")) cfg.ga = ga_config_from_json(doc["ga"]);
  if (auto it = doc.find("k2"); it != doc.end()) {
    reject_unknown(*it, {"max_parents"}, "k2");
    read_opt(*it, "max_parents", cfg.k2.max_parents);
  }
  read_opt(doc, "prior", cfg.ga.prior.hyperparameter);
  if (doc.contains("out")) cfg.out_dir = doc["out"].get<std::string>();
  read_opt(doc, "fresh_dataset_per_run", cfg.fresh_dataset_per_run);
  read_opt(doc, "record_wall_time", cfg.record_wall_time);
  read_opt(doc, "parallel_runs", cfg.parallel_runs);
  read_opt(doc, "save_structures", cfg.save_structures);
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config");
  try {
    return from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Reports

namespace {

json stats_json(const SummaryStats& s) {
  return {{"count", s.count},
          {"mean", round6(s.mean)},
          {"stddev", round6(s.stddev)},
          {"min", round6(s.min)},
          {"max", round6(s.max)}};
}

// Like json::dump(2), but floats use the shortest round-trip form so rounded
// values print as written.
void write_json(std::ostream& out, const json& v, int depth) {
  const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
  const std::string close(2 * static_cast<std::size_t>(depth), ' ');
  if (v.is_number_float()) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v.get<double>());
    std::string text(buf, res.ptr);
    if (text.find_first_of(".eEn") == std::string::npos) text += ".0";
    out << text;
  } else if (v.is_object() && !v.empty()) {
    out << "{\n";
    std::size_t k = 0;
    for (const auto& [key, item] : v.items()) {
      out << pad << json(key).dump() << ": ";
      write_json(out, item, depth + 1);
      out << (++k < v.size() ? ",\n" : "\n");
    }
    out << close << '}';
  } else if (v.is_array() && !v.empty()) {
    out << "[\n";
    for (std::size_t k = 0; k < v.size(); ++k) {
      out << pad;
      write_json(out, v[k], depth + 1);
      out << (k + 1 < v.size() ? ",\n" : "\n");
    }
    out << close << ']';
  } else {
    out << v.dump();
  }
}

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

json ComparisonReport::to_json() const {
  json doc;
  doc["seed"] = seed;
  doc["runs"] = runs;
  doc["groups"] = json::array();
  for (const auto& g : groups) {
    json jg;
    jg["rows"] = g.rows;
    if (!g.dataset.empty()) jg["dataset"] = g.dataset;
    jg["ccga"] = stats_json(g.ccga);
    jg["k2"] = stats_json(g.k2);
    jg["truth"] = g.truth ? stats_json(*g.truth) : json(nullptr);
    jg["mean_difference"] = round6(g.mean_difference);
    jg["p_value"] = g.p_value ? json(*g.p_value) : json(nullptr);
    doc["groups"].push_back(std::move(jg));
  }
  return doc;
}

void write_runs_csv(std::ostream& out, std::span<const RunResult> runs, bool with_time) {
  out << "algorithm,run,dataset,best_score,seconds\n";
  for (const auto& r : runs) {
    out << r.algorithm << ',' << r.run << ',' << r.dataset << ',' << fixed6(r.best_score) << ','
        << fixed6(with_time ? r.seconds : 0.0) << '\n';
  }
}

void write_mean_trace_csv(std::ostream& out, std::span<const double> trace) {
  out << "generation,mean_best_score\n";
  for (std::size_t g = 0; g < trace.size(); ++g) out << g << ',' << fixed6(trace[g]) << '\n';
}

// ---------------------------------------------------------------------------
// Comparison

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(path.string() + ": cannot open file for writing");
  return out;
}

struct Task {
  std::size_t group;
  int run;
};

struct TaskOutput {
  RunResult ccga;
  RunResult k2;
  std::optional<RunResult> truth;
  ConvergenceTrace trace;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

ComparisonOutcome run_comparison(const ExperimentConfig& cfg) {
  cfg.validate();

  std::optional<BayesianNetwork> truth;
  std::optional<Dataset> fixed_data;
  if (cfg.network) truth = load_network(*cfg.network);
  if (cfg.generator) {
    const auto& g = *cfg.generator;
    const auto seed = g.seed.value_or(derive_seed(cfg.seed, SeedStream::network, 0, 0));
    truth = g.edges ? random_network_with_edges(g.nodes, g.max_arity, *g.edges, seed)
                    : random_network(g.nodes, g.max_arity, g.edge_density, seed);
  }
  if (cfg.dataset) fixed_data = load_dataset(*cfg.dataset);

  const std::vector<std::size_t> sizes =
      fixed_data ? std::vector<std::size_t>{fixed_data->num_rows()} : cfg.sample_sizes;

  auto dataset_id = [&](std::size_t group, int run) {
    if (fixed_data) return cfg.dataset->stem().string();
    std::string id = "n" + std::to_string(sizes[group]);
    if (cfg.fresh_dataset_per_run) id += "_r" + std::to_string(run);
    return id;
  };
  auto make_data = [&](std::size_t group, int run) {
    if (fixed_data) return *fixed_data;
    const auto seed = derive_seed(cfg.seed, SeedStream::dataset, group,
                                  cfg.fresh_dataset_per_run ? static_cast<std::uint64_t>(run) : 0);
    return ancestral_sample(*truth, sizes[group], seed);
  };

  std::vector<Task> tasks;
  for (std::size_t g = 0; g < sizes.size(); ++g)
    for (int r = 0; r < cfg.runs; ++r) tasks.push_back({g, r});

  auto run_task = [&](const Task& task) {
    const auto data = make_data(task.group, task.run);
    const auto id = dataset_id(task.group, task.run);
    LocalScoreCache cache(data, cfg.ga.prior);
    TaskOutput out;

    auto ga = cfg.ga;
    ga.seed = derive_seed(cfg.seed, SeedStream::ccga, task.group, static_cast<std::uint64_t>(task.run));
    if (cfg.parallel_runs) ga.parallel_eval = false;
    auto start = std::chrono::steady_clock::now();
    auto state = evolve(data, ga, ga.use_cache ? &cache : nullptr);
    out.ccga = {"ccga", task.run, id, sizes[task.group], state.best.score, seconds_since(start),
                decode(state.best.perm, state.best.bin)};
    out.trace = std::move(state.trace);

    auto k2 = cfg.k2;
    k2.seed = derive_seed(cfg.seed, SeedStream::k2, task.group, static_cast<std::uint64_t>(task.run));
    start = std::chrono::steady_clock::now();
    auto learned = k2_learn(data, k2, cfg.ga.prior, &cache);
    out.k2 = {"k2", task.run, id, sizes[task.group], learned.score, seconds_since(start), std::move(learned.dag)};

    if (truth) {
      out.truth = RunResult{"truth", task.run, id, sizes[task.group],
                            bde_log_score(data, truth->dag(), cfg.ga.prior, &cache), 0.0, truth->dag()};
    }
    return out;
  };

  std::vector<std::optional<TaskOutput>> outputs(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  const auto task_count = static_cast<std::int64_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) if (cfg.parallel_runs)
  for (std::int64_t t = 0; t < task_count; ++t) {
    try {
      outputs[t] = run_task(tasks[t]);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  }

  ComparisonOutcome outcome;
  for (auto& o : outputs) {
    if (!o) continue;
    outcome.runs.push_back(o->ccga);
    outcome.runs.push_back(o->k2);
    if (o->truth) outcome.runs.push_back(*o->truth);
  }

  std::filesystem::create_directories(cfg.out_dir);
  {
    auto out = open_out(cfg.out_dir / "runs.csv");
    write_runs_csv(out, outcome.runs, cfg.record_wall_time);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  outcome.report.seed = cfg.seed;
  outcome.report.runs = cfg.runs;
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    std::vector<double> ccga, k2, original;
    std::vector<double> mean_trace;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      if (tasks[t].group != g) continue;
      const auto& o = *outputs[t];
      ccga.push_back(round6(o.ccga.best_score));
      k2.push_back(round6(o.k2.best_score));
      if (o.truth) original.push_back(round6(o.truth->best_score));
      if (mean_trace.empty()) mean_trace.assign(o.trace.records.size(), 0.0);
      for (std::size_t k = 0; k < o.trace.records.size(); ++k) mean_trace[k] += o.trace.records[k].best_score;
      outcome.ccga_traces.push_back(o.trace);
    }
    for (auto& v : mean_trace) v /= static_cast<double>(cfg.runs);

    GroupReport rep;
    rep.rows = sizes[g];
    if (fixed_data || !cfg.fresh_dataset_per_run) rep.dataset = dataset_id(g, 0);
    rep.ccga = summarize(ccga);
    rep.k2 = summarize(k2);
    if (!original.empty()) rep.truth = summarize(original);
    rep.mean_difference = rep.ccga.mean - rep.k2.mean;
    if (ccga.size() >= 2) {
      try {
        rep.p_value = welch_one_tailed_t(ccga, k2);
      } catch (const ValidationError&) {
        // Both samples constant: no test statistic.
      }
    }
    outcome.report.groups.push_back(rep);
    outcome.mean_traces.push_back(std::move(mean_trace));
  }

  {
    auto out = open_out(cfg.out_dir / "report.json");
    write_json(out, outcome.report.to_json(), 0);
    out << '\n';
  }
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    const auto name = sizes.size() == 1 ? std::string("trace_mean.csv")
                                        : "trace_mean_" + std::to_string(sizes[g]) + ".csv";
    auto out = open_out(cfg.out_dir / name);
    write_mean_trace_csv(out, outcome.mean_traces[g]);
  }
  if (cfg.save_structures) {
    const auto& vars = fixed_data ? fixed_data->variables() : truth->variables();
    for (const auto& r : outcome.runs) {
      if (r.algorithm == "truth") continue;
      save_structure(cfg.out_dir / "structures" / (r.algorithm + "_" + r.dataset + "_run" + std::to_string(r.run) + ".json"),
                     Structure{vars, r.structure});
    }
  }
  return outcome;
}

// ---------------------------------------------------------------------------

double score_structure(const Structure& structure, const Dataset& data, const PriorSpec& prior) {
  if (structure.variables.size() != data.variables().size()) {
    throw SchemaError("structure has " + std::to_string(structure.variables.size()) + " nodes, dataset has " +
                      std::to_string(data.variables().size()) + " columns");
  }
  for (std::size_t i = 0; i < structure.variables.size(); ++i) {
    if (structure.variables[i] != data.variables()[i]) {
      throw SchemaError("variable " + std::to_string(i) + " differs between structure ('" +
                        structure.variables[i].name + ":" + std::to_string(structure.variables[i].arity) +
                        "') and dataset ('" + data.variables()[i].name + ":" +
                        std::to_string(data.variables()[i].arity) + "')");
    }
  }
  return bde_log_score(data, structure.dag, prior);
}

double score_structure(const std::filesystem::path& structure_file, const std::filesystem::path& dataset_file,
                       const PriorSpec& prior) {
  return score_structure(load_structure(structure_file), load_dataset(dataset_file), prior);
}

BayesianNetwork fit_parameters(const std::vector<Variable>& variables, const Dag& dag, const Dataset& data,
                               const PriorSpec& prior) {
  prior.validate();
  if (variables != data.variables()) throw SchemaError("structure variables do not match the dataset schema");
  std::vector<Cpt> cpts;
  for (int i = 0; i < dag.size(); ++i) {
    const auto stats = count_stats(data, i, dag.parents(i));
    Cpt cpt;
    cpt.rows = static_cast<int>(stats.configs);
    cpt.cols = stats.arity;
    cpt.probs.resize(stats.counts.size());
    const double row_prior = prior.row_total(stats.arity);
    for (std::size_t j = 0; j < stats.configs; ++j)
      for (int k = 0; k < stats.arity; ++k)
        cpt.probs[j * stats.arity + k] = (prior.hyperparameter + static_cast<double>(stats.count(j, k))) /
                                         (row_prior + static_cast<double>(stats.row_totals[j]));
    cpts.push_back(std::move(cpt));
  }
  return BayesianNetwork(variables, dag, std::move(cpts), true);
}

}  // namespace bnsl
