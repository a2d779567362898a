#include "bnsl/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bnsl/error.hpp"
#include "bnsl/harness.hpp"

namespace bnsl {

namespace {

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

nlohmann::json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string edge_list(const Dag& dag, const std::vector<Variable>& vars) {
  std::string s;
  for (int child = 0; child < dag.size(); ++child)
    for (int p : dag.parents(child)) s += (s.empty() ? "" : " ") + vars[p].name + "->" + vars[child].name;
  return s.empty() ? "(no edges)" : s;
}

PermutationGenome ordering_from_names(const std::vector<std::string>& names, const std::vector<Variable>& vars) {
  std::vector<int> order;
  for (const auto& name : names) {
    auto it = std::find_if(vars.begin(), vars.end(), [&](const Variable& v) { return v.name == name; });
    if (it == vars.end()) throw UsageError("--ordering: unknown variable '" + name + "'");
    order.push_back(static_cast<int>(it - vars.begin()));
  }
  if (static_cast<int>(order.size()) != static_cast<int>(vars.size()) || !PermutationGenome::is_permutation(order))
    throw UsageError("--ordering must name every variable exactly once");
  return PermutationGenome(std::move(order));
}

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out_dir = ".";
};

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian network structure learning by cooperative coevolution, with K2 and exhaustive baselines",
               "bnsl"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--config", g.config, "JSON configuration file");
  app.add_option("--out", g.out_dir, "Output directory");

  // count-dags
  auto* count_cmd = app.add_subcommand("count-dags", "Number of labelled DAGs on n nodes");
  int count_n = 0;
  count_cmd->add_option("n", count_n, "Node count")->required()->check(CLI::NonNegativeNumber);

  // enumerate
  auto* enum_cmd = app.add_subcommand("enumerate", "Enumerate DAGs, or score all of them on a dataset");
  int enum_n = -1;
  std::string enum_data;
  bool enum_list = false;
  enum_cmd->add_option("n", enum_n, "Node count (ignored with --data)");
  enum_cmd->add_option("--data", enum_data, "Dataset CSV; writes scores.csv with every structure's score");
  enum_cmd->add_flag("--list", enum_list, "Print every DAG as an edge list");

  // random-net
  auto* rnet_cmd = app.add_subcommand("random-net", "Generate a random network with Dirichlet(1) CPTs");
  int rnet_nodes = 10;
  int rnet_arity = 3;
  double rnet_density = 0.3;
  std::optional<std::size_t> rnet_edges;
  std::string rnet_output;
  rnet_cmd->add_option("--nodes", rnet_nodes, "Node count")->check(CLI::PositiveNumber);
  rnet_cmd->add_option("--max-arity", rnet_arity, "Largest variable arity")->check(CLI::Range(2, 64));
  rnet_cmd->add_option("--density", rnet_density, "Edge probability per ordered pair")->check(CLI::Range(0.0, 1.0));
  rnet_cmd->add_option("--edges", rnet_edges, "Exact edge count (overrides --density)");
  rnet_cmd->add_option("--output,-o", rnet_output, "Output file (default <out>/network.json)");

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Draw a dataset from a network by ancestral sampling");
  std::string sample_net;
  std::size_t sample_rows = 0;
  std::string sample_output;
  sample_cmd->add_option("--net", sample_net, "Network JSON")->required()->check(CLI::ExistingFile);
  sample_cmd->add_option("--rows", sample_rows, "Number of rows")->required()->check(CLI::PositiveNumber);
  sample_cmd->add_option("--output,-o", sample_output, "Output file (default <out>/data.csv)");

  // learn-ccga
  auto* ccga_cmd = app.add_subcommand("learn-ccga", "Learn a structure with the coevolutionary GA");
  std::string ccga_data;
  std::optional<int> ccga_generations;
  std::optional<int> ccga_population;
  bool ccga_parallel = false;
  bool ccga_fit = false;
  ccga_cmd->add_option("--data", ccga_data, "Dataset CSV")->required()->check(CLI::ExistingFile);
  ccga_cmd->add_option("--generations", ccga_generations, "Generations");
  ccga_cmd->add_option("--population", ccga_population, "Members per species (even)");
  ccga_cmd->add_flag("--parallel", ccga_parallel, "Score each generation with OpenMP");
  ccga_cmd->add_flag("--fit", ccga_fit, "Write posterior-mean CPTs with the structure");

  // learn-k2
  auto* k2_cmd = app.add_subcommand("learn-k2", "Learn a structure with K2");
  std::string k2_data;
  int k2_max_parents = 10;
  std::vector<std::string> k2_ordering;
  bool k2_fit = false;
  k2_cmd->add_option("--data", k2_data, "Dataset CSV")->required()->check(CLI::ExistingFile);
  k2_cmd->add_option("--max-parents", k2_max_parents, "Parent limit")->check(CLI::NonNegativeNumber);
  k2_cmd->add_option("--ordering", k2_ordering, "Variable names in order (default: random)");
  k2_cmd->add_flag("--fit", k2_fit, "Write posterior-mean CPTs with the structure");

  // score
  auto* score_cmd = app.add_subcommand("score", "BDe log-score of a structure on a dataset");
  std::string score_structure_file;
  std::string score_data;
  double score_prior = 1.0;
  score_cmd->add_option("--structure,--net", score_structure_file, "Structure or network JSON")
      ->required()
      ->check(CLI::ExistingFile);
  score_cmd->add_option("--data", score_data, "Dataset CSV")->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--prior", score_prior, "Dirichlet hyperparameter")->check(CLI::PositiveNumber);

  // compare
  auto* cmp_cmd = app.add_subcommand("compare", "Repeated paired CCGA vs K2 runs with summary statistics");
  std::optional<int> cmp_runs;
  cmp_cmd->add_option("--runs", cmp_runs, "Override the configured run count")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "bnsl: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }

  const std::filesystem::path out_dir = g.out_dir;
  const std::uint64_t seed = g.seed.value_or(1);

  try {
    if (*count_cmd) {
      out << count_dags(count_n).str() << '\n';
    } else if (*enum_cmd) {
      if (!enum_data.empty()) {
        const auto data = load_dataset(enum_data);
        const auto result = exhaustive_best(data, PriorSpec{});
        const auto dags = all_dags(data.num_vars());
        std::filesystem::create_directories(out_dir);
        std::ofstream csv(out_dir / "scores.csv");
        if (!csv) throw Error((out_dir / "scores.csv").string() + ": cannot open file for writing");
        csv << "index,edges,score\n";
        for (std::size_t k = 0; k < dags.size(); ++k)
          csv << k << ',' << edge_list(dags[k], data.variables()) << ',' << fixed6(result.scores[k]) << '\n';
        out << "scored " << result.scored << " structures\n"
            << "best " << fixed6(result.score) << " (" << result.tied << " tied): "
            << edge_list(result.best, data.variables()) << '\n';
      } else {
        if (enum_n < 0) throw UsageError("enumerate: give n or --data");
        std::vector<Variable> vars;
        for (int i = 0; i < enum_n; ++i) vars.push_back({"X" + std::to_string(i), 2});
        std::size_t count = 0;
        enumerate_dags(enum_n, [&](const Dag& d) {
          ++count;
          if (enum_list) out << edge_list(d, vars) << '\n';
        });
        out << count << '\n';
      }
    } else if (*rnet_cmd) {
      const auto net = rnet_edges ? random_network_with_edges(rnet_nodes, rnet_arity, *rnet_edges, seed)
                                  : random_network(rnet_nodes, rnet_arity, rnet_density, seed);
      const std::filesystem::path path = rnet_output.empty() ? out_dir / "network.json" : std::filesystem::path(rnet_output);
      save_network(path, net);
      out << "wrote " << path.string() << ": " << net.size() << " nodes, " << net.dag().edge_count() << " edges\n";
    } else if (*sample_cmd) {
      const auto net = load_network(sample_net);
      const auto data = ancestral_sample(net, sample_rows, seed);
      const std::filesystem::path path = sample_output.empty() ? out_dir / "data.csv" : std::filesystem::path(sample_output);
      save_dataset(path, data);
      out << "wrote " << path.string() << ": " << data.num_rows() << " rows\n";
    } else if (*ccga_cmd) {
      GaConfig ga;
      if (!g.config.empty()) {
        const auto doc = read_config(g.config);
        ga = ga_config_from_json(doc.contains("ga") ? doc["ga"] : doc);
      }
      if (g.seed) ga.seed = *g.seed;
      if (ccga_generations) ga.generations = *ccga_generations;
      if (ccga_population) ga.population_size = *ccga_population;
      if (ccga_parallel) ga.parallel_eval = true;
      ga.validate();
      const auto data = load_dataset(ccga_data);
      const auto state = evolve(data, ga);
      const auto dag = decode(state.best.perm, state.best.bin);
      if (ccga_fit) {
        save_network(out_dir / "ccga_network.json", fit_parameters(data.variables(), dag, data, ga.prior));
      } else {
        save_structure(out_dir / "ccga_structure.json", Structure{data.variables(), dag});
      }
      state.trace.save_csv(out_dir / "ccga_trace.csv");
      out << "best_score " << fixed6(state.best.score) << '\n'
          << dump_genomes(state.best.perm, state.best.bin, data.variables())
          << "edges: " << edge_list(dag, data.variables()) << '\n';
    } else if (*k2_cmd) {
      const auto data = load_dataset(k2_data);
      K2Config k2;
      if (!g.config.empty()) {
        const auto doc = read_config(g.config);
        if (doc.contains("k2") && doc["k2"].contains("max_parents")) k2.max_parents = doc["k2"]["max_parents"].get<int>();
      }
      if (k2_cmd->count("--max-parents") > 0) k2.max_parents = k2_max_parents;
      k2.seed = seed;
      if (!k2_ordering.empty()) k2.ordering = ordering_from_names(k2_ordering, data.variables());
      const auto result = k2_learn(data, k2, PriorSpec{});
      if (k2_fit) {
        save_network(out_dir / "k2_network.json", fit_parameters(data.variables(), result.dag, data));
      } else {
        save_structure(out_dir / "k2_structure.json", Structure{data.variables(), result.dag});
      }
      out << "best_score " << fixed6(result.score) << '\n'
          << "edges: " << edge_list(result.dag, data.variables()) << '\n';
    } else if (*score_cmd) {
      out << fixed6(score_structure(score_structure_file, score_data, PriorSpec{score_prior})) << '\n';
    } else if (*cmp_cmd) {
      if (g.config.empty()) throw UsageError("compare needs --config <json>");
      auto cfg = ExperimentConfig::load(g.config);
      if (g.seed) cfg.seed = *g.seed;
      if (app.count("--out") > 0) cfg.out_dir = out_dir;
      if (cmp_runs) cfg.runs = *cmp_runs;
      const auto outcome = run_comparison(cfg);
      for (const auto& grp : outcome.report.groups) {
        out << "rows " << grp.rows << ": ccga mean " << fixed6(grp.ccga.mean) << ", k2 mean " << fixed6(grp.k2.mean)
            << ", p " << (grp.p_value ? std::to_string(*grp.p_value) : std::string("n/a")) << '\n';
      }
      out << "wrote " << cfg.out_dir.string() << '\n';
    }
  } catch (const UsageError& e) {
    err << "bnsl: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "bnsl: config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "bnsl: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace bnsl
