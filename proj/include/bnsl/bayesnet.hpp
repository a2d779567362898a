#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bnsl {

struct Variable {
  std::string name;
  int arity = 2;

  friend bool operator==(const Variable&, const Variable&) = default;
};

// Throws ValidationError on an arity below 2 or an empty/duplicate name.
void validate_variables(std::span<const Variable> variables);

/// Directed acyclic graph stored as one sorted parent set per node.
///
/// Every constructor verifies acyclicity with a topological sort, so a Dag
/// value is always a valid structure.
class Dag {
 public:
  Dag() = default;
  explicit Dag(int n);
  explicit Dag(std::vector<std::vector<int>> parents);

  int size() const { return static_cast<int>(parents_.size()); }
  const std::vector<int>& parents(int node) const { return parents_.at(node); }
  const std::vector<std::vector<int>>& parent_sets() const { return parents_; }

  bool has_edge(int from, int to) const;
  std::size_t edge_count() const;

  // Returns a copy with the edge added; throws ValidationError if that closes a cycle.
  Dag with_edge(int from, int to) const;
  Dag with_parents(int node, std::vector<int> parents) const;

  // Kahn's algorithm, smallest ready index first, so the order is canonical.
  std::vector<int> topological_order() const;

  static bool is_acyclic(const std::vector<std::vector<int>>& parents);

  friend bool operator==(const Dag&, const Dag&) = default;

 private:
  std::vector<std::vector<int>> parents_;
};

// Conditional probability table: one row per joint parent assignment,
// one column per child value, row-major.
struct Cpt {
  int rows = 1;
  int cols = 2;
  std::vector<double> probs;

  double at(int row, int col) const { return probs[static_cast<std::size_t>(row) * cols + col]; }
  std::span<const double> row(int r) const {
    return {probs.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)};
  }
};

class BayesianNetwork {
 public:
  static constexpr double kRowTolerance = 1e-9;

  BayesianNetwork() = default;
  // Validates every invariant; CPT rows that do not sum to 1 within
  // kRowTolerance are rejected unless renormalize is set.
  BayesianNetwork(std::vector<Variable> variables, Dag dag, std::vector<Cpt> cpts,
                  bool renormalize = false);

  int size() const { return static_cast<int>(variables_.size()); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Dag& dag() const { return dag_; }
  const std::vector<Cpt>& cpts() const { return cpts_; }
  const Cpt& cpt(int node) const { return cpts_.at(node); }

  // Mixed-radix index of the node's parent values in `assignment`; the lowest
  // parent index is the least significant digit.
  int parent_config(int node, std::span<const int> assignment) const;

 private:
  std::vector<Variable> variables_;
  Dag dag_;
  std::vector<Cpt> cpts_;
};

// Number of joint parent assignments, 1 for an empty parent set.
std::uint64_t parent_config_count(std::span<const Variable> variables, std::span<const int> parents);

/// Fully observed sample matrix with an explicit schema. Stored column-major.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Variable> variables);
  Dataset(std::vector<Variable> variables, const std::vector<std::vector<int>>& rows);

  int num_vars() const { return static_cast<int>(variables_.size()); }
  std::size_t num_rows() const { return rows_; }
  bool empty() const { return rows_ == 0; }
  const std::vector<Variable>& variables() const { return variables_; }
  int arity(int col) const { return variables_.at(col).arity; }

  int at(std::size_t row, int col) const { return columns_[col][row]; }
  std::span<const int> column(int col) const { return columns_.at(col); }
  std::vector<int> row(std::size_t r) const;

  void append_row(std::span<const int> values);

  // New dataset whose row k is this dataset's row order[k].
  Dataset permuted_rows(std::span<const std::size_t> order) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<Variable> variables_;
  std::vector<std::vector<int>> columns_;
  std::size_t rows_ = 0;
};

// Product of the node conditionals read from the CPTs.
double joint_probability(const BayesianNetwork& net, std::span<const int> assignment);

// Forward sampling in topological order. Deterministic given the seed.
Dataset ancestral_sample(const BayesianNetwork& net, std::size_t count, std::uint64_t seed);

/// Random network on a random topological order. Each ordered pair gains an
/// edge with probability edge_density; arities are uniform in [2, max_arity];
/// CPT rows are Dirichlet(1, ..., 1).
BayesianNetwork random_network(int n, int max_arity, double edge_density, std::uint64_t seed);

// Same, but with exactly `edges` edges chosen uniformly among the n(n-1)/2 ordered pairs.
BayesianNetwork random_network_with_edges(int n, int max_arity, std::size_t edges,
                                          std::uint64_t seed);

}  // namespace bnsl
