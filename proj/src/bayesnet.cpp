#include "bnsl/bayesnet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "bnsl/error.hpp"

namespace bnsl {

void validate_variables(std::span<const Variable> variables) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < variables.size(); ++i) {
    const auto& v = variables[i];
    if (v.name.empty()) {
      throw ValidationError("variable " + std::to_string(i) + ": name must be non-empty");
    }
    if (v.arity < 2) {
      throw ValidationError("variable '" + v.name + "': arity must be >= 2, got " +
                            std::to_string(v.arity));
    }
    if (!seen.insert(v.name).second) {
      throw ValidationError("variable name '" + v.name + "' is not unique");
    }
  }
}

// ---------------------------------------------------------------------------
// Dag

Dag::Dag(int n) : parents_(static_cast<std::size_t>(std::max(n, 0))) {}

Dag::Dag(std::vector<std::vector<int>> parents) : parents_(std::move(parents)) {
  const int n = size();
  for (int i = 0; i < n; ++i) {
    auto& ps = parents_[i];
    std::sort(ps.begin(), ps.end());
    for (std::size_t k = 0; k < ps.size(); ++k) {
      if (ps[k] < 0 || ps[k] >= n) {
        throw ValidationError("node " + std::to_string(i) + ": parent index " +
                              std::to_string(ps[k]) + " out of range");
      }
      if (ps[k] == i) throw ValidationError("node " + std::to_string(i) + " is its own parent");
      if (k > 0 && ps[k] == ps[k - 1]) {
        throw ValidationError("node " + std::to_string(i) + ": duplicate parent " +
                              std::to_string(ps[k]));
      }
    }
  }
  if (!is_acyclic(parents_)) throw ValidationError("graph contains a directed cycle");
}

bool Dag::has_edge(int from, int to) const {
  const auto& ps = parents_.at(to);
  return std::binary_search(ps.begin(), ps.end(), from);
}

std::size_t Dag::edge_count() const {
  std::size_t e = 0;
  for (const auto& ps : parents_) e += ps.size();
  return e;
}

Dag Dag::with_edge(int from, int to) const {
  auto ps = parents_;
  ps.at(to).push_back(from);
  return Dag(std::move(ps));
}

Dag Dag::with_parents(int node, std::vector<int> parents) const {
  auto ps = parents_;
  ps.at(node) = std::move(parents);
  return Dag(std::move(ps));
}

namespace {

// Returns the topological order, or fewer than n entries if there is a cycle.
std::vector<int> kahn(const std::vector<std::vector<int>>& parents) {
  const int n = static_cast<int>(parents.size());
  std::vector<std::vector<int>> children(n);
  std::vector<int> indegree(n, 0);
  for (int i = 0; i < n; ++i) {
    indegree[i] = static_cast<int>(parents[i].size());
    for (int p : parents[i]) children[p].push_back(i);
  }
  std::set<int> ready;
  for (int i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.insert(i);
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    const int v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (int c : children[v])
      if (--indegree[c] == 0) ready.insert(c);
  }
  return order;
}

}  // namespace

std::vector<int> Dag::topological_order() const {
  auto order = kahn(parents_);
  if (static_cast<int>(order.size()) != size()) throw ValidationError("graph contains a directed cycle");
  return order;
}

bool Dag::is_acyclic(const std::vector<std::vector<int>>& parents) {
  return kahn(parents).size() == parents.size();
}

// ---------------------------------------------------------------------------
// BayesianNetwork

std::uint64_t parent_config_count(std::span<const Variable> variables, std::span<const int> parents) {
  std::uint64_t q = 1;
  for (int p : parents) q *= static_cast<std::uint64_t>(variables[p].arity);
  return q;
}

BayesianNetwork::BayesianNetwork(std::vector<Variable> variables, Dag dag, std::vector<Cpt> cpts,
                                 bool renormalize)
    : variables_(std::move(variables)), dag_(std::move(dag)), cpts_(std::move(cpts)) {
  validate_variables(variables_);
  const int n = size();
  if (dag_.size() != n) {
    throw ValidationError("dag has " + std::to_string(dag_.size()) + " nodes but network has " +
                          std::to_string(n) + " variables");
  }
  if (static_cast<int>(cpts_.size()) != n) {
    throw ValidationError("expected " + std::to_string(n) + " CPTs, got " +
                          std::to_string(cpts_.size()));
  }
  for (int i = 0; i < n; ++i) {
    auto& cpt = cpts_[i];
    const auto& name = variables_[i].name;
    const auto q = parent_config_count(variables_, dag_.parents(i));
    if (static_cast<std::uint64_t>(cpt.rows) != q || cpt.cols != variables_[i].arity ||
        cpt.probs.size() != static_cast<std::size_t>(cpt.rows) * cpt.cols) {
      std::ostringstream msg;
      msg << "CPT of '" << name << "': dimensions must be " << q << "x" << variables_[i].arity
          << " (parent configurations x arity), got " << cpt.rows << "x" << cpt.cols;
      throw ValidationError(msg.str());
    }
    for (int r = 0; r < cpt.rows; ++r) {
      double sum = 0.0;
      for (int c = 0; c < cpt.cols; ++c) {
        const double p = cpt.probs[static_cast<std::size_t>(r) * cpt.cols + c];
        if (!(p >= 0.0 && p <= 1.0)) {
          throw ValidationError("CPT of '" + name + "' row " + std::to_string(r) +
                                ": probability outside [0, 1]");
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > kRowTolerance) {
        if (!renormalize || sum <= 0.0) {
          std::ostringstream msg;
          msg.precision(17);
          msg << "CPT of '" << name << "' row " << r << " sums to " << sum
              << ", expected 1 within " << kRowTolerance;
          throw ValidationError(msg.str());
        }
        for (int c = 0; c < cpt.cols; ++c) cpt.probs[static_cast<std::size_t>(r) * cpt.cols + c] /= sum;
      }
    }
  }
}

int BayesianNetwork::parent_config(int node, std::span<const int> assignment) const {
  int index = 0;
  int radix = 1;
  for (int p : dag_.parents(node)) {
    index += assignment[p] * radix;
    radix *= variables_[p].arity;
  }
  return index;
}

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(std::vector<Variable> variables)
    : variables_(std::move(variables)), columns_(variables_.size()) {
  validate_variables(variables_);
}

Dataset::Dataset(std::vector<Variable> variables, const std::vector<std::vector<int>>& rows)
    : Dataset(std::move(variables)) {
  for (auto& c : columns_) c.reserve(rows.size());
  for (const auto& r : rows) append_row(r);
}

std::vector<int> Dataset::row(std::size_t r) const {
  std::vector<int> out(columns_.size());
  for (std::size_t c = 0; c < columns_.size(); ++c) out[c] = columns_[c].at(r);
  return out;
}

void Dataset::append_row(std::span<const int> values) {
  if (values.size() != variables_.size()) {
    throw SchemaError("row " + std::to_string(rows_) + " has " + std::to_string(values.size()) +
                      " values, schema has " + std::to_string(variables_.size()));
  }
  for (std::size_t c = 0; c < values.size(); ++c) {
    if (values[c] < 0 || values[c] >= variables_[c].arity) {
      throw ValidationError("row " + std::to_string(rows_) + ", column '" + variables_[c].name +
                            "': value " + std::to_string(values[c]) + " outside [0, " +
                            std::to_string(variables_[c].arity) + ")");
    }
  }
  for (std::size_t c = 0; c < values.size(); ++c) columns_[c].push_back(values[c]);
  ++rows_;
}

Dataset Dataset::permuted_rows(std::span<const std::size_t> order) const {
  Dataset out(variables_);
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    out.columns_[c].reserve(order.size());
    for (auto r : order) out.columns_[c].push_back(columns_[c].at(r));
  }
  out.rows_ = order.size();
  return out;
}

// ---------------------------------------------------------------------------
// Operations

double joint_probability(const BayesianNetwork& net, std::span<const int> assignment) {
  const int n = net.size();
  if (static_cast<int>(assignment.size()) != n) {
    throw SchemaError("assignment has " + std::to_string(assignment.size()) +
                      " values, network has " + std::to_string(n) + " variables");
  }
  for (int i = 0; i < n; ++i) {
    if (assignment[i] < 0 || assignment[i] >= net.variables()[i].arity) {
      throw SchemaError("value " + std::to_string(assignment[i]) + " outside arity of '" +
                        net.variables()[i].name + "'");
    }
  }
  double p = 1.0;
  for (int i = 0; i < n; ++i) p *= net.cpt(i).at(net.parent_config(i, assignment), assignment[i]);
  return p;
}

Dataset ancestral_sample(const BayesianNetwork& net, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw ValidationError("sample count must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto order = net.dag().topological_order();
  Dataset data(net.variables());
  std::vector<int> values(net.size());
  for (std::size_t s = 0; s < count; ++s) {
    for (int node : order) {
      const auto row = net.cpt(node).row(net.parent_config(node, values));
      const double u = unit(rng);
      double acc = 0.0;
      int pick = static_cast<int>(row.size()) - 1;
      for (std::size_t k = 0; k < row.size(); ++k) {
        acc += row[k];
        if (u < acc) {
          pick = static_cast<int>(k);
          break;
        }
      }
      // Guard against the rounding tail landing on a zero-probability value.
      while (pick > 0 && row[pick] == 0.0) --pick;
      values[node] = pick;
    }
    data.append_row(values);
  }
  return data;
}

namespace {

BayesianNetwork build_random(int n, int max_arity, std::mt19937_64& rng,
                             const std::vector<std::pair<int, int>>& position_edges,
                             const std::vector<int>& order) {
  std::vector<Variable> vars(n);
  std::uniform_int_distribution<int> arity_dist(2, std::max(2, max_arity));
  for (int i = 0; i < n; ++i) vars[i] = {"X" + std::to_string(i), arity_dist(rng)};

  std::vector<std::vector<int>> parents(n);
  for (auto [pi, pj] : position_edges) parents[order[pj]].push_back(order[pi]);
  Dag dag(std::move(parents));

  std::gamma_distribution<double> gamma(1.0, 1.0);
  std::vector<Cpt> cpts(n);
  for (int i = 0; i < n; ++i) {
    auto& cpt = cpts[i];
    cpt.rows = static_cast<int>(parent_config_count(vars, dag.parents(i)));
    cpt.cols = vars[i].arity;
    cpt.probs.resize(static_cast<std::size_t>(cpt.rows) * cpt.cols);
    for (int r = 0; r < cpt.rows; ++r) {
      double sum = 0.0;
      auto* row = cpt.probs.data() + static_cast<std::size_t>(r) * cpt.cols;
      for (int c = 0; c < cpt.cols; ++c) sum += row[c] = gamma(rng);
      for (int c = 0; c < cpt.cols; ++c) row[c] /= sum;
    }
  }
  return BayesianNetwork(std::move(vars), std::move(dag), std::move(cpts), true);
}

std::vector<int> random_order(int n, std::mt19937_64& rng) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

}  // namespace

BayesianNetwork random_network(int n, int max_arity, double edge_density, std::uint64_t seed) {
  if (n < 1) throw ValidationError("random_network: n must be >= 1");
  if (!(edge_density >= 0.0 && edge_density <= 1.0)) {
    throw ValidationError("random_network: edge_density must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  const auto order = random_order(n, rng);
  std::bernoulli_distribution coin(edge_density);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) edges.emplace_back(i, j);
  return build_random(n, max_arity, rng, edges, order);
}

BayesianNetwork random_network_with_edges(int n, int max_arity, std::size_t edges,
                                          std::uint64_t seed) {
  if (n < 1) throw ValidationError("random_network: n must be >= 1");
  const std::size_t max_edges = static_cast<std::size_t>(n) * (n - 1) / 2;
  if (edges > max_edges) {
    throw ValidationError("random_network: " + std::to_string(edges) + " edges requested, at most " +
                          std::to_string(max_edges) + " possible");
  }
  std::mt19937_64 rng(seed);
  const auto order = random_order(n, rng);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  pairs.resize(edges);
  std::sort(pairs.begin(), pairs.end());
  return build_random(n, max_arity, rng, pairs, order);
}

}  // namespace bnsl
