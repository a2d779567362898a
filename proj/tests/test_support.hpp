#pragma once

// Shared fixtures and brute-force oracles for the test suites. Nothing here
// calls into the scoring or search code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "bnsl/bayesnet.hpp"

namespace bnsl::testing {

inline Cpt make_cpt(int rows, int cols, std::vector<double> probs) { return Cpt{rows, cols, std::move(probs)}; }

inline std::vector<Variable> binary_vars(int n) {
  std::vector<Variable> vars;
  for (int i = 0; i < n; ++i) vars.push_back({"X" + std::to_string(i), 2});
  return vars;
}

// X0 -> X1 -> ... -> X{n-1}, binary. Root P(1) = root_p; each child copies its
// parent with probability `keep`.
inline BayesianNetwork chain_network(int n, double root_p = 0.4, double keep = 0.85) {
  std::vector<std::vector<int>> parents(n);
  std::vector<Cpt> cpts;
  cpts.push_back(make_cpt(1, 2, {1.0 - root_p, root_p}));
  for (int i = 1; i < n; ++i) {
    parents[i] = {i - 1};
    cpts.push_back(make_cpt(2, 2, {keep, 1.0 - keep, 1.0 - keep, keep}));
  }
  return BayesianNetwork(binary_vars(n), Dag(parents), std::move(cpts));
}

// Calls f(assignment) for every point of the joint value space.
inline void for_each_assignment(const std::vector<Variable>& vars, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> a(vars.size(), 0);
  while (true) {
    f(a);
    std::size_t i = 0;
    while (i < a.size() && ++a[i] == vars[i].arity) a[i++] = 0;
    if (i == a.size()) return;
  }
}

// Exact single-variable marginals by exhaustive summation of the CPT product.
inline std::vector<std::vector<double>> exact_marginals(const BayesianNetwork& net) {
  std::vector<std::vector<double>> m;
  for (const auto& v : net.variables()) m.emplace_back(v.arity, 0.0);
  for_each_assignment(net.variables(), [&](const std::vector<int>& a) {
    double p = 1.0;
    for (int i = 0; i < net.size(); ++i) {
      std::size_t row = 0, radix = 1;
      for (int q : net.dag().parents(i)) {
        row += a[q] * radix;
        radix *= net.variables()[q].arity;
      }
      p *= net.cpt(i).probs[row * net.cpt(i).cols + a[i]];
    }
    for (int i = 0; i < net.size(); ++i) m[i][a[i]] += p;
  });
  return m;
}

// Uniform random dataset with random arities in [2, max_arity].
inline Dataset random_dataset(int n, std::size_t rows, int max_arity, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> arity(2, max_arity);
  std::vector<Variable> vars;
  for (int i = 0; i < n; ++i) vars.push_back({"V" + std::to_string(i), arity(rng)});
  std::vector<std::vector<int>> body;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<int> row;
    for (const auto& v : vars) row.push_back(std::uniform_int_distribution<int>(0, v.arity - 1)(rng));
    body.push_back(std::move(row));
  }
  return Dataset(vars, body);
}

// Random DAG: random order, each forward pair an edge with probability p.
inline Dag random_dag(int n, double p, std::mt19937_64& rng) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution coin(p);
  std::vector<std::vector<int>> parents(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) parents[order[j]].push_back(order[i]);
  return Dag(parents);
}

}  // namespace bnsl::testing
