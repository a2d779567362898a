#include <doctest.h>

#include <numeric>

#include "bnsl/error.hpp"
#include "test_support.hpp"

using namespace bnsl;
using bnsl::testing::make_cpt;

TEST_CASE("Dag rejects cycles, self loops and bad indices") {
  CHECK_THROWS_AS(Dag({{1}, {0}}), ValidationError);
  CHECK_THROWS_AS(Dag(std::vector<std::vector<int>>{{0}}), ValidationError);
  CHECK_THROWS_AS(Dag({{}, {2}}), ValidationError);
  CHECK_THROWS_AS(Dag({{}, {0, 0}}), ValidationError);
  CHECK_THROWS_AS(Dag({{2}, {0}, {1}}), ValidationError);

  const Dag chain({{}, {0}, {1}});
  CHECK(chain.edge_count() == 2);
  CHECK(chain.has_edge(0, 1));
  CHECK_FALSE(chain.has_edge(1, 0));
  CHECK(chain.topological_order() == std::vector<int>{0, 1, 2});
  CHECK_THROWS_AS(chain.with_edge(2, 0), ValidationError);
}

TEST_CASE("Variable invariants") {
  CHECK_THROWS_AS(validate_variables(std::vector<Variable>{{"A", 1}}), ValidationError);
  CHECK_THROWS_AS(validate_variables(std::vector<Variable>{{"", 2}}), ValidationError);
  CHECK_THROWS_AS(validate_variables(std::vector<Variable>{{"A", 2}, {"A", 3}}), ValidationError);
}

TEST_CASE("BayesianNetwork validates CPT shape and normalization") {
  const std::vector<Variable> vars{{"A", 2}, {"B", 3}};
  const Dag dag({{}, {0}});
  CHECK_NOTHROW(BayesianNetwork(vars, dag, {make_cpt(1, 2, {0.5, 0.5}), make_cpt(2, 3, {0.2, 0.3, 0.5, 1, 0, 0})}));
  // Wrong row count for B.
  CHECK_THROWS_AS(BayesianNetwork(vars, dag, {make_cpt(1, 2, {0.5, 0.5}), make_cpt(1, 3, {0.2, 0.3, 0.5})}),
                  ValidationError);
  // Row sum off by more than the tolerance.
  CHECK_THROWS_AS(BayesianNetwork(vars, dag, {make_cpt(1, 2, {0.5, 0.6}), make_cpt(2, 3, {0.2, 0.3, 0.5, 1, 0, 0})}),
                  ValidationError);
  // Negative probability.
  CHECK_THROWS_AS(BayesianNetwork(vars, dag, {make_cpt(1, 2, {1.5, -0.5}), make_cpt(2, 3, {0.2, 0.3, 0.5, 1, 0, 0})}),
                  ValidationError);
  // Renormalization only on request.
  const BayesianNetwork fixed(vars, dag, {make_cpt(1, 2, {0.2, 0.6}), make_cpt(2, 3, {0.2, 0.3, 0.5, 1, 0, 0})}, true);
  CHECK(fixed.cpt(0).at(0, 1) == doctest::Approx(0.75));
}

TEST_CASE("parent_config is mixed radix with the lowest parent least significant") {
  const std::vector<Variable> vars{{"A", 2}, {"B", 3}, {"C", 2}};
  std::vector<double> probs(12, 0.5);
  const BayesianNetwork net(vars, Dag({{}, {}, {0, 1}}),
                            {make_cpt(1, 2, {0.5, 0.5}), make_cpt(1, 3, {0.2, 0.3, 0.5}), make_cpt(6, 2, probs)});
  CHECK(net.parent_config(2, std::vector<int>{0, 0, 0}) == 0);
  CHECK(net.parent_config(2, std::vector<int>{1, 0, 0}) == 1);
  CHECK(net.parent_config(2, std::vector<int>{0, 1, 0}) == 2);
  CHECK(net.parent_config(2, std::vector<int>{1, 2, 0}) == 5);
}

TEST_CASE("joint_probability examples") {
  const BayesianNetwork single({{"X", 2}}, Dag(1), {make_cpt(1, 2, {0.3, 0.7})});
  CHECK(joint_probability(single, std::vector<int>{1}) == doctest::Approx(0.7));

  const BayesianNetwork indep({{"A", 2}, {"B", 2}}, Dag(2), {make_cpt(1, 2, {0.5, 0.5}), make_cpt(1, 2, {0.5, 0.5})});
  for (auto a : {std::vector<int>{0, 0}, {0, 1}, {1, 0}, {1, 1}}) CHECK(joint_probability(indep, a) == 0.25);

  const BayesianNetwork chain({{"A", 2}, {"B", 2}}, Dag({{}, {0}}),
                              {make_cpt(1, 2, {0.7, 0.3}), make_cpt(2, 2, {0.5, 0.5, 0.1, 0.9})});
  CHECK(joint_probability(chain, std::vector<int>{1, 1}) == doctest::Approx(0.27).epsilon(1e-12));

  CHECK_THROWS_AS(joint_probability(chain, std::vector<int>{1}), SchemaError);
  CHECK_THROWS_AS(joint_probability(chain, std::vector<int>{2, 0}), SchemaError);
}

TEST_CASE("joint_probability sums to one over the assignment space") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const int n = 1 + static_cast<int>(seed % 4);
    const auto net = random_network(n, 3, 0.6, seed);
    double total = 0.0;
    bnsl::testing::for_each_assignment(net.variables(),
                                       [&](const std::vector<int>& a) { total += joint_probability(net, a); });
    CHECK(std::abs(total - 1.0) < 1e-9);
  }
}

TEST_CASE("ancestral_sample examples") {
  const BayesianNetwork degenerate({{"A", 2}, {"B", 3}}, Dag({{}, {0}}),
                                   {make_cpt(1, 2, {1, 0}), make_cpt(2, 3, {1, 0, 0, 1, 0, 0})});
  const auto zeros = ancestral_sample(degenerate, 5, 99);
  REQUIRE(zeros.num_rows() == 5);
  for (std::size_t r = 0; r < 5; ++r) CHECK(zeros.row(r) == std::vector<int>{0, 0});

  const auto net = random_network(5, 3, 0.5, 4);
  CHECK(ancestral_sample(net, 200, 17) == ancestral_sample(net, 200, 17));
  CHECK_FALSE(ancestral_sample(net, 200, 17) == ancestral_sample(net, 200, 18));

  const BayesianNetwork coin({{"X", 2}}, Dag(1), {make_cpt(1, 2, {0.5, 0.5})});
  const auto flips = ancestral_sample(coin, 10000, 2024);
  const auto col = flips.column(0);
  const double freq = std::accumulate(col.begin(), col.end(), 0.0) / 10000.0;
  CHECK(std::abs(freq - 0.5) <= 0.02);

  CHECK_THROWS_AS(ancestral_sample(coin, 0, 1), ValidationError);
}

TEST_CASE("ancestral_sample marginals converge to the exact marginals") {
  for (std::uint64_t seed = 10; seed < 16; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    const auto net = random_network(n, 3, 0.7, seed);
    const auto exact = bnsl::testing::exact_marginals(net);
    const auto data = ancestral_sample(net, 50000, seed * 7);
    for (int i = 0; i < n; ++i) {
      std::vector<double> freq(net.variables()[i].arity, 0.0);
      for (int v : data.column(i)) freq[v] += 1.0 / 50000.0;
      for (std::size_t k = 0; k < freq.size(); ++k) CHECK(std::abs(freq[k] - exact[i][k]) < 0.02);
    }
  }
}

TEST_CASE("random_network examples and invariants") {
  const auto one = random_network(1, 4, 0.9, 3);
  CHECK(one.size() == 1);
  CHECK(one.dag().edge_count() == 0);

  CHECK(random_network(6, 3, 0.0, 3).dag().edge_count() == 0);
  CHECK(random_network(4, 3, 1.0, 3).dag().edge_count() == 6);
  CHECK(random_network_with_edges(10, 3, 14, 5).dag().edge_count() == 14);
  CHECK_THROWS_AS(random_network_with_edges(3, 3, 4, 5), ValidationError);
  CHECK_THROWS_AS(random_network(3, 3, 1.5, 5), ValidationError);

  const auto a = random_network(8, 4, 0.4, 77);
  const auto b = random_network(8, 4, 0.4, 77);
  CHECK(a.dag() == b.dag());
  CHECK(a.cpts().size() == b.cpts().size());
  for (int i = 0; i < a.size(); ++i) {
    CHECK(a.cpt(i).probs == b.cpt(i).probs);
    CHECK(a.variables()[i].arity >= 2);
    CHECK(a.variables()[i].arity <= 4);
  }
}

TEST_CASE("Dataset enforces the schema") {
  const std::vector<Variable> vars{{"A", 2}, {"B", 3}};
  CHECK_THROWS_AS(Dataset(vars, {{0, 3}}), ValidationError);
  CHECK_THROWS_AS(Dataset(vars, {{0, -1}}), ValidationError);
  CHECK_THROWS_AS(Dataset(vars, {{0}}), SchemaError);
  const Dataset d(vars, {{0, 2}, {1, 1}});
  CHECK(d.num_rows() == 2);
  CHECK(d.at(1, 1) == 1);
  const std::vector<std::size_t> order{1, 0};
  CHECK(d.permuted_rows(order).row(0) == std::vector<int>{1, 1});
}
