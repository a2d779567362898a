#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "bnsl/baselines.hpp"
#include "bnsl/encoding.hpp"
#include "bnsl/error.hpp"
#include "test_support.hpp"

using namespace bnsl;

namespace {

constexpr int A = 0, B = 1, C = 2;

std::vector<Allele> chromosome(std::initializer_list<std::pair<char, int>> items) {
  std::vector<Allele> out;
  for (auto [kind, v] : items) out.push_back({kind == 'n' ? Allele::Kind::node : Allele::Kind::edge, v});
  return out;
}

}  // namespace

TEST_CASE("triangular_index follows the row-major upper triangle") {
  CHECK(triangular_index(1, 2, 4) == 0);
  CHECK(triangular_index(3, 4, 4) == 5);
  CHECK(triangular_index(2, 3, 4) == 3);
  CHECK_THROWS_AS(triangular_index(2, 2, 4), EncodingError);
  CHECK_THROWS_AS(triangular_index(3, 2, 4), EncodingError);
  CHECK_THROWS_AS(triangular_index(0, 2, 4), EncodingError);
  CHECK_THROWS_AS(triangular_index(1, 5, 4), EncodingError);
}

TEST_CASE("triangular_index is a bijection onto 0..E-1") {
  for (int n = 2; n <= 15; ++n) {
    std::set<std::size_t> image;
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) image.insert(triangular_index(i, j, n));
    CHECK(image.size() == edge_slots(n));
    CHECK(*image.begin() == 0);
    CHECK(*image.rbegin() == edge_slots(n) - 1);
  }
}

TEST_CASE("combine builds the interleaved chromosome") {
  const PermutationGenome perm({B, A, C});
  const auto sol = combine(perm, BinaryGenome::from_string(3, "101"));
  CHECK(sol.interleaved == chromosome({{'n', B}, {'e', 1}, {'e', 0}, {'n', A}, {'e', 1}, {'n', C}}));
  CHECK(sol.interleaved.size() == 3 + edge_slots(3));

  const auto two = combine(PermutationGenome({0, 1}), BinaryGenome::from_string(2, "0"));
  CHECK(two.interleaved == chromosome({{'n', 0}, {'e', 0}, {'n', 1}}));
  CHECK(decode(two).edge_count() == 0);

  const auto one = combine(PermutationGenome({0}), BinaryGenome(1));
  CHECK(one.interleaved == chromosome({{'n', 0}}));

  CHECK_THROWS_AS(combine(perm, BinaryGenome(4)), EncodingError);
  CHECK_THROWS_AS(BinaryGenome::from_string(3, "10"), EncodingError);
  CHECK_THROWS_AS(PermutationGenome({0, 0, 1}), EncodingError);
}

TEST_CASE("decode examples") {
  const auto dag = decode(PermutationGenome({B, A, C}), BinaryGenome::from_string(3, "101"));
  CHECK(dag.edge_count() == 2);
  CHECK(dag.has_edge(B, A));
  CHECK(dag.has_edge(A, C));

  std::mt19937_64 rng(1);
  for (int n = 1; n <= 7; ++n) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const PermutationGenome perm(order);
    CHECK(decode(perm, BinaryGenome(n, std::vector<bool>(edge_slots(n), true))).edge_count() == edge_slots(n));
    CHECK(decode(perm, BinaryGenome(n)).edge_count() == 0);
  }
}

TEST_CASE("combine then split recovers both species") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 9;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<bool> bits(edge_slots(n));
    for (std::size_t k = 0; k < bits.size(); ++k) bits[k] = rng() & 1;
    const PermutationGenome perm(order);
    const BinaryGenome bin(n, bits);
    const auto [p2, b2] = split(combine(perm, bin).interleaved);
    CHECK(p2 == perm);
    CHECK(b2 == bin);
  }
  CHECK_THROWS_AS(split(chromosome({{'e', 1}, {'n', 0}})), EncodingError);
}

TEST_CASE("decoded graphs are always acyclic") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 3 + trial % 10;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<bool> bits(edge_slots(n));
    for (std::size_t k = 0; k < bits.size(); ++k) bits[k] = rng() & 1;
    std::vector<std::vector<int>> parents;
    decode_parents(PermutationGenome(order), BinaryGenome(n, bits), parents);
    CHECK(Dag::is_acyclic(parents));
  }
}

TEST_CASE("every DAG on four nodes has a preimage") {
  std::size_t count = 0;
  enumerate_dags(4, [&](const Dag& dag) {
    ++count;
    const auto [perm, bin] = encode(dag);
    CHECK(decode(perm, bin) == dag);
  });
  CHECK(count == 543);
}

TEST_CASE("genome dump format") {
  const std::vector<Variable> vars{{"A", 2}, {"B", 2}, {"C", 2}};
  CHECK(dump_genomes(PermutationGenome({B, A, C}), BinaryGenome::from_string(3, "101"), vars) ==
        "perm: B A C\nbits: 101\n");
}

TEST_CASE("binary genome hashing follows packed equality") {
  const auto a = BinaryGenome::from_string(4, "101001");
  auto b = BinaryGenome::from_string(4, "101000");
  CHECK_FALSE(a == b);
  b.flip(5);
  CHECK(a == b);
  CHECK(std::hash<BinaryGenome>{}(a) == std::hash<BinaryGenome>{}(b));
  CHECK(a.count() == 3);
}
