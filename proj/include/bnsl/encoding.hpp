#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bnsl/bayesnet.hpp"

namespace bnsl {

// Maximum edge count of an n-node DAG, n(n-1)/2. This is the binary genome length.
constexpr std::size_t edge_slots(int n) {
  return n < 2 ? 0 : static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
}

/// Flat index of c_{i,j} in the row-major strictly upper triangle
/// c_{1,2}, c_{1,3}, ..., c_{1,n}, c_{2,3}, ..., c_{n-1,n}.
/// Positions are 1-based; the result is 0-based. Throws EncodingError
/// unless 1 <= i < j <= n.
std::size_t triangular_index(int i, int j, int n);

// Node ordering species. Invariant: a permutation of 0..n-1.
class PermutationGenome {
 public:
  PermutationGenome() = default;
  explicit PermutationGenome(std::vector<int> order);
  static PermutationGenome identity(int n);

  int size() const { return static_cast<int>(order_.size()); }
  int operator[](std::size_t pos) const { return order_[pos]; }
  const std::vector<int>& order() const { return order_; }

  static bool is_permutation(std::span<const int> order);

  friend bool operator==(const PermutationGenome&, const PermutationGenome&) = default;

 private:
  std::vector<int> order_;
};

// Connectivity species: the n(n-1)/2 upper-triangle bits, packed.
class BinaryGenome {
 public:
  BinaryGenome() = default;
  explicit BinaryGenome(int n);
  BinaryGenome(int n, std::vector<bool> bits);
  // "1011..." with exactly n(n-1)/2 characters.
  static BinaryGenome from_string(int n, std::string_view bits);

  int nodes() const { return n_; }
  std::size_t size() const { return bits_.size(); }
  bool operator[](std::size_t k) const { return bits_[k]; }
  void set(std::size_t k, bool value) { bits_.at(k) = value; }
  void flip(std::size_t k) { bits_.at(k).flip(); }
  std::size_t count() const;
  const std::vector<bool>& bits() const { return bits_; }
  std::string to_string() const;

  friend bool operator==(const BinaryGenome&, const BinaryGenome&) = default;

 private:
  int n_ = 0;
  std::vector<bool> bits_;
};

struct Allele {
  enum class Kind { node, edge };
  Kind kind;
  int value;  // node index, or 0/1 for an edge bit

  friend bool operator==(const Allele&, const Allele&) = default;
};

/// A permutation and a bitstring assembled into the interleaved chromosome:
/// the node at each position followed by the bits of its out-edges to all
/// later positions, with the last node appended at the end.
struct CompleteSolution {
  PermutationGenome perm;
  BinaryGenome bin;
  std::vector<Allele> interleaved;
};

CompleteSolution combine(const PermutationGenome& perm, const BinaryGenome& bin);

// Projects an interleaved chromosome back onto its two species.
std::pair<PermutationGenome, BinaryGenome> split(std::span<const Allele> interleaved);

// Edge perm[i] -> perm[j] for every i < j whose bit is set. Acyclic by construction.
Dag decode(const PermutationGenome& perm, const BinaryGenome& bin);
Dag decode(const CompleteSolution& sol);

// decode() without the Dag validation pass, writing into a reusable buffer.
void decode_parents(const PermutationGenome& perm, const BinaryGenome& bin,
                    std::vector<std::vector<int>>& parents);

// Preimage of a DAG: its canonical topological order plus the matching bits.
std::pair<PermutationGenome, BinaryGenome> encode(const Dag& dag);

/// Debug dump, two lines:
///   perm: <space-separated names>
///   bits: <0/1 string>
std::string dump_genomes(const PermutationGenome& perm, const BinaryGenome& bin,
                         std::span<const Variable> variables);

}  // namespace bnsl

template <>
struct std::hash<bnsl::BinaryGenome> {
  std::size_t operator()(const bnsl::BinaryGenome& g) const noexcept {
    return std::hash<std::vector<bool>>{}(g.bits());
  }
};
