#include "bnsl/encoding.hpp"

#include <algorithm>
#include <numeric>

#include "bnsl/error.hpp"

namespace bnsl {

std::size_t triangular_index(int i, int j, int n) {
  if (!(1 <= i && i < j && j <= n)) {
    throw EncodingError("triangular_index: need 1 <= i < j <= n, got i=" + std::to_string(i) +
                        " j=" + std::to_string(j) + " n=" + std::to_string(n));
  }
  // Rows 1..i-1 hold (n-1) + (n-2) + ... + (n-i+1) cells.
  const auto row = static_cast<std::size_t>(i - 1);
  const auto width = static_cast<std::size_t>(n);
  return row * width - row * (row + 1) / 2 + static_cast<std::size_t>(j - i - 1);
}

// ---------------------------------------------------------------------------

PermutationGenome::PermutationGenome(std::vector<int> order) : order_(std::move(order)) {
  if (!is_permutation(order_)) throw EncodingError("ordering is not a permutation of 0..n-1");
}

PermutationGenome PermutationGenome::identity(int n) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  return PermutationGenome(std::move(order));
}

bool PermutationGenome::is_permutation(std::span<const int> order) {
  std::vector<bool> seen(order.size(), false);
  for (int v : order) {
    if (v < 0 || static_cast<std::size_t>(v) >= order.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

BinaryGenome::BinaryGenome(int n) : n_(n), bits_(edge_slots(n), false) {
  if (n < 0) throw EncodingError("binary genome: negative node count");
}

BinaryGenome::BinaryGenome(int n, std::vector<bool> bits) : n_(n), bits_(std::move(bits)) {
  if (n < 0 || bits_.size() != edge_slots(n)) {
    throw EncodingError("binary genome for n=" + std::to_string(n) + " needs " +
                        std::to_string(edge_slots(n)) + " bits, got " + std::to_string(bits_.size()));
  }
}

BinaryGenome BinaryGenome::from_string(int n, std::string_view bits) {
  std::vector<bool> out;
  out.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw EncodingError("bit string may only contain '0' and '1'");
    out.push_back(c == '1');
  }
  return BinaryGenome(n, std::move(out));
}

std::size_t BinaryGenome::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

std::string BinaryGenome::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (bool b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

// ---------------------------------------------------------------------------

namespace {

void check_pair(const PermutationGenome& perm, const BinaryGenome& bin) {
  if (bin.nodes() != perm.size() || bin.size() != edge_slots(perm.size())) {
    throw EncodingError("species mismatch: permutation has " + std::to_string(perm.size()) +
                        " nodes, bitstring has " + std::to_string(bin.size()) + " bits");
  }
}

}  // namespace

CompleteSolution combine(const PermutationGenome& perm, const BinaryGenome& bin) {
  check_pair(perm, bin);
  const int n = perm.size();
  CompleteSolution sol{perm, bin, {}};
  if (n == 0) return sol;
  sol.interleaved.reserve(static_cast<std::size_t>(n) + bin.size());
  std::size_t next_bit = 0;
  for (int pos = 0; pos + 1 < n; ++pos) {
    sol.interleaved.push_back({Allele::Kind::node, perm[pos]});
    for (int later = pos + 1; later < n; ++later)
      sol.interleaved.push_back({Allele::Kind::edge, bin[next_bit++] ? 1 : 0});
  }
  sol.interleaved.push_back({Allele::Kind::node, perm[n - 1]});
  return sol;
}

std::pair<PermutationGenome, BinaryGenome> split(std::span<const Allele> interleaved) {
  std::vector<int> order;
  std::vector<bool> bits;
  for (const auto& a : interleaved) {
    if (a.kind == Allele::Kind::node) {
      order.push_back(a.value);
    } else {
      bits.push_back(a.value != 0);
    }
  }
  const int n = static_cast<int>(order.size());
  // Each node must be followed by exactly its out-edge bits.
  std::size_t at = 0;
  for (int pos = 0; pos < n; ++pos) {
    if (at >= interleaved.size() || interleaved[at].kind != Allele::Kind::node)
      throw EncodingError("interleaved chromosome is not in node/out-edge layout");
    at += 1 + static_cast<std::size_t>(pos + 1 < n ? n - pos - 1 : 0);
  }
  if (at != interleaved.size()) throw EncodingError("interleaved chromosome has trailing alleles");
  return {PermutationGenome(std::move(order)), BinaryGenome(n, std::move(bits))};
}

void decode_parents(const PermutationGenome& perm, const BinaryGenome& bin,
                    std::vector<std::vector<int>>& parents) {
  const int n = perm.size();
  parents.resize(static_cast<std::size_t>(n));
  for (auto& ps : parents) ps.clear();
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++k)
      if (bin[k]) parents[perm[j]].push_back(perm[i]);
  for (auto& ps : parents) std::sort(ps.begin(), ps.end());
}

Dag decode(const PermutationGenome& perm, const BinaryGenome& bin) {
  check_pair(perm, bin);
  std::vector<std::vector<int>> parents;
  decode_parents(perm, bin, parents);
  return Dag(std::move(parents));
}

Dag decode(const CompleteSolution& sol) { return decode(sol.perm, sol.bin); }

std::pair<PermutationGenome, BinaryGenome> encode(const Dag& dag) {
  const int n = dag.size();
  auto order = dag.topological_order();
  BinaryGenome bin(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (dag.has_edge(order[i], order[j])) bin.set(triangular_index(i + 1, j + 1, n), true);
  return {PermutationGenome(std::move(order)), std::move(bin)};
}

std::string dump_genomes(const PermutationGenome& perm, const BinaryGenome& bin,
                         std::span<const Variable> variables) {
  check_pair(perm, bin);
  if (static_cast<int>(variables.size()) != perm.size())
    throw SchemaError("dump_genomes: variable list does not match genome size");
  std::string out = "perm:";
  for (int v : perm.order()) out += " " + variables[v].name;
  out += "\nbits: " + bin.to_string() + "\n";
  return out;
}

}  // namespace bnsl
