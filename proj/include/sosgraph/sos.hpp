#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sosgraph/bitset.hpp"
#include "sosgraph/roots.hpp"

namespace sosgraph {

/// Strong-orthogonality relation on the roots of a system, as bitset rows
/// indexed by root index. Symmetric and loop-free.
class StrongOrthogonalityGraph {
 public:
  explicit StrongOrthogonalityGraph(const RootSystem& rs);

  std::size_t size() const { return rows_.size(); }
  const DynBitset& row(std::size_t i) const { return rows_[i]; }
  bool adjacent(std::size_t i, std::size_t j) const { return rows_[i].test(j); }
  std::size_t degree(std::size_t i) const { return rows_[i].count(); }
  std::size_t edge_count() const;

 private:
  std::vector<DynBitset> rows_;
};

StrongOrthogonalityGraph strong_orthogonality_graph(const RootSystem& rs);

/// One k-element strongly orthogonal subset, members sorted.
struct SOSet {
  std::vector<RootVector> members;
  RootVector sum() const;
};

/// Receives root indices of one SOS in increasing order.
using SosVisitor = std::function<void(std::span<const std::uint32_t>)>;

/// Restricts enumeration to SOS whose smallest root index lies in
/// [first_begin, first_end).
struct SosShard {
  std::uint32_t first_begin = 0;
  std::uint32_t first_end = 0xFFFFFFFFu;
};

/// Streams every k-SOS exactly once, in lexicographic order of root-index
/// tuples. Nothing is emitted when k exceeds the maximum SOS size.
void for_each_sos(const RootSystem& rs, int k, const SosVisitor& visit, SosShard shard = {});

/// Number of k-SOS, without materialising them.
std::uint64_t count_sos(const RootSystem& rs, int k);

/// Materialising wrapper over for_each_sos. Throws ResourceExhausted once
/// more than `max_materialize` sets would be held.
std::vector<SOSet> enumerate_sos(const RootSystem& rs, int k,
                                 std::size_t max_materialize = std::size_t{1} << 22);

/// The vertex set V(R,k): sorted, deduplicated SOS sums plus how many SOS
/// produce each sum.
struct VertexSet {
  std::string label;
  int k = 0;
  std::size_t dim = 0;
  std::vector<RootVector> vectors;
  std::vector<std::uint64_t> multiplicity;

  std::size_t size() const { return vectors.size(); }
};

VertexSet vertex_set(const RootSystem& rs, int k, unsigned threads = 1);

/// Binary layout, little-endian:
///   "SOSVERTS" | u32 version=1 | u16 label length | label bytes | u32 k |
///   u64 count | u32 dim | count*dim i32 doubled coordinates
/// Multiplicities are not persisted.
void write_vertex_set(const VertexSet& vs, const std::filesystem::path& path);
VertexSet read_vertex_set(const std::filesystem::path& path);

}  // namespace sosgraph
