#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sosgraph/roots.hpp"
#include "sosgraph/sos.hpp"

namespace sosgraph {

using VertexId = std::uint32_t;

struct BuildOptions {
  /// Vertex-index block edge for the (i-block, j-block) batches.
  std::size_t block_size = 4096;
  /// 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
  /// Pair counts n(n-1)/2 above this stream edges through a spill file.
  std::uint64_t spill_threshold_pairs = 200'000'000;
  /// Where spill files and checkpoints go; the system temp dir when empty.
  std::filesystem::path spill_dir;
  /// Budget for the assembled adjacency in bytes; 0 disables the check.
  std::uint64_t max_memory_bytes = 0;
};

/// Gamma(R,k) with its vertex vectors. Vertices are in lexicographic order of
/// their doubled coordinates, adjacency is CSR with ascending neighbour lists.
/// Abstract graphs (no vector labels) are allowed for testing.
class SOSGraph {
 public:
  SOSGraph() = default;
  SOSGraph(std::string system_label, int k, std::size_t dim, std::vector<RootVector> vertices,
           std::vector<std::uint64_t> offsets, std::vector<VertexId> neighbors);

  /// Unlabelled graph from an undirected edge list (duplicates and loops are
  /// rejected).
  static SOSGraph from_edges(std::size_t n, std::span<const std::pair<VertexId, VertexId>> edges);

  const std::string& system_label() const { return label_; }
  int k() const { return k_; }
  std::size_t dim() const { return dim_; }
  std::size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::uint64_t edge_count() const { return neighbors_.size() / 2; }

  std::span<const RootVector> vertices() const { return vertices_; }
  const RootVector& vertex(VertexId v) const { return vertices_[v]; }
  bool has_vectors() const { return !vertices_.empty(); }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool adjacent(VertexId u, VertexId v) const;

  /// Index of a vertex vector (binary search), if present.
  std::optional<VertexId> index_of(const RootVector& v) const;

  std::span<const std::uint64_t> offsets() const { return offsets_; }
  std::span<const VertexId> neighbor_array() const { return neighbors_; }

  friend bool operator==(const SOSGraph&, const SOSGraph&) = default;

 private:
  std::string label_;
  int k_ = 0;
  std::size_t dim_ = 0;
  std::vector<RootVector> vertices_;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<VertexId> neighbors_;
};

/// Edge rule u ~ v iff u - v is itself a vertex. Pairs are screened by the
/// squared length of the difference before the hash probe. Output does not
/// depend on block size or thread count. Throws ResourceExhausted when the
/// adjacency would exceed max_memory_bytes; the spill file and checkpoint
/// are kept so a rerun resumes.
SOSGraph build_gamma(const RootSystem& rs, int k, const BuildOptions& options = {});
SOSGraph build_gamma(const VertexSet& vs, const BuildOptions& options = {});

struct GraphStats {
  std::size_t n = 0;
  std::uint64_t m = 0;
  std::size_t min_degree = 0;
  std::size_t max_degree = 0;
  bool is_regular = true;
  std::size_t component_count = 0;
  /// Descending.
  std::vector<std::size_t> component_sizes;
  std::size_t isolated_vertex_count = 0;
};

GraphStats stats(const SOSGraph& g);

/// Orbits of a group acting on the vertex set. Ids are numbered by smallest
/// member; the representative is that smallest member.
struct OrbitSummary {
  std::vector<std::uint32_t> label;
  std::vector<std::size_t> sizes;
  std::vector<VertexId> representatives;

  std::size_t orbit_count() const { return sizes.size(); }
  /// Every vertex its own orbit.
  static OrbitSummary discrete(std::size_t n);
};

/// Weyl orbits via closure under the simple reflections. Throws
/// std::logic_error if a reflection leaves the vertex set.
OrbitSummary weyl_orbit_labels(const RootSystem& rs, const SOSGraph& g);

/// Binary layout, little-endian:
///   "SOSGRAPH" | u32 version=1 | u16 label length | label | u32 k | u64 n |
///   u64 m | u32 dim | n*dim i32 doubled coordinates | (n+1) u64 offsets |
///   2m u32 neighbours | u64 FNV-1a of all preceding bytes
/// Returns the checksum.
std::uint64_t serialize(const SOSGraph& g, const std::filesystem::path& path);
/// Throws FormatError (VersionMismatch, ChecksumMismatch, BadMagic).
SOSGraph deserialize(const std::filesystem::path& path, std::uint64_t* checksum = nullptr);

/// Graphviz export, vertex names are true coordinates.
void write_dot(const SOSGraph& g, const std::filesystem::path& path);

}  // namespace sosgraph
