#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sosgraph/graph.hpp"
#include "sosgraph/roots.hpp"

namespace sosgraph {

inline constexpr std::uint64_t kDefaultCheckSeed = 0x5eed5eed2024ULL;

/// Outcome of one structural check, serialisable for the verify report.
struct CheckReport {
  std::string check;
  std::string system;
  int k = 0;
  bool passed = false;
  bool exhaustive = true;
  std::uint64_t items_checked = 0;
  std::uint64_t sample_size = 0;
  std::uint64_t seed = 0;
  std::string detail;
};

nlohmann::json to_json(const CheckReport& r);

/// V(rs,k_large) == { 2v : v in V(rs,k_small) } as sets.
CheckReport check_scaling_isomorphism(const RootSystem& rs, int k_small, int k_large);
/// Same on vertex sets that are already built.
bool is_doubling(const VertexSet& small, const VertexSet& large);

struct SamplingPolicy {
  /// Exhaustive when the number of unordered pairs is at most this.
  std::uint64_t exhaustive_pair_limit = 10'000'000;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = kDefaultCheckSeed;
};

/// Every pair of vertices of Gamma(rs,k) has true squared distance divisible
/// by 8 (doubled value divisible by 32). The detail notes whether k equals
/// the rank. Throws std::invalid_argument if rs is not simply laced or the
/// vertex set is empty.
CheckReport check_mod8(const RootSystem& rs, int k, const SamplingPolicy& policy = {});
CheckReport check_mod8(const SOSGraph& g, const RootSystem& rs, const SamplingPolicy& policy = {});

/// Gamma(rs,1) is regular of degree 2(h-2). Throws std::invalid_argument if
/// rs is not simply laced.
CheckReport check_degree_formula(const RootSystem& rs);

/// Every simple reflection permutes the vertices and preserves adjacency and
/// non-adjacency. Exhaustive over all pairs when n <= exhaustive_vertex_limit,
/// otherwise `samples` pairs per reflection, half drawn from edges.
CheckReport check_weyl_automorphism(const SOSGraph& g, const RootSystem& rs,
                                    std::size_t exhaustive_vertex_limit = 1000,
                                    std::uint64_t samples = 1'000'000,
                                    std::uint64_t seed = kDefaultCheckSeed);

struct IsomorphismResult {
  bool isomorphic = false;
  /// mapping[v] is the image in the second graph of vertex v of the first.
  std::vector<VertexId> mapping;
  std::string reason;
};

/// Invariant screening (degrees, triangles per vertex), colour refinement,
/// then individualisation with backtracking. A returned mapping has been
/// checked edge by edge. Throws ResourceExhausted above max_vertices.
IsomorphismResult check_graph_isomorphism_small(const SOSGraph& g1, const SOSGraph& g2,
                                                std::size_t max_vertices = 5000);

/// True iff mapping is a bijection carrying edges onto edges.
bool is_isomorphism(const SOSGraph& g1, const SOSGraph& g2, const std::vector<VertexId>& mapping);

/// |Aut(g)| by exhausting the same search tree. Throws ResourceExhausted
/// above max_vertices.
std::uint64_t count_automorphisms(const SOSGraph& g, std::size_t max_vertices = 64);

}  // namespace sosgraph
