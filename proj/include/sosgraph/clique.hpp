#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "sosgraph/bitset.hpp"
#include "sosgraph/graph.hpp"

namespace sosgraph {

/// Dense bitset copy of the subgraph induced on a sorted vertex subset.
/// Local index i stands for global vertex ids()[i].
class LocalGraph {
 public:
  static LocalGraph induced(const SOSGraph& g, std::span<const VertexId> sorted_subset);
  static LocalGraph whole(const SOSGraph& g);

  std::size_t size() const { return ids_.size(); }
  const DynBitset& row(std::size_t i) const { return rows_[i]; }
  std::span<const VertexId> ids() const { return ids_; }

  /// Relabelled copy: local i of the result is local order[i] of this one.
  LocalGraph permuted(std::span<const std::uint32_t> order) const;
  /// Smallest-last order: every vertex has the fewest possible neighbours
  /// after it.
  std::vector<std::uint32_t> degeneracy_order() const;

 private:
  std::vector<VertexId> ids_;
  std::vector<DynBitset> rows_;
};

/// Receives one clique as ascending global vertex ids.
using CliqueVisitor = std::function<void(std::span<const VertexId>)>;

/// Branch and bound with greedy colouring bounds on a degeneracy-ordered copy.
/// 0 for the empty graph.
int max_clique_size(const LocalGraph& lg);

/// Exact clique number (1 for edgeless, non-empty graphs). The orbit overload
/// only searches the neighbourhoods of orbit representatives, which is valid
/// whenever the orbits come from a group of automorphisms.
int clique_number(const SOSGraph& g);
int clique_number(const SOSGraph& g, const OrbitSummary& orbits);

/// Number of t-cliques in the subgraph induced on `sorted_subset`.
/// t = 0 counts the empty clique.
std::uint64_t count_cliques_of_size(const SOSGraph& g, std::span<const VertexId> sorted_subset, int t);

/// Every clique of size omega through v, each once, in lexicographic order.
/// Returns how many were emitted.
std::uint64_t enumerate_max_cliques_through(const SOSGraph& g, VertexId v, int omega,
                                            const CliqueVisitor& visit);

struct OrbitCliqueCount {
  VertexId representative = 0;
  std::uint64_t orbit_size = 0;
  std::uint64_t per_vertex = 0;
};

struct CliqueCensus {
  int omega = 0;
  std::vector<OrbitCliqueCount> per_orbit;
  std::uint64_t total_maximum_cliques = 0;
};

/// Orbit-weighted maximum-clique count: per representative v, c(v) is the
/// number of (omega-1)-cliques in N(v); total = sum n_i c_i / omega. Throws
/// CountingError if the sum is not divisible by omega.
CliqueCensus count_maximum_cliques(const SOSGraph& g, const OrbitSummary& orbits,
                                   unsigned threads = 1);
/// Same, with a clique number the caller already knows.
CliqueCensus count_maximum_cliques(const SOSGraph& g, const OrbitSummary& orbits, int omega,
                                   unsigned threads = 1);

/// All maximum cliques by exhaustive enumeration, independent of the orbit
/// machinery. Throws ResourceExhausted when n exceeds `max_vertices`.
std::vector<std::vector<VertexId>> brute_force_maximum_cliques(const SOSGraph& g,
                                                               std::size_t max_vertices = 750);

/// Bron-Kerbosch with Tomita pivoting over the whole graph.
void for_each_maximal_clique(const SOSGraph& g, const CliqueVisitor& visit);

/// Size histogram of inclusion-maximal cliques. The orbit overload counts
/// maximal cliques of N(v) at each representative and weights them; throws
/// CountingError on a non-integral class.
std::map<int, std::uint64_t> maximal_clique_sizes(const SOSGraph& g);
std::map<int, std::uint64_t> maximal_clique_sizes(const SOSGraph& g, const OrbitSummary& orbits);

}  // namespace sosgraph
