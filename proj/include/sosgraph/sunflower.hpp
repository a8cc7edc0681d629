#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sosgraph/graph.hpp"
#include "sosgraph/roots.hpp"

namespace sosgraph {

/// Bit i set iff coordinate i is non-zero. Up to 64 coordinates.
using SupportMask = std::uint64_t;

struct SunflowerVerdict {
  bool is_sunflower = false;
  /// Columns that are non-zero in every vector (0-based).
  std::vector<std::size_t> core;
  /// Number of vectors non-zero in each column.
  std::vector<std::size_t> column_profile;
};

/// Column test: every column has 0, 1 or p non-zero entries and at least one
/// column has p. Throws std::invalid_argument for fewer than two vectors or
/// mixed dimensions.
SunflowerVerdict is_sunflower(std::span<const RootVector> clique);
SunflowerVerdict is_sunflower(std::span<const std::vector<std::int64_t>> rows);

/// Same test on support masks only; the hot path of the counters.
bool is_sunflower_supports(std::span<const SupportMask> supports);

std::vector<SupportMask> support_masks(const SOSGraph& g);

/// Coordinate permutation: coordinate i of v moves to position image[i].
using Permutation = std::vector<std::uint8_t>;

RootVector apply(const Permutation& p, const RootVector& v);

class PermGroup {
 public:
  PermGroup() = default;
  PermGroup(std::size_t dim, std::vector<Permutation> generators);

  /// Only the identity.
  static PermGroup trivial(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::span<const Permutation> generators() const { return generators_; }

  /// Group order by enumerating the closure of the generators.
  std::uint64_t order() const;

  /// Orbits on the vertices of g. Throws std::logic_error if a generator
  /// leaves the vertex set.
  OrbitSummary orbits(const SOSGraph& g) const;

 private:
  std::size_t dim_ = 0;
  std::vector<Permutation> generators_;
};

/// Coordinate permutations inside the Weyl group of an exceptional system:
/// E8 all of S8, E7 swap(1,8) with S6 on 2..7, E6 S5 on 2..6, F4 S4, G2 S3.
/// Throws std::logic_error if a generator does not map the root set onto
/// itself, std::invalid_argument for other families.
PermGroup permutation_subgroup(const RootSystem& rs);

/// True iff every generator maps the root set onto itself.
bool preserves_roots(const PermGroup& group, const RootSystem& rs);

struct OrbitSunflowerCount {
  VertexId representative = 0;
  std::uint64_t orbit_size = 0;
  /// Maximum cliques through the representative, and how many are sunflowers.
  std::uint64_t cliques_through = 0;
  std::uint64_t sunflowers_through = 0;
};

struct SunflowerCensus {
  int omega = 0;
  std::uint64_t maximum_cliques = 0;
  std::uint64_t sunflowers = 0;
  std::vector<OrbitSunflowerCount> per_orbit;

  /// sunflowers / maximum_cliques in percent, one decimal, half up.
  std::string percent() const;
};

/// Enumerates the maximum cliques through each orbit representative, tests
/// them against `supports`, and forms sum |O_i| sf(v_i) / omega. The orbits
/// must come from a group that preserves both adjacency and supports. Throws
/// CountingError on a non-integral total.
SunflowerCensus count_sunflower_max_cliques(const SOSGraph& g, std::span<const SupportMask> supports,
                                            const OrbitSummary& orbits, int omega,
                                            unsigned threads = 1);
/// Default coordinates and the coordinate-permutation subgroup of rs.
SunflowerCensus count_sunflower_max_cliques(const SOSGraph& g, const RootSystem& rs, int omega,
                                            unsigned threads = 1);

/// Percentage with one decimal, rounding half up. "0.0" when den is 0.
std::string format_percent(std::uint64_t num, std::uint64_t den);

/// Linear map applied to true coordinates: new_i = sum_j rows[i][j] x_j.
struct Basis {
  RationalMatrix rows;

  /// {"rows": [[...], ...]} with integers or "p/q" strings.
  static Basis from_json(const nlohmann::json& j);
  static Basis load(const std::filesystem::path& path);
  static Basis identity(std::size_t dim);
};

struct RebasedVertices {
  std::size_t dim = 0;
  /// Integer rows: every image times one common factor clearing all denominators.
  std::vector<std::vector<std::int64_t>> rows;
  std::vector<SupportMask> supports;
};

/// Re-expresses every vertex in the new coordinates. Throws
/// std::invalid_argument if the map has the wrong width, more than 64 rows,
/// or is not injective on the span of the vertices.
RebasedVertices rebase_vertices(const SOSGraph& g, const Basis& basis);

struct MaximalSunflowerRow {
  std::uint64_t maximal_cliques = 0;
  std::uint64_t sunflowers = 0;
};

/// Size -> counts over all inclusion-maximal cliques of size >= 2, by
/// Bron-Kerbosch on the whole graph. For small graphs.
std::map<int, MaximalSunflowerRow> maximal_clique_sunflowers(const SOSGraph& g,
                                                             std::span<const SupportMask> supports);

}  // namespace sosgraph
