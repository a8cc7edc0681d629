#include "sosgraph/sunflower.hpp"

#include <bit>
#include <deque>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

#include "parallel.hpp"
#include "sosgraph/clique.hpp"
#include "sosgraph/error.hpp"

namespace sosgraph {

namespace {

template <class Row>
SunflowerVerdict column_verdict(std::span<const Row> rows) {
  if (rows.size() < 2) throw std::invalid_argument("is_sunflower: need at least two vectors");
  const std::size_t dim = rows[0].size();
  SunflowerVerdict out;
  out.column_profile.assign(dim, 0);
  for (const auto& r : rows) {
    if (r.size() != dim) throw std::invalid_argument("is_sunflower: mixed dimensions");
    for (std::size_t c = 0; c < dim; ++c)
      if (r[c] != 0) ++out.column_profile[c];
  }
  bool columns_ok = true;
  for (std::size_t c = 0; c < dim; ++c) {
    std::size_t n = out.column_profile[c];
    if (n == rows.size()) {
      out.core.push_back(c);
    } else if (n > 1) {
      columns_ok = false;
    }
  }
  out.is_sunflower = columns_ok && !out.core.empty();
  return out;
}

Permutation transposition(std::size_t dim, std::size_t a, std::size_t b) {
  Permutation p(dim);
  std::iota(p.begin(), p.end(), std::uint8_t{0});
  std::swap(p[a], p[b]);
  return p;
}

// Adjacent transpositions generating the symmetric group on `coords`.
void add_symmetric(std::vector<Permutation>& gens, std::size_t dim, std::span<const std::size_t> coords) {
  for (std::size_t i = 0; i + 1 < coords.size(); ++i) gens.push_back(transposition(dim, coords[i], coords[i + 1]));
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return a / std::gcd(a, b) * b; }

Rational parse_entry(const nlohmann::json& e) {
  if (e.is_number_integer()) return Rational(e.get<std::int64_t>());
  if (e.is_string()) {
    const std::string s = e.get<std::string>();
    auto slash = s.find('/');
    try {
      std::size_t used = 0;
      if (slash == std::string::npos) {
        std::int64_t n = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return Rational(n);
      }
      std::string num = s.substr(0, slash), den = s.substr(slash + 1);
      std::int64_t n = std::stoll(num, &used);
      if (used != num.size()) throw std::invalid_argument(s);
      std::int64_t d = std::stoll(den, &used);
      if (used != den.size() || d == 0) throw std::invalid_argument(s);
      return Rational(n, d);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("basis entry is not a rational: \"" + s + "\"");
    }
  }
  throw std::invalid_argument("basis entries must be integers or \"p/q\" strings");
}

// Rank of a set of rational rows by incremental elimination.
class RowSpace {
 public:
  explicit RowSpace(std::size_t dim) : dim_(dim) {}

  /// Adds v if it is independent of the rows so far; returns whether it was.
  bool add(std::vector<Rational> v) {
    for (const auto& [pivot, row] : rows_) {
      if (v[pivot].numerator() == 0) continue;
      Rational f = v[pivot] / row[pivot];
      for (std::size_t j = 0; j < dim_; ++j) v[j] -= f * row[j];
    }
    for (std::size_t j = 0; j < dim_; ++j) {
      if (v[j].numerator() != 0) {
        rows_.emplace_back(j, std::move(v));
        return true;
      }
    }
    return false;
  }
  std::size_t rank() const { return rows_.size(); }

 private:
  std::size_t dim_;
  std::vector<std::pair<std::size_t, std::vector<Rational>>> rows_;
};

std::vector<Rational> image(const RationalMatrix& m, const RootVector& v) {
  std::vector<Rational> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < v.dim(); ++j) s += m[i][j] * Rational(v[j], 2);
    out[i] = s;
  }
  return out;
}

}  // namespace

SunflowerVerdict is_sunflower(std::span<const RootVector> clique) {
  std::vector<std::vector<std::int64_t>> rows;
  rows.reserve(clique.size());
  for (const auto& v : clique) rows.emplace_back(v.coords().begin(), v.coords().end());
  return column_verdict<std::vector<std::int64_t>>(rows);
}

SunflowerVerdict is_sunflower(std::span<const std::vector<std::int64_t>> rows) {
  return column_verdict(rows);
}

bool is_sunflower_supports(std::span<const SupportMask> supports) {
  if (supports.size() < 2) throw std::invalid_argument("is_sunflower: need at least two vectors");
  SupportMask seen = 0, twice = 0, core = ~SupportMask{0};
  for (SupportMask s : supports) {
    twice |= seen & s;
    seen |= s;
    core &= s;
  }
  // Columns hit at least twice must be hit by every vector.
  return core != 0 && twice == core;
}

std::vector<SupportMask> support_masks(const SOSGraph& g) {
  std::vector<SupportMask> out;
  out.reserve(g.vertex_count());
  for (const auto& v : g.vertices()) out.push_back(v.support());
  return out;
}

RootVector apply(const Permutation& p, const RootVector& v) {
  if (p.size() != v.dim()) throw std::invalid_argument("apply: permutation and vector dimensions differ");
  RootVector out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) out[p[i]] = v[i];
  return out;
}

PermGroup::PermGroup(std::size_t dim, std::vector<Permutation> generators)
    : dim_(dim), generators_(std::move(generators)) {
  for (const auto& g : generators_) {
    if (g.size() != dim_) throw std::invalid_argument("PermGroup: generator has the wrong length");
    std::vector<bool> hit(dim_, false);
    for (auto x : g) {
      if (x >= dim_ || hit[x]) throw std::invalid_argument("PermGroup: generator is not a permutation");
      hit[x] = true;
    }
  }
}

PermGroup PermGroup::trivial(std::size_t dim) { return PermGroup(dim, {}); }

std::uint64_t PermGroup::order() const {
  Permutation id(dim_);
  std::iota(id.begin(), id.end(), std::uint8_t{0});
  std::set<Permutation> seen{id};
  std::deque<Permutation> queue{id};
  while (!queue.empty()) {
    Permutation p = std::move(queue.front());
    queue.pop_front();
    for (const auto& g : generators_) {
      Permutation q(dim_);
      for (std::size_t i = 0; i < dim_; ++i) q[i] = g[p[i]];
      if (seen.insert(q).second) queue.push_back(std::move(q));
    }
  }
  return seen.size();
}

OrbitSummary PermGroup::orbits(const SOSGraph& g) const {
  const std::size_t n = g.vertex_count();
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  OrbitSummary out;
  out.label.assign(n, kUnset);
  std::vector<VertexId> queue;
  for (VertexId v = 0; v < n; ++v) {
    if (out.label[v] != kUnset) continue;
    auto id = static_cast<std::uint32_t>(out.sizes.size());
    out.label[v] = id;
    queue.assign(1, v);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const RootVector& x = g.vertex(queue[head]);
      for (const auto& p : generators_) {
        auto w = g.index_of(apply(p, x));
        if (!w) throw std::logic_error("PermGroup::orbits: generator leaves the vertex set");
        if (out.label[*w] == kUnset) {
          out.label[*w] = id;
          queue.push_back(*w);
        }
      }
    }
    out.sizes.push_back(queue.size());
    out.representatives.push_back(v);
  }
  return out;
}

bool preserves_roots(const PermGroup& group, const RootSystem& rs) {
  for (const auto& p : group.generators())
    for (const auto& r : rs.roots())
      if (!rs.contains(apply(p, r))) return false;
  return true;
}

PermGroup permutation_subgroup(const RootSystem& rs) {
  const std::size_t dim = rs.ambient_dim();
  std::vector<Permutation> gens;
  auto range = [](std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> c(hi - lo);
    std::iota(c.begin(), c.end(), lo);
    return c;
  };
  switch (rs.label().family) {
    case Family::E8:
    case Family::F4:
    case Family::G2:
      add_symmetric(gens, dim, range(0, dim));
      break;
    case Family::E7:
      gens.push_back(transposition(dim, 0, 7));
      add_symmetric(gens, dim, range(1, 7));
      break;
    case Family::E6:
      add_symmetric(gens, dim, range(1, 6));
      break;
    default:
      throw std::invalid_argument("permutation_subgroup: only defined for the exceptional systems");
  }
  PermGroup group(dim, std::move(gens));
  if (!preserves_roots(group, rs)) {
    throw std::logic_error("permutation_subgroup: a generator does not preserve the roots of " + rs.name());
  }
  return group;
}

std::string SunflowerCensus::percent() const { return format_percent(sunflowers, maximum_cliques); }

std::string format_percent(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return "0.0";
  std::uint64_t tenths = (2000 * num + den) / (2 * den);
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

SunflowerCensus count_sunflower_max_cliques(const SOSGraph& g, std::span<const SupportMask> supports,
                                            const OrbitSummary& orbits, int omega, unsigned threads) {
  if (omega < 2) throw std::invalid_argument("count_sunflower_max_cliques: needs omega >= 2");
  if (supports.size() != g.vertex_count()) {
    throw std::invalid_argument("count_sunflower_max_cliques: one support per vertex required");
  }
  SunflowerCensus census;
  census.omega = omega;
  census.per_orbit.resize(orbits.orbit_count());
  detail::parallel_for(orbits.orbit_count(), threads, [&](std::size_t i) {
    OrbitSunflowerCount& row = census.per_orbit[i];
    row.representative = orbits.representatives[i];
    row.orbit_size = orbits.sizes[i];
    std::vector<SupportMask> masks(static_cast<std::size_t>(omega));
    row.cliques_through =
        enumerate_max_cliques_through(g, row.representative, omega, [&](std::span<const VertexId> c) {
          for (std::size_t j = 0; j < c.size(); ++j) masks[j] = supports[c[j]];
          if (is_sunflower_supports(masks)) ++row.sunflowers_through;
        });
  });
  std::uint64_t cliques = 0, sunflowers = 0;
  for (const auto& row : census.per_orbit) {
    cliques += row.orbit_size * row.cliques_through;
    sunflowers += row.orbit_size * row.sunflowers_through;
  }
  const auto w = static_cast<std::uint64_t>(omega);
  if (cliques % w != 0 || sunflowers % w != 0) {
    throw CountingError("count_sunflower_max_cliques: weighted sums " + std::to_string(cliques) + ", " +
                        std::to_string(sunflowers) + " not divisible by omega = " + std::to_string(omega));
  }
  census.maximum_cliques = cliques / w;
  census.sunflowers = sunflowers / w;
  return census;
}

SunflowerCensus count_sunflower_max_cliques(const SOSGraph& g, const RootSystem& rs, int omega,
                                            unsigned threads) {
  auto supports = support_masks(g);
  auto orbits = permutation_subgroup(rs).orbits(g);
  return count_sunflower_max_cliques(g, supports, orbits, omega, threads);
}

Basis Basis::from_json(const nlohmann::json& j) {
  const nlohmann::json& rows = j.is_object() ? j.at("rows") : j;
  if (!rows.is_array() || rows.empty()) throw std::invalid_argument("basis: \"rows\" must be a non-empty array");
  Basis b;
  for (const auto& r : rows) {
    if (!r.is_array()) throw std::invalid_argument("basis: every row must be an array");
    std::vector<Rational> row;
    for (const auto& e : r) row.push_back(parse_entry(e));
    if (!b.rows.empty() && row.size() != b.rows.front().size()) {
      throw std::invalid_argument("basis: rows have different lengths");
    }
    b.rows.push_back(std::move(row));
  }
  return b;
}

Basis Basis::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open basis file " + path.string());
  return from_json(nlohmann::json::parse(in));
}

Basis Basis::identity(std::size_t dim) {
  Basis b;
  b.rows.assign(dim, std::vector<Rational>(dim, Rational(0)));
  for (std::size_t i = 0; i < dim; ++i) b.rows[i][i] = 1;
  return b;
}

RebasedVertices rebase_vertices(const SOSGraph& g, const Basis& basis) {
  const RationalMatrix& m = basis.rows;
  if (m.empty() || m.size() > 64) throw std::invalid_argument("rebase_vertices: basis needs 1 to 64 rows");
  if (m.front().size() != g.dim()) {
    throw std::invalid_argument("rebase_vertices: basis has " + std::to_string(m.front().size()) +
                                " columns, vertices have dimension " + std::to_string(g.dim()));
  }

  // Injective on the span of the vertices iff a basis of that span keeps its rank.
  RowSpace span(g.dim()), images(m.size());
  for (const auto& v : g.vertices()) {
    std::vector<Rational> row(v.dim());
    for (std::size_t j = 0; j < v.dim(); ++j) row[j] = Rational(v[j], 2);
    if (span.add(row)) images.add(image(m, v));
    if (span.rank() == g.dim()) break;
  }
  if (images.rank() != span.rank()) throw std::invalid_argument("rebase_vertices: map is not invertible on the vertex span");

  std::int64_t scale = 2;
  for (const auto& row : m)
    for (const auto& e : row) scale = lcm64(scale, 2 * e.denominator());

  RebasedVertices out;
  out.dim = m.size();
  out.rows.reserve(g.vertex_count());
  out.supports.reserve(g.vertex_count());
  for (const auto& v : g.vertices()) {
    std::vector<std::int64_t> row(m.size());
    SupportMask mask = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      Rational s = 0;
      for (std::size_t j = 0; j < v.dim(); ++j) s += m[i][j] * v[j];
      s *= Rational(scale, 2);
      row[i] = boost::rational_cast<std::int64_t>(s);
      if (row[i] != 0) mask |= SupportMask{1} << i;
    }
    out.rows.push_back(std::move(row));
    out.supports.push_back(mask);
  }
  return out;
}

std::map<int, MaximalSunflowerRow> maximal_clique_sunflowers(const SOSGraph& g,
                                                             std::span<const SupportMask> supports) {
  if (supports.size() != g.vertex_count()) {
    throw std::invalid_argument("maximal_clique_sunflowers: one support per vertex required");
  }
  std::map<int, MaximalSunflowerRow> out;
  std::vector<SupportMask> masks;
  for_each_maximal_clique(g, [&](std::span<const VertexId> c) {
    if (c.size() < 2) return;
    auto& row = out[static_cast<int>(c.size())];
    ++row.maximal_cliques;
    masks.clear();
    for (auto v : c) masks.push_back(supports[v]);
    if (is_sunflower_supports(masks)) ++row.sunflowers;
  });
  return out;
}

}  // namespace sosgraph
