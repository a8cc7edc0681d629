#include "sosgraph/iso.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

#include "sosgraph/error.hpp"
#include "sosgraph/sos.hpp"

namespace sosgraph {

namespace {

std::uint64_t pair_count(std::size_t n) { return static_cast<std::uint64_t>(n) * (n - (n > 0)) / 2; }

std::vector<std::uint64_t> triangles_per_vertex(const SOSGraph& g) {
  std::vector<std::uint64_t> t(g.vertex_count(), 0);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    auto nv = g.neighbors(v);
    std::uint64_t twice = 0;
    for (VertexId u : nv) {
      auto nu = g.neighbors(u);
      std::size_t i = 0, j = 0;
      while (i < nv.size() && j < nu.size()) {
        if (nv[i] < nu[j]) {
          ++i;
        } else if (nu[j] < nv[i]) {
          ++j;
        } else {
          ++twice;
          ++i;
          ++j;
        }
      }
    }
    t[v] = twice / 2;
  }
  return t;
}

// Joint colour refinement over the disjoint union of two graphs of equal
// order; vertex i of b is index n + i. Colour ids come from sorted
// signatures, so they mean the same thing on both sides.
class RefinementSearch {
 public:
  RefinementSearch(const SOSGraph& a, const SOSGraph& b) : a_(a), b_(b), n_(a.vertex_count()) {}

  std::vector<std::uint32_t> initial_colours() const {
    auto ta = triangles_per_vertex(a_);
    auto tb = triangles_per_vertex(b_);
    std::map<std::pair<std::size_t, std::uint64_t>, std::uint32_t> ids;
    for (VertexId v = 0; v < n_; ++v) {
      ids.emplace(std::pair{a_.degree(v), ta[v]}, 0);
      ids.emplace(std::pair{b_.degree(v), tb[v]}, 0);
    }
    std::uint32_t next = 0;
    for (auto& [key, id] : ids) id = next++;
    std::vector<std::uint32_t> col(2 * n_);
    for (VertexId v = 0; v < n_; ++v) {
      col[v] = ids[{a_.degree(v), ta[v]}];
      col[n_ + v] = ids[{b_.degree(v), tb[v]}];
    }
    return col;
  }

  /// Visits every leaf whose mapping is an isomorphism; stops when on_leaf
  /// returns true. Returns whether it was stopped.
  template <class F>
  bool search(std::vector<std::uint32_t> col, F& on_leaf) {
    if (!refine(col)) return false;
    std::vector<std::size_t> size_a(colour_count(col), 0);
    for (std::size_t v = 0; v < n_; ++v) ++size_a[col[v]];
    std::uint32_t target = 0;
    std::size_t best = 0;
    for (std::uint32_t c = 0; c < size_a.size(); ++c) {
      if (size_a[c] > 1 && (best == 0 || size_a[c] < best)) {
        best = size_a[c];
        target = c;
      }
    }
    if (best == 0) {
      std::vector<VertexId> where(size_a.size());
      for (std::size_t v = 0; v < n_; ++v) where[col[n_ + v]] = static_cast<VertexId>(v);
      std::vector<VertexId> mapping(n_);
      for (std::size_t v = 0; v < n_; ++v) mapping[v] = where[col[v]];
      if (!is_isomorphism(a_, b_, mapping)) return false;
      return on_leaf(mapping);
    }
    std::size_t x = 0;
    while (col[x] != target) ++x;
    const auto fresh = static_cast<std::uint32_t>(size_a.size());
    for (std::size_t y = 0; y < n_; ++y) {
      if (col[n_ + y] != target) continue;
      std::vector<std::uint32_t> next = col;
      next[x] = fresh;
      next[n_ + y] = fresh;
      if (search(std::move(next), on_leaf)) return true;
    }
    return false;
  }

  /// Refines to the coarsest equitable colouring; false as soon as the two
  /// sides have different colour histograms.
  bool refine(std::vector<std::uint32_t>& col) const {
    std::size_t colours = colour_count(col);
    if (!balanced(col, colours)) return false;
    std::vector<std::uint32_t> sig;
    while (true) {
      std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
      std::vector<std::vector<std::uint32_t>> sigs(2 * n_);
      for (std::size_t i = 0; i < 2 * n_; ++i) {
        const SOSGraph& g = i < n_ ? a_ : b_;
        const std::size_t base = i < n_ ? 0 : n_;
        auto v = static_cast<VertexId>(i - base);
        sig.assign(1, col[i]);
        for (VertexId u : g.neighbors(v)) sig.push_back(col[base + u]);
        std::sort(sig.begin() + 1, sig.end());
        ids.emplace(sig, 0);
        sigs[i] = sig;
      }
      std::uint32_t next = 0;
      for (auto& [key, id] : ids) id = next++;
      for (std::size_t i = 0; i < 2 * n_; ++i) col[i] = ids[sigs[i]];
      if (!balanced(col, ids.size())) return false;
      if (ids.size() == colours) return true;
      colours = ids.size();
    }
  }

 private:
  static std::size_t colour_count(const std::vector<std::uint32_t>& col) {
    std::uint32_t mx = 0;
    for (auto c : col) mx = std::max(mx, c);
    return col.empty() ? 0 : mx + 1;
  }

  bool balanced(const std::vector<std::uint32_t>& col, std::size_t colours) const {
    std::vector<std::int64_t> diff(std::max(colours, colour_count(col)), 0);
    for (std::size_t v = 0; v < n_; ++v) {
      ++diff[col[v]];
      --diff[col[n_ + v]];
    }
    return std::all_of(diff.begin(), diff.end(), [](std::int64_t d) { return d == 0; });
  }

  const SOSGraph& a_;
  const SOSGraph& b_;
  std::size_t n_;
};

void require_simply_laced(const RootSystem& rs, const char* what) {
  if (!rs.simply_laced()) throw std::invalid_argument(std::string(what) + ": " + rs.name() + " is not simply laced");
}

}  // namespace

nlohmann::json to_json(const CheckReport& r) {
  return {{"check", r.check},
          {"system", r.system},
          {"k", r.k},
          {"passed", r.passed},
          {"exhaustive", r.exhaustive},
          {"items_checked", r.items_checked},
          {"sample_size", r.sample_size},
          {"seed", r.seed},
          {"detail", r.detail}};
}

bool is_doubling(const VertexSet& small, const VertexSet& large) {
  if (small.size() != large.size() || small.dim != large.dim) return false;
  // Doubling preserves lexicographic order, so compare position by position.
  for (std::size_t i = 0; i < small.size(); ++i)
    if (small.vectors[i].scaled(2) != large.vectors[i]) return false;
  return true;
}

CheckReport check_scaling_isomorphism(const RootSystem& rs, int k_small, int k_large) {
  CheckReport r;
  r.check = "scaling_isomorphism";
  r.system = rs.name();
  r.k = k_large;
  VertexSet small = vertex_set(rs, k_small);
  VertexSet large = vertex_set(rs, k_large);
  r.passed = !small.vectors.empty() && is_doubling(small, large);
  r.items_checked = small.size();
  r.detail = "V(" + rs.name() + "," + std::to_string(k_large) + ") has " + std::to_string(large.size()) +
             " vertices, 2*V(" + rs.name() + "," + std::to_string(k_small) + ") has " + std::to_string(small.size());
  return r;
}

CheckReport check_mod8(const RootSystem& rs, int k, const SamplingPolicy& policy) {
  require_simply_laced(rs, "check_mod8");
  VertexSet vs = vertex_set(rs, k);
  std::vector<std::uint64_t> offsets(vs.size() + 1, 0);
  return check_mod8(SOSGraph(vs.label, k, vs.dim, vs.vectors, std::move(offsets), {}), rs, policy);
}

CheckReport check_mod8(const SOSGraph& g, const RootSystem& rs, const SamplingPolicy& policy) {
  require_simply_laced(rs, "check_mod8");
  const std::size_t n = g.vertex_count();
  if (n == 0) throw std::invalid_argument("check_mod8: empty vertex set");
  CheckReport r;
  r.check = "mod8";
  r.system = rs.name();
  r.k = g.k();
  r.passed = true;
  auto bad = [&](VertexId u, VertexId v) {
    // Doubled coordinates scale squared lengths by 4.
    if (norm2(g.vertex(u) - g.vertex(v)) % 32 == 0) return false;
    r.passed = false;
    r.detail = "||v - w||^2 not divisible by 8 for v = " + g.vertex(u).to_string() +
               ", w = " + g.vertex(v).to_string();
    return true;
  };
  const std::uint64_t pairs = pair_count(n);
  if (pairs <= policy.exhaustive_pair_limit) {
    r.exhaustive = true;
    for (VertexId u = 0; u < n && r.passed; ++u)
      for (VertexId v = u + 1; v < n; ++v) {
        ++r.items_checked;
        if (bad(u, v)) break;
      }
  } else {
    r.exhaustive = false;
    r.sample_size = policy.samples;
    r.seed = policy.seed;
    std::mt19937_64 rng(policy.seed);
    std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
    for (std::uint64_t s = 0; s < policy.samples; ++s) {
      ++r.items_checked;
      if (bad(pick(rng), pick(rng))) break;
    }
  }
  if (r.passed) {
    r.detail = g.k() == rs.rank() ? "k equals the rank" : "k differs from the rank " + std::to_string(rs.rank());
  }
  return r;
}

CheckReport check_degree_formula(const RootSystem& rs) {
  require_simply_laced(rs, "check_degree_formula");
  SOSGraph g = build_gamma(rs, 1);
  GraphStats st = stats(g);
  const std::size_t expected = 2 * (static_cast<std::size_t>(rs.coxeter_number()) - 2);
  CheckReport r;
  r.check = "degree_formula";
  r.system = rs.name();
  r.k = 1;
  r.items_checked = st.n;
  r.passed = st.n > 0 && st.is_regular && st.min_degree == expected;
  r.detail = "expected degree " + std::to_string(expected) + ", observed " + std::to_string(st.min_degree) +
             ".." + std::to_string(st.max_degree);
  return r;
}

CheckReport check_weyl_automorphism(const SOSGraph& g, const RootSystem& rs, std::size_t exhaustive_vertex_limit,
                                    std::uint64_t samples, std::uint64_t seed) {
  const std::size_t n = g.vertex_count();
  CheckReport r;
  r.check = "weyl_automorphism";
  r.system = rs.name();
  r.k = g.k();
  r.passed = true;
  r.exhaustive = n <= exhaustive_vertex_limit;
  if (!r.exhaustive) {
    r.sample_size = samples;
    r.seed = seed;
  }
  std::mt19937_64 rng(seed);
  std::vector<VertexId> perm(n);
  std::vector<char> hit(n);
  for (std::size_t s = 0; s < rs.simple_reflections().size() && r.passed; ++s) {
    const Reflection& refl = rs.simple_reflections()[s];
    std::fill(hit.begin(), hit.end(), 0);
    for (VertexId v = 0; v < n; ++v) {
      auto w = g.index_of(refl.apply(g.vertex(v)));
      if (!w || hit[*w]) {
        r.passed = false;
        r.detail = "simple reflection " + std::to_string(s) + " does not permute the vertices";
        break;
      }
      hit[*w] = 1;
      perm[v] = *w;
    }
    if (!r.passed) break;
    auto check = [&](VertexId u, VertexId v) {
      ++r.items_checked;
      if (g.adjacent(u, v) == g.adjacent(perm[u], perm[v])) return true;
      r.passed = false;
      r.detail = "simple reflection " + std::to_string(s) + " breaks adjacency of " + g.vertex(u).to_string() +
                 " and " + g.vertex(v).to_string();
      return false;
    };
    if (r.exhaustive) {
      for (VertexId u = 0; u < n && r.passed; ++u)
        for (VertexId v = u + 1; v < n; ++v)
          if (!check(u, v)) break;
    } else {
      const auto& nb = g.neighbor_array();
      std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
      for (std::uint64_t i = 0; i < samples && r.passed; ++i) {
        VertexId u = pick(rng), v = pick(rng);
        if (i % 2 == 0 && !nb.empty()) {
          // An edge: a random neighbour slot and its owner.
          std::uniform_int_distribution<std::size_t> slot(0, nb.size() - 1);
          std::size_t e = slot(rng);
          auto offs = g.offsets();
          u = static_cast<VertexId>(std::upper_bound(offs.begin(), offs.end(), e) - offs.begin() - 1);
          v = nb[e];
        }
        check(u, v);
      }
    }
  }
  if (r.passed) r.detail = std::to_string(rs.simple_reflections().size()) + " simple reflections";
  return r;
}

bool is_isomorphism(const SOSGraph& g1, const SOSGraph& g2, const std::vector<VertexId>& mapping) {
  const std::size_t n = g1.vertex_count();
  if (g2.vertex_count() != n || mapping.size() != n || g1.edge_count() != g2.edge_count()) return false;
  std::vector<char> hit(n, 0);
  for (VertexId v : mapping) {
    if (v >= n || hit[v]) return false;
    hit[v] = 1;
  }
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v : g1.neighbors(u))
      if (u < v && !g2.adjacent(mapping[u], mapping[v])) return false;
  return true;
}

IsomorphismResult check_graph_isomorphism_small(const SOSGraph& g1, const SOSGraph& g2, std::size_t max_vertices) {
  if (g1.vertex_count() > max_vertices || g2.vertex_count() > max_vertices) {
    throw ResourceExhausted("check_graph_isomorphism_small: more than " + std::to_string(max_vertices) + " vertices");
  }
  IsomorphismResult out;
  if (g1.vertex_count() != g2.vertex_count()) {
    out.reason = "vertex counts differ";
    return out;
  }
  if (g1.edge_count() != g2.edge_count()) {
    out.reason = "edge counts differ";
    return out;
  }
  auto sorted_degrees = [](const SOSGraph& g) {
    std::vector<std::size_t> d(g.vertex_count());
    for (VertexId v = 0; v < d.size(); ++v) d[v] = g.degree(v);
    std::sort(d.begin(), d.end());
    return d;
  };
  if (sorted_degrees(g1) != sorted_degrees(g2)) {
    out.reason = "degree sequences differ";
    return out;
  }
  auto t1 = triangles_per_vertex(g1), t2 = triangles_per_vertex(g2);
  std::sort(t1.begin(), t1.end());
  std::sort(t2.begin(), t2.end());
  if (t1 != t2) {
    out.reason = "triangle counts differ";
    return out;
  }
  RefinementSearch search(g1, g2);
  auto stop = [&](const std::vector<VertexId>& mapping) {
    out.mapping = mapping;
    return true;
  };
  out.isomorphic = search.search(search.initial_colours(), stop);
  out.reason = out.isomorphic ? "explicit bijection verified on every edge" : "no bijection survives refinement";
  return out;
}

std::uint64_t count_automorphisms(const SOSGraph& g, std::size_t max_vertices) {
  if (g.vertex_count() > max_vertices) {
    throw ResourceExhausted("count_automorphisms: more than " + std::to_string(max_vertices) + " vertices");
  }
  std::uint64_t count = 0;
  RefinementSearch search(g, g);
  auto tally = [&](const std::vector<VertexId>&) {
    ++count;
    return false;
  };
  search.search(search.initial_colours(), tally);
  return count;
}

}  // namespace sosgraph
