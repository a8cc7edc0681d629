#include "sosgraph/clique.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "parallel.hpp"
#include "sosgraph/error.hpp"

namespace sosgraph {

namespace {

// Rows with every bit at or below the row index cleared, so that extending a
// clique by u only looks at candidates above u.
std::vector<DynBitset> upper_rows(const LocalGraph& lg) {
  std::vector<DynBitset> up;
  up.reserve(lg.size());
  for (std::size_t i = 0; i < lg.size(); ++i) {
    DynBitset r = lg.row(i);
    auto words = r.words();
    std::size_t full = i / 64;
    for (std::size_t w = 0; w < full; ++w) words[w] = 0;
    std::uint64_t keep_from = (i % 64) + 1;
    words[full] &= keep_from == 64 ? 0 : (~0ULL << keep_from);
    up.push_back(std::move(r));
  }
  return up;
}

// Reusable per-depth bitset buffers. A deque keeps references to shallower
// levels valid while deeper ones are added.
class LevelBuffers {
 public:
  explicit LevelBuffers(std::size_t bits) : bits_(bits) {}
  DynBitset& at(std::size_t depth) {
    while (levels_.size() <= depth) levels_.emplace_back(bits_);
    return levels_[depth];
  }

 private:
  std::size_t bits_;
  std::deque<DynBitset> levels_;
};

class MaxCliqueSearch {
 public:
  explicit MaxCliqueSearch(const LocalGraph& g) : g_(g), cand_(g.size()), scratch_(g.size()) {}

  int run() {
    if (g_.size() == 0) return 0;
    DynBitset& all = cand_.at(0);
    all.set_all();
    best_ = 1;
    expand(0);
    return best_;
  }

 private:
  void colour(std::size_t depth, const DynBitset& p) {
    auto& order = order_.at(depth);
    auto& colours = colours_.at(depth);
    order.clear();
    colours.clear();
    DynBitset& uncoloured = scratch_.at(2 * depth);
    DynBitset& open = scratch_.at(2 * depth + 1);
    uncoloured = p;
    int k = 0;
    while (!uncoloured.none()) {
      ++k;
      open = uncoloured;
      for (std::size_t v = open.first(); v < open.size(); v = open.next(v + 1)) {
        uncoloured.reset(v);
        open.subtract(g_.row(v));
        order.push_back(static_cast<std::uint32_t>(v));
        colours.push_back(k);
      }
    }
  }

  void expand(std::size_t depth) {
    if (order_.size() <= depth) {
      order_.resize(depth + 1);
      colours_.resize(depth + 1);
    }
    DynBitset& p = cand_.at(depth);
    colour(depth, p);
    // Copies: deeper levels reuse the vectors of this depth's siblings.
    const std::vector<std::uint32_t> order = order_[depth];
    const std::vector<int> colours = colours_[depth];
    for (std::size_t i = order.size(); i-- > 0;) {
      if (static_cast<int>(depth) + colours[i] <= best_) return;
      std::uint32_t v = order[i];
      DynBitset& next = cand_.at(depth + 1);
      next.assign_and(p, g_.row(v));
      if (next.none()) {
        best_ = std::max(best_, static_cast<int>(depth) + 1);
      } else {
        expand(depth + 1);
      }
      p.reset(v);
    }
  }

  const LocalGraph& g_;
  LevelBuffers cand_;
  LevelBuffers scratch_;
  std::vector<std::vector<std::uint32_t>> order_;
  std::vector<std::vector<int>> colours_;
  int best_ = 0;
};

std::uint64_t count_rec(const std::vector<DynBitset>& up, const DynBitset& cand, int r,
                        LevelBuffers& buf, std::size_t depth) {
  if (r == 1) return cand.count();
  std::uint64_t total = 0;
  if (r == 2) {
    cand.for_each([&](std::size_t u) { total += DynBitset::and_count(cand, up[u]); });
    return total;
  }
  DynBitset& next = buf.at(depth);
  cand.for_each([&](std::size_t u) {
    next.assign_and(cand, up[u]);
    if (next.count() >= static_cast<std::size_t>(r - 1)) total += count_rec(up, next, r - 1, buf, depth + 1);
  });
  return total;
}

std::uint64_t count_local_cliques(const LocalGraph& lg, int t) {
  if (t < 0) throw std::invalid_argument("count_cliques_of_size: t must be >= 0");
  if (t == 0) return 1;
  if (static_cast<std::size_t>(t) > lg.size()) return 0;
  LocalGraph ordered = lg.permuted(lg.degeneracy_order());
  auto up = upper_rows(ordered);
  DynBitset all(ordered.size());
  all.set_all();
  LevelBuffers buf(ordered.size());
  return count_rec(up, all, t, buf, 0);
}

// Ascending-order enumeration of t-cliques of a local graph, as local indices.
class CliqueWalker {
 public:
  CliqueWalker(const LocalGraph& lg, int t)
      : up_(upper_rows(lg)), t_(t), buf_(lg.size()), chosen_(static_cast<std::size_t>(t)) {}

  template <class F>
  void run(F&& emit) {
    DynBitset& all = buf_.at(0);
    all.set_all();
    walk(0, emit);
  }

 private:
  template <class F>
  void walk(std::size_t depth, F& emit) {
    DynBitset& cand = buf_.at(depth);
    if (cand.count() < static_cast<std::size_t>(t_) - depth) return;
    cand.for_each([&](std::size_t u) {
      chosen_[depth] = static_cast<std::uint32_t>(u);
      if (depth + 1 == static_cast<std::size_t>(t_)) {
        emit(std::span<const std::uint32_t>(chosen_));
        return;
      }
      buf_.at(depth + 1).assign_and(cand, up_[u]);
      walk(depth + 1, emit);
    });
  }

  std::vector<DynBitset> up_;
  int t_;
  LevelBuffers buf_;
  std::vector<std::uint32_t> chosen_;
};

template <class F>
void bron_kerbosch(const LocalGraph& lg, std::vector<std::uint32_t>& r, DynBitset p, DynBitset x,
                   F& emit) {
  if (p.none() && x.none()) {
    emit(r);
    return;
  }
  std::size_t pivot = 0, best = 0;
  bool have = false;
  auto consider = [&](std::size_t u) {
    std::size_t c = DynBitset::and_count(p, lg.row(u));
    if (!have || c > best) {
      pivot = u;
      best = c;
      have = true;
    }
  };
  p.for_each(consider);
  x.for_each(consider);
  DynBitset todo = p;
  todo.subtract(lg.row(pivot));
  todo.for_each([&](std::size_t v) {
    r.push_back(static_cast<std::uint32_t>(v));
    DynBitset np(lg.size()), nx(lg.size());
    np.assign_and(p, lg.row(v));
    nx.assign_and(x, lg.row(v));
    bron_kerbosch(lg, r, std::move(np), std::move(nx), emit);
    r.pop_back();
    p.reset(v);
    x.set(v);
  });
}

std::map<int, std::uint64_t> local_maximal_sizes(const LocalGraph& lg) {
  std::map<int, std::uint64_t> hist;
  std::vector<std::uint32_t> r;
  DynBitset p(lg.size()), x(lg.size());
  p.set_all();
  auto emit = [&](const std::vector<std::uint32_t>& c) { ++hist[static_cast<int>(c.size())]; };
  bron_kerbosch(lg, r, std::move(p), std::move(x), emit);
  return hist;
}

std::vector<std::uint32_t> global_degeneracy_order(const SOSGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> deg(n);
  std::size_t max_deg = 0;
  for (VertexId v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    max_deg = std::max(max_deg, deg[v]);
  }
  std::vector<std::vector<VertexId>> bucket(max_deg + 1);
  for (VertexId v = 0; v < n; ++v) bucket[deg[v]].push_back(v);
  std::vector<char> removed(n, 0);
  std::vector<std::uint32_t> order;
  order.reserve(n);
  std::size_t d = 0;
  while (order.size() < n) {
    d = std::min(d, max_deg);
    while (bucket[d].empty()) ++d;
    VertexId v = bucket[d].back();
    bucket[d].pop_back();
    if (removed[v] || deg[v] != d) continue;  // stale bucket entry
    removed[v] = 1;
    order.push_back(v);
    for (VertexId w : g.neighbors(v)) {
      if (removed[w]) continue;
      --deg[w];
      bucket[deg[w]].push_back(w);
      if (deg[w] < d) d = deg[w];
    }
  }
  return order;
}

}  // namespace

LocalGraph LocalGraph::induced(const SOSGraph& g, std::span<const VertexId> sorted_subset) {
  LocalGraph lg;
  lg.ids_.assign(sorted_subset.begin(), sorted_subset.end());
  const std::size_t m = lg.ids_.size();
  lg.rows_.assign(m, DynBitset(m));
  for (std::size_t a = 0; a < m; ++a) {
    auto nb = g.neighbors(lg.ids_[a]);
    std::size_t i = 0, j = 0;
    while (i < nb.size() && j < m) {
      if (nb[i] < lg.ids_[j]) {
        ++i;
      } else if (lg.ids_[j] < nb[i]) {
        ++j;
      } else {
        lg.rows_[a].set(j);
        ++i;
        ++j;
      }
    }
  }
  return lg;
}

LocalGraph LocalGraph::whole(const SOSGraph& g) {
  std::vector<VertexId> all(g.vertex_count());
  for (VertexId v = 0; v < all.size(); ++v) all[v] = v;
  return induced(g, all);
}

LocalGraph LocalGraph::permuted(std::span<const std::uint32_t> order) const {
  const std::size_t m = size();
  std::vector<std::uint32_t> where(m);
  for (std::size_t i = 0; i < m; ++i) where[order[i]] = static_cast<std::uint32_t>(i);
  LocalGraph out;
  out.ids_.resize(m);
  out.rows_.assign(m, DynBitset(m));
  for (std::size_t i = 0; i < m; ++i) {
    out.ids_[i] = ids_[order[i]];
    rows_[order[i]].for_each([&](std::size_t j) { out.rows_[i].set(where[j]); });
  }
  return out;
}

std::vector<std::uint32_t> LocalGraph::degeneracy_order() const {
  const std::size_t m = size();
  std::vector<std::size_t> deg(m);
  for (std::size_t i = 0; i < m; ++i) deg[i] = rows_[i].count();
  DynBitset alive(m);
  alive.set_all();
  std::vector<std::uint32_t> order;
  order.reserve(m);
  for (std::size_t step = 0; step < m; ++step) {
    std::size_t pick = m;
    alive.for_each([&](std::size_t i) {
      if (pick == m || deg[i] < deg[pick]) pick = i;
    });
    alive.reset(pick);
    order.push_back(static_cast<std::uint32_t>(pick));
    rows_[pick].for_each([&](std::size_t j) {
      if (alive.test(j)) --deg[j];
    });
  }
  return order;
}

int max_clique_size(const LocalGraph& lg) {
  if (lg.size() == 0) return 0;
  auto order = lg.degeneracy_order();
  std::reverse(order.begin(), order.end());
  LocalGraph ordered = lg.permuted(order);
  return MaxCliqueSearch(ordered).run();
}

int clique_number(const SOSGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n == 0) return 0;
  auto order = global_degeneracy_order(g);
  std::vector<std::uint32_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[order[i]] = static_cast<std::uint32_t>(i);
  int best = 1;
  std::vector<VertexId> forward;
  for (VertexId v : order) {
    forward.clear();
    for (VertexId w : g.neighbors(v))
      if (pos[w] > pos[v]) forward.push_back(w);
    if (static_cast<int>(forward.size()) + 1 <= best) continue;
    best = std::max(best, 1 + max_clique_size(LocalGraph::induced(g, forward)));
  }
  return best;
}

int clique_number(const SOSGraph& g, const OrbitSummary& orbits) {
  if (g.vertex_count() == 0) return 0;
  int best = 1;
  for (VertexId rep : orbits.representatives) {
    auto nb = g.neighbors(rep);
    if (static_cast<int>(nb.size()) + 1 <= best) continue;
    best = std::max(best, 1 + max_clique_size(LocalGraph::induced(g, nb)));
  }
  return best;
}

std::uint64_t count_cliques_of_size(const SOSGraph& g, std::span<const VertexId> sorted_subset, int t) {
  return count_local_cliques(LocalGraph::induced(g, sorted_subset), t);
}

std::uint64_t enumerate_max_cliques_through(const SOSGraph& g, VertexId v, int omega,
                                            const CliqueVisitor& visit) {
  if (omega < 1) throw std::invalid_argument("enumerate_max_cliques_through: omega must be >= 1");
  if (omega == 1) {
    VertexId only[1] = {v};
    visit(only);
    return 1;
  }
  LocalGraph lg = LocalGraph::induced(g, g.neighbors(v));
  std::vector<VertexId> clique(static_cast<std::size_t>(omega));
  std::uint64_t emitted = 0;
  CliqueWalker walker(lg, omega - 1);
  walker.run([&](std::span<const std::uint32_t> local) {
    std::size_t out = 0;
    bool placed = false;
    for (auto l : local) {
      VertexId u = lg.ids()[l];
      if (!placed && v < u) {
        clique[out++] = v;
        placed = true;
      }
      clique[out++] = u;
    }
    if (!placed) clique[out++] = v;
    visit(clique);
    ++emitted;
  });
  return emitted;
}

CliqueCensus count_maximum_cliques(const SOSGraph& g, const OrbitSummary& orbits, unsigned threads) {
  return count_maximum_cliques(g, orbits, clique_number(g, orbits), threads);
}

CliqueCensus count_maximum_cliques(const SOSGraph& g, const OrbitSummary& orbits, int omega,
                                   unsigned threads) {
  CliqueCensus census;
  census.omega = omega;
  if (g.vertex_count() == 0) return census;
  census.per_orbit.resize(orbits.orbit_count());
  detail::parallel_for(orbits.orbit_count(), threads, [&](std::size_t i) {
    VertexId rep = orbits.representatives[i];
    census.per_orbit[i] = {rep, orbits.sizes[i],
                           count_cliques_of_size(g, g.neighbors(rep), omega - 1)};
  });
  std::uint64_t incidences = 0;
  for (const auto& o : census.per_orbit) incidences += o.orbit_size * o.per_vertex;
  if (incidences % static_cast<std::uint64_t>(omega) != 0) {
    throw CountingError("count_maximum_cliques: " + std::to_string(incidences) +
                        " incidences not divisible by omega = " + std::to_string(omega));
  }
  census.total_maximum_cliques = incidences / static_cast<std::uint64_t>(omega);
  return census;
}

std::vector<std::vector<VertexId>> brute_force_maximum_cliques(const SOSGraph& g,
                                                               std::size_t max_vertices) {
  const std::size_t n = g.vertex_count();
  if (n > max_vertices) {
    throw ResourceExhausted("brute_force_maximum_cliques: " + std::to_string(n) +
                            " vertices exceeds the bound " + std::to_string(max_vertices));
  }
  std::vector<std::vector<VertexId>> found;
  if (n == 0) return found;
  LocalGraph lg = LocalGraph::whole(g);
  auto up = upper_rows(lg);
  std::vector<VertexId> clique;
  std::size_t best = 0;
  LevelBuffers buf(n);
  auto rec = [&](auto&& self, std::size_t depth) -> void {
    const DynBitset& cand = buf.at(depth);
    if (depth > 0) {
      if (depth > best) {
        best = depth;
        found.clear();
      }
      if (depth == best) found.push_back(clique);
    }
    if (depth + cand.count() < best) return;
    cand.for_each([&](std::size_t u) {
      clique.push_back(static_cast<VertexId>(u));
      buf.at(depth + 1).assign_and(cand, up[u]);
      self(self, depth + 1);
      clique.pop_back();
    });
  };
  buf.at(0).set_all();
  rec(rec, 0);
  return found;
}

void for_each_maximal_clique(const SOSGraph& g, const CliqueVisitor& visit) {
  LocalGraph lg = LocalGraph::whole(g);
  std::vector<std::uint32_t> r;
  DynBitset p(lg.size()), x(lg.size());
  p.set_all();
  std::vector<VertexId> sorted;
  auto emit = [&](const std::vector<std::uint32_t>& c) {
    sorted.assign(c.begin(), c.end());
    std::sort(sorted.begin(), sorted.end());
    visit(sorted);
  };
  bron_kerbosch(lg, r, std::move(p), std::move(x), emit);
}

std::map<int, std::uint64_t> maximal_clique_sizes(const SOSGraph& g) {
  return local_maximal_sizes(LocalGraph::whole(g));
}

std::map<int, std::uint64_t> maximal_clique_sizes(const SOSGraph& g, const OrbitSummary& orbits) {
  std::map<int, std::uint64_t> incidences;
  for (std::size_t i = 0; i < orbits.orbit_count(); ++i) {
    auto nb = g.neighbors(orbits.representatives[i]);
    for (auto [size, count] : local_maximal_sizes(LocalGraph::induced(g, nb)))
      incidences[size + 1] += orbits.sizes[i] * count;
  }
  std::map<int, std::uint64_t> totals;
  for (auto [size, inc] : incidences) {
    if (inc % static_cast<std::uint64_t>(size) != 0) {
      throw CountingError("maximal_clique_sizes: size " + std::to_string(size) +
                          " incidences not divisible");
    }
    totals[size] = inc / static_cast<std::uint64_t>(size);
  }
  return totals;
}

}  // namespace sosgraph
