#include "sosgraph/graph.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "binary_io.hpp"
#include "sosgraph/error.hpp"

namespace sosgraph {

namespace {

using Edge = std::pair<VertexId, VertexId>;

constexpr char kGraphMagic[8] = {'S', 'O', 'S', 'G', 'R', 'A', 'P', 'H'};
constexpr std::uint32_t kGraphVersion = 1;

unsigned resolve_threads(unsigned requested) {
  if (requested) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

// Read-only state shared by all edge workers.
class EdgeGenerator {
 public:
  explicit EdgeGenerator(const std::vector<RootVector>& vertices, std::size_t dim)
      : n_(vertices.size()), dim_(dim), keys_(n_), norms_(n_), coords_(dim * n_), index_(n_) {
    std::int32_t max_norm = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      const RootVector& v = vertices[i];
      keys_[i] = v.key();
      norms_[i] = static_cast<std::int32_t>(norm2(v));
      max_norm = std::max(max_norm, norms_[i]);
      for (std::size_t d = 0; d < dim; ++d) coords_[d * n_ + i] = static_cast<std::int16_t>(v[d]);
      index_.insert(keys_[i], static_cast<std::uint32_t>(i));
    }
    // Any difference has squared length at most 4 * max_norm.
    norm_ok_.assign(static_cast<std::size_t>(4 * max_norm) + 1, 0);
    for (auto nv : norms_) norm_ok_[static_cast<std::size_t>(nv)] = 1;
  }

  std::size_t size() const { return n_; }

  /// Edges (i, j), i in [i0, i1), j > i, in lexicographic order.
  void row_block(std::size_t i0, std::size_t i1, std::size_t chunk, std::vector<Edge>& out) const {
    std::vector<std::int32_t> d2(chunk);
    for (std::size_t i = i0; i < i1; ++i) {
      std::int16_t xi[kMaxDim] = {};
      for (std::size_t d = 0; d < dim_; ++d) xi[d] = coords_[d * n_ + i];
      const std::int32_t ni = norms_[i];
      const std::uint64_t ki = keys_[i];
      for (std::size_t j0 = i + 1; j0 < n_; j0 += chunk) {
        std::size_t len = std::min(chunk, n_ - j0);
        for (std::size_t t = 0; t < len; ++t) d2[t] = ni + norms_[j0 + t];
        for (std::size_t d = 0; d < dim_; ++d) {
          const std::int16_t* col = coords_.data() + d * n_ + j0;
          const std::int32_t x2 = 2 * xi[d];
          for (std::size_t t = 0; t < len; ++t) d2[t] -= x2 * col[t];
        }
        for (std::size_t t = 0; t < len; ++t) {
          if (!norm_ok_[static_cast<std::size_t>(d2[t])]) continue;
          std::size_t j = j0 + t;
          if (index_.contains(key_difference(ki, keys_[j]))) {
            out.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(j));
          }
        }
      }
    }
  }

  std::uint64_t fingerprint() const {
    std::uint64_t h = io::kFnvOffset;
    for (auto k : keys_) h = (h ^ k) * io::kFnvPrime;
    return h;
  }

 private:
  std::size_t n_;
  std::size_t dim_;
  std::vector<std::uint64_t> keys_;
  std::vector<std::int32_t> norms_;
  std::vector<std::int16_t> coords_;  // column-major: coords_[d * n + i]
  std::vector<std::uint8_t> norm_ok_;
  KeyIndex index_;
};

// Collects edges in (u, v) order, u < v, for CSR assembly.
struct MemorySink {
  void append(const std::vector<Edge>& edges) { edges_.insert(edges_.end(), edges.begin(), edges.end()); }
  std::vector<Edge> edges_;
};

struct Checkpoint {
  std::size_t n = 0;
  std::size_t block_size = 0;
  std::uint64_t fingerprint = 0;
  std::size_t blocks_done = 0;
  std::uint64_t edges = 0;

  nlohmann::json to_json() const {
    return {{"n", n}, {"block_size", block_size}, {"fingerprint", fingerprint},
            {"blocks_done", blocks_done}, {"edges", edges}};
  }
  static std::optional<Checkpoint> load(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) return std::nullopt;
    try {
      auto j = nlohmann::json::parse(in);
      Checkpoint c;
      c.n = j.at("n");
      c.block_size = j.at("block_size");
      c.fingerprint = j.at("fingerprint");
      c.blocks_done = j.at("blocks_done");
      c.edges = j.at("edges");
      return c;
    } catch (const nlohmann::json::exception&) {
      return std::nullopt;
    }
  }
  void save(const std::filesystem::path& p) const {
    auto tmp = p;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      out << to_json().dump() << '\n';
    }
    std::filesystem::rename(tmp, p);
  }
};

void write_edges(std::ofstream& out, const std::vector<Edge>& edges) {
  std::vector<unsigned char> buf(edges.size() * 8);
  std::size_t p = 0;
  for (auto [u, v] : edges) {
    for (int b = 0; b < 4; ++b) buf[p++] = static_cast<unsigned char>(u >> (8 * b));
    for (int b = 0; b < 4; ++b) buf[p++] = static_cast<unsigned char>(v >> (8 * b));
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

// Streams the spill file in bounded chunks.
template <class F>
void read_spill(const std::filesystem::path& path, std::uint64_t edges, F&& f) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot reopen edge spill " + path.string());
  constexpr std::size_t kChunk = 1 << 20;
  std::vector<unsigned char> buf(kChunk * 8);
  std::uint64_t left = edges;
  while (left) {
    std::size_t take = static_cast<std::size_t>(std::min<std::uint64_t>(left, kChunk));
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(take * 8));
    if (static_cast<std::size_t>(in.gcount()) != take * 8) throw Error("edge spill truncated");
    for (std::size_t e = 0; e < take; ++e) {
      const unsigned char* q = buf.data() + e * 8;
      VertexId u = 0, v = 0;
      for (int b = 0; b < 4; ++b) u |= static_cast<VertexId>(q[b]) << (8 * b);
      for (int b = 0; b < 4; ++b) v |= static_cast<VertexId>(q[4 + b]) << (8 * b);
      f(u, v);
    }
    left -= take;
  }
}

// Runs row blocks [first, count) in waves of `threads`, handing each wave to
// `commit` in block order.
template <class Commit>
void run_blocks(const EdgeGenerator& gen, std::size_t block, std::size_t first,
                unsigned threads, Commit&& commit) {
  const std::size_t n = gen.size();
  const std::size_t blocks = (n + block - 1) / block;
  const std::size_t chunk = std::min<std::size_t>(block, 4096);
  for (std::size_t b0 = first; b0 < blocks; b0 += threads) {
    std::size_t b1 = std::min<std::size_t>(blocks, b0 + threads);
    std::vector<std::vector<Edge>> results(b1 - b0);
    auto work = [&](std::size_t b) {
      gen.row_block(b * block, std::min(n, (b + 1) * block), chunk, results[b - b0]);
    };
    if (b1 - b0 == 1) {
      work(b0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t b = b0; b < b1; ++b) pool.emplace_back(work, b);
      for (auto& t : pool) t.join();
    }
    commit(b1, results);
  }
}

void check_budget(std::size_t n, std::uint64_t m, const BuildOptions& options,
                  const std::filesystem::path& checkpoint) {
  if (!options.max_memory_bytes) return;
  std::uint64_t need = (n + 1) * sizeof(std::uint64_t) + 2 * m * sizeof(VertexId);
  if (need > options.max_memory_bytes) {
    throw ResourceExhausted("adjacency needs " + std::to_string(need) + " bytes, budget is " +
                                std::to_string(options.max_memory_bytes),
                            checkpoint);
  }
}

}  // namespace

SOSGraph::SOSGraph(std::string system_label, int k, std::size_t dim,
                   std::vector<RootVector> vertices, std::vector<std::uint64_t> offsets,
                   std::vector<VertexId> neighbors)
    : label_(std::move(system_label)),
      k_(k),
      dim_(dim),
      vertices_(std::move(vertices)),
      offsets_(std::move(offsets)),
      neighbors_(std::move(neighbors)) {
  if (offsets_.empty() || offsets_.back() != neighbors_.size())
    throw std::invalid_argument("SOSGraph: offsets do not match neighbour array");
  if (!vertices_.empty() && vertices_.size() + 1 != offsets_.size())
    throw std::invalid_argument("SOSGraph: vertex count does not match offsets");
}

SOSGraph SOSGraph::from_edges(std::size_t n, std::span<const std::pair<VertexId, VertexId>> edges) {
  std::vector<std::vector<VertexId>> adj(n);
  for (auto [u, v] : edges) {
    if (u == v || u >= n || v >= n) throw std::invalid_argument("from_edges: bad edge");
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<std::uint64_t> offsets{0};
  std::vector<VertexId> nb;
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    if (std::adjacent_find(a.begin(), a.end()) != a.end())
      throw std::invalid_argument("from_edges: duplicate edge");
    nb.insert(nb.end(), a.begin(), a.end());
    offsets.push_back(nb.size());
  }
  return SOSGraph("", 0, 0, {}, std::move(offsets), std::move(nb));
}

bool SOSGraph::adjacent(VertexId u, VertexId v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::optional<VertexId> SOSGraph::index_of(const RootVector& v) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v) return std::nullopt;
  return static_cast<VertexId>(it - vertices_.begin());
}

SOSGraph build_gamma(const RootSystem& rs, int k, const BuildOptions& options) {
  return build_gamma(vertex_set(rs, k, resolve_threads(options.threads)), options);
}

SOSGraph build_gamma(const VertexSet& vs, const BuildOptions& options) {
  const std::size_t n = vs.vectors.size();
  if (n > 0xFFFFFFFEu) throw ResourceExhausted("build_gamma: too many vertices");
  if (!std::is_sorted(vs.vectors.begin(), vs.vectors.end()))
    throw std::invalid_argument("build_gamma: vertex set must be sorted");
  const std::size_t block = std::max<std::size_t>(1, options.block_size);
  const unsigned threads = resolve_threads(options.threads);
  const std::uint64_t pairs = n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;

  EdgeGenerator gen(vs.vectors, vs.dim);
  std::vector<std::uint64_t> offsets(n + 1, 0);
  std::vector<VertexId> neighbors;

  auto assemble = [&](std::uint64_t m, auto&& for_each_edge, const std::filesystem::path& ckpt) {
    for_each_edge([&](VertexId u, VertexId v) {
      ++offsets[u + 1];
      ++offsets[v + 1];
    });
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    check_budget(n, m, options, ckpt);
    try {
      neighbors.resize(2 * m);
    } catch (const std::bad_alloc&) {
      throw ResourceExhausted("build_gamma: out of memory assembling adjacency", ckpt);
    }
    std::vector<std::uint64_t> pos(offsets.begin(), offsets.end() - 1);
    for_each_edge([&](VertexId u, VertexId v) {
      neighbors[pos[u]++] = v;
      neighbors[pos[v]++] = u;
    });
  };

  if (pairs <= options.spill_threshold_pairs) {
    MemorySink sink;
    run_blocks(gen, block, 0, threads, [&](std::size_t, std::vector<std::vector<Edge>>& results) {
      for (auto& r : results) sink.append(r);
    });
    assemble(sink.edges_.size(), [&](auto&& f) {
      for (auto [u, v] : sink.edges_) f(u, v);
    }, {});
  } else {
    auto dir = options.spill_dir.empty() ? std::filesystem::temp_directory_path() : options.spill_dir;
    std::filesystem::create_directories(dir);
    std::string stem = vs.label + "_k" + std::to_string(vs.k);
    auto spill = dir / (stem + ".edges");
    auto ckpt_path = dir / (stem + ".ckpt");

    Checkpoint ckpt{n, block, gen.fingerprint(), 0, 0};
    if (auto prev = Checkpoint::load(ckpt_path);
        prev && prev->n == n && prev->block_size == block && prev->fingerprint == ckpt.fingerprint &&
        std::filesystem::exists(spill) && std::filesystem::file_size(spill) >= prev->edges * 8) {
      ckpt = *prev;
      std::filesystem::resize_file(spill, ckpt.edges * 8);
    } else {
      std::ofstream(spill, std::ios::binary | std::ios::trunc);
    }
    const std::size_t blocks = (n + block - 1) / block;
    if (ckpt.blocks_done < blocks) {
      std::ofstream out(spill, std::ios::binary | std::ios::app);
      run_blocks(gen, block, ckpt.blocks_done, threads,
                 [&](std::size_t done, std::vector<std::vector<Edge>>& results) {
                   for (auto& r : results) {
                     write_edges(out, r);
                     ckpt.edges += r.size();
                   }
                   out.flush();
                   if (!out) throw ResourceExhausted("build_gamma: edge spill write failed", ckpt_path);
                   ckpt.blocks_done = done;
                   ckpt.save(ckpt_path);
                 });
    }
    assemble(ckpt.edges, [&](auto&& f) { read_spill(spill, ckpt.edges, f); }, ckpt_path);
    std::filesystem::remove(spill);
    std::filesystem::remove(ckpt_path);
  }

  return SOSGraph(vs.label, vs.k, vs.dim, vs.vectors, std::move(offsets), std::move(neighbors));
}

GraphStats stats(const SOSGraph& g) {
  GraphStats s;
  s.n = g.vertex_count();
  s.m = g.edge_count();
  if (s.n == 0) return s;
  s.min_degree = g.degree(0);
  s.max_degree = g.degree(0);
  std::vector<VertexId> parent(s.n);
  std::iota(parent.begin(), parent.end(), VertexId{0});
  auto find = [&](VertexId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (VertexId u = 0; u < s.n; ++u) {
    std::size_t d = g.degree(u);
    s.min_degree = std::min(s.min_degree, d);
    s.max_degree = std::max(s.max_degree, d);
    if (d == 0) ++s.isolated_vertex_count;
    for (VertexId v : g.neighbors(u)) {
      if (v <= u) continue;
      VertexId a = find(u), b = find(v);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  s.is_regular = s.min_degree == s.max_degree;
  std::vector<std::size_t> size(s.n, 0);
  for (VertexId u = 0; u < s.n; ++u) ++size[find(u)];
  for (auto c : size)
    if (c) s.component_sizes.push_back(c);
  std::sort(s.component_sizes.rbegin(), s.component_sizes.rend());
  s.component_count = s.component_sizes.size();
  return s;
}

OrbitSummary OrbitSummary::discrete(std::size_t n) {
  OrbitSummary o;
  o.label.resize(n);
  std::iota(o.label.begin(), o.label.end(), 0U);
  o.sizes.assign(n, 1);
  o.representatives.resize(n);
  std::iota(o.representatives.begin(), o.representatives.end(), VertexId{0});
  return o;
}

OrbitSummary weyl_orbit_labels(const RootSystem& rs, const SOSGraph& g) {
  OrbitSummary out;
  const std::size_t n = g.vertex_count();
  if (n == 0) return out;
  if (!g.has_vectors()) throw std::invalid_argument("weyl_orbit_labels: graph has no vectors");
  OrbitPartition part = orbit_closure(rs, g.vertices());
  if (part.elements.size() != n)
    throw std::logic_error("weyl_orbit_labels: reflections leave the vertex set");
  out.label.assign(n, 0);
  out.sizes = part.orbit_sizes;
  out.representatives.assign(part.orbit_sizes.size(), static_cast<VertexId>(n));
  for (std::size_t e = 0; e < part.elements.size(); ++e) {
    auto v = g.index_of(part.elements[e]);
    if (!v) throw std::logic_error("weyl_orbit_labels: reflections leave the vertex set");
    std::uint32_t orbit = part.orbit_of[e];
    out.label[*v] = orbit;
    out.representatives[orbit] = std::min(out.representatives[orbit], *v);
  }
  return out;
}

std::uint64_t serialize(const SOSGraph& g, const std::filesystem::path& path) {
  io::Writer w(path);
  w.bytes(kGraphMagic, sizeof kGraphMagic);
  w.le<std::uint32_t>(kGraphVersion);
  w.str16(g.system_label());
  w.le<std::uint32_t>(static_cast<std::uint32_t>(g.k()));
  w.le<std::uint64_t>(g.vertex_count());
  w.le<std::uint64_t>(g.edge_count());
  w.le<std::uint32_t>(static_cast<std::uint32_t>(g.dim()));
  w.le<std::uint32_t>(g.has_vectors() ? 1 : 0);
  for (const auto& v : g.vertices())
    for (std::size_t i = 0; i < g.dim(); ++i) w.le<std::int32_t>(v[i]);
  for (auto o : g.offsets()) w.le<std::uint64_t>(o);
  for (auto x : g.neighbor_array()) w.le<std::uint32_t>(x);
  std::uint64_t h = w.hash();
  w.finish();
  return h;
}

SOSGraph deserialize(const std::filesystem::path& path, std::uint64_t* checksum) {
  io::Reader r(path);
  char magic[8];
  r.bytes(magic, sizeof magic);
  if (!std::equal(magic, magic + 8, kGraphMagic))
    throw FormatError(FormatError::Kind::BadMagic, path.string() + ": not a graph file");
  if (auto v = r.le<std::uint32_t>(); v != kGraphVersion)
    throw FormatError(FormatError::Kind::VersionMismatch,
                      "graph file version " + std::to_string(v) + " is not supported");
  std::string label = r.str16();
  int k = static_cast<int>(r.le<std::uint32_t>());
  auto n = r.le<std::uint64_t>();
  auto m = r.le<std::uint64_t>();
  std::size_t dim = r.le<std::uint32_t>();
  bool with_vectors = r.le<std::uint32_t>() != 0;
  if (dim > kMaxDim || n > 0xFFFFFFFEu || (n > 1 && m > n * (n - 1) / 2) || (n < 2 && m > 0))
    throw FormatError(FormatError::Kind::ChecksumMismatch, "checksum failure: corrupt header");
  std::vector<RootVector> vertices;
  if (with_vectors) {
    vertices.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      RootVector v(dim);
      for (std::size_t d = 0; d < dim; ++d) v[d] = r.le<std::int32_t>();
      vertices.push_back(v);
    }
  }
  std::vector<std::uint64_t> offsets(n + 1);
  for (auto& o : offsets) o = r.le<std::uint64_t>();
  std::vector<VertexId> nb(2 * m);
  for (auto& x : nb) x = r.le<std::uint32_t>();
  std::uint64_t h = r.verify_checksum();
  if (checksum) *checksum = h;
  if (offsets.front() != 0 || offsets.back() != nb.size())
    throw FormatError(FormatError::Kind::ChecksumMismatch, "checksum failure: inconsistent CSR");
  return SOSGraph(std::move(label), k, dim, std::move(vertices), std::move(offsets), std::move(nb));
}

void write_dot(const SOSGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string());
  out << "graph \"Gamma(" << g.system_label() << "," << g.k() << ")\" {\n";
  auto name = [&](VertexId v) {
    return g.has_vectors() ? g.vertex(v).to_string() : std::to_string(v);
  };
  for (VertexId v = 0; v < g.vertex_count(); ++v) out << "  \"" << name(v) << "\";\n";
  for (VertexId u = 0; u < g.vertex_count(); ++u)
    for (VertexId v : g.neighbors(u))
      if (u < v) out << "  \"" << name(u) << "\" -- \"" << name(v) << "\";\n";
  out << "}\n";
}

}  // namespace sosgraph
