#include "sosgraph/sos.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "binary_io.hpp"
#include "sosgraph/error.hpp"

namespace sosgraph {

namespace {

constexpr char kVertexMagic[8] = {'S', 'O', 'S', 'V', 'E', 'R', 'T', 'S'};
constexpr std::uint32_t kVertexVersion = 1;

// Rows of the strong-orthogonality graph with every bit <= i cleared.
std::vector<DynBitset> upper_rows(const StrongOrthogonalityGraph& so) {
  std::vector<DynBitset> up;
  up.reserve(so.size());
  for (std::size_t i = 0; i < so.size(); ++i) {
    DynBitset r = so.row(i);
    for (std::size_t j = 0; j <= i; ++j) r.reset(j);
    up.push_back(std::move(r));
  }
  return up;
}

class SosWalker {
 public:
  SosWalker(const std::vector<DynBitset>& up, int k, const SosVisitor& visit)
      : up_(up), k_(k), visit_(visit), chosen_(static_cast<std::size_t>(k)) {
    for (int d = 0; d <= k; ++d) cand_.emplace_back(up.size());
  }

  void run(SosShard shard) {
    DynBitset& top = cand_[0];
    top.clear();
    std::size_t end = std::min<std::size_t>(shard.first_end, up_.size());
    for (std::size_t i = shard.first_begin; i < end; ++i) top.set(i);
    descend(0);
  }

 private:
  void descend(int depth) {
    const DynBitset& cand = cand_[static_cast<std::size_t>(depth)];
    // The top level is a shard of first roots only, so it cannot be pruned.
    if (depth > 0 && cand.count() < static_cast<std::size_t>(k_ - depth)) return;
    cand.for_each([&](std::size_t i) {
      chosen_[static_cast<std::size_t>(depth)] = static_cast<std::uint32_t>(i);
      if (depth + 1 == k_) {
        visit_(chosen_);
        return;
      }
      auto& next = cand_[static_cast<std::size_t>(depth) + 1];
      if (depth == 0) {
        next = up_[i];
      } else {
        next.assign_and(cand, up_[i]);
      }
      descend(depth + 1);
    });
  }

  const std::vector<DynBitset>& up_;
  int k_;
  const SosVisitor& visit_;
  std::vector<std::uint32_t> chosen_;
  std::vector<DynBitset> cand_;
};

}  // namespace

StrongOrthogonalityGraph::StrongOrthogonalityGraph(const RootSystem& rs) {
  auto roots = rs.roots();
  rows_.assign(roots.size(), DynBitset(roots.size()));
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (strongly_orthogonal(rs, roots[i], roots[j])) {
        rows_[i].set(j);
        rows_[j].set(i);
      }
}

std::size_t StrongOrthogonalityGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& r : rows_) twice += r.count();
  return twice / 2;
}

StrongOrthogonalityGraph strong_orthogonality_graph(const RootSystem& rs) {
  return StrongOrthogonalityGraph(rs);
}

RootVector SOSet::sum() const {
  if (members.empty()) throw std::logic_error("SOSet::sum: empty set");
  RootVector s = members.front();
  for (std::size_t i = 1; i < members.size(); ++i) s = s + members[i];
  return s;
}

void for_each_sos(const RootSystem& rs, int k, const SosVisitor& visit, SosShard shard) {
  if (k < 1) throw std::invalid_argument("for_each_sos: k must be >= 1");
  if (k > rs.max_sos_size()) return;
  StrongOrthogonalityGraph so(rs);
  auto up = upper_rows(so);
  SosWalker(up, k, visit).run(shard);
}

std::uint64_t count_sos(const RootSystem& rs, int k) {
  std::uint64_t n = 0;
  for_each_sos(rs, k, [&](std::span<const std::uint32_t>) { ++n; });
  return n;
}

std::vector<SOSet> enumerate_sos(const RootSystem& rs, int k, std::size_t max_materialize) {
  std::vector<SOSet> out;
  auto roots = rs.roots();
  for_each_sos(rs, k, [&](std::span<const std::uint32_t> idx) {
    if (out.size() == max_materialize) {
      throw ResourceExhausted("enumerate_sos: more than " + std::to_string(max_materialize) +
                              " sets; use for_each_sos to stream them");
    }
    SOSet s;
    for (auto i : idx) s.members.push_back(roots[i]);
    out.push_back(std::move(s));
  });
  return out;
}

VertexSet vertex_set(const RootSystem& rs, int k, unsigned threads) {
  if (k < 1) throw std::invalid_argument("vertex_set: k must be >= 1");
  VertexSet vs;
  vs.label = rs.name();
  vs.k = k;
  vs.dim = rs.ambient_dim();
  if (k > rs.max_sos_size()) return vs;

  auto roots = rs.roots();
  StrongOrthogonalityGraph so(rs);
  auto up = upper_rows(so);

  struct Partial {
    KeyIndex index;
    std::vector<RootVector> vectors;
    std::vector<std::uint64_t> multiplicity;
  };
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(roots.size())));
  std::vector<Partial> parts(threads);
  auto work = [&](unsigned t) {
    Partial& p = parts[t];
    SosVisitor visit = [&](std::span<const std::uint32_t> idx) {
      RootVector s = roots[idx[0]];
      for (std::size_t i = 1; i < idx.size(); ++i) s = s + roots[idx[i]];
      auto slot = static_cast<std::uint32_t>(p.vectors.size());
      std::uint64_t key = s.key();
      if (p.index.insert(key, slot)) {
        p.vectors.push_back(s);
        p.multiplicity.push_back(1);
      } else {
        ++p.multiplicity[*p.index.find(key)];
      }
    };
    // Interleaved first-root shards keep the per-thread work balanced.
    SosWalker walker(up, k, visit);
    for (std::uint32_t first = t; first < roots.size(); first += threads) {
      walker.run({first, first + 1});
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }

  Partial& merged = parts[0];
  for (unsigned t = 1; t < threads; ++t) {
    for (std::size_t i = 0; i < parts[t].vectors.size(); ++i) {
      const RootVector& v = parts[t].vectors[i];
      auto slot = static_cast<std::uint32_t>(merged.vectors.size());
      if (merged.index.insert(v.key(), slot)) {
        merged.vectors.push_back(v);
        merged.multiplicity.push_back(parts[t].multiplicity[i]);
      } else {
        merged.multiplicity[*merged.index.find(v.key())] += parts[t].multiplicity[i];
      }
    }
  }

  std::vector<std::size_t> order(merged.vectors.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return merged.vectors[a] < merged.vectors[b]; });
  vs.vectors.reserve(order.size());
  vs.multiplicity.reserve(order.size());
  for (auto i : order) {
    vs.vectors.push_back(merged.vectors[i]);
    vs.multiplicity.push_back(merged.multiplicity[i]);
  }
  return vs;
}

void write_vertex_set(const VertexSet& vs, const std::filesystem::path& path) {
  io::Writer w(path);
  w.bytes(kVertexMagic, sizeof kVertexMagic);
  w.le<std::uint32_t>(kVertexVersion);
  w.str16(vs.label);
  w.le<std::uint32_t>(static_cast<std::uint32_t>(vs.k));
  w.le<std::uint64_t>(vs.vectors.size());
  w.le<std::uint32_t>(static_cast<std::uint32_t>(vs.dim));
  for (const auto& v : vs.vectors)
    for (std::size_t i = 0; i < vs.dim; ++i) w.le<std::int32_t>(v[i]);
  for (std::size_t i = 0; i < vs.vectors.size(); ++i)
    w.le<std::uint64_t>(i < vs.multiplicity.size() ? vs.multiplicity[i] : 0);
  w.finish();
}

VertexSet read_vertex_set(const std::filesystem::path& path) {
  io::Reader r(path);
  char magic[8];
  r.bytes(magic, sizeof magic);
  if (!std::equal(magic, magic + 8, kVertexMagic))
    throw FormatError(FormatError::Kind::BadMagic, path.string() + ": not a vertex-set file");
  if (auto v = r.le<std::uint32_t>(); v != kVertexVersion)
    throw FormatError(FormatError::Kind::VersionMismatch,
                      "vertex-set version " + std::to_string(v) + " is not supported");
  VertexSet vs;
  vs.label = r.str16();
  vs.k = static_cast<int>(r.le<std::uint32_t>());
  auto count = r.le<std::uint64_t>();
  vs.dim = r.le<std::uint32_t>();
  if (vs.dim > kMaxDim) throw FormatError(FormatError::Kind::Io, "vertex-set dimension too large");
  vs.vectors.reserve(count);
  for (std::uint64_t n = 0; n < count; ++n) {
    RootVector v(vs.dim);
    for (std::size_t i = 0; i < vs.dim; ++i) v[i] = r.le<std::int32_t>();
    vs.vectors.push_back(v);
  }
  vs.multiplicity.resize(count);
  for (auto& m : vs.multiplicity) m = r.le<std::uint64_t>();
  r.verify_checksum();
  return vs;
}

}  // namespace sosgraph
