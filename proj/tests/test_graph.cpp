#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <json.hpp>

#include "oracles.hpp"
#include "sosgraph/error.hpp"
#include "sosgraph/graph.hpp"
#include "sosgraph/sos.hpp"

using namespace sosgraph;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("sosgraph_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct Small {
  const char* system;
  int k;
};

// Every graph with at most ~2000 vertices.
const Small kSmall[] = {{"G2", 1}, {"G2", 2}, {"F4", 1}, {"F4", 2}, {"F4", 3}, {"F4", 4}, {"E6", 1}, {"E6", 2},
                        {"E6", 3}, {"E6", 4}, {"E7", 1}, {"E7", 2}, {"E7", 7}, {"E8", 1}};

}  // namespace

TEST_CASE("strong orthogonality graph pair counts") {
  // Each E8 root is strongly orthogonal to 126 others: 240 * 126 / 2.
  CHECK(strong_orthogonality_graph(build_root_system("E8")).edge_count() == 15120);
  // Each G2 root is strongly orthogonal to exactly two others.
  auto g2 = strong_orthogonality_graph(build_root_system("G2"));
  CHECK(g2.edge_count() == 12);
  for (std::size_t i = 0; i < g2.size(); ++i) CHECK(g2.degree(i) == 2);
}

TEST_CASE("SOS enumeration agrees with plain recursion") {
  for (auto [name, k] : {Small{"G2", 1}, Small{"G2", 2}, Small{"F4", 2}, Small{"F4", 3}, Small{"F4", 4},
                         Small{"E6", 2}, Small{"E6", 4}, Small{"E7", 3}, Small{"E8", 2}}) {
    CAPTURE(name);
    CAPTURE(k);
    auto rs = build_root_system(name);
    auto [count, sums] = oracle::sos_sums(rs, k);
    CHECK(count_sos(rs, k) == count);
    VertexSet vs = vertex_set(rs, k);
    CHECK(vs.vectors == sums);
    std::uint64_t total = 0;
    for (auto m : vs.multiplicity) total += m;
    CHECK(total == count);
    CHECK(vertex_set(rs, k, 3).vectors == sums);
  }
}

TEST_CASE("G2 with k = 2: twelve sets, six sums") {
  auto rs = build_root_system("G2");
  CHECK(count_sos(rs, 2) == 12);
  VertexSet vs = vertex_set(rs, 2);
  CHECK(vs.size() == 6);
  for (auto m : vs.multiplicity) CHECK(m == 2);
}

TEST_CASE("SOS edge cases") {
  auto rs = build_root_system("E6");
  CHECK_THROWS_AS(count_sos(rs, 0), std::invalid_argument);
  CHECK(count_sos(rs, 5) == 0);
  CHECK(vertex_set(rs, 5).size() == 0);
  auto sets = enumerate_sos(build_root_system("F4"), 4);
  CHECK(sets.size() == count_sos(build_root_system("F4"), 4));
  for (const auto& s : sets) CHECK(norm2(s.sum()) == 4 * 8);
  CHECK_THROWS_AS(enumerate_sos(build_root_system("E8"), 2, 100), ResourceExhausted);
}

TEST_CASE("vertex sets survive a write/read cycle") {
  auto dir = scratch_dir("verts");
  VertexSet vs = vertex_set(build_root_system("F4"), 3);
  write_vertex_set(vs, dir / "f4.verts");
  VertexSet back = read_vertex_set(dir / "f4.verts");
  CHECK(back.label == "F4");
  CHECK(back.k == 3);
  CHECK(back.vectors == vs.vectors);
  CHECK(back.multiplicity == vs.multiplicity);
}

TEST_CASE("edges match the all-pairs oracle") {
  for (auto [name, k] : kSmall) {
    CAPTURE(name);
    CAPTURE(k);
    auto rs = build_root_system(name);
    SOSGraph g = build_gamma(rs, k);
    auto [count, sums] = oracle::sos_sums(rs, k);
    REQUIRE(std::vector<RootVector>(g.vertices().begin(), g.vertices().end()) == sums);
    CHECK(oracle::edges_of(g) == oracle::gamma_edges(sums));
    CHECK(stats(g).component_count == oracle::components(g));
  }
}

TEST_CASE("the adjacency does not depend on block size, threads or spilling") {
  auto rs = build_root_system("E7");
  SOSGraph ref = build_gamma(rs, 3);
  auto dir = scratch_dir("blocks");
  BuildOptions odd;
  odd.block_size = 37;
  odd.threads = 3;
  CHECK(build_gamma(rs, 3, odd) == ref);
  BuildOptions spill = odd;
  spill.spill_threshold_pairs = 0;
  spill.spill_dir = dir;
  CHECK(build_gamma(rs, 3, spill) == ref);
  CHECK_FALSE(fs::exists(dir / "E7_k3.edges"));
  CHECK_FALSE(fs::exists(dir / "E7_k3.ckpt"));
}

TEST_CASE("an interrupted spill build resumes from its checkpoint") {
  auto rs = build_root_system("E6");
  SOSGraph ref = build_gamma(rs, 3);
  auto dir = scratch_dir("resume");
  BuildOptions opts;
  opts.block_size = 100;
  opts.threads = 1;
  opts.spill_threshold_pairs = 0;
  opts.spill_dir = dir;

  // A tiny memory budget stops the build after every block has been spilled.
  BuildOptions tight = opts;
  tight.max_memory_bytes = 1024;
  try {
    (void)build_gamma(rs, 3, tight);
    FAIL("expected ResourceExhausted");
  } catch (const ResourceExhausted& e) {
    CHECK(e.checkpoint() == dir / "E6_k3.ckpt");
  }
  REQUIRE(fs::exists(dir / "E6_k3.ckpt"));

  // Roll the checkpoint back to the first block to force real resumption.
  std::uint64_t first_block_edges = 0;
  for (auto [u, v] : oracle::edges_of(ref)) first_block_edges += u < 100;
  auto ckpt = nlohmann::json::parse(slurp(dir / "E6_k3.ckpt"));
  ckpt["blocks_done"] = 1;
  ckpt["edges"] = first_block_edges;
  std::ofstream(dir / "E6_k3.ckpt") << ckpt.dump();

  CHECK(build_gamma(rs, 3, opts) == ref);
  CHECK_FALSE(fs::exists(dir / "E6_k3.ckpt"));
}

TEST_CASE("memory budget is enforced in memory as well") {
  BuildOptions tight;
  tight.max_memory_bytes = 1000;
  CHECK_THROWS_AS((void)build_gamma(build_root_system("F4"), 3, tight), ResourceExhausted);
}

TEST_CASE("statistics and orbits of Gamma(E7, 3)") {
  auto rs = build_root_system("E7");
  SOSGraph g = build_gamma(rs, 3);
  GraphStats st = stats(g);
  CHECK(st.n == 2072);
  CHECK(st.m == 183456);
  CHECK(st.min_degree == 0);
  CHECK(st.max_degree == 182);
  CHECK(st.component_count == 57);
  CHECK(st.isolated_vertex_count == 56);
  CHECK(st.component_sizes.front() == 2016);
  CHECK_FALSE(st.is_regular);
  OrbitSummary orb = weyl_orbit_labels(rs, g);
  CHECK(orb.orbit_count() == 2);
  std::vector<std::size_t> sizes = orb.sizes;
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::size_t>{56, 2016});
  for (std::size_t i = 0; i < orb.orbit_count(); ++i) CHECK(orb.label[orb.representatives[i]] == i);
}

TEST_CASE("two Weyl orbits on Gamma(E7, 4)") {
  auto rs = build_root_system("E7");
  OrbitSummary orb = weyl_orbit_labels(rs, build_gamma(rs, 4));
  std::vector<std::size_t> sizes = orb.sizes;
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::size_t>{126, 4032});
}

TEST_CASE("abstract graphs from edge lists") {
  std::vector<oracle::Edge> edges{{0, 1}, {1, 2}};
  SOSGraph g = SOSGraph::from_edges(4, edges);
  CHECK(g.vertex_count() == 4);
  CHECK(g.edge_count() == 2);
  CHECK(g.adjacent(2, 1));
  CHECK_FALSE(g.adjacent(0, 2));
  GraphStats st = stats(g);
  CHECK(st.component_count == 2);
  CHECK(st.isolated_vertex_count == 1);
  std::vector<oracle::Edge> loop{{1, 1}};
  CHECK_THROWS_AS(SOSGraph::from_edges(3, loop), std::invalid_argument);
}

TEST_CASE("serialisation round-trips byte for byte") {
  auto dir = scratch_dir("serial");
  for (auto [name, k] : {Small{"F4", 4}, Small{"E7", 7}, Small{"E6", 5}, Small{"E8", 2}}) {
    CAPTURE(name);
    SOSGraph g = build_gamma(build_root_system(name), k);
    std::uint64_t written = serialize(g, dir / "a.sosg");
    std::uint64_t read = 0;
    SOSGraph back = deserialize(dir / "a.sosg", &read);
    CHECK(back == g);
    CHECK(read == written);
    CHECK(serialize(back, dir / "b.sosg") == written);
    CHECK(slurp(dir / "a.sosg") == slurp(dir / "b.sosg"));
  }
}

TEST_CASE("corrupt graph files are rejected") {
  auto dir = scratch_dir("corrupt");
  SOSGraph g = build_gamma(build_root_system("F4"), 4);
  serialize(g, dir / "g.sosg");
  std::string bytes = slurp(dir / "g.sosg");

  auto expect = [&](std::string content, FormatError::Kind kind) {
    std::ofstream(dir / "bad.sosg", std::ios::binary | std::ios::trunc) << content;
    try {
      (void)deserialize(dir / "bad.sosg");
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.kind() == kind);
    }
  };
  std::string flipped = bytes;
  flipped[bytes.size() / 2] ^= 0x01;
  expect(flipped, FormatError::Kind::ChecksumMismatch);
  expect(bytes.substr(0, bytes.size() - 3), FormatError::Kind::ChecksumMismatch);
  std::string magic = bytes;
  magic[0] = 'X';
  expect(magic, FormatError::Kind::BadMagic);
  std::string version = bytes;
  version[8] = 9;
  expect(version, FormatError::Kind::VersionMismatch);
  CHECK_THROWS_AS((void)deserialize(dir / "missing.sosg"), FormatError);
}

TEST_CASE("DOT export lists every edge once") {
  auto dir = scratch_dir("dot");
  SOSGraph g = build_gamma(build_root_system("F4"), 4);
  write_dot(g, dir / "f4.dot");
  std::string dot = slurp(dir / "f4.dot");
  std::size_t edges = 0;
  for (std::size_t p = dot.find(" -- "); p != std::string::npos; p = dot.find(" -- ", p + 1)) ++edges;
  CHECK(edges == 96);
}
