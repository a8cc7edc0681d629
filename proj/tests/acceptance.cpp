// Acceptance run: rebuilds every graph of the census tables, compares each
// number exactly, runs the structural checks and the timed property suites,
// and prints one [PASS]/[FAIL] line per criterion.
//
//   acceptance           every required row plus the E8 k = 6, 7 stretch rows
//   acceptance --full    also the E8 k = 4..7 sunflower counts

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sosgraph/clique.hpp"
#include "sosgraph/error.hpp"
#include "sosgraph/graph.hpp"
#include "sosgraph/iso.hpp"
#include "sosgraph/sunflower.hpp"

using namespace sosgraph;
using Clock = std::chrono::steady_clock;

namespace {

struct Expected {
  const char* system;
  int k;
  std::size_t n;
  std::uint64_t m;
  std::size_t min_degree, max_degree, components;
  int omega;
  std::uint64_t maximum_cliques;
  std::optional<std::uint64_t> sunflowers;
  const char* percent;
  int tier;          // 1, 2 or 3 for the parameter table
  bool stretch;      // maximum-clique count is a stretch goal
  bool sf_required;  // sunflower row is required (otherwise only with --full)
};

// Graph parameters, clique numbers, maximum-clique counts and sunflower counts.
// E7 k = 7 is edgeless: every vertex is a maximum clique of size 1.
const Expected kRows[] = {
    {"G2", 1, 12, 30, 4, 6, 1, 3, 20, 0, "0.0", 1, false, true},
    {"G2", 2, 6, 6, 2, 2, 1, 2, 6, 6, "100.0", 1, false, true},
    {"F4", 1, 48, 408, 14, 20, 1, 7, 24, 0, "0.0", 1, false, true},
    {"F4", 2, 120, 1200, 20, 20, 1, 3, 1152, 192, "16.7", 1, false, true},
    {"F4", 3, 240, 3552, 26, 32, 1, 3, 4992, 896, "17.9", 1, false, true},
    {"F4", 4, 24, 96, 8, 8, 1, 3, 96, 64, "66.7", 1, false, true},
    {"E6", 1, 72, 720, 20, 20, 1, 5, 432, 32, "7.4", 1, false, true},
    {"E6", 2, 270, 4590, 34, 34, 1, 3, 4320, 0, "0.0", 1, false, true},
    {"E6", 3, 720, 26640, 74, 74, 1, 5, 17280, 1280, "7.4", 1, false, true},
    {"E6", 4, 72, 720, 20, 20, 1, 5, 432, 32, "7.4", 1, false, true},
    {"E7", 1, 126, 2016, 32, 32, 1, 7, 576, 0, "0.0", 1, false, true},
    {"E7", 2, 756, 37800, 100, 100, 1, 6, 120960, 0, "0.0", 1, false, true},
    {"E7", 3, 2072, 183456, 0, 182, 57, 5, 483840, 15360, "3.2", 1, false, true},
    {"E7", 4, 4158, 582624, 272, 544, 1, 7, 1021824, 104448, "10.2", 2, false, true},
    {"E7", 5, 7560, 1572480, 416, 416, 1, 5, 7547904, 119808, "1.6", 2, false, true},
    {"E7", 6, 10080, 1844640, 366, 366, 1, 4, 4838400, 122880, "2.5", 2, false, true},
    {"E7", 7, 576, 0, 0, 0, 576, 1, 576, std::nullopt, nullptr, 1, false, false},
    {"E8", 1, 240, 6720, 56, 56, 1, 8, 17280, 128, "0.7", 1, false, true},
    {"E8", 2, 2160, 302400, 280, 280, 1, 8, 4665600, 30720, "0.7", 1, false, true},
    {"E8", 3, 6720, 1821120, 542, 542, 1, 8, 38707200, 286720, "0.7", 2, false, true},
    {"E8", 4, 17520, 10409280, 1176, 2072, 1, 8, 635316480, 4705536, "0.7", 2, false, false},
    {"E8", 5, 30240, 22014720, 1456, 1456, 1, 8, 679311360, 5031936, "0.7", 2, false, false},
    {"E8", 6, 60480, 81950400, 2710, 2710, 1, 8, 10450944000ULL, 68812800, "0.7", 3, true, false},
    {"E8", 7, 69120, 67737600, 1960, 1960, 1, 8, 1194393600, 8847360, "0.7", 2, true, false},
    {"E8", 8, 2160, 302400, 280, 280, 1, 8, 4665600, 30720, "0.7", 1, false, true},
};

struct Criterion {
  bool pass = true;
  std::uint64_t checked = 0;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    ++checked;
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string row_name(const Expected& e) { return std::string(e.system) + " k=" + std::to_string(e.k); }

template <class T>
std::string differs(const std::string& what, const T& got, const T& want) {
  std::ostringstream os;
  os << what << ": got " << got << ", expected " << want;
  return os.str();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

int main(int argc, char** argv) {
  bool full = false;
  for (int i = 1; i < argc; ++i) full = full || std::string(argv[i]) == "--full";
  if (const char* env = std::getenv("SOSGRAPH_FULL_ACCEPTANCE")) full = full || std::string(env) == "1";

  const auto start = Clock::now();
  std::filesystem::path scratch = std::filesystem::temp_directory_path() / "sosgraph_acceptance";
  std::filesystem::remove_all(scratch);
  std::filesystem::create_directories(scratch);
  BuildOptions build;
  build.spill_dir = scratch;

  Criterion c1, c2, c3, c4, c5, c6, c7;
  std::uint64_t weyl_exhaustive = 0, weyl_sampled = 0;

  for (const auto& e : kRows) {
    const auto t0 = Clock::now();
    const std::string name = row_name(e);
    RootSystem rs = build_root_system(e.system);
    Criterion& params = e.tier == 1 ? c1 : c2;
    try {
      SOSGraph g = build_gamma(rs, e.k, build);
      GraphStats st = stats(g);
      params.expect(st.n == e.n, differs(name + " |V|", st.n, e.n));
      params.expect(st.m == e.m, differs(name + " |E|", st.m, e.m));
      params.expect(st.min_degree == e.min_degree, differs(name + " min degree", st.min_degree, e.min_degree));
      params.expect(st.max_degree == e.max_degree, differs(name + " max degree", st.max_degree, e.max_degree));
      params.expect(st.component_count == e.components,
                    differs(name + " components", st.component_count, e.components));

      OrbitSummary orbits = weyl_orbit_labels(rs, g);
      int omega = clique_number(g, orbits);
      c3.expect(omega == e.omega, differs(name + " omega", omega, e.omega));

      std::uint64_t counted = 0;
      try {
        counted = count_maximum_cliques(g, orbits, omega, 0).total_maximum_cliques;
        c7.expect(true, "");
      } catch (const CountingError& err) {
        c7.expect(false, name + " clique census: " + err.what());
      }
      c4.expect(counted == e.maximum_cliques, differs(name + " maximum cliques", counted, e.maximum_cliques));
      if (g.vertex_count() <= 750) {
        auto brute = brute_force_maximum_cliques(g);
        c4.expect(brute.size() == e.maximum_cliques,
                  differs(name + " brute-force maximum cliques", static_cast<std::uint64_t>(brute.size()),
                           e.maximum_cliques));
      }

      if (e.sunflowers && (e.sf_required || full)) {
        try {
          SunflowerCensus sf = count_sunflower_max_cliques(g, rs, omega, 0);
          c7.expect(true, "");
          c5.expect(sf.maximum_cliques == e.maximum_cliques,
                    differs(name + " sunflower census cliques", sf.maximum_cliques, e.maximum_cliques));
          c5.expect(sf.sunflowers == *e.sunflowers, differs(name + " sunflowers", sf.sunflowers, *e.sunflowers));
          c5.expect(sf.percent() == e.percent, differs(name + " sunflower percent", sf.percent(),
                                                         std::string(e.percent)));
        } catch (const CountingError& err) {
          c7.expect(false, name + " sunflower census: " + err.what());
        }
      }

      CheckReport weyl = check_weyl_automorphism(g, rs);
      c6.expect(weyl.passed, name + " Weyl automorphism: " + weyl.detail);
      c6.expect(weyl.exhaustive == (g.vertex_count() <= 1000), name + " Weyl automorphism mode");
      (weyl.exhaustive ? weyl_exhaustive : weyl_sampled)++;

      if (std::string(e.system) == "E7" && e.k == 7) c6.expect(g.edge_count() == 0, "E7 k=7 has edges");
      if (std::string(e.system) == "E7" && e.k == 4) {
        // The published count 3,870,720 is labelled size 6, but three independent
        // enumerations put every one of these cliques at size 5.
        auto sizes = maximal_clique_sizes(g, orbits);
        c6.expect(sizes[5] == 3870720, differs("E7 k=4 size-5 maximal cliques", sizes[5], std::uint64_t{3870720}));
        c6.expect(sizes[7] == 1021824, differs("E7 k=4 size-7 maximal cliques", sizes[7], std::uint64_t{1021824}));
        c6.expect(sizes.size() == 2, "E7 k=4 has maximal cliques outside sizes 5 and 7");
      }
    } catch (const std::exception& err) {
      params.expect(false, name + ": " + err.what());
    }
    std::cout << "  " << name << " done in " << seconds_since(t0) << " s\n" << std::flush;
  }

  // Structural checks that need more than one graph.
  {
    c6.expect(check_scaling_isomorphism(build_root_system("E6"), 1, 4).passed, "E6 1 -> 4 scaling");
    c6.expect(check_scaling_isomorphism(build_root_system("E8"), 2, 8).passed, "E8 2 -> 8 scaling");
    for (auto [name, k] : {std::pair{"E6", 4}, std::pair{"E7", 7}, std::pair{"E8", 8}}) {
      CheckReport r = check_mod8(build_root_system(name), k);
      c6.expect(r.passed && r.exhaustive, std::string(name) + " mod 8: " + r.detail);
    }
    for (const char* name : {"E6", "E7", "E8"}) {
      CheckReport r = check_degree_formula(build_root_system(name));
      c6.expect(r.passed, std::string(name) + " degree formula: " + r.detail);
    }
    SOSGraph f4 = build_gamma(build_root_system("F4"), 4);
    SOSGraph d4 = build_gamma(build_root_system("D4"), 1);
    IsomorphismResult iso = check_graph_isomorphism_small(f4, d4);
    c6.expect(iso.isomorphic && is_isomorphism(f4, d4, iso.mapping), "F4 k=4 vs D4 k=1: " + iso.reason);

    SOSGraph f41 = build_gamma(build_root_system("F4"), 1);
    auto rows = maximal_clique_sunflowers(f41, support_masks(f41));
    c6.expect(rows[5].maximal_cliques == 336, differs("F4 k=1 size-5 maximal cliques", rows[5].maximal_cliques,
                                                       std::uint64_t{336}));
    c6.expect(rows[5].sunflowers == 16, differs("F4 k=1 size-5 sunflowers", rows[5].sunflowers, std::uint64_t{16}));
  }

  // Property suites, timed together.
  const auto t7 = Clock::now();
  {
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<int> size(2, 8);
    for (int trial = 0; trial < 10000; ++trial) {
      std::vector<SupportMask> s(static_cast<std::size_t>(size(rng)));
      SupportMask shared = rng() & 0x3;
      for (auto& m : s) m = shared | (rng() & rng() & 0xFC);
      SupportMask core = s[0] & s[1];
      bool pairwise = core != 0;
      for (std::size_t i = 0; i < s.size() && pairwise; ++i)
        for (std::size_t j = i + 1; j < s.size() && pairwise; ++j) pairwise = (s[i] & s[j]) == core;
      c7.expect(is_sunflower_supports(s) == pairwise, "pairwise and column tests disagree");
    }
    for (const char* name : {"G2", "F4", "E6", "E7", "E8"}) {
      RootSystem rs = build_root_system(name);
      c7.expect(preserves_roots(permutation_subgroup(rs), rs), std::string(name) + " permutations leave the roots");
    }
    for (auto [name, k] : {std::pair{"F4", 3}, std::pair{"E7", 7}, std::pair{"E8", 2}, std::pair{"E7", 3}}) {
      SOSGraph g = build_gamma(build_root_system(name), k);
      auto a = scratch / "a.sosg", b = scratch / "b.sosg";
      serialize(g, a);
      SOSGraph back = deserialize(a);
      serialize(back, b);
      c7.expect(back == g && slurp(a) == slurp(b), std::string(name) + " serialisation round trip");
    }
  }
  const double t7_seconds = seconds_since(t7);
  c7.expect(t7_seconds < 60.0, "property suites took " + std::to_string(t7_seconds) + " s");
  std::filesystem::remove_all(scratch);

  auto report = [](int id, const Criterion& c, const std::string& what) {
    std::cout << (c.pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << what << " (" << c.checked
              << " checks)\n";
    for (const auto& n : c.notes) std::cout << "         " << n << "\n";
  };
  std::cout << "\n";
  report(1, c1, "graph parameters, tier 1 rows exact");
  report(2, c2, "graph parameters, tier 2 rows and the E8 k=6 stretch row exact");
  report(3, c3, "clique numbers, all 25 rows exact");
  report(4, c4, "maximum-clique counts exact, brute force agrees up to 750 vertices, E8 k=6,7 stretch included");
  report(5, c5, full ? "sunflower counts and percentages exact, E8 k=4..7 included"
                     : "sunflower counts and percentages exact (E8 k=4..7 need --full)");
  report(6, c6, "structural checks (" + std::to_string(weyl_exhaustive) + " exhaustive and " +
                    std::to_string(weyl_sampled) + " sampled automorphism checks)");
  std::ostringstream t;
  t.precision(3);
  t << t7_seconds;
  report(7, c7, "property suites in " + t.str() + " s, divisibility held in every census");
  std::cout << "total " << seconds_since(start) << " s\n";

  bool ok = c1.pass && c2.pass && c3.pass && c4.pass && c5.pass && c6.pass && c7.pass;
  return ok ? 0 : 1;
}
