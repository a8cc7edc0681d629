// Command-line driver: builds and caches Gamma(R,k), prints statistics,
// clique and sunflower censuses, runs the structural checks and renders
// the parameter, clique-number and sunflower tables.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sosgraph/cache.hpp"
#include "sosgraph/clique.hpp"
#include "sosgraph/error.hpp"
#include "sosgraph/iso.hpp"
#include "sosgraph/sunflower.hpp"

using nlohmann::json;
using namespace sosgraph;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitPartial = 2;

const std::vector<std::string> kExceptional = {"G2", "F4", "E6", "E7", "E8"};

struct GlobalOptions {
  std::string cache_dir;
  unsigned threads = 0;
  double max_memory_gb = 0;
  // Large enough for everything but E8 k = 6, 7; 0 lifts the limit.
  std::uint64_t max_pairs = 1'000'000'000;
};

std::string hex(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::string with_commas(std::uint64_t x) {
  std::string s = std::to_string(x);
  for (int i = static_cast<int>(s.size()) - 3; i > 0; i -= 3) s.insert(static_cast<std::size_t>(i), ",");
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string latex_system(const std::string& name) { return "$" + name.substr(0, 1) + "_" + name.substr(1) + "$"; }

class Session {
 public:
  explicit Session(const GlobalOptions& g) : opts_(g), cache_(make_cache(g)) {}

  unsigned threads() const { return opts_.threads; }

  /// Cached graph, or nullopt with `reason` when the pair budget forbids a build.
  std::optional<CachedGraph> graph(const RootSystem& rs, int k, std::string* reason) {
    if (auto hit = cache_.find(rs, k)) return hit;
    if (opts_.max_pairs > 0) {
      std::uint64_t n = vertex_set(rs, k, opts_.threads).size();
      std::uint64_t pairs = n * (n - (n > 0)) / 2;
      if (pairs > opts_.max_pairs) {
        if (reason) *reason = std::to_string(pairs) + " vertex pairs exceed --max-pairs";
        return std::nullopt;
      }
    }
    try {
      return cache_.get(rs, k);
    } catch (const ResourceExhausted& e) {
      if (reason) *reason = e.what();
      return std::nullopt;
    }
  }

  CachedGraph require(const RootSystem& rs, int k) {
    std::string reason;
    auto g = graph(rs, k, &reason);
    if (!g) throw ResourceExhausted(rs.name() + " k=" + std::to_string(k) + ": " + reason);
    return std::move(*g);
  }

 private:
  static GraphCache make_cache(const GlobalOptions& g) {
    BuildOptions b;
    b.threads = g.threads;
    b.max_memory_bytes = static_cast<std::uint64_t>(g.max_memory_gb * 1024.0 * 1024.0 * 1024.0);
    return GraphCache(g.cache_dir.empty() ? GraphCache::default_dir() : std::filesystem::path(g.cache_dir), b);
  }

  GlobalOptions opts_;
  GraphCache cache_;
};

json provenance(const RootSystem& rs, int k, const CachedGraph& c) {
  return {{"system", rs.name()}, {"k", k}, {"file", c.file.string()}, {"checksum", hex(c.checksum)}};
}

json stats_json(const SOSGraph& g, const GraphStats& st) {
  return {{"vertices", st.n},
          {"edges", st.m},
          {"min_degree", st.min_degree},
          {"max_degree", st.max_degree},
          {"regular", st.is_regular},
          {"components", st.component_count},
          {"component_sizes", st.component_sizes},
          {"isolated_vertices", st.isolated_vertex_count},
          {"dimension", g.dim()}};
}

void warn_if_empty(const RootSystem& rs, int k) {
  if (k > rs.max_sos_size()) {
    std::cerr << "warning: k exceeds max SOS size " << rs.max_sos_size() << " for " << rs.name()
              << "; the graph is empty\n";
  }
}

// ---- tables ----------------------------------------------------------------

struct TableRow {
  std::string system;
  int k = 0;
  bool skipped = false;
  std::string skip_reason;
  json values;  // column -> value
  json provenance;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<TableRow> rows;
};

std::vector<int> k_values(const RootSystem& rs, const std::vector<int>& requested) {
  std::vector<int> ks;
  for (int k = 1; k <= rs.max_sos_size(); ++k)
    if (requested.empty() || std::find(requested.begin(), requested.end(), k) != requested.end()) ks.push_back(k);
  return ks;
}

Table parameters_table(Session& s, const std::vector<std::string>& systems, const std::vector<int>& ks) {
  Table t{"parameters", {"vertices", "edges", "min_degree", "max_degree", "components"}, {}};
  for (const auto& name : systems) {
    RootSystem rs = build_root_system(name);
    for (int k : k_values(rs, ks)) {
      TableRow row;
      row.system = rs.name();
      row.k = k;
      std::string why;
      if (auto c = s.graph(rs, k, &why)) {
        GraphStats st = stats(c->graph);
        row.values = {{"vertices", st.n},
                      {"edges", st.m},
                      {"min_degree", st.min_degree},
                      {"max_degree", st.max_degree},
                      {"components", st.component_count}};
        row.provenance = provenance(rs, k, *c);
      } else {
        row.skipped = true;
        row.skip_reason = why;
      }
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

Table cliques_table(Session& s, const std::vector<std::string>& systems, const std::vector<int>& ks) {
  Table t{"cliques", {"omega"}, {}};
  for (const auto& name : systems) {
    RootSystem rs = build_root_system(name);
    for (int k : k_values(rs, ks)) {
      TableRow row;
      row.system = rs.name();
      row.k = k;
      std::string why;
      if (auto c = s.graph(rs, k, &why)) {
        row.values = {{"omega", clique_number(c->graph, weyl_orbit_labels(rs, c->graph))}};
        row.provenance = provenance(rs, k, *c);
      } else {
        row.skipped = true;
        row.skip_reason = why;
      }
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

Table sunflowers_table(Session& s, const std::vector<std::string>& systems, const std::vector<int>& ks) {
  Table t{"sunflowers", {"maximum_cliques", "sunflowers", "percentage"}, {}};
  for (const auto& name : systems) {
    RootSystem rs = build_root_system(name);
    for (int k : k_values(rs, ks)) {
      TableRow row;
      row.system = rs.name();
      row.k = k;
      std::string why;
      if (auto c = s.graph(rs, k, &why)) {
        int omega = clique_number(c->graph, weyl_orbit_labels(rs, c->graph));
        if (omega < 2) continue;  // no clique with two or more members
        SunflowerCensus sf = count_sunflower_max_cliques(c->graph, rs, omega, s.threads());
        row.values = {{"maximum_cliques", sf.maximum_cliques},
                      {"sunflowers", sf.sunflowers},
                      {"percentage", sf.percent()}};
        row.provenance = provenance(rs, k, *c);
      } else {
        row.skipped = true;
        row.skip_reason = why;
      }
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

std::string cell(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void render_csv(const Table& t, std::ostream& out) {
  if (t.name == "cliques") {
    // One row per system, k = 1..8 across.
    out << "system";
    for (int k = 1; k <= 8; ++k) out << ",k=" << k;
    out << "\r\n";
    std::string current;
    std::vector<std::string> cells;
    auto flush = [&] {
      if (current.empty()) return;
      out << current;
      for (const auto& c : cells) out << ',' << csv_field(c);
      out << "\r\n";
    };
    for (const auto& r : t.rows) {
      if (r.system != current) {
        flush();
        current = r.system;
        cells.assign(8, "");
      }
      cells[static_cast<std::size_t>(r.k - 1)] = r.skipped ? "SKIPPED" : cell(r.values["omega"]);
    }
    flush();
    return;
  }
  out << "system,k";
  for (const auto& c : t.columns) out << ',' << c;
  out << "\r\n";
  for (const auto& r : t.rows) {
    out << r.system << ',' << r.k;
    for (const auto& c : t.columns) out << ',' << csv_field(r.skipped ? "SKIPPED" : cell(r.values[c]));
    out << "\r\n";
  }
}

void render_json(const Table& t, std::ostream& out) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json j = {{"system", r.system}, {"k", r.k}};
    if (r.skipped) {
      j["status"] = "SKIPPED";
      j["reason"] = r.skip_reason;
    } else {
      j["status"] = "ok";
      for (const auto& c : t.columns) j[c] = r.values[c];
      j["provenance"] = r.provenance;
    }
    rows.push_back(std::move(j));
  }
  out << json{{"table", t.name}, {"rows", rows}}.dump(2) << "\n";
}

void render_latex(const Table& t, std::ostream& out) {
  if (t.name == "cliques") {
    out << "\\begin{tabular}{lcccccccc}\n\\toprule\nSystem";
    for (int k = 1; k <= 8; ++k) out << " & $k=" << k << "$";
    out << " \\\\\n\\midrule\n";
    std::string current;
    std::vector<std::string> cells;
    auto flush = [&] {
      if (current.empty()) return;
      out << latex_system(current);
      for (const auto& c : cells) out << " & " << c;
      out << " \\\\\n";
    };
    for (const auto& r : t.rows) {
      if (r.system != current) {
        flush();
        current = r.system;
        cells.assign(8, "");
      }
      cells[static_cast<std::size_t>(r.k - 1)] = r.skipped ? "--" : cell(r.values["omega"]);
    }
    flush();
    out << "\\bottomrule\n\\end{tabular}\n";
    return;
  }
  const bool sunflowers = t.name == "sunflowers";
  out << "\\begin{tabular}{ll" << std::string(t.columns.size(), 'r') << "}\n\\toprule\n";
  out << (sunflowers ? "System & $k$ & Cliques & Sunfl. & \\% \\\\\n"
                     : "System & $k$ & $|V|$ & $|E|$ & min deg & max deg & CC \\\\\n");
  out << "\\midrule\n";
  for (const auto& r : t.rows) {
    out << latex_system(r.system) << " & " << r.k;
    for (const auto& c : t.columns) {
      out << " & ";
      if (r.skipped) {
        out << "--";
      } else if (sunflowers && c != "percentage") {
        out << with_commas(r.values[c].get<std::uint64_t>());
      } else {
        out << cell(r.values[c]);
      }
    }
    out << " \\\\\n";
  }
  out << "\\bottomrule\n\\end{tabular}\n";
}

// ---- verify ------------------------------------------------------------------

std::vector<CheckReport> structural_checks(Session& s, const std::vector<std::string>& systems) {
  auto wanted = [&](const std::string& n) {
    return systems.empty() || std::find(systems.begin(), systems.end(), n) != systems.end();
  };
  std::vector<CheckReport> out;
  RootSystem f4 = build_root_system("F4"), e6 = build_root_system("E6"), e7 = build_root_system("E7"),
             e8 = build_root_system("E8");
  if (wanted("E6")) out.push_back(check_scaling_isomorphism(e6, 1, 4));
  if (wanted("E8")) out.push_back(check_scaling_isomorphism(e8, 2, 8));
  if (wanted("E6")) out.push_back(check_mod8(e6, 4));
  if (wanted("E7")) out.push_back(check_mod8(e7, 7));
  if (wanted("E8")) out.push_back(check_mod8(e8, 8));
  if (wanted("E7")) {
    CachedGraph c = s.require(e7, 7);
    CheckReport r;
    r.check = "edgeless";
    r.system = "E7";
    r.k = 7;
    r.items_checked = c.graph.vertex_count();
    r.passed = c.graph.edge_count() == 0 && c.graph.vertex_count() > 0;
    r.detail = std::to_string(c.graph.edge_count()) + " edges on " + std::to_string(c.graph.vertex_count()) + " vertices";
    out.push_back(r);
  }
  for (const RootSystem* rs : {&e6, &e7, &e8})
    if (wanted(rs->name())) out.push_back(check_degree_formula(*rs));
  for (const auto& name : kExceptional) {
    if (!wanted(name)) continue;
    RootSystem rs = build_root_system(name);
    for (int k = 1; k <= std::min(rs.max_sos_size(), 3); ++k) {
      CachedGraph c = s.require(rs, k);
      out.push_back(check_weyl_automorphism(c.graph, rs));
    }
  }
  if (wanted("F4")) {
    SOSGraph a = s.require(f4, 4).graph;
    SOSGraph b = build_gamma(build_root_system("D4"), 1);
    IsomorphismResult iso = check_graph_isomorphism_small(a, b);
    CheckReport r;
    r.check = "isomorphic_to_D4_k1";
    r.system = "F4";
    r.k = 4;
    r.items_checked = a.vertex_count();
    r.passed = iso.isomorphic && is_isomorphism(a, b, iso.mapping);
    r.detail = iso.reason;
    out.push_back(r);

    CheckReport aut;
    aut.check = "automorphism_group_order";
    aut.system = "F4";
    aut.k = 4;
    std::uint64_t order = count_automorphisms(a);
    aut.items_checked = order;
    aut.passed = order == 1152;
    aut.detail = "|Aut| = " + std::to_string(order);
    out.push_back(aut);
  }
  return out;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path + " for writing");
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strongly orthogonal set graphs of root systems"};
  app.require_subcommand(1);
  GlobalOptions global;
  app.add_option("--cache-dir", global.cache_dir,
                 std::string("Graph cache directory (default $") + kCacheDirEnv + " or ./sosgraph-cache)");
  app.add_option("--threads", global.threads, "Worker threads, 0 for all cores");
  app.add_option("--max-memory-gb", global.max_memory_gb, "Adjacency memory budget per graph, 0 for none");
  app.add_option("--max-pairs", global.max_pairs, "Skip graphs with more vertex pairs than this, 0 for none");

  std::string system;
  int k = 1;
  std::string output;

  auto* build = app.add_subcommand("build", "Build Gamma(R,k) into the cache");
  std::string dot;
  build->add_option("--system", system, "G2, F4, E6, E7, E8, A<l> or D<l>")->required();
  build->add_option("--k", k, "SOS size")->required()->check(CLI::PositiveNumber);
  build->add_option("--dot", dot, "Also write a Graphviz file");

  auto* stats_cmd = app.add_subcommand("stats", "Graph parameters and Weyl orbits");
  stats_cmd->add_option("--system", system)->required();
  stats_cmd->add_option("--k", k)->required()->check(CLI::PositiveNumber);

  auto* cliques_cmd = app.add_subcommand("cliques", "Clique number and maximum-clique count");
  bool maximal = false;
  cliques_cmd->add_option("--system", system)->required();
  cliques_cmd->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  cliques_cmd->add_flag("--maximal", maximal, "Also histogram all maximal cliques by size");

  auto* sunflowers_cmd = app.add_subcommand("sunflowers", "Maximum sunflower cliques (CSV)");
  std::string basis_file;
  sunflowers_cmd->add_option("--system", system)->required();
  sunflowers_cmd->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  sunflowers_cmd->add_option("--basis", basis_file, "JSON rational basis for the supports")->check(CLI::ExistingFile);

  auto* verify_cmd = app.add_subcommand("verify", "Structural checks as a JSON report");
  std::vector<std::string> verify_systems;
  verify_cmd->add_option("--system", verify_systems, "Restrict to these systems");
  verify_cmd->add_option("--output", output, "Report file (default stdout)");

  auto* table_cmd = app.add_subcommand("table", "Render a census table");
  std::string which, format = "csv";
  std::vector<std::string> table_systems;
  std::vector<int> table_ks;
  table_cmd->add_option("which", which, "parameters, cliques or sunflowers")
      ->required()
      ->check(CLI::IsMember({"parameters", "cliques", "sunflowers"}));
  table_cmd->add_option("--system", table_systems, "Systems (default all five exceptional)");
  table_cmd->add_option("--k", table_ks, "SOS sizes (default all)");
  table_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json", "latex"}));
  table_cmd->add_option("--output", output, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    Session session(global);

    if (*build) {
      RootSystem rs = build_root_system(system);
      warn_if_empty(rs, k);
      CachedGraph c = session.require(rs, k);
      if (!dot.empty()) write_dot(c.graph, dot);
      json j = provenance(rs, k, c);
      j["vertices"] = c.graph.vertex_count();
      j["edges"] = c.graph.edge_count();
      j["reused"] = c.reused;
      std::cout << j.dump(2) << "\n";
      return kExitOk;
    }

    if (*stats_cmd) {
      RootSystem rs = build_root_system(system);
      warn_if_empty(rs, k);
      CachedGraph c = session.require(rs, k);
      json j = stats_json(c.graph, stats(c.graph));
      j["weyl_orbit_sizes"] = weyl_orbit_labels(rs, c.graph).sizes;
      j["provenance"] = provenance(rs, k, c);
      std::cout << j.dump(2) << "\n";
      return kExitOk;
    }

    if (*cliques_cmd) {
      RootSystem rs = build_root_system(system);
      warn_if_empty(rs, k);
      CachedGraph c = session.require(rs, k);
      OrbitSummary orbits = weyl_orbit_labels(rs, c.graph);
      CliqueCensus census = count_maximum_cliques(c.graph, orbits, session.threads());
      json per = json::array();
      for (const auto& o : census.per_orbit)
        per.push_back({{"representative", c.graph.vertex(o.representative).to_string()},
                       {"orbit_size", o.orbit_size},
                       {"cliques_per_vertex", o.per_vertex}});
      json j = {{"system", rs.name()},
                {"k", k},
                {"omega", census.omega},
                {"maximum_cliques", census.total_maximum_cliques},
                {"orbits", per},
                {"provenance", provenance(rs, k, c)}};
      if (maximal) {
        json hist = json::object();
        for (auto [size, count] : maximal_clique_sizes(c.graph, orbits)) hist[std::to_string(size)] = count;
        j["maximal_clique_sizes"] = hist;
      }
      std::cout << j.dump(2) << "\n";
      return kExitOk;
    }

    if (*sunflowers_cmd) {
      RootSystem rs = build_root_system(system);
      warn_if_empty(rs, k);
      CachedGraph c = session.require(rs, k);
      int omega = clique_number(c.graph, weyl_orbit_labels(rs, c.graph));
      if (omega < 2) throw std::invalid_argument(rs.name() + " k=" + std::to_string(k) + " has no clique of size 2");
      SunflowerCensus sf;
      if (basis_file.empty()) {
        sf = count_sunflower_max_cliques(c.graph, rs, omega, session.threads());
      } else {
        // Coordinate permutations need not preserve supports in another
        // basis, so every vertex is scanned.
        RebasedVertices rb = rebase_vertices(c.graph, Basis::load(basis_file));
        sf = count_sunflower_max_cliques(c.graph, rb.supports, OrbitSummary::discrete(c.graph.vertex_count()),
                                         omega, session.threads());
      }
      std::cout << "system,k,maximum_cliques,sunflowers,percentage\r\n"
                << rs.name() << ',' << k << ',' << sf.maximum_cliques << ',' << sf.sunflowers << ','
                << sf.percent() << "\r\n";
      return kExitOk;
    }

    if (*verify_cmd) {
      auto reports = structural_checks(session, verify_systems);
      json arr = json::array();
      bool ok = true;
      for (const auto& r : reports) {
        arr.push_back(to_json(r));
        ok = ok && r.passed;
      }
      std::ofstream file;
      open_output(output, file) << json{{"checks", arr}, {"passed", ok}}.dump(2) << "\n";
      return ok ? kExitOk : kExitFailure;
    }

    if (*table_cmd) {
      std::vector<std::string> systems;
      for (const auto& s : table_systems.empty() ? kExceptional : table_systems)
        systems.push_back(SystemLabel::parse(s).name());
      Table t = which == "parameters" ? parameters_table(session, systems, table_ks)
                : which == "cliques"  ? cliques_table(session, systems, table_ks)
                                      : sunflowers_table(session, systems, table_ks);
      std::ofstream file;
      std::ostream& out = open_output(output, file);
      if (format == "csv") {
        render_csv(t, out);
      } else if (format == "json") {
        render_json(t, out);
      } else {
        render_latex(t, out);
      }
      bool partial = false;
      for (const auto& r : t.rows) {
        if (!r.skipped) continue;
        partial = true;
        std::cerr << "skipped " << r.system << " k=" << r.k << ": " << r.skip_reason << "\n";
      }
      return partial ? kExitPartial : kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}
