#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "sosgraph/graph.hpp"
#include "sosgraph/roots.hpp"

namespace sosgraph {

/// Environment variable that overrides the default cache directory.
inline constexpr const char* kCacheDirEnv = "SOSGRAPH_CACHE_DIR";

struct CachedGraph {
  SOSGraph graph;
  std::uint64_t checksum = 0;
  std::filesystem::path file;
  /// False when the graph had to be built.
  bool reused = false;
};

/// Graphs stored as <dir>/<label>_k<k>.sosg. A file that fails its checksum
/// or describes a different graph is rebuilt.
class GraphCache {
 public:
  explicit GraphCache(std::filesystem::path dir, BuildOptions options = {});

  /// $SOSGRAPH_CACHE_DIR if set, else ./sosgraph-cache.
  static std::filesystem::path default_dir();

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path file_for(const RootSystem& rs, int k) const;

  /// Cached copy if one is valid.
  std::optional<CachedGraph> find(const RootSystem& rs, int k) const;
  /// Cached copy, or build, store and return.
  CachedGraph get(const RootSystem& rs, int k);

 private:
  std::filesystem::path dir_;
  BuildOptions options_;
};

}  // namespace sosgraph
