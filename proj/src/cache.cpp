#include "sosgraph/cache.hpp"

#include <cstdlib>

#include "sosgraph/error.hpp"

namespace sosgraph {

GraphCache::GraphCache(std::filesystem::path dir, BuildOptions options)
    : dir_(std::move(dir)), options_(std::move(options)) {
  if (options_.spill_dir.empty()) options_.spill_dir = dir_;
}

std::filesystem::path GraphCache::default_dir() {
  if (const char* env = std::getenv(kCacheDirEnv); env && *env) return env;
  return std::filesystem::current_path() / "sosgraph-cache";
}

std::filesystem::path GraphCache::file_for(const RootSystem& rs, int k) const {
  return dir_ / (rs.name() + "_k" + std::to_string(k) + ".sosg");
}

std::optional<CachedGraph> GraphCache::find(const RootSystem& rs, int k) const {
  auto file = file_for(rs, k);
  if (!std::filesystem::exists(file)) return std::nullopt;
  CachedGraph out;
  try {
    out.graph = deserialize(file, &out.checksum);
  } catch (const FormatError&) {
    return std::nullopt;
  }
  if (out.graph.system_label() != rs.name() || out.graph.k() != k) return std::nullopt;
  out.file = file;
  out.reused = true;
  return out;
}

CachedGraph GraphCache::get(const RootSystem& rs, int k) {
  if (auto hit = find(rs, k)) return std::move(*hit);
  std::filesystem::create_directories(dir_);
  CachedGraph out;
  out.graph = build_gamma(rs, k, options_);
  out.file = file_for(rs, k);
  // Write then rename so an interrupted run never leaves a half file behind.
  auto tmp = out.file;
  tmp += ".tmp";
  out.checksum = serialize(out.graph, tmp);
  std::filesystem::rename(tmp, out.file);
  return out;
}

}  // namespace sosgraph
