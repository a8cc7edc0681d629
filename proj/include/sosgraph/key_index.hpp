#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

namespace sosgraph {

/// Open-addressing map from packed vector keys to dense indices. Read-only
/// lookups are safe from many threads once construction is finished.
class KeyIndex {
 public:
  static constexpr std::uint32_t kAbsent = 0xFFFFFFFFu;

  KeyIndex() : KeyIndex(0) {}
  explicit KeyIndex(std::size_t expected) { rehash(expected); }

  /// Returns false (and leaves the stored index alone) if the key is present.
  bool insert(std::uint64_t key, std::uint32_t index) {
    if ((size_ + 1) * 2 > keys_.size()) rehash(keys_.size());
    std::size_t slot = probe(key);
    if (values_[slot] != kAbsent) return false;
    keys_[slot] = key;
    values_[slot] = index;
    ++size_;
    return true;
  }

  std::uint32_t find_or_absent(std::uint64_t key) const {
    return values_[probe(key)];
  }

  std::optional<std::uint32_t> find(std::uint64_t key) const {
    std::uint32_t v = find_or_absent(key);
    if (v == kAbsent) return std::nullopt;
    return v;
  }

  bool contains(std::uint64_t key) const { return find_or_absent(key) != kAbsent; }
  std::size_t size() const { return size_; }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::size_t probe(std::uint64_t key) const {
    std::size_t slot = mix(key) & mask_;
    while (values_[slot] != kAbsent && keys_[slot] != key) slot = (slot + 1) & mask_;
    return slot;
  }

  void rehash(std::size_t expected) {
    std::size_t cap = std::bit_ceil(std::max<std::size_t>(16, expected * 2));
    std::vector<std::uint64_t> old_keys = std::move(keys_);
    std::vector<std::uint32_t> old_values = std::move(values_);
    keys_.assign(cap, 0);
    values_.assign(cap, kAbsent);
    mask_ = cap - 1;
    size_ = 0;
    for (std::size_t i = 0; i < old_keys.size(); ++i) {
      if (old_values[i] == kAbsent) continue;
      std::size_t slot = probe(old_keys[i]);
      keys_[slot] = old_keys[i];
      values_[slot] = old_values[i];
      ++size_;
    }
  }

  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> values_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

}  // namespace sosgraph
