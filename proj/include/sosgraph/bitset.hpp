#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace sosgraph {

/// Fixed-width bitset sized at run time. Used for candidate sets in the
/// clique searches, where every operand has the same width.
class DynBitset {
 public:
  DynBitset() = default;
  explicit DynBitset(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  std::size_t size() const { return bits_; }
  std::size_t word_count() const { return words_.size(); }
  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  void set(std::size_t i) { words_[i >> 6] |= 1ULL << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(1ULL << (i & 63)); }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1ULL; }

  void set_all() {
    for (auto& w : words_) w = ~0ULL;
    trim();
  }
  void clear() {
    for (auto& w : words_) w = 0;
  }

  bool none() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  /// Index of the lowest set bit at or after `from`, or size() if none.
  std::size_t next(std::size_t from) const {
    if (from >= bits_) return bits_;
    std::size_t wi = from >> 6;
    std::uint64_t w = words_[wi] & (~0ULL << (from & 63));
    while (true) {
      if (w) return (wi << 6) + static_cast<std::size_t>(std::countr_zero(w));
      if (++wi == words_.size()) return bits_;
      w = words_[wi];
    }
  }
  std::size_t first() const { return next(0); }

  /// this = a & b
  void assign_and(const DynBitset& a, const DynBitset& b) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] = a.words_[i] & b.words_[i];
  }
  DynBitset& operator&=(const DynBitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  DynBitset& operator|=(const DynBitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  /// this &= ~o
  void subtract(const DynBitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  }

  /// popcount(a & b) without materialising the intersection.
  static std::size_t and_count(const DynBitset& a, const DynBitset& b) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i)
      c += static_cast<std::size_t>(std::popcount(a.words_[i] & b.words_[i]));
    return c;
  }

  friend bool operator==(const DynBitset&, const DynBitset&) = default;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        f((wi << 6) + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

 private:
  void trim() {
    if (bits_ & 63) words_.back() &= (1ULL << (bits_ & 63)) - 1;
  }

  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace sosgraph
