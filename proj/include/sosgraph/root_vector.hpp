#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>

namespace sosgraph {

inline constexpr std::size_t kMaxDim = 8;

/// Exact vector in doubled coordinates: every stored entry is twice the true
/// coordinate, so the half-integer roots of F4 and the E series are integral.
/// Slots past dim() are always zero.
class RootVector {
 public:
  RootVector() = default;
  explicit RootVector(std::size_t dim);
  /// Entries are doubled coordinates.
  RootVector(std::initializer_list<int> doubled);
  static RootVector from_doubled(std::span<const int> doubled);
  /// Entries are true coordinates; each is doubled on the way in.
  static RootVector from_true(std::span<const int> coords);

  std::size_t dim() const { return dim_; }
  std::int32_t operator[](std::size_t i) const { return c_[i]; }
  std::int32_t& operator[](std::size_t i) { return c_[i]; }
  std::span<const std::int32_t> coords() const { return {c_.data(), dim_}; }

  bool is_zero() const;

  RootVector operator+(const RootVector& o) const;
  RootVector operator-(const RootVector& o) const;
  RootVector operator-() const;
  RootVector scaled(int factor) const;

  /// Lexicographic on the coordinate tuple for vectors of equal dimension.
  friend auto operator<=>(const RootVector&, const RootVector&) = default;
  friend bool operator==(const RootVector&, const RootVector&) = default;

  /// Injective 64-bit packing (one signed byte per slot). Entries must lie in
  /// [-128, 127]; byte i holds coordinate i.
  std::uint64_t key() const;
  static RootVector from_key(std::uint64_t key, std::size_t dim);

  /// Bit i set iff coordinate i is non-zero.
  std::uint32_t support() const;

  /// True coordinates, e.g. "(1, -1/2, 0)".
  std::string to_string() const;

 private:
  std::array<std::int32_t, kMaxDim> c_{};
  std::uint8_t dim_ = 0;
};

/// Doubled-coordinate dot product; the true inner product is this value / 4.
/// Throws std::invalid_argument on a dimension mismatch.
std::int64_t inner_product(const RootVector& v, const RootVector& w);

/// Doubled squared length (true squared length times 4).
inline std::int64_t norm2(const RootVector& v) { return inner_product(v, v); }

/// Byte-wise difference of two packed keys. Equals key(a - b) whenever every
/// coordinate of a - b fits in a signed byte.
constexpr std::uint64_t key_difference(std::uint64_t a, std::uint64_t b) {
  constexpr std::uint64_t kHigh = 0x8080808080808080ULL;
  return ((a | kHigh) - (b & ~kHigh)) ^ ((a ^ ~b) & kHigh);
}

}  // namespace sosgraph
