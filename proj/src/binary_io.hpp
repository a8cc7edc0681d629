#pragma once

// Little-endian stream helpers with a running FNV-1a 64 checksum.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "sosgraph/error.hpp"

namespace sosgraph::io {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw FormatError(FormatError::Kind::Io, "cannot open " + path.string() + " for writing");
    buf_.reserve(1 << 16);
  }

  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ = (hash_ ^ p[i]) * kFnvPrime;
      buf_.push_back(static_cast<char>(p[i]));
    }
    if (buf_.size() >= (1 << 16)) flush();
  }

  template <class T>
  void le(T value) {
    static_assert(std::is_integral_v<T>);
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(value);
    unsigned char b[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
    bytes(b, sizeof(T));
  }

  void str16(const std::string& s) {
    le<std::uint16_t>(static_cast<std::uint16_t>(s.size()));
    bytes(s.data(), s.size());
  }

  std::uint64_t hash() const { return hash_; }

  /// Appends the checksum of everything written so far (not itself hashed).
  void finish() {
    std::uint64_t h = hash_;
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(h >> (8 * i));
    buf_.insert(buf_.end(), b, b + 8);
    flush();
    out_.close();
    if (!out_) throw FormatError(FormatError::Kind::Io, "write failed");
  }

 private:
  void flush() {
    out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    buf_.clear();
  }

  std::ofstream out_;
  std::vector<char> buf_;
  std::uint64_t hash_ = kFnvOffset;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : in_(path, std::ios::binary) {
    if (!in_) throw FormatError(FormatError::Kind::Io, "cannot open " + path.string());
  }

  void bytes(void* data, std::size_t n) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw FormatError(FormatError::Kind::ChecksumMismatch,
                        "checksum failure: file truncated");
    }
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) hash_ = (hash_ ^ p[i]) * kFnvPrime;
  }

  template <class T>
  T le() {
    unsigned char b[sizeof(T)];
    bytes(b, sizeof(T));
    std::make_unsigned_t<T> u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      u |= static_cast<std::make_unsigned_t<T>>(b[i]) << (8 * i);
    return static_cast<T>(u);
  }

  std::string str16() {
    auto n = le<std::uint16_t>();
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }

  /// Reads the trailing checksum, compares it with the running hash and
  /// returns it.
  std::uint64_t verify_checksum() {
    std::uint64_t expected = hash_;
    unsigned char b[8];
    in_.read(reinterpret_cast<char*>(b), 8);
    if (in_.gcount() != 8) {
      throw FormatError(FormatError::Kind::ChecksumMismatch, "checksum failure: file truncated");
    }
    std::uint64_t stored = 0;
    for (int i = 0; i < 8; ++i) stored |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    if (stored != expected) {
      throw FormatError(FormatError::Kind::ChecksumMismatch, "checksum failure: content mismatch");
    }
    if (in_.peek() != std::char_traits<char>::eof()) {
      throw FormatError(FormatError::Kind::ChecksumMismatch, "checksum failure: trailing bytes");
    }
    return stored;
  }

 private:
  std::ifstream in_;
  std::uint64_t hash_ = kFnvOffset;
};

}  // namespace sosgraph::io
