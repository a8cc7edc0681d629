#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

namespace sosgraph {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation exceeded its memory or pair budget. When a checkpoint was
/// written, checkpoint() names it so a rerun can resume.
class ResourceExhausted : public Error {
 public:
  explicit ResourceExhausted(const std::string& what, std::filesystem::path checkpoint = {})
      : Error(what), checkpoint_(std::move(checkpoint)) {}
  const std::filesystem::path& checkpoint() const { return checkpoint_; }

 private:
  std::filesystem::path checkpoint_;
};

/// Unreadable, truncated or corrupted binary file.
class FormatError : public Error {
 public:
  enum class Kind { BadMagic, VersionMismatch, ChecksumMismatch, Io };
  FormatError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// An orbit-weighted count failed its divisibility check, which means an
/// orbit labelling or an enumeration is wrong.
class CountingError : public Error {
 public:
  using Error::Error;
};

}  // namespace sosgraph
