#include "sosgraph/root_vector.hpp"

#include <stdexcept>

namespace sosgraph {

namespace {

void check_dim(std::size_t dim) {
  if (dim > kMaxDim) {
    throw std::invalid_argument("RootVector: dimension " + std::to_string(dim) +
                                " exceeds " + std::to_string(kMaxDim));
  }
}

}  // namespace

RootVector::RootVector(std::size_t dim) {
  check_dim(dim);
  dim_ = static_cast<std::uint8_t>(dim);
}

RootVector::RootVector(std::initializer_list<int> doubled)
    : RootVector(doubled.size()) {
  std::size_t i = 0;
  for (int x : doubled) c_[i++] = x;
}

RootVector RootVector::from_doubled(std::span<const int> doubled) {
  RootVector v(doubled.size());
  for (std::size_t i = 0; i < doubled.size(); ++i) v.c_[i] = doubled[i];
  return v;
}

RootVector RootVector::from_true(std::span<const int> coords) {
  RootVector v(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) v.c_[i] = 2 * coords[i];
  return v;
}

bool RootVector::is_zero() const {
  for (std::size_t i = 0; i < dim_; ++i)
    if (c_[i] != 0) return false;
  return true;
}

RootVector RootVector::operator+(const RootVector& o) const {
  if (o.dim_ != dim_) throw std::invalid_argument("RootVector: dimension mismatch");
  RootVector r(*this);
  for (std::size_t i = 0; i < dim_; ++i) r.c_[i] += o.c_[i];
  return r;
}

RootVector RootVector::operator-(const RootVector& o) const {
  if (o.dim_ != dim_) throw std::invalid_argument("RootVector: dimension mismatch");
  RootVector r(*this);
  for (std::size_t i = 0; i < dim_; ++i) r.c_[i] -= o.c_[i];
  return r;
}

RootVector RootVector::operator-() const { return scaled(-1); }

RootVector RootVector::scaled(int factor) const {
  RootVector r(*this);
  for (std::size_t i = 0; i < dim_; ++i) r.c_[i] *= factor;
  return r;
}

std::uint64_t RootVector::key() const {
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < dim_; ++i) {
    if (c_[i] < -128 || c_[i] > 127) {
      throw std::out_of_range("RootVector::key: coordinate out of byte range");
    }
    k |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(c_[i])) << (8 * i);
  }
  return k;
}

RootVector RootVector::from_key(std::uint64_t key, std::size_t dim) {
  RootVector v(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    v.c_[i] = static_cast<std::int8_t>(static_cast<std::uint8_t>(key >> (8 * i)));
  }
  return v;
}

std::uint32_t RootVector::support() const {
  std::uint32_t s = 0;
  for (std::size_t i = 0; i < dim_; ++i)
    if (c_[i] != 0) s |= 1U << i;
  return s;
}

std::string RootVector::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < dim_; ++i) {
    if (i) out += ", ";
    if (c_[i] % 2 == 0) {
      out += std::to_string(c_[i] / 2);
    } else {
      out += std::to_string(c_[i]) + "/2";
    }
  }
  return out + ")";
}

std::int64_t inner_product(const RootVector& v, const RootVector& w) {
  if (v.dim() != w.dim()) {
    throw std::invalid_argument("inner_product: dimension mismatch (" +
                                std::to_string(v.dim()) + " vs " +
                                std::to_string(w.dim()) + ")");
  }
  std::int64_t s = 0;
  for (std::size_t i = 0; i < v.dim(); ++i)
    s += static_cast<std::int64_t>(v[i]) * w[i];
  return s;
}

}  // namespace sosgraph
