#include "sosgraph/roots.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <deque>
#include <stdexcept>

namespace sosgraph {

namespace {

void check_rank(const SystemLabel& label) {
  switch (label.family) {
    case Family::A:
      if (label.rank < 1 || label.rank > 7)
        throw std::invalid_argument("A(l) needs 1 <= l <= 7, got " + std::to_string(label.rank));
      return;
    case Family::D:
      if (label.rank < 4 || label.rank > 8)
        throw std::invalid_argument("D(l) needs 4 <= l <= 8, got " + std::to_string(label.rank));
      return;
    case Family::G2:
      if (label.rank != 2) break;
      return;
    case Family::F4:
      if (label.rank != 4) break;
      return;
    case Family::E6:
      if (label.rank != 6) break;
      return;
    case Family::E7:
      if (label.rank != 7) break;
      return;
    case Family::E8:
      if (label.rank != 8) break;
      return;
  }
  throw std::invalid_argument("rank " + std::to_string(label.rank) +
                              " is invalid for an exceptional system");
}

// All vectors +-2e_i +-2e_j (doubled) for i < j in the given coordinate range.
void push_pm_pairs(std::vector<RootVector>& out, std::size_t dim, std::size_t lo, std::size_t hi) {
  for (std::size_t i = lo; i < hi; ++i)
    for (std::size_t j = i + 1; j < hi; ++j)
      for (int si : {2, -2})
        for (int sj : {2, -2}) {
          RootVector v(dim);
          v[i] = si;
          v[j] = sj;
          out.push_back(v);
        }
}

std::vector<RootVector> e8_roots() {
  std::vector<RootVector> out;
  push_pm_pairs(out, 8, 0, 8);
  for (unsigned mask = 0; mask < 256; ++mask) {
    if (std::popcount(mask) % 2 != 0) continue;
    RootVector v(8);
    for (std::size_t i = 0; i < 8; ++i) v[i] = (mask >> i) & 1U ? -1 : 1;
    out.push_back(v);
  }
  return out;
}

std::vector<RootVector> raw_roots(const SystemLabel& label) {
  std::vector<RootVector> out;
  switch (label.family) {
    case Family::A: {
      std::size_t dim = static_cast<std::size_t>(label.rank) + 1;
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
          if (i == j) continue;
          RootVector v(dim);
          v[i] = 2;
          v[j] = -2;
          out.push_back(v);
        }
      break;
    }
    case Family::D:
      push_pm_pairs(out, static_cast<std::size_t>(label.rank), 0, static_cast<std::size_t>(label.rank));
      break;
    case Family::G2:
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
          if (i == j) continue;
          RootVector shortv(3);
          shortv[i] = 2;
          shortv[j] = -2;
          out.push_back(shortv);
        }
      for (std::size_t i = 0; i < 3; ++i)
        for (int sign : {1, -1}) {
          RootVector longv(3);
          for (std::size_t j = 0; j < 3; ++j) longv[j] = sign * (i == j ? 4 : -2);
          out.push_back(longv);
        }
      break;
    case Family::F4:
      push_pm_pairs(out, 4, 0, 4);
      for (std::size_t i = 0; i < 4; ++i)
        for (int s : {2, -2}) {
          RootVector v(4);
          v[i] = s;
          out.push_back(v);
        }
      for (unsigned mask = 0; mask < 16; ++mask) {
        RootVector v(4);
        for (std::size_t i = 0; i < 4; ++i) v[i] = (mask >> i) & 1U ? -1 : 1;
        out.push_back(v);
      }
      break;
    case Family::E8:
      out = e8_roots();
      break;
    case Family::E7:
      for (const auto& r : e8_roots())
        if (r[0] + r[7] == 0) out.push_back(r);
      break;
    case Family::E6:
      for (const auto& r : e8_roots())
        if (r[0] + r[6] == 0 && r[0] + r[7] == 0) out.push_back(r);
      break;
  }
  return out;
}

std::size_t ambient_dim_of(const SystemLabel& label) {
  switch (label.family) {
    case Family::A: return static_cast<std::size_t>(label.rank) + 1;
    case Family::D: return static_cast<std::size_t>(label.rank);
    case Family::G2: return 3;
    case Family::F4: return 4;
    default: return 8;
  }
}

// Base from a fixed generic functional: positive roots are those with
// f(a) > 0, simple roots the positive roots that are not a sum of two
// positive roots. Weights are powers of 9, which no doubled root entry
// (|x| <= 4) can cancel.
std::vector<RootVector> simple_roots_of(const std::vector<RootVector>& roots,
                                        const KeyIndex& index, std::size_t dim) {
  std::vector<std::int64_t> weight(dim);
  std::int64_t w = 1;
  for (std::size_t i = dim; i-- > 0;) {
    weight[i] = w;
    w *= 9;
  }
  auto functional = [&](const RootVector& v) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < dim; ++i) s += weight[i] * v[i];
    return s;
  };
  std::vector<RootVector> positive;
  for (const auto& r : roots) {
    std::int64_t f = functional(r);
    if (f == 0) throw std::logic_error("simple_roots_of: functional vanishes on a root");
    if (f > 0) positive.push_back(r);
  }
  std::vector<RootVector> simple;
  for (const auto& a : positive) {
    bool decomposable = false;
    for (const auto& b : positive) {
      if (a == b) continue;
      RootVector rest = a - b;
      if (index.contains(rest.key()) && functional(rest) > 0) {
        decomposable = true;
        break;
      }
    }
    if (!decomposable) simple.push_back(a);
  }
  return simple;
}

}  // namespace

std::string SystemLabel::name() const {
  switch (family) {
    case Family::A: return "A" + std::to_string(rank);
    case Family::D: return "D" + std::to_string(rank);
    case Family::G2: return "G2";
    case Family::F4: return "F4";
    case Family::E6: return "E6";
    case Family::E7: return "E7";
    case Family::E8: return "E8";
  }
  return "?";
}

SystemLabel SystemLabel::parse(std::string_view text) {
  if (text == "G2") return {Family::G2, 2};
  if (text == "F4") return {Family::F4, 4};
  if (text == "E6") return {Family::E6, 6};
  if (text == "E7") return {Family::E7, 7};
  if (text == "E8") return {Family::E8, 8};
  if (text.size() >= 2 && (text[0] == 'A' || text[0] == 'D')) {
    std::string_view digits = text.substr(1);
    if (digits.size() >= 3 && digits.front() == '(' && digits.back() == ')')
      digits = digits.substr(1, digits.size() - 2);
    int rank = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), rank);
    if (ec == std::errc{} && ptr == digits.data() + digits.size()) {
      SystemLabel label{text[0] == 'A' ? Family::A : Family::D, rank};
      check_rank(label);
      return label;
    }
  }
  throw std::invalid_argument("unknown root system label '" + std::string(text) + "'");
}

std::int64_t coxeter_number(const SystemLabel& label) {
  switch (label.family) {
    case Family::A: return label.rank + 1;
    case Family::D: return 2 * label.rank - 2;
    case Family::G2: return 6;
    case Family::F4: return 12;
    case Family::E6: return 12;
    case Family::E7: return 18;
    case Family::E8: return 30;
  }
  return 0;
}

int max_sos_size(const SystemLabel& label) {
  switch (label.family) {
    case Family::A: return (label.rank + 1) / 2;
    case Family::D: return 2 * (label.rank / 2);
    case Family::G2: return 2;
    case Family::F4: return 4;
    case Family::E6: return 4;
    case Family::E7: return 7;
    case Family::E8: return 8;
  }
  return 0;
}

Reflection::Reflection(RootVector root) : root_(root), norm_(norm2(root)) {
  if (norm_ == 0) throw std::invalid_argument("Reflection: zero vector");
}

RootVector Reflection::apply(const RootVector& v) const {
  std::int64_t num = 2 * inner_product(v, root_);
  if (num % norm_ != 0) {
    throw std::domain_error("Reflection: non-integral pairing for " + v.to_string());
  }
  return v - root_.scaled(static_cast<int>(num / norm_));
}

RationalMatrix Reflection::matrix() const {
  std::size_t n = root_.dim();
  RationalMatrix m(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m[i][j] = Rational(i == j ? 1 : 0) -
                Rational(2 * static_cast<std::int64_t>(root_[i]) * root_[j], norm_);
  return m;
}

bool RootSystem::simply_laced() const {
  std::int64_t n = norm2(roots_.front());
  return std::all_of(roots_.begin(), roots_.end(),
                     [n](const RootVector& r) { return norm2(r) == n; });
}

bool RootSystem::contains(const RootVector& v) const {
  if (v.dim() != dim_) return false;
  for (std::size_t i = 0; i < dim_; ++i)
    if (v[i] < -128 || v[i] > 127) return false;
  return index_.contains(v.key());
}

std::optional<std::uint32_t> RootSystem::index_of(const RootVector& v) const {
  if (!contains(v)) return std::nullopt;
  return index_.find(v.key());
}

RootSystem build_root_system(SystemLabel label) {
  check_rank(label);
  RootSystem rs;
  rs.label_ = label;
  rs.dim_ = ambient_dim_of(label);
  rs.coxeter_ = static_cast<int>(coxeter_number(label));
  rs.max_sos_ = max_sos_size(label);
  rs.roots_ = raw_roots(label);
  std::sort(rs.roots_.begin(), rs.roots_.end());
  rs.index_ = KeyIndex(rs.roots_.size());
  for (std::uint32_t i = 0; i < rs.roots_.size(); ++i) {
    if (!rs.index_.insert(rs.roots_[i].key(), i))
      throw std::logic_error("build_root_system: duplicate root");
  }
  if (static_cast<std::int64_t>(rs.roots_.size()) != label.rank * coxeter_number(label)) {
    throw std::logic_error("build_root_system: |R| != rank * h for " + label.name());
  }
  rs.simple_ = simple_roots_of(rs.roots_, rs.index_, rs.dim_);
  if (static_cast<int>(rs.simple_.size()) != label.rank) {
    throw std::logic_error("build_root_system: found " + std::to_string(rs.simple_.size()) +
                           " simple roots for " + label.name());
  }
  for (const auto& a : rs.simple_) rs.reflections_.emplace_back(a);
  return rs;
}

RootSystem build_root_system(std::string_view label) {
  return build_root_system(SystemLabel::parse(label));
}

bool is_root(const RootSystem& rs, const RootVector& v) { return rs.contains(v); }

bool strongly_orthogonal(const RootSystem& rs, const RootVector& a, const RootVector& b) {
  if (!rs.contains(a) || !rs.contains(b)) {
    throw std::invalid_argument("strongly_orthogonal: argument is not a root");
  }
  if (a == b || a == -b) return false;
  return !rs.contains(a + b) && !rs.contains(a - b);
}

OrbitPartition orbit_closure(const RootSystem& rs, std::span<const RootVector> seeds) {
  OrbitPartition out;
  KeyIndex seen(seeds.size() * 2);
  std::deque<std::uint32_t> queue;
  for (const auto& seed : seeds) {
    if (seed.dim() != rs.ambient_dim())
      throw std::invalid_argument("orbit_closure: seed dimension mismatch");
    if (seen.contains(seed.key())) continue;
    auto orbit = static_cast<std::uint32_t>(out.orbit_sizes.size());
    out.orbit_sizes.push_back(0);
    auto visit = [&](const RootVector& v) {
      auto idx = static_cast<std::uint32_t>(out.elements.size());
      if (!seen.insert(v.key(), idx)) return;
      out.elements.push_back(v);
      out.orbit_of.push_back(orbit);
      ++out.orbit_sizes[orbit];
      queue.push_back(idx);
    };
    visit(seed);
    while (!queue.empty()) {
      RootVector v = out.elements[queue.front()];
      queue.pop_front();
      for (const auto& s : rs.simple_reflections()) visit(s.apply(v));
    }
  }
  return out;
}

nlohmann::json to_json(const RootSystem& rs) {
  nlohmann::json roots = nlohmann::json::array();
  for (const auto& r : rs.roots()) {
    roots.push_back(std::vector<int>(r.coords().begin(), r.coords().end()));
  }
  return {{"label", rs.name()},
          {"rank", rs.rank()},
          {"ambient_dim", rs.ambient_dim()},
          {"coxeter_number", rs.coxeter_number()},
          {"coordinates", "doubled"},
          {"roots", std::move(roots)}};
}

}  // namespace sosgraph
