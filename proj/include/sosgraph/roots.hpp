#pragma once

#include <boost/rational.hpp>
#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sosgraph/key_index.hpp"
#include "sosgraph/root_vector.hpp"

namespace sosgraph {

using Rational = boost::rational<std::int64_t>;
using RationalMatrix = std::vector<std::vector<Rational>>;

enum class Family { A, D, G2, F4, E6, E7, E8 };

struct SystemLabel {
  Family family = Family::E8;
  int rank = 8;

  /// "G2", "F4", "E6", "E7", "E8", "A3", "D4", ...
  std::string name() const;
  /// Accepts the names produced by name(); also "A(3)" / "D(4)". Throws
  /// std::invalid_argument for anything else.
  static SystemLabel parse(std::string_view text);

  friend bool operator==(const SystemLabel&, const SystemLabel&) = default;
};

/// Reflection s_a(v) = v - (2<v,a>/<a,a>) a. Exact on any vector whose Cartan
/// pairing with `a` is integral, which covers roots and all SOS sums.
class Reflection {
 public:
  explicit Reflection(RootVector root);

  const RootVector& root() const { return root_; }
  /// Throws std::domain_error if 2<v,a>/<a,a> is not an integer.
  RootVector apply(const RootVector& v) const;
  /// Matrix acting on coordinate columns (scale-free, so the same for
  /// doubled and true coordinates).
  RationalMatrix matrix() const;

 private:
  RootVector root_;
  std::int64_t norm_;
};

/// Immutable after construction. Roots are stored in lexicographic order of
/// their doubled coordinates; root indices refer to that order.
class RootSystem {
 public:
  const SystemLabel& label() const { return label_; }
  std::string name() const { return label_.name(); }
  int rank() const { return label_.rank; }
  std::size_t ambient_dim() const { return dim_; }
  int coxeter_number() const { return coxeter_; }
  int max_sos_size() const { return max_sos_; }
  bool simply_laced() const;

  std::span<const RootVector> roots() const { return roots_; }
  std::span<const RootVector> simple_roots() const { return simple_; }
  std::span<const Reflection> simple_reflections() const { return reflections_; }

  bool contains(const RootVector& v) const;
  std::optional<std::uint32_t> index_of(const RootVector& v) const;

 private:
  friend RootSystem build_root_system(SystemLabel label);

  SystemLabel label_;
  std::size_t dim_ = 0;
  int coxeter_ = 0;
  int max_sos_ = 0;
  std::vector<RootVector> roots_;
  std::vector<RootVector> simple_;
  std::vector<Reflection> reflections_;
  KeyIndex index_;
};

/// Builds the root set in doubled coordinates. A(l) lives in R^{l+1} and
/// needs 1 <= l <= 7; D(l) lives in R^l and needs 4 <= l <= 8. G2 sits on
/// x1+x2+x3 = 0 in R^3; E7 and E6 stay in the 8-dimensional E8 embedding.
/// Throws std::invalid_argument for an out-of-range rank.
RootSystem build_root_system(SystemLabel label);
RootSystem build_root_system(std::string_view label);

std::int64_t coxeter_number(const SystemLabel& label);
int max_sos_size(const SystemLabel& label);

/// False on dimension mismatch or for the zero vector.
bool is_root(const RootSystem& rs, const RootVector& v);

/// Neither a+b nor a-b is a root. Antipodal and repeated pairs are never
/// strongly orthogonal. Throws std::invalid_argument for non-root input.
bool strongly_orthogonal(const RootSystem& rs, const RootVector& a, const RootVector& b);

/// Closure of a seed set under the simple reflections, split into orbits.
/// Orbit ids are assigned in order of the first seed reaching each orbit;
/// elements are listed in discovery order.
struct OrbitPartition {
  std::vector<RootVector> elements;
  std::vector<std::uint32_t> orbit_of;
  std::vector<std::size_t> orbit_sizes;
};

OrbitPartition orbit_closure(const RootSystem& rs, std::span<const RootVector> seeds);

/// {label, rank, ambient_dim, coxeter_number, roots}; roots as doubled
/// coordinate lists in lexicographic order.
nlohmann::json to_json(const RootSystem& rs);

}  // namespace sosgraph
