#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "sosgraph/key_index.hpp"
#include "sosgraph/root_vector.hpp"
#include "sosgraph/roots.hpp"

using namespace sosgraph;

namespace {

// Lattice description of each root set, enumerated over a box of doubled
// coordinates. Independent of the generators in the library.
std::set<RootVector> lattice_roots(std::size_t dim, auto&& accept) {
  std::set<RootVector> out;
  std::vector<int> c(dim, -4);
  while (true) {
    RootVector v = RootVector::from_doubled(c);
    if (!v.is_zero() && accept(v)) out.insert(v);
    std::size_t i = 0;
    while (i < dim && ++c[i] > 4) c[i++] = -4;
    if (i == dim) break;
  }
  return out;
}

bool all_even(const RootVector& v) {
  for (auto x : v.coords())
    if (x % 2 != 0) return false;
  return true;
}
bool all_odd(const RootVector& v) {
  for (auto x : v.coords())
    if (x % 2 == 0) return false;
  return true;
}
int coord_sum(const RootVector& v) {
  int s = 0;
  for (auto x : v.coords()) s += x;
  return s;
}

std::set<RootVector> as_set(const RootSystem& rs) { return {rs.roots().begin(), rs.roots().end()}; }

}  // namespace

TEST_CASE("root vectors use doubled coordinates") {
  RootVector half = RootVector::from_true(std::vector<int>{1, -1, 0});
  CHECK(half[0] == 2);
  CHECK(half.to_string() == "(1, -1, 0)");
  RootVector v{1, -1, 0, 2};
  CHECK(v.to_string() == "(1/2, -1/2, 0, 1)");
  CHECK(norm2(v) == 6);
  CHECK(v.support() == 0b1011U);
  CHECK((v + (-v)).is_zero());
  CHECK(v.scaled(2) == RootVector{2, -2, 0, 4});
  CHECK_THROWS_AS((void)inner_product(RootVector{1, 1}, RootVector{1, 1, 1}), std::invalid_argument);
}

TEST_CASE("packed keys round-trip and subtract bytewise") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coord(-60, 60);
  for (int trial = 0; trial < 2000; ++trial) {
    RootVector a(8), b(8);
    for (std::size_t i = 0; i < 8; ++i) {
      a[i] = coord(rng);
      b[i] = coord(rng);
    }
    CHECK(RootVector::from_key(a.key(), 8) == a);
    CHECK(key_difference(a.key(), b.key()) == (a - b).key());
  }
  RootVector big(2);
  big[0] = 200;
  CHECK_THROWS_AS((void)big.key(), std::out_of_range);
}

TEST_CASE("key index behaves like a map") {
  KeyIndex idx;
  for (std::uint32_t i = 0; i < 5000; ++i) CHECK(idx.insert(std::uint64_t{i} * 0x9e3779b97f4a7c15ULL, i));
  CHECK_FALSE(idx.insert(0, 99));
  CHECK(idx.size() == 5000);
  CHECK(idx.find(std::uint64_t{1234} * 0x9e3779b97f4a7c15ULL) == 1234U);
  CHECK_FALSE(idx.contains(1));
}

TEST_CASE("system labels") {
  CHECK(SystemLabel::parse("A(3)").name() == "A3");
  CHECK(SystemLabel::parse("D4").name() == "D4");
  CHECK(SystemLabel::parse("E7").rank == 7);
  CHECK_THROWS_AS(SystemLabel::parse("E9"), std::invalid_argument);
  CHECK_THROWS_AS(SystemLabel::parse("X2"), std::invalid_argument);
  CHECK_THROWS_AS(build_root_system("A8"), std::invalid_argument);
  CHECK_THROWS_AS(build_root_system("D3"), std::invalid_argument);
}

TEST_CASE("exceptional root sets match their lattice descriptions") {
  auto e8 = lattice_roots(8, [](const RootVector& v) {
    return (all_even(v) || all_odd(v)) && coord_sum(v) % 4 == 0 && norm2(v) == 8;
  });
  CHECK(e8.size() == 240);
  CHECK(as_set(build_root_system("E8")) == e8);

  std::set<RootVector> e7, e6;
  for (const auto& r : e8) {
    if (r[0] + r[7] == 0) e7.insert(r);
    if (r[0] + r[7] == 0 && r[0] + r[6] == 0) e6.insert(r);
  }
  CHECK(e7.size() == 126);
  CHECK(e6.size() == 72);
  CHECK(as_set(build_root_system("E7")) == e7);
  CHECK(as_set(build_root_system("E6")) == e6);

  auto f4 = lattice_roots(4, [](const RootVector& v) {
    return (all_even(v) || all_odd(v)) && (norm2(v) == 4 || norm2(v) == 8);
  });
  CHECK(f4.size() == 48);
  CHECK(as_set(build_root_system("F4")) == f4);

  auto g2 = lattice_roots(3, [](const RootVector& v) {
    return all_even(v) && coord_sum(v) == 0 && (norm2(v) == 8 || norm2(v) == 24);
  });
  CHECK(g2.size() == 12);
  CHECK(as_set(build_root_system("G2")) == g2);
}

TEST_CASE("E6 splits into 40 integral and 32 half-integral roots") {
  auto e6 = build_root_system("E6");
  int integral = 0, half = 0;
  for (const auto& r : e6.roots()) (all_even(r) ? integral : half)++;
  CHECK(integral == 40);
  CHECK(half == 32);
}

TEST_CASE("classical families") {
  for (int l = 1; l <= 7; ++l) {
    auto rs = build_root_system("A" + std::to_string(l));
    CHECK(rs.roots().size() == static_cast<std::size_t>(l * (l + 1)));
    CHECK(rs.ambient_dim() == static_cast<std::size_t>(l + 1));
    CHECK(rs.max_sos_size() == (l + 1) / 2);
  }
  for (int l = 4; l <= 8; ++l) {
    auto rs = build_root_system("D" + std::to_string(l));
    CHECK(rs.roots().size() == static_cast<std::size_t>(2 * l * (l - 1)));
    CHECK(rs.coxeter_number() == 2 * l - 2);
    CHECK(rs.max_sos_size() == 2 * (l / 2));
  }
}

TEST_CASE("Coxeter numbers, maximum SOS sizes and |R| = l h") {
  struct Row {
    const char* name;
    int h, max_sos;
  };
  for (auto [name, h, m] : {Row{"G2", 6, 2}, Row{"F4", 12, 4}, Row{"E6", 12, 4}, Row{"E7", 18, 7}, Row{"E8", 30, 8}}) {
    CAPTURE(name);
    auto rs = build_root_system(name);
    CHECK(rs.coxeter_number() == h);
    CHECK(rs.max_sos_size() == m);
    CHECK(rs.roots().size() == static_cast<std::size_t>(rs.rank() * h));
  }
}

TEST_CASE("simple roots generate the whole system under simple reflections") {
  for (const char* name : {"G2", "F4", "E6", "E7", "E8", "A3", "D5"}) {
    CAPTURE(name);
    auto rs = build_root_system(name);
    CHECK(rs.simple_roots().size() == static_cast<std::size_t>(rs.rank()));
    for (const auto& a : rs.simple_roots()) {
      CHECK(rs.contains(a));
      for (const auto& b : rs.simple_roots()) {
        if (a == b) continue;
        // Off-diagonal Cartan entries are 0, -1, -2 or -3.
        std::int64_t num = 2 * inner_product(a, b), den = norm2(b);
        CHECK(num % den == 0);
        CHECK(num / den <= 0);
        CHECK(num / den >= -3);
      }
    }
    OrbitPartition closure = orbit_closure(rs, rs.simple_roots());
    CHECK(std::set<RootVector>(closure.elements.begin(), closure.elements.end()) == as_set(rs));
  }
}

TEST_CASE("reflections are involutions that permute the roots") {
  auto rs = build_root_system("F4");
  for (const auto& s : rs.simple_reflections()) {
    CHECK(s.apply(s.root()) == -s.root());
    for (const auto& r : rs.roots()) {
      CHECK(rs.contains(s.apply(r)));
      CHECK(s.apply(s.apply(r)) == r);
    }
  }
  Reflection s(RootVector{2, 2});
  CHECK_THROWS_AS((void)s.apply(RootVector{1, 0}), std::domain_error);
}

TEST_CASE("strong orthogonality") {
  auto f4 = build_root_system("F4");
  auto e1 = RootVector::from_true(std::vector<int>{1, 0, 0, 0});
  auto e2 = RootVector::from_true(std::vector<int>{0, 1, 0, 0});
  // Orthogonal but e1 - e2 is a root.
  CHECK(inner_product(e1, e2) == 0);
  CHECK_FALSE(strongly_orthogonal(f4, e1, e2));
  auto a = RootVector::from_true(std::vector<int>{1, 1, 0, 0});
  auto b = RootVector::from_true(std::vector<int>{1, -1, 0, 0});
  CHECK(strongly_orthogonal(f4, a, b));
  CHECK_FALSE(strongly_orthogonal(f4, a, a));
  CHECK_FALSE(strongly_orthogonal(f4, a, -a));
  CHECK_THROWS_AS((void)strongly_orthogonal(f4, a, a.scaled(2)), std::invalid_argument);
  CHECK_FALSE(is_root(f4, RootVector(4)));
}

TEST_CASE("root system JSON export") {
  auto j = to_json(build_root_system("G2"));
  CHECK(j["label"] == "G2");
  CHECK(j["coxeter_number"] == 6);
  CHECK(j["roots"].size() == 12);
}
