#include <bit>
#include <random>

#include "doctest.h"
#include "kkw/clifford.hpp"
#include "kkw/errors.hpp"

using namespace kkw;

namespace {

Multivector c(int i, int n = 4) { return Multivector::generator(i, n); }
Multivector one(int n = 4) { return Multivector(n, ScalarPoly(1L)); }

// Closed-form sign: count inversions across the two factors, plus one -1 per
// shared generator.
int reference_sign(unsigned a, unsigned b) {
  int swaps = 0;
  for (int i = 0; i < 8; ++i)
    if (a & (1u << i))
      for (int j = 0; j < i; ++j)
        if (b & (1u << j)) ++swaps;
  swaps += std::popcount(a & b);
  return swaps % 2 ? -1 : 1;
}

Multivector random_mv(std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> mask(0, (1 << n) - 1);
  std::uniform_int_distribution<int> num(-3, 3);
  std::uniform_int_distribution<int> pick(0, 3);
  Multivector out(n);
  for (int t = 0; t < 4; ++t) {
    ScalarPoly coef(static_cast<long>(num(rng)));
    if (pick(rng) == 0) coef *= ScalarPoly::variable(sym::f());
    if (pick(rng) == 1) coef *= ScalarPoly::variable(sym::a(1, 2));
    if (pick(rng) == 2) coef *= ScalarPoly::imag();
    out += Multivector::blade(static_cast<BladeMask>(mask(rng)), coef, n);
  }
  return out;
}

}  // namespace

TEST_CASE("generator relations") {
  CHECK(c(1) * c(1) == -one());
  CHECK(c(1) * c(2) == Multivector::blade(0b11, ScalarPoly(1L), 4));
  CHECK(c(2) * c(1) == -(c(1) * c(2)));
  const Multivector e12 = c(1) * c(2);
  CHECK(e12 * e12 == -one());
  for (int i = 1; i <= 6; ++i)
    for (int j = 1; j <= 6; ++j) {
      const Multivector anti = anticommutator(c(i, 6), c(j, 6));
      CHECK(anti == Multivector(6, ScalarPoly(i == j ? -2L : 0L)));
    }
}

TEST_CASE("sign table agrees with inversion count") {
  for (unsigned a = 0; a < 256; ++a)
    for (unsigned b = 0; b < 256; ++b)
      REQUIRE(blade_product_sign(static_cast<BladeMask>(a), static_cast<BladeMask>(b)) ==
              reference_sign(a, b));
}

TEST_CASE("word normal form") {
  auto [s1, m1] = normalize_word({2, 1, 1});
  CHECK(s1 == -1);
  CHECK(m1 == 0b10);
  auto [s2, m2] = normalize_word({3, 1, 2, 1, 3});
  // c3 c1 c2 c1 c3 = -c3 c1 c1 c2 c3 = c3 c2 c3 = -c2 c3 c3 = c2
  CHECK(s2 == 1);
  CHECK(m2 == 0b10);
}

TEST_CASE("dimension mismatch") {
  CHECK_THROWS_AS(c(1, 4) * c(1, 6), DomainError);
  CHECK_THROWS_AS(c(5, 4), DomainError);
}

TEST_CASE("spinor trace") {
  CHECK(spinor_trace(one()) == ScalarPoly(4L));
  CHECK(spinor_trace(c(1) * c(2)).is_zero());
  CHECK(spinor_trace(c(1) * c(2) * c(1) * c(2)) == ScalarPoly(-4L));
  CHECK(spinor_trace(one(8)) == ScalarPoly(16L));
  // Tr[c_k c_l c_k~ c_l~] = d(-delta_kk~ delta_ll~ + delta_kl~ delta_lk~) for k != l.
  for (int n : {4, 6}) {
    const long d = spinor_dimension(n);
    for (int k = 1; k <= n; ++k)
      for (int l = 1; l <= n; ++l) {
        if (k == l) continue;
        for (int kt = 1; kt <= n; ++kt)
          for (int lt = 1; lt <= n; ++lt) {
            if (kt == lt) continue;
            const long expect = d * (-(k == kt && l == lt) + (k == lt && l == kt));
            CHECK(spinor_trace(c(k, n) * c(l, n) * c(kt, n) * c(lt, n)) == ScalarPoly(expect));
          }
      }
  }
}

TEST_CASE("grade projection") {
  const Multivector x = Multivector(4, ScalarPoly(3L)) + c(1) * c(2);
  CHECK(grade_project(x, 0) == Multivector(4, ScalarPoly(3L)));
  CHECK(grade_project(c(1), 0).is_zero());
  const Multivector e123 = c(1) * c(2) * c(3);
  CHECK(grade_project(e123, 3) == e123);
}

TEST_CASE("associativity and trace cyclicity on random elements") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = trial % 2 ? 4 : 6;
    const Multivector a = random_mv(rng, n);
    const Multivector b = random_mv(rng, n);
    const Multivector e = random_mv(rng, n);
    CHECK((a * b) * e == a * (b * e));
    CHECK(spinor_trace(a * b) == spinor_trace(b * a));
    CHECK(a * (b + e) == a * b + a * e);
  }
}

TEST_CASE("coefficient derivative") {
  const Multivector x = Multivector::blade(0b11, ScalarPoly::variable(sym::a(1, 2)), 4);
  CHECK(derive(x, 3) == Multivector::blade(0b11, ScalarPoly::variable(sym::d1(sym::a(1, 2), 3)), 4));
}
