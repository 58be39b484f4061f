#pragma once

// Clifford algebra Cl(n) with generators c(e_i)^2 = -1 over ScalarPoly.
//
// A basis monomial c(e_i1)...c(e_ik), i1 < ... < ik, is stored as the bitmask
// with bit (i-1) set for each factor.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "kkw/scalar_ring.hpp"

namespace kkw {

using BladeMask = std::uint16_t;

// Sign of the product of two canonical monomials: blade(a) * blade(b) =
// sign * blade(a ^ b). Computed once by insertion sort and tabulated.
int blade_product_sign(BladeMask a, BladeMask b);

// Normal form of an arbitrary word c(e_w0) c(e_w1) ... by insertion sort with
// sign tracking. Returns {sign, mask}.
std::pair<int, BladeMask> normalize_word(const std::vector<int>& word);

std::vector<int> mask_indices(BladeMask m);
int mask_grade(BladeMask m);

class Multivector {
 public:
  explicit Multivector(int n = 4);
  Multivector(int n, const ScalarPoly& scalar);

  static Multivector generator(int i, int n);                   // c(e_i)
  static Multivector blade(BladeMask m, const ScalarPoly& coef, int n);
  static Multivector word(const std::vector<int>& indices, int n);  // product in given order

  int dim() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<BladeMask, ScalarPoly>& terms() const { return terms_; }
  ScalarPoly coefficient(BladeMask m) const;
  ScalarPoly scalar_part() const { return coefficient(0); }

  Multivector& operator+=(const Multivector& o);
  Multivector& operator-=(const Multivector& o);
  Multivector& operator*=(const ScalarPoly& c);
  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(const Multivector& a, const Multivector& b);
  friend Multivector operator*(Multivector a, const ScalarPoly& c) { return a *= c; }
  friend Multivector operator*(const ScalarPoly& c, Multivector a) { return a *= c; }
  Multivector operator-() const;
  bool operator==(const Multivector& o) const { return n_ == o.n_ && terms_ == o.terms_; }

  // Apply fn to every coefficient; zero results are dropped.
  Multivector map_coefficients(const std::function<ScalarPoly(const ScalarPoly&)>& fn) const;

  std::string to_string() const;

 private:
  void add(BladeMask m, const ScalarPoly& c);
  int n_;
  std::map<BladeMask, ScalarPoly> terms_;
};

Multivector cliff_mul(const Multivector& a, const Multivector& b);
Multivector commutator(const Multivector& a, const Multivector& b);
Multivector anticommutator(const Multivector& a, const Multivector& b);

// Retains the monomials of length k.
Multivector grade_project(const Multivector& a, int k);

// Spinor dimension d = 2^(n/2).
long spinor_dimension(int n);

// d times the scalar part; every nonscalar monomial has zero trace.
ScalarPoly spinor_trace(const Multivector& a);

// Coefficient-wise formal derivative e_j(.) at the base point.
Multivector derive(const Multivector& a, int j);

}  // namespace kkw
