#pragma once

// Exact commutative polynomial ring over indexed indeterminates.
//
// Every symbolic quantity in the library (curvature, form coefficients, their
// formal derivatives at the base point, pi, the imaginary unit, ...) lives in
// ScalarPoly. Coefficients are GMP rationals; exponents are signed so that
// formal inverses (g^-1, pi^-2) are available without a fraction field.

#include <array>
#include <complex>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace kkw {

using Rational = mpq_class;

inline constexpr int kMaxDim = 8;

// Order of enumerators is the canonical variable order used for printing.
enum class Family : std::uint8_t {
  // constants (annihilated by formal_derive)
  ImagUnit,  // sqrt(-1), central, squares to -1
  Pi,
  DimN,
  SpinorDim,
  Omega3,
  HPrime0,
  Lambda,
  F4,
  F2,
  F0,
  Xi,  // component xi_j of the cotangent variable on the boundary, j < n
  // fields
  S,        // scalar curvature
  F,        // scalar perturbation / conformal factor f
  G,        // conformal factor g
  H,        // log-conformal factor h
  ExpM2H,   // exp(-2h); formal_derive knows its chain rule
  A,        // two-form coefficient a[k,l], antisymmetric
  B,        // one-form coefficient b[k]
  R,        // Riemann tensor R[i,j,s,t]
  Coef,     // generic multivector coefficient, index = blade bitmask
};

bool is_constant(Family f);
std::string family_name(Family f);

struct IndexedSymbol {
  Family family = Family::S;
  std::array<std::int16_t, 4> index{0, 0, 0, 0};
  // Derivative directions, ascending; 0 marks an unused slot.
  std::array<std::int8_t, 2> deriv{0, 0};

  int arity() const;
  int derivative_order() const;
  std::string to_string() const;

  auto operator<=>(const IndexedSymbol&) const = default;
  bool operator==(const IndexedSymbol&) const = default;
};

namespace sym {
IndexedSymbol imag();
IndexedSymbol pi();
IndexedSymbol omega3();
IndexedSymbol hprime0();
IndexedSymbol lambda();
IndexedSymbol moment(int which);  // 0, 2 or 4
IndexedSymbol dim_n();
IndexedSymbol spinor_dim();
IndexedSymbol xi(int j);
IndexedSymbol s();
IndexedSymbol f();
IndexedSymbol g();
IndexedSymbol h();
IndexedSymbol exp_m2h();
IndexedSymbol a(int k, int l);
IndexedSymbol b(int k);
IndexedSymbol riemann(int i, int j, int s, int t);
IndexedSymbol coef(int blade_mask);
// D1[j] x  (x must carry no derivative yet)
IndexedSymbol d1(const IndexedSymbol& x, int j);
// D2[j,k] x
IndexedSymbol d2(const IndexedSymbol& x, int j, int k);
}  // namespace sym

struct Canonical {
  int sign = 1;  // -1, 0 or +1
  IndexedSymbol rep;
};

// Orbit representative under the index symmetries of the family, with the
// symmetry sign. Throws DomainError if an index lies outside [1, n].
Canonical canonicalize(const IndexedSymbol& symbol, int n = kMaxDim);

// A monomial is a sorted list of (symbol, nonzero exponent). The imaginary
// unit only ever appears with exponent 1.
using Monomial = std::vector<std::pair<IndexedSymbol, int>>;

class ScalarPoly {
 public:
  ScalarPoly() = default;
  ScalarPoly(long value);  // NOLINT(google-explicit-constructor)
  ScalarPoly(const Rational& value);  // NOLINT(google-explicit-constructor)

  static ScalarPoly variable(const IndexedSymbol& symbol, int exponent = 1);
  static ScalarPoly rational(long num, long den);
  static ScalarPoly imag() { return variable(sym::imag()); }
  static ScalarPoly from_terms(std::map<Monomial, Rational> terms);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // Rational value if the polynomial is a (real) constant.
  std::optional<Rational> constant_value() const;
  Rational coefficient(const Monomial& m) const;
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  ScalarPoly& operator+=(const ScalarPoly& o);
  ScalarPoly& operator-=(const ScalarPoly& o);
  ScalarPoly& operator*=(const ScalarPoly& o);
  ScalarPoly& operator*=(const Rational& c);
  friend ScalarPoly operator+(ScalarPoly a, const ScalarPoly& b) { return a += b; }
  friend ScalarPoly operator-(ScalarPoly a, const ScalarPoly& b) { return a -= b; }
  friend ScalarPoly operator*(const ScalarPoly& a, const ScalarPoly& b);
  friend ScalarPoly operator*(ScalarPoly a, const Rational& c) { return a *= c; }
  friend ScalarPoly operator*(const Rational& c, ScalarPoly a) { return a *= c; }
  ScalarPoly operator-() const;
  bool operator==(const ScalarPoly& o) const { return terms_ == o.terms_; }

  ScalarPoly pow(int e) const;

  // Deterministic canonical rendering, e.g. "-1/4*s + 3*f^2".
  std::string to_string() const;

  // Substitute symbols for which `rule` returns a value. Substituted symbols
  // must appear with nonnegative exponent unless the replacement is a single
  // monomial.
  ScalarPoly substitute(
      const std::function<std::optional<ScalarPoly>(const IndexedSymbol&)>& rule) const;

  // Numerical value; the imaginary unit evaluates to i, pi to M_PI; every
  // other symbol is looked up through `value`.
  std::complex<double> evaluate(
      const std::function<std::complex<double>(const IndexedSymbol&)>& value) const;

  // Split p = re + I*im with re, im free of the imaginary unit.
  std::pair<ScalarPoly, ScalarPoly> split_imaginary() const;

  // Apply a function to every coefficient-free monomial map; used by the
  // unit-sphere reduction.
  template <typename Fn>
  ScalarPoly map_monomials(Fn&& fn) const {
    ScalarPoly out;
    for (const auto& [m, c] : terms_) out += fn(m) * c;
    return out;
  }

 private:
  void add_term(const Monomial& m, const Rational& c);
  std::map<Monomial, Rational> terms_;
};

// Multiply two monomials; returns the sign produced by the imaginary unit.
std::pair<int, Monomial> multiply_monomials(const Monomial& a, const Monomial& b);
std::string monomial_to_string(const Monomial& m);

// Formal derivative e_j(.) at the base point (Leibniz rule). Maps x to D1[j]x
// and D1[k]x to D2[j,k]x; a third derivative throws UnsupportedOrderError.
ScalarPoly formal_derive(const ScalarPoly& p, int j);

// Positive (geometer's) Laplacian -sum_k D2[k,k] applied formally.
ScalarPoly formal_laplacian(const ScalarPoly& p, int n);

// Replace a field x by an expression X, including its first and second
// formal derivatives.
ScalarPoly substitute_field(const ScalarPoly& p, const IndexedSymbol& field,
                            const ScalarPoly& replacement, int n);

// Reduce modulo xi_1^2 + xi_2^2 + xi_3^2 = 1 (|xi'| = 1): every power of
// xi_3 is brought below 2.
ScalarPoly reduce_unit_sphere(const ScalarPoly& p);

// Exact rational power of pi, (4 pi)^{-n/2} style constants.
ScalarPoly pi_power(int e);

}  // namespace kkw
