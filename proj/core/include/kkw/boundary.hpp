#pragma once

// Symbol calculus in the normal covariable xi_n on the unit cosphere of a
// four-dimensional manifold with boundary, and assembly of the boundary
// term Phi of the residue.
//
// Generators c(e_1), c(e_2), c(e_3) are tangential, c(e_4) = c(dx_n).
// Components xi_1..xi_3 of xi' are scalar symbols; |xi'| = 1 throughout.

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "kkw/clifford.hpp"
#include "kkw/perturbation.hpp"

namespace kkw {

inline constexpr int kBoundaryDim = 4;

// N(xi_n) / ((xi_n - i)^p (xi_n + i)^q) with Multivector coefficients.
class RationalSymbol {
 public:
  RationalSymbol() = default;
  RationalSymbol(std::vector<Multivector> numerator, int pole_plus, int pole_minus);
  static RationalSymbol constant(const Multivector& c);

  const std::vector<Multivector>& numerator() const { return num_; }
  int pole_plus() const { return p_; }
  int pole_minus() const { return q_; }
  bool is_zero() const { return num_.empty(); }
  // Degree of the numerator, -1 for zero.
  int degree() const { return static_cast<int>(num_.size()) - 1; }
  // Decay order at infinity: p + q - degree.
  int decay() const { return p_ + q_ - degree(); }

  RationalSymbol& operator+=(const RationalSymbol& o);
  RationalSymbol& operator-=(const RationalSymbol& o);
  friend RationalSymbol operator+(RationalSymbol a, const RationalSymbol& b) { return a += b; }
  friend RationalSymbol operator-(RationalSymbol a, const RationalSymbol& b) { return a -= b; }
  friend RationalSymbol operator*(const RationalSymbol& a, const RationalSymbol& b);
  friend RationalSymbol operator*(const ScalarPoly& c, const RationalSymbol& a);
  bool operator==(const RationalSymbol& o) const;

  // Apply a map to every numerator coefficient (e.g. a trace, left or right
  // multiplication by a Clifford element).
  RationalSymbol map(const std::function<Multivector(const Multivector&)>& fn) const;

  std::map<BladeMask, std::complex<double>> evaluate(
      double xi_n, const std::function<std::complex<double>(const IndexedSymbol&)>& value) const;

  std::string to_string() const;

 private:
  void normalize();
  std::vector<Multivector> num_;
  int p_ = 0;
  int q_ = 0;
};

// d/dxi_n applied `order` times.
RationalSymbol dxi_derivative(const RationalSymbol& s, int order = 1);

// Principal parts at +i and -i. Require a strictly proper symbol.
RationalSymbol pi_plus(const RationalSymbol& s);
RationalSymbol pi_minus(const RationalSymbol& s);

// Integral over the real line: 2 pi i times the residue at +i. Requires
// decay of order >= 2.
Multivector integrate_xi_n(const RationalSymbol& s);

// N(xi', xi_n) / (|xi'|^2 + xi_n^2)^k before restriction to |xi'| = 1, so
// that xi' derivatives can be taken.
struct HomogeneousSymbol {
  std::vector<Multivector> numerator;  // in powers of xi_n
  int power = 0;

  HomogeneousSymbol xi_prime_derivative(int j) const;
  RationalSymbol restrict_to_unit_sphere() const;
};

// c(xi') = sum_{j<4} xi_j c(e_j)
Multivector clifford_xi_prime();
// q_{-1} = sqrt(-1) c(xi) / |xi|^2
HomogeneousSymbol q_minus1();
// c(xi) Psi c(xi) / |xi|^4
HomogeneousSymbol psi_correction(const Multivector& psi);

// Integral of a polynomial in xi_1..xi_3 over the unit 2-sphere, in units of
// the symbol Omega3 (the total area, kept symbolic).
ScalarPoly sphere_integrate(const ScalarPoly& p);
// Mean of xi_1^a xi_2^b xi_3^c over the sphere.
Rational sphere_moment(int a, int b, int c);

// Imported h'(0)-dependent constants.
struct BoundaryFixtures {
  std::map<std::string, ScalarPoly> values;
  const ScalarPoly& get(const std::string& name) const;
};

BoundaryFixtures parse_fixtures(const std::string& text);
BoundaryFixtures load_fixtures(const std::string& path);
// Location of the bundled fixture file.
std::string default_fixture_path();

enum class BoundaryCase { Theorem210, Proposition215, Theorem32 };
BoundaryCase parse_boundary_case(const std::string& name);
std::string boundary_case_name(BoundaryCase c);

struct BoundaryTerm {
  std::string name;
  ScalarPoly value;
  std::string origin;  // "computed", "fixture" or "gauge"
};

struct BoundaryResult {
  ScalarPoly phi;
  std::vector<BoundaryTerm> terms;
};

// Boundary term Phi (integrand over the boundary). The two-function case
// ignores the perturbation argument.
BoundaryResult boundary_phi(BoundaryCase which, const PerturbationSpec& spec,
                            const BoundaryFixtures& fixtures);

// Tr[c(dx_n) Psi].
ScalarPoly normal_trace(const Multivector& psi);

// -i int int tr[pi+(c Psi c / |xi|^4) x d_xi_n q_{-1}] and its partner with
// the factors exchanged.
ScalarPoly psi_part_term_b(const Multivector& psi);
ScalarPoly psi_part_term_c(const Multivector& psi);

}  // namespace kkw
