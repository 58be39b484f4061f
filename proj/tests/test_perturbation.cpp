#include "doctest.h"
#include "kkw/errors.hpp"
#include "kkw/perturbation.hpp"

using namespace kkw;

namespace {

ScalarPoly var(const IndexedSymbol& s, int e = 1) { return ScalarPoly::variable(s, e); }
ScalarPoly q(long a, long b = 1) { return ScalarPoly::rational(a, b); }
Multivector c(int i, int n) { return Multivector::generator(i, n); }
Multivector sc(const ScalarPoly& p, int n) { return Multivector(n, p); }

}  // namespace

TEST_CASE("build_psi shapes") {
  GaugeContext ctx{4};
  CHECK(build_psi(PerturbationSpec::scalar(), ctx) == sc(var(sym::f()), 4));
  Multivector eta(4);
  for (int k = 1; k <= 4; ++k) eta += var(sym::b(k)) * c(k, 4);
  CHECK(build_psi(PerturbationSpec::one_form_imaginary(), ctx) == ScalarPoly::imag() * eta);
  const Multivector two = build_psi(PerturbationSpec::two_form(), ctx);
  CHECK(two.coefficient(0b0011) == q(2) * var(sym::a(1, 2)));
  CHECK(grade_project(two, 2) == two);
  CHECK_THROWS_AS(build_psi(PerturbationSpec::general({5}), ctx), DomainError);
}

TEST_CASE("numeric mode freezes coefficients") {
  GaugeContext ctx{4};
  PerturbationSpec spec = PerturbationSpec::scalar();
  spec.numeric = true;
  spec.values[sym::f()] = Rational(3, 10);
  const Multivector e = endomorphism_E(spec, ctx);
  CHECK(e == sc(q(-1, 4) * var(sym::s()) + q(27, 100), 4));
}

TEST_CASE("scalar perturbation endomorphism") {
  for (int n : {4, 6, 8}) {
    GaugeContext ctx{n};
    const Multivector e = endomorphism_E(PerturbationSpec::scalar(), ctx);
    CHECK(e == sc(q(-1, 4) * var(sym::s()) + q(n - 1) * var(sym::f(), 2), n));
  }
}

TEST_CASE("imaginary one-form endomorphism") {
  GaugeContext ctx{4};
  Multivector d_eta(4);
  for (int j = 1; j <= 4; ++j)
    for (int k = 1; k <= 4; ++k)
      if (j != k) d_eta += var(sym::d1(sym::b(k), j)) * c(j, 4) * c(k, 4);
  const Multivector expect = sc(q(-1, 4) * var(sym::s()), 4) - ScalarPoly::imag() * d_eta;
  CHECK(endomorphism_E(PerturbationSpec::one_form_imaginary(), ctx) == expect);
}

TEST_CASE("two-form endomorphism trace") {
  for (int n : {4, 6}) {
    GaugeContext ctx{n};
    const long d = spinor_dimension(n);
    const ScalarPoly tr = spinor_trace(endomorphism_E(PerturbationSpec::two_form(), ctx));
    CHECK(tr == q(d) * (q(-1, 4) * var(sym::s()) + q(6 - 2 * n) * two_form_norm_sq(ctx)));
  }
}

TEST_CASE("general trace identity at n=4") {
  GaugeContext ctx{4};
  for (int grade = 0; grade <= 4; ++grade) {
    const Multivector psi = build_psi(PerturbationSpec::general({grade}), ctx);
    Multivector sum(4);
    for (int i = 1; i <= 4; ++i) sum += psi * c(i, 4) * psi * c(i, 4);
    const ScalarPoly rhs =
        spinor_trace(sc(q(-1, 4) * var(sym::s()), 4) - q(1, 2) * sum + q(1) * (psi * psi));
    CHECK(spinor_trace(endomorphism_E(PerturbationSpec::general({grade}), ctx)) == rhs);
  }
}

TEST_CASE("product operator endomorphism") {
  GaugeContext ctx{4};
  PerturbationSpec zero = PerturbationSpec::scalar();
  zero.numeric = true;
  zero.values[sym::f()] = 0;
  CHECK(endomorphism_E_product(zero, ctx) == sc(q(-1, 4) * var(sym::s()), 4));

  const Multivector psi = build_psi(PerturbationSpec::one_form(), ctx);
  Multivector first(4);
  Multivector second(4);
  for (int i = 1; i <= 4; ++i) {
    first += q(1, 2) * derive(psi, i) * c(i, 4);
    second -= q(1, 4) * psi * c(i, 4) * psi * c(i, 4);
  }
  CHECK(spinor_trace(first) == q(-2) * one_form_divergence(ctx));
  CHECK(spinor_trace(second) == q(2) * one_form_norm_sq(ctx));
  CHECK(endomorphism_E_product(PerturbationSpec::one_form(), ctx) ==
        sc(q(-1, 4) * var(sym::s()), 4) + first + second);
}

TEST_CASE("conformal trace") {
  GaugeContext ctx{4};
  const auto conf = endomorphism_E_conformal(ctx);
  const ScalarPoly lap_g = formal_laplacian(var(sym::g()), 4);
  CHECK(conf.trace_s6_E == q(-1, 3) * var(sym::s()) - q(2) * var(sym::g(), -1) * lap_g);
}

TEST_CASE("scalar curvature") {
  GaugeContext ctx{4};
  const auto omega = curvature_Omega(PerturbationSpec::scalar(), ctx);
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) {
      if (i == j) continue;
      const Multivector expect = spin_curvature(i, j, ctx) - var(sym::d1(sym::f(), i)) * c(j, 4) +
                                 var(sym::d1(sym::f(), j)) * c(i, 4) +
                                 q(2) * var(sym::f(), 2) * c(i, 4) * c(j, 4);
      CHECK(omega[i][j] == expect);
    }
  // sum Tr Omega^2 with the Gilkey dictionary sum R_ijij = -s.
  const long d = 4;
  const int n = 4;
  ScalarPoly expect = q(-d, 8) * riemann_norm_sq(ctx) + q(2 * d * (1 - n)) * grad_sq(sym::f(), ctx) +
                      q(2 * d) * var(sym::f(), 2) * scalar_curvature_contraction(ctx) -
                      q(4 * d * n * (n - 1)) * var(sym::f(), 4);
  CHECK(trace_Omega_sq(PerturbationSpec::scalar(), ctx) == expect);
}

TEST_CASE("two-form curvature trace has no cross terms") {
  GaugeContext ctx{4};
  const auto omega = curvature_Omega(PerturbationSpec::two_form(), ctx);
  const ScalarPoly total = trace_Omega_sq(omega, ctx);
  // Remove the pure curvature part, what is left must not contain R.
  const ScalarPoly rest = total - q(-1, 2) * riemann_norm_sq(ctx);
  for (const auto& [m, coef] : rest.terms())
    for (const auto& [s, e] : m) CHECK(s.family != Family::R);
  CHECK_THROWS_AS(curvature_Omega(PerturbationSpec::one_form(), ctx), CapabilityError);
}
