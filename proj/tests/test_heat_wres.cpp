#include "doctest.h"
#include "kkw/errors.hpp"
#include "kkw/heat_wres.hpp"

using namespace kkw;

namespace {

ScalarPoly var(const IndexedSymbol& s, int e = 1) { return ScalarPoly::variable(s, e); }
ScalarPoly q(long a, long b = 1) { return ScalarPoly::rational(a, b); }
ScalarPoly pi(int e = 1) { return pi_power(e); }

std::vector<Rational> rats(std::initializer_list<Rational> xs) { return {xs}; }

}  // namespace

TEST_CASE("a0 and a2 for the scalar perturbation") {
  for (int n : {4, 6}) {
    GaugeContext ctx{n};
    const long d = spinor_dimension(n);
    const auto hc = assemble_heat_coefficients(PerturbationSpec::scalar(), ctx, false);
    CHECK(hc.a0 == heat_normalization(n) * q(d));
    CHECK(hc.a2 == heat_normalization(n) * q(d) *
                       (q(-1, 12) * var(sym::s()) + q(n - 1) * var(sym::f(), 2)));
  }
  // (4 pi)^{-n/2} d = (2 pi)^{-n/2}
  CHECK(heat_normalization(4) * q(4) == q(1, 4) * pi(-2));
}

TEST_CASE("a2 for the two-form at n=4") {
  GaugeContext ctx{4};
  const auto hc = assemble_heat_coefficients(PerturbationSpec::two_form(), ctx, false);
  CHECK(hc.a2 == q(-1, 4) * pi(-2) * (q(1, 12) * var(sym::s()) + q(2) * two_form_norm_sq(ctx)));
}

TEST_CASE("scalar a4 matches the template with the Gilkey dictionary") {
  for (int n : {4, 6}) {
    GaugeContext ctx{n, -1};
    const long d = spinor_dimension(n);
    const auto hc = assemble_heat_coefficients(PerturbationSpec::scalar(), ctx);
    const auto basis = scalar_a4_template(ctx);
    const auto dec = decompose(hc.a4_bracket * Rational(1, d), basis);
    REQUIRE(dec.exact());
    const std::vector<Rational> expect = rats({3, Rational(5, 4), -30 * (n + 1), 60 * (n - 1) * (n - 3),
                                               -2, Rational(-7, 4), 60 * (1 - n), -60 * (n - 1)});
    CHECK(dec.coefficients == expect);
  }
}

TEST_CASE("the other curvature sign does not reconcile Lap(s)") {
  GaugeContext ctx{4, +1};
  const auto hc = assemble_heat_coefficients(PerturbationSpec::scalar(), ctx);
  const auto dec = decompose(hc.a4_bracket * Rational(1, 4), scalar_a4_template(ctx));
  REQUIRE(dec.exact());
  CHECK(dec.coefficients[0] == 27);
}

TEST_CASE("two-form a4 decomposition") {
  GaugeContext ctx{4, -1};
  const auto hc = assemble_heat_coefficients(PerturbationSpec::two_form(), ctx);
  const auto dec = decompose(hc.a4_bracket * Rational(1, 4), two_form_a4_template(ctx));
  REQUIRE(dec.exact());
  const std::vector<Rational> expect =
      rats({3, 120, Rational(5, 4), -2, Rational(-7, 4), 60, -180, 2160, -180, Rational(15, 32)});
  CHECK(dec.coefficients == expect);
}

TEST_CASE("decompose reports residuals and dependence") {
  const ScalarPoly s = var(sym::s());
  const ScalarPoly f = var(sym::f());
  std::vector<TemplateTerm> basis{{"s", s}, {"f", f}};
  auto dec = decompose(q(3) * s - f + f * f, basis);
  CHECK(dec.coefficients == rats({3, -1}));
  CHECK(dec.residual == f * f);
  CHECK(render_combination(dec.coefficients, basis) == "3*s - f");
  std::vector<TemplateTerm> bad{{"s", s}, {"2s", q(2) * s}};
  CHECK_THROWS_AS(decompose(s, bad), DomainError);
}

TEST_CASE("interior residue densities") {
  GaugeContext ctx{4};
  const ScalarPoly s = var(sym::s());
  CHECK(wres_interior(PerturbationSpec::scalar(), ctx).density ==
        q(4) * pi(2) * q(4) * (q(-1, 12) * s + q(3) * var(sym::f(), 2)));
  CHECK(wres_interior(PerturbationSpec::one_form_imaginary(), ctx).density == q(-16, 12) * pi(2) * s);
  GaugeContext ctx6{6};
  CHECK(wres_interior(PerturbationSpec::two_form(), ctx6).density ==
        q(8) * pi(3) * q(8) * (q(-1, 12) * s + q(-6) * two_form_norm_sq(ctx6)));
  CHECK_THROWS_AS(wres_interior(PerturbationSpec::scalar(), GaugeContext{2}), DomainError);
}

TEST_CASE("product residue density") {
  GaugeContext ctx{4};
  const ScalarPoly s = var(sym::s());
  CHECK(wres_product_interior(PerturbationSpec::one_form(), ctx).density ==
        q(16) * pi(2) * (q(-1, 12) * s - q(1, 2) * one_form_divergence(ctx) + q(1, 2) * one_form_norm_sq(ctx)));
}

TEST_CASE("conformal residue density") {
  GaugeContext ctx{4};
  const auto w = wres_conformal(ctx);
  const ScalarPoly f = var(sym::f());
  const ScalarPoly g = var(sym::g());
  const ScalarPoly s = var(sym::s());
  CHECK(w.pointwise == q(-4) * pi(2) * (f * g * s * q(1, 3) + q(2) * f * formal_laplacian(g, 4)));
  ScalarPoly dfdg;
  for (int k = 1; k <= 4; ++k) dfdg += var(sym::d1(sym::f(), k)) * var(sym::d1(sym::g(), k));
  CHECK(w.integrated == q(-4) * pi(2) * (f * g * s * q(1, 3) + q(2) * dfdg));
  const auto e = wres_conformal_exponential(ctx);
  const ScalarPoly u = var(sym::exp_m2h());
  CHECK(e.integrated ==
        q(-4) * pi(2) * (u * u * s * q(1, 3) + q(8) * u * u * grad_sq(sym::h(), ctx)));
}

TEST_CASE("spectral action expansion") {
  GaugeContext ctx{4};
  HeatCoefficients only_a0;
  only_a0.a0 = q(1, 4) * pi(-2);
  const CutoffMoments mom;
  CHECK(spectral_action_expansion(only_a0, mom) == var(sym::lambda(), 4) * mom.F4 * only_a0.a0);
  only_a0.n = 6;
  CHECK_THROWS_AS(spectral_action_expansion(only_a0, mom), DomainError);
  CHECK_THROWS_AS(assemble_heat_coefficients(PerturbationSpec::one_form(), ctx), CapabilityError);
}
