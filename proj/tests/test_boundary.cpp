#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "kkw/boundary.hpp"
#include "kkw/errors.hpp"

using namespace kkw;

namespace {

ScalarPoly var(const IndexedSymbol& s, int e = 1) { return ScalarPoly::variable(s, e); }
ScalarPoly q(long a, long b = 1) { return ScalarPoly::rational(a, b); }
ScalarPoly I() { return ScalarPoly::imag(); }
Multivector c(int i) { return Multivector::generator(i, 4); }
Multivector one(const ScalarPoly& x = ScalarPoly(1L)) { return Multivector(4, x); }

RationalSymbol scalar_symbol(std::vector<ScalarPoly> num, int p, int qq) {
  std::vector<Multivector> mv;
  for (auto& x : num) mv.push_back(one(x));
  return RationalSymbol(mv, p, qq);
}

Multivector random_multivector(std::mt19937& rng, bool with_imag) {
  std::uniform_int_distribution<int> coef(-6, 6);
  std::uniform_int_distribution<int> den(1, 4);
  Multivector out(4);
  for (int m = 0; m < 16; ++m) {
    if (rng() % 3 == 0) continue;
    ScalarPoly x = q(coef(rng), den(rng));
    if (with_imag && rng() % 2) x += q(coef(rng), den(rng)) * I();
    out += Multivector::blade(static_cast<BladeMask>(m), x, 4);
  }
  return out;
}

RationalSymbol random_symbol(std::mt19937& rng, int min_decay, bool with_imag = true) {
  std::uniform_int_distribution<int> pole(0, 3);
  for (;;) {
    const int p = pole(rng);
    const int qq = pole(rng);
    const int max_deg = std::min(4, p + qq - min_decay);
    if (max_deg < 0) continue;
    std::vector<Multivector> num;
    for (int k = 0; k <= max_deg; ++k) num.push_back(random_multivector(rng, with_imag));
    RationalSymbol s(num, p, qq);
    if (!s.is_zero()) return s;
  }
}

std::complex<double> no_symbols(const IndexedSymbol& s) {
  throw std::logic_error("unexpected symbol " + s.to_string());
}

const Multivector psi_general() {
  Multivector out(4);
  for (int m = 1; m < 16; ++m) out += Multivector::blade(static_cast<BladeMask>(m), var(sym::coef(m)), 4);
  return out;
}

}  // namespace

TEST_CASE("pi_plus on 1/(1+xi^2)") {
  const auto s = scalar_symbol({q(1)}, 1, 1);
  // 1/(2i(xi - i)) = (-i/2)/(xi - i)
  CHECK(pi_plus(s) == scalar_symbol({q(-1, 2) * I()}, 1, 0));
  CHECK(pi_minus(s) == scalar_symbol({q(1, 2) * I()}, 0, 1));
  CHECK(pi_plus(pi_plus(s)) == pi_plus(s));
  CHECK(pi_plus(scalar_symbol({q(3)}, 2, 0)) == scalar_symbol({q(3)}, 2, 0));
  CHECK_THROWS_AS(pi_plus(scalar_symbol({q(0), q(1)}, 1, 0)), DomainError);
}

TEST_CASE("normal form cancels common factors") {
  // (xi^2 + 1)/(1 + xi^2) = 1
  const auto s = scalar_symbol({q(1), q(0), q(1)}, 1, 1);
  CHECK(s.pole_plus() == 0);
  CHECK(s.pole_minus() == 0);
  CHECK(s == scalar_symbol({q(1)}, 0, 0));
  CHECK(scalar_symbol({q(0)}, 3, 1).is_zero());
}

TEST_CASE("residue integrals") {
  CHECK(integrate_xi_n(scalar_symbol({q(1)}, 1, 1)) == one(pi_power(1)));
  CHECK(integrate_xi_n(scalar_symbol({q(1)}, 2, 2)) == one(q(1, 2) * pi_power(1)));
  CHECK(integrate_xi_n(scalar_symbol({q(1)}, 0, 3)).is_zero());
  CHECK_THROWS_AS(integrate_xi_n(scalar_symbol({q(0), q(1)}, 1, 1)), DomainError);
}

TEST_CASE("Clifford relations on the unit cosphere") {
  const Multivector cp = clifford_xi_prime();
  CHECK((cp * cp).map_coefficients(reduce_unit_sphere) == one(q(-1)));
  CHECK(c(4) * c(4) == one(q(-1)));
  CHECK(cp * c(4) == -(c(4) * cp));
}

TEST_CASE("principal part of the Psi correction") {
  const Multivector psi = psi_general();
  const Multivector cp = clifford_xi_prime();
  const Multivector cn = c(4);
  const auto got = pi_plus(psi_correction(psi).restrict_to_unit_sphere());
  // -(i xi + 2)/(4 (xi-i)^2) c'Psi c' - i/(4 (xi-i)^2) [cn Psi c' + c' Psi cn] - i xi/(4 (xi-i)^2) cn Psi cn
  const Multivector a = cp * psi * cp;
  const Multivector b = cn * psi * cp + cp * psi * cn;
  const Multivector d = cn * psi * cn;
  const RationalSymbol expect({q(-1, 2) * a - q(1, 4) * I() * b, q(-1, 4) * I() * a - q(1, 4) * I() * d}, 2, 0);
  CHECK(got == expect);
}

TEST_CASE("normal derivative of q-1") {
  const auto q1 = q_minus1().restrict_to_unit_sphere();
  const Multivector cp = clifford_xi_prime();
  // i[(1 - xi^2) cn - 2 xi c'] / (1 + xi^2)^2
  const RationalSymbol expect({I() * c(4), q(-2) * I() * cp, q(-1) * I() * c(4)}, 2, 2);
  CHECK(dxi_derivative(q1) == expect);
  CHECK(dxi_derivative(RationalSymbol::constant(c(2))).is_zero());
}

TEST_CASE("second normal derivative against finite differences") {
  const auto q1 = q_minus1().restrict_to_unit_sphere();
  const auto d2 = dxi_derivative(q1, 2);
  auto val = [](const IndexedSymbol& s) -> std::complex<double> {
    const double xi[4] = {0.0, 0.6, 0.0, 0.8};
    return xi[s.index[0]];
  };
  const double x = 0.5;
  const double h = 1e-4;
  const auto plus = q1.evaluate(x + h, val);
  const auto mid = q1.evaluate(x, val);
  const auto minus = q1.evaluate(x - h, val);
  for (const auto& [m, v] : d2.evaluate(x, val)) {
    auto at = [&](const auto& mp) {
      auto it = mp.find(m);
      return it == mp.end() ? std::complex<double>() : it->second;
    };
    const auto fd = (at(plus) - 2.0 * at(mid) + at(minus)) / (h * h);
    CHECK(std::abs(fd - v) < 1e-5);
  }
}

TEST_CASE("trace of the b-term integrand") {
  const Multivector psi = psi_general();
  const auto lhs = pi_plus(psi_correction(psi).restrict_to_unit_sphere()) *
                   dxi_derivative(q_minus1().restrict_to_unit_sphere());
  const auto traced = lhs.map([](const Multivector& x) { return one(spinor_trace(x)); });
  const ScalarPoly tn = spinor_trace(c(4) * psi);
  const ScalarPoly tp = spinor_trace(clifford_xi_prime() * psi);
  const RationalSymbol expect({one(q(1, 2) * I() * tn + q(1, 2) * tp)}, 2, 2);
  CHECK(traced == expect);
  // -i times its cosphere integral: (pi/4) Omega3 Tr[cn Psi]
  CHECK(psi_part_term_b(psi) == q(1, 4) * pi_power(1) * var(sym::omega3()) * normal_trace(psi));
  CHECK(psi_part_term_c(psi) == q(-1, 4) * pi_power(1) * var(sym::omega3()) * normal_trace(psi));
}

TEST_CASE("sphere moments") {
  const ScalarPoly om = var(sym::omega3());
  CHECK(sphere_integrate(var(sym::xi(1))).is_zero());
  CHECK(sphere_integrate(q(1)) == om);
  CHECK(sphere_integrate(var(sym::xi(1), 2)) == q(1, 3) * om);
  CHECK(sphere_moment(2, 2, 0) == Rational(1, 15));
  CHECK(sphere_moment(4, 0, 0) == Rational(1, 5));
  CHECK(sphere_moment(1, 2, 0) == 0);

  // mean of x^a y^b z^c over S^2 by tensor quadrature in spherical angles
  boost::math::quadrature::tanh_sinh<double> ts;
  const double pi = std::numbers::pi;
  for (auto [a, b, cc] : {std::tuple{2, 0, 0}, {2, 2, 0}, {4, 2, 2}, {0, 0, 6}, {2, 2, 2}}) {
    auto inner = [&](double th) {
      return ts.integrate(
          [&](double ph) {
            const double x = std::sin(th) * std::cos(ph), y = std::sin(th) * std::sin(ph), z = std::cos(th);
            return std::pow(x, a) * std::pow(y, b) * std::pow(z, cc) * std::sin(th);
          },
          0.0, 2 * pi);
    };
    const double mean = ts.integrate(inner, 0.0, pi) / (4 * pi);
    CHECK(std::abs(mean - sphere_moment(a, b, cc).get_d()) < 1e-10);
  }
}

TEST_CASE("pi_plus + pi_minus is the identity and both are idempotent") {
  std::mt19937 rng(20261019);
  for (int trial = 0; trial < 120; ++trial) {
    const auto s = random_symbol(rng, 1);
    const auto pp = pi_plus(s);
    const auto pm = pi_minus(s);
    CHECK(pp + pm == s);
    CHECK(pi_plus(pp) == pp);
    CHECK(pi_minus(pm) == pm);
    CHECK(pi_minus(pp).is_zero());
    CHECK(pp.pole_minus() == 0);
    CHECK(pm.pole_plus() == 0);
  }
}

TEST_CASE("integrate_xi_n agrees with numeric quadrature") {
  std::mt19937 rng(7);
  // x = tan(theta) maps the real line onto a finite interval; the integrand
  // stays bounded since the symbols decay at least like x^-2.
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double half_pi = std::numbers::pi / 2;
  int compared = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto s = random_symbol(rng, 2);
    const Multivector exact = integrate_xi_n(s);
    for (int m = 0; m < 16; ++m) {
      const auto blade = static_cast<BladeMask>(m);
      auto component = [&](double th) {
        const double x = std::tan(th);
        const auto v = s.evaluate(x, no_symbols);
        auto it = v.find(blade);
        return it == v.end() ? std::complex<double>() : it->second * (1.0 + x * x);
      };
      const double re = integrator.integrate([&](double t) { return component(t).real(); }, -half_pi, half_pi);
      const double im = integrator.integrate([&](double t) { return component(t).imag(); }, -half_pi, half_pi);
      const std::complex<double> num(re, im);
      const std::complex<double> ex = exact.coefficient(blade).evaluate(no_symbols);
      const double scale = std::max(1.0, std::abs(ex));
      CHECK(std::abs(num - ex) / scale < 1e-8);
    }
    ++compared;
  }
  CHECK(compared >= 50);
}

TEST_CASE("fixture parsing") {
  const auto fx = parse_fixtures(
      "# comment\n"
      "a = -3/8\xC2\xB7\xCF\x80\xC2\xB7h'(0)\xC2\xB7\xCE\xA9\xE2\x82\x83\n"
      "b = 9/8 * pi^1 * hprime0^1 * Omega3^1  # trailing\n"
      "\n"
      "c = pi^-2\n");
  const ScalarPoly base = pi_power(1) * var(sym::hprime0()) * var(sym::omega3());
  CHECK(fx.get("a") == q(-3, 8) * base);
  CHECK(fx.get("b") == q(9, 8) * base);
  CHECK(fx.get("c") == pi_power(-2));
  CHECK_THROWS_AS(fx.get("missing"), ConfigurationError);
  CHECK_THROWS_AS(parse_fixtures("x 3/8"), ConfigurationError);
  CHECK_THROWS_AS(parse_fixtures("x = 3/8*bogus"), ConfigurationError);
  CHECK_THROWS_AS(parse_fixtures("x = 3/8*pi^z"), ConfigurationError);
  CHECK_THROWS_AS(parse_fixtures("x = 1\nx = 2"), ConfigurationError);
  CHECK_THROWS_AS(load_fixtures("/nonexistent/fixtures.txt"), ConfigurationError);
  const auto bundled = load_fixtures(default_fixture_path());
  CHECK(bundled.get("a_II") == q(-3, 8) * base);
}

TEST_CASE("boundary term for the perturbed operator squared") {
  const auto fx = load_fixtures(default_fixture_path());
  for (const auto& spec : {PerturbationSpec::scalar(), PerturbationSpec::one_form(), PerturbationSpec::two_form(),
                           PerturbationSpec::general({0, 1, 2, 3, 4})}) {
    CHECK(boundary_phi(BoundaryCase::Theorem210, spec, fx).phi.is_zero());
  }
  BoundaryFixtures partial;
  partial.values["a_II"] = q(1);
  CHECK_THROWS_AS(boundary_phi(BoundaryCase::Theorem210, PerturbationSpec::scalar(), partial), ConfigurationError);
}

TEST_CASE("boundary term for the product operator") {
  const auto fx = load_fixtures(default_fixture_path());
  const ScalarPoly unit = q(1, 4) * pi_power(1) * var(sym::omega3());
  const auto spec = PerturbationSpec::one_form();
  const Multivector psi = build_psi(spec, GaugeContext{4});
  const ScalarPoly phi = boundary_phi(BoundaryCase::Proposition215, spec, fx).phi;
  CHECK(phi == unit * normal_trace(psi));
  CHECK(!phi.is_zero());
  for (const auto& other : {PerturbationSpec::scalar(), PerturbationSpec::two_form(), PerturbationSpec::general({0, 2, 4})})
    CHECK(boundary_phi(BoundaryCase::Proposition215, other, fx).phi.is_zero());
}

TEST_CASE("boundary term for the two-function case") {
  const auto fx = load_fixtures(default_fixture_path());
  const auto res = boundary_phi(BoundaryCase::Theorem32, PerturbationSpec::scalar(), fx);
  const ScalarPoly f = var(sym::f());
  const ScalarPoly g = var(sym::g());
  const ScalarPoly dnf = var(sym::d1(sym::f(), 4));
  const ScalarPoly dng = var(sym::d1(sym::g(), 4));
  // The q-1 pieces integrate to real multiples of pi Omega3.
  CHECK(res.phi == q(1, 2) * pi_power(1) * var(sym::omega3()) * (g * dnf - f * dng));
  for (const auto& t : res.terms)
    if (t.name == "a-I tangential derivative of g") CHECK(t.value.is_zero());
}
