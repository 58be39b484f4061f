// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "kkw/boundary.hpp"
#include "kkw/torus.hpp"
#include "kkw/verify.hpp"

using namespace kkw;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

ScalarPoly var(const IndexedSymbol& s) { return ScalarPoly::variable(s); }
ScalarPoly q(long a, long b = 1) { return ScalarPoly::rational(a, b); }

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

VerifyOptions options() {
  VerifyOptions opt;
  opt.fixtures = load_fixtures(default_fixture_path());
  opt.catalog = load_catalog(default_catalog_path());
  return opt;
}

// 1. Exact identity suite over the listed equations.
void criterion_identities() {
  const auto t0 = Clock::now();
  const auto records = run_suite("all", options());
  const double elapsed = seconds_since(t0);
  std::map<std::string, const CheckRecord*> by_id;
  for (const auto& r : records) by_id[r.id] = &r;
  const std::vector<std::string> required{
      "scalar-endomorphism", "one-form-imaginary-endomorphism", "two-form-endomorphism",
      "two-form-square-trace", "two-form-derivative-trace", "two-form-anticommutator-square-trace",
      "two-form-endomorphism-trace", "general-endomorphism-trace", "interior-general", "interior-scalar",
      "interior-one-form", "interior-two-form", "psi-correction-principal-part", "q-minus1-normal-derivative",
      "b-term-trace", "b-term-psi-part", "boundary-interior-4d", "boundary-interior-6d", "product-endomorphism",
      "product-interior", "conformal-endomorphism-trace", "conformal-gradient-square-trace",
      "conformal-derivative-trace", "conformal-trace-s6", "two-function-term-a-I", "two-function-term-a-II",
      "two-function-term-a-III", "two-function-boundary-term", "scalar-a2", "scalar-a4-endomorphism-terms",
      "scalar-curvature", "riemann-square-trace", "gradient-trace", "quartic-trace", "mixed-gradient-trace",
      "curvature-cross-trace", "scalar-curvature-trace", "scalar-a4", "two-form-a2", "two-form-derivative-sum",
      "two-form-anticommutator-square", "two-form-square", "two-form-endomorphism-expanded",
      "two-form-codifferential-trace", "two-form-constant-square-trace", "two-form-quartic-trace",
      "two-form-endomorphism-square-trace", "spin-curvature-square-trace", "two-form-curvature-trace"};
  // Sanctioned conventions: reproduced once the flagged normalization is applied.
  const std::set<std::string> sanctioned{"conformal-derivative-trace", "two-form-constant-square-trace"};
  std::vector<std::string> bad;
  for (const auto& id : required) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      bad.push_back(id + " (missing)");
      continue;
    }
    const CheckStatus st = it->second->status;
    const bool ok = st == CheckStatus::Match || (st == CheckStatus::FlaggedConvention && sanctioned.count(id));
    if (!ok) bad.push_back(id + " [" + it->second->paper_ref + "]");
  }
  std::ostringstream d;
  d << required.size() - bad.size() << "/" << required.size() << " reproduced in " << elapsed << " s";
  if (!bad.empty()) {
    d << "; not reproduced:";
    for (const auto& b : bad) d << " " << b;
  }
  report(1, bad.empty() && elapsed < 60.0, d.str());
}

// 2. Boundary assembly.
void criterion_boundary() {
  const auto fx = load_fixtures(default_fixture_path());
  const ScalarPoly om = var(sym::omega3());
  std::vector<std::string> bad;

  for (const auto& spec : {PerturbationSpec::scalar(), PerturbationSpec::one_form(), PerturbationSpec::two_form(),
                           PerturbationSpec::general({0, 1, 2, 3, 4})})
    if (!boundary_phi(BoundaryCase::Theorem210, spec, fx).phi.is_zero()) bad.push_back("thm-2.10 " + spec.name());

  for (const auto& spec : {PerturbationSpec::scalar(), PerturbationSpec::one_form(), PerturbationSpec::two_form(),
                           PerturbationSpec::general({0, 2, 3, 4})}) {
    const Multivector psi = build_psi(spec, GaugeContext{4});
    const ScalarPoly expect = q(1, 4) * pi_power(1) * om * normal_trace(psi);
    const ScalarPoly got = boundary_phi(BoundaryCase::Proposition215, spec, fx).phi;
    const bool nonzero_ok = (spec.kind == PerturbationKind::OneForm) == !got.is_zero();
    if (got != expect || !nonzero_ok) bad.push_back("prop-2.15 " + spec.name());
  }

  const ScalarPoly f = var(sym::f());
  const ScalarPoly g = var(sym::g());
  const ScalarPoly dnf = var(sym::d1(sym::f(), 4));
  const ScalarPoly dng = var(sym::d1(sym::g(), 4));
  const ScalarPoly stated = q(1, 2) * pi_power(1) * ScalarPoly::imag() * om * (f * dng - g * dnf);
  const ScalarPoly got = boundary_phi(BoundaryCase::Theorem32, PerturbationSpec::scalar(), fx).phi;
  if (got != stated) bad.push_back("thm-3.2 computed " + got.to_string() + " vs stated " + stated.to_string());

  std::string detail = "thm-2.10, prop-2.15, thm-3.2 from fixture file";
  for (const auto& b : bad) detail += "; " + b;
  report(2, bad.empty(), detail);
}

// 3. Half-line projections and the xi_n integral.
Multivector random_multivector(std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-6, 6);
  std::uniform_int_distribution<int> den(1, 4);
  Multivector out(4);
  for (int m = 0; m < 16; ++m) {
    if (rng() % 3 == 0) continue;
    ScalarPoly x = q(coef(rng), den(rng));
    if (rng() % 2) x += q(coef(rng), den(rng)) * ScalarPoly::imag();
    out += Multivector::blade(static_cast<BladeMask>(m), x, 4);
  }
  return out;
}

RationalSymbol random_symbol(std::mt19937& rng, int min_decay) {
  std::uniform_int_distribution<int> pole(0, 3);
  for (;;) {
    const int p = pole(rng);
    const int qq = pole(rng);
    const int max_deg = std::min(4, p + qq - min_decay);
    if (max_deg < 0) continue;
    std::vector<Multivector> num;
    for (int k = 0; k <= max_deg; ++k) num.push_back(random_multivector(rng));
    RationalSymbol s(num, p, qq);
    if (!s.is_zero()) return s;
  }
}

std::complex<double> no_symbols(const IndexedSymbol& s) {
  throw std::logic_error("unexpected symbol " + s.to_string());
}

void criterion_projections() {
  std::mt19937 rng(314159);
  int exact_ok = 0;
  const int exact_trials = 150;
  for (int i = 0; i < exact_trials; ++i) {
    const auto s = random_symbol(rng, 1);
    const auto pp = pi_plus(s);
    const auto pm = pi_minus(s);
    if (pp + pm == s && pi_plus(pp) == pp && pi_minus(pm) == pm) ++exact_ok;
  }
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double half_pi = std::numbers::pi / 2;
  const int quad_trials = 60;
  int quad_ok = 0;
  double worst = 0.0;
  for (int i = 0; i < quad_trials; ++i) {
    const auto s = random_symbol(rng, 2);
    const Multivector exact = integrate_xi_n(s);
    double err2 = 0.0;
    double norm2 = 0.0;
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
      const std::complex<double> ex = exact.coefficient(blade).evaluate(no_symbols);
      err2 += std::norm(std::complex<double>(re, im) - ex);
      norm2 += std::norm(ex);
    }
    const double rel = norm2 > 0 ? std::sqrt(err2 / norm2) : std::sqrt(err2);
    worst = std::max(worst, rel);
    if (rel <= 1e-8) ++quad_ok;
  }
  std::ostringstream d;
  d << exact_ok << "/" << exact_trials << " exact projection identities; " << quad_ok << "/" << quad_trials
    << " quadratures within 1e-8 (worst relative error " << worst << ")";
  report(3, exact_ok == exact_trials && quad_ok == quad_trials, d.str());
}

// 4 and 5. Flat-torus oracle at the default window.
void criterion_torus(int number, TorusPerturbation kind, double value, double tolerance) {
  TorusConfig cfg;
  cfg.perturbation = kind;
  cfg.value = value;
  const auto t0 = Clock::now();
  try {
    const TorusComparison cmp = fit_and_compare(cfg);
    const double elapsed = seconds_since(t0);
    const bool a0 = kind == TorusPerturbation::None;
    const double err = a0 ? cmp.a0_relative_error : cmp.a2_relative_error;
    std::ostringstream d;
    d.precision(10);
    d << (a0 ? "a0 = " : "a2 = ") << (a0 ? cmp.fit.a0 : cmp.fit.a2) << " vs " << (a0 ? cmp.a0_predicted : cmp.a2_predicted)
      << ", relative error " << err << " (limit " << tolerance << "), K = " << cfg.cutoff << ", " << elapsed << " s";
    report(number, err <= tolerance && elapsed <= 60.0, d.str());
  } catch (const std::exception& e) {
    report(number, false, std::string("error: ") + e.what());
  }
}

// 6. Known discrepancies flagged, each with both values.
void criterion_flags() {
  const auto records = run_suite("all", options());
  std::map<std::string, const CheckRecord*> by_id;
  for (const auto& r : records) by_id[r.id] = &r;
  const std::vector<std::pair<std::string, std::string>> wanted{{"product-one-form", "product one-form sign"},
                                                                {"two-form-constant-square-trace", "two-form constant-square symbol"},
                                                                {"conformal-derivative-trace", "conformal derivative normalization"},
                                                                {"cosphere-volume-naming", "cosphere volume naming"}};
  std::vector<std::string> bad;
  for (const auto& [id, label] : wanted) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      bad.push_back(label + " missing");
      continue;
    }
    const CheckRecord& r = *it->second;
    // Both values: distinct lhs/rhs, or (after the reading is fixed) the
    // literal alternative spelled out in the note.
    const bool both = (!r.lhs.empty() && !r.rhs.empty() && r.lhs != r.rhs) || r.note.find("literal") != std::string::npos;
    if (r.status != CheckStatus::FlaggedConvention || !both) bad.push_back(label);
  }
  std::string detail = std::to_string(wanted.size() - bad.size()) + "/" + std::to_string(wanted.size()) +
                       " flagged with both values";
  for (const auto& b : bad) detail += "; not flagged: " + b;
  report(6, bad.empty(), detail);
}

}  // namespace

int main() {
  criterion_identities();
  criterion_boundary();
  criterion_projections();
  criterion_torus(4, TorusPerturbation::None, 0.0, 5e-3);
  criterion_torus(5, TorusPerturbation::Scalar, 0.3, 2e-2);
  criterion_flags();
  std::printf("%d of 6 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
