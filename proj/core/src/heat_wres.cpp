#include "kkw/heat_wres.hpp"

#include "kkw/errors.hpp"

namespace kkw {

namespace {

ScalarPoly var(const IndexedSymbol& s, int e = 1) { return ScalarPoly::variable(s, e); }
ScalarPoly q(long a, long b = 1) { return ScalarPoly::rational(a, b); }

long factorial(int k) {
  long out = 1;
  for (int i = 2; i <= k; ++i) out *= i;
  return out;
}

ScalarPoly trace_s6_plus(const Multivector& e) {
  return spinor_trace(Multivector(e.dim(), q(1, 6) * var(sym::s())) + e);
}

ScalarPoly riemann_trace_term(const GaugeContext& ctx) { return scalar_curvature_contraction(ctx); }

std::string pi_prefix(const ScalarPoly& p) { return "(" + p.to_string() + ")"; }

}  // namespace

ScalarPoly heat_normalization(int n) {
  if (n % 2 != 0) throw DomainError("heat normalization needs even n");
  return ScalarPoly::rational(1, 1L << n) * pi_power(-n / 2);
}

ScalarPoly apply_curvature_dictionary(const ScalarPoly& p, const GaugeContext& ctx) {
  const ScalarPoly s_value = q(ctx.curvature_sign) * scalar_curvature_contraction(ctx);
  return substitute_field(p, sym::s(), s_value, ctx.n);
}

HeatCoefficients assemble_heat_coefficients(const PerturbationSpec& spec, const GaugeContext& ctx,
                                            bool with_a4) {
  if (spec.kind == PerturbationKind::ConformalPair)
    throw CapabilityError("heat coefficients are not assembled for the conformal pair");
  const int n = ctx.n;
  const long d = spinor_dimension(n);
  const ScalarPoly norm = heat_normalization(n);
  HeatCoefficients out;
  out.n = n;
  out.a0 = norm * q(d);
  const Multivector e = endomorphism_E(spec, ctx);
  out.a2 = norm * trace_s6_plus(e);
  if (!with_a4) return out;
  if (spec.kind != PerturbationKind::Scalar && spec.kind != PerturbationKind::TwoForm)
    throw CapabilityError("a4 is implemented for scalar and two-form perturbations only");

  const ScalarPoly rho = riemann_trace_term(ctx);  // R_ijij
  const ScalarPoly trace_e = spinor_trace(e);
  ScalarPoly bracket;
  bracket += q(d) * q(12) * formal_laplacian(rho, n);  // -12 R_ijij,kk
  bracket += q(d) * q(5) * rho * rho;
  bracket -= q(d) * q(2) * ricci_contraction_sq(ctx);
  bracket += q(d) * q(2) * riemann_norm_sq(ctx);
  bracket -= q(60) * rho * trace_e;
  bracket += q(180) * spinor_trace(e * e);
  bracket -= q(60) * formal_laplacian(trace_e, n);  // 60 E_,kk
  bracket += q(30) * trace_Omega_sq(spec, ctx);
  out.a4_bracket = apply_curvature_dictionary(bracket, ctx);
  out.a4 = norm * q(1, 360) * out.a4_bracket;
  return out;
}

ScalarPoly spectral_action_expansion(const HeatCoefficients& coeffs, const CutoffMoments& moments) {
  if (coeffs.n != 4) throw DomainError("spectral action expansion is formed in dimension 4");
  const ScalarPoly lam = var(sym::lambda());
  return lam.pow(4) * moments.F4 * coeffs.a0 + lam.pow(2) * moments.F2 * coeffs.a2 +
         moments.F0 * coeffs.a4;
}

WresDensity wres_interior(const PerturbationSpec& spec, const GaugeContext& ctx) {
  const int n = ctx.n;
  if (n / 2 - 2 < 0) throw DomainError("interior residue density needs n >= 4");
  // (2 pi)^{n/2} / (n/2 - 2)!
  const ScalarPoly pref = ScalarPoly(Rational(1L << (n / 2), factorial(n / 2 - 2))) * pi_power(n / 2);
  WresDensity out;
  out.density = pref * trace_s6_plus(endomorphism_E(spec, ctx));
  out.statement = "Wres(D_Psi^{" + std::to_string(2 - n) + "}) = int_M " + pi_prefix(out.density) +
                  " dvol   [" + spec.name() + ", n=" + std::to_string(n) + "]";
  return out;
}

WresDensity wres_product_interior(const PerturbationSpec& spec, const GaugeContext& ctx) {
  if (ctx.n != 4) throw DomainError("product residue density is formed in dimension 4");
  WresDensity out;
  out.density = q(4) * pi_power(2) * trace_s6_plus(endomorphism_E_product(spec, ctx));
  out.statement = "Wres[(D_Psi D)^{-1}] = int_M " + pi_prefix(out.density) + " dvol   [" + spec.name() + "]";
  return out;
}

ConformalWres wres_conformal(const GaugeContext& ctx) {
  if (ctx.n != 4) throw DomainError("conformal residue density is formed in dimension 4");
  const auto conf = endomorphism_E_conformal(ctx);
  const ScalarPoly fg = var(sym::f()) * var(sym::g());
  ConformalWres out;
  out.pointwise = q(4) * pi_power(2) * fg * conf.trace_s6_E;
  // f Delta g integrates to <df, dg>.
  ScalarPoly f_lap_g = var(sym::f()) * formal_laplacian(var(sym::g()), 4);
  ScalarPoly df_dg;
  for (int k = 1; k <= 4; ++k) df_dg += var(sym::d1(sym::f(), k)) * var(sym::d1(sym::g(), k));
  const ScalarPoly c = q(-8) * pi_power(2);
  out.integrated = out.pointwise - c * f_lap_g + c * df_dg;
  out.statement = "Wres[f D^{-1} g D^{-1}] = int_M " + pi_prefix(out.integrated) + " dvol";
  return out;
}

ConformalWres wres_conformal_exponential(const GaugeContext& ctx) {
  ConformalWres base = wres_conformal(ctx);
  const ScalarPoly u = var(sym::exp_m2h());
  auto sub = [&](const ScalarPoly& p) {
    return substitute_field(substitute_field(p, sym::f(), u, ctx.n), sym::g(), u, ctx.n);
  };
  ConformalWres out{sub(base.pointwise), sub(base.integrated), {}};
  out.statement = "Wres[(e^h D e^h)^{-2}] = int_M " + pi_prefix(out.integrated) + " dvol";
  return out;
}

Decomposition decompose(const ScalarPoly& p, const std::vector<TemplateTerm>& basis) {
  const std::size_t m = basis.size();
  std::vector<ScalarPoly> reduced;
  std::vector<std::vector<Rational>> transform;
  std::vector<Monomial> pivots;
  for (std::size_t j = 0; j < m; ++j) {
    ScalarPoly r = basis[j].value;
    std::vector<Rational> t(m, Rational(0));
    t[j] = 1;
    for (std::size_t k = 0; k < reduced.size(); ++k) {
      const Rational c = r.coefficient(pivots[k]);
      if (c == 0) continue;
      r -= c * reduced[k];
      for (std::size_t i = 0; i < m; ++i) t[i] -= c * transform[k][i];
    }
    if (r.is_zero()) throw DomainError("template term '" + basis[j].name + "' is linearly dependent");
    const Monomial pivot = r.terms().begin()->first;
    const Rational inv = 1 / r.coefficient(pivot);
    r *= inv;
    for (auto& v : t) v *= inv;
    for (std::size_t k = 0; k < reduced.size(); ++k) {
      const Rational c = reduced[k].coefficient(pivot);
      if (c == 0) continue;
      reduced[k] -= c * r;
      for (std::size_t i = 0; i < m; ++i) transform[k][i] -= c * t[i];
    }
    reduced.push_back(std::move(r));
    transform.push_back(std::move(t));
    pivots.push_back(pivot);
  }
  Decomposition out{std::vector<Rational>(m, Rational(0)), p};
  for (std::size_t k = 0; k < reduced.size(); ++k) {
    const Rational c = out.residual.coefficient(pivots[k]);
    if (c == 0) continue;
    out.residual -= c * reduced[k];
    for (std::size_t i = 0; i < m; ++i) out.coefficients[i] += c * transform[k][i];
  }
  return out;
}

std::string render_combination(const std::vector<Rational>& coefficients,
                               const std::vector<TemplateTerm>& basis) {
  std::string out;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Rational& c = coefficients[i];
    if (c == 0) continue;
    const Rational mag = abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (mag != 1) out += mag.get_str() + "*";
    out += basis[i].name;
  }
  return out.empty() ? "0" : out;
}

std::vector<TemplateTerm> scalar_a4_template(const GaugeContext& ctx) {
  const int n = ctx.n;
  const ScalarPoly s = var(sym::s());
  const ScalarPoly f = var(sym::f());
  std::vector<TemplateTerm> raw = {
      {"Lap(s)", formal_laplacian(s, n)},
      {"s^2", s * s},
      {"s*f^2", s * f * f},
      {"f^4", f.pow(4)},
      {"Ric^2", ricci_contraction_sq(ctx)},
      {"|Riem|^2", riemann_norm_sq(ctx)},
      {"|df|^2", grad_sq(sym::f(), ctx)},
      {"Lap(f^2)", formal_laplacian(f * f, n)},
  };
  for (auto& t : raw) t.value = apply_curvature_dictionary(t.value, ctx);
  return raw;
}

ScalarPoly two_form_derivative_square_trace(const GaugeContext& ctx) {
  const int n = ctx.n;
  const Multivector psi = build_psi(PerturbationSpec::two_form(), ctx);
  std::vector<Multivector> dpsi(n + 1, Multivector(n));
  for (int j = 1; j <= n; ++j) dpsi[j] = derive(psi, j);
  ScalarPoly out;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const Multivector x = anticommutator(dpsi[j], Multivector::generator(i, n)) -
                            anticommutator(dpsi[i], Multivector::generator(j, n));
      out += spinor_trace(x * x);
    }
  return out;
}

std::vector<TemplateTerm> two_form_a4_template(const GaugeContext& ctx) {
  const int n = ctx.n;
  const ScalarPoly s = var(sym::s());
  const ScalarPoly norm = two_form_norm_sq(ctx);
  std::vector<TemplateTerm> raw = {
      {"Lap(s)", formal_laplacian(s, n)},
      {"Lap(|Psi|^2)", formal_laplacian(norm, n)},
      {"s^2", s * s},
      {"Ric^2", ricci_contraction_sq(ctx)},
      {"|Riem|^2", riemann_norm_sq(ctx)},
      {"s*|Psi|^2", s * norm},
      {"|delta Psi|^2", two_form_codifferential_sq(ctx)},
      {"|Psi|^4", norm * norm},
      {"Q(Psi)", two_form_quartic_contraction(ctx)},
      {"T(nabla Psi)", two_form_derivative_square_trace(ctx)},
  };
  for (auto& t : raw) t.value = apply_curvature_dictionary(t.value, ctx);
  return raw;
}

}  // namespace kkw
