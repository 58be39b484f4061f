#include "kkw/perturbation.hpp"

#include "kkw/errors.hpp"

namespace kkw {

namespace {

ScalarPoly var(const IndexedSymbol& s, int e = 1) { return ScalarPoly::variable(s, e); }

Multivector gen(int i, const GaugeContext& ctx) { return Multivector::generator(i, ctx.n); }

Multivector scalar_mv(const ScalarPoly& p, const GaugeContext& ctx) { return Multivector(ctx.n, p); }

void check_dimension(const GaugeContext& ctx) {
  if (ctx.n < 2 || ctx.n > kMaxDim || ctx.n % 2 != 0)
    throw DomainError("dimension must be even and lie in [2, 8]");
}

std::vector<Multivector> derivatives(const Multivector& x, const GaugeContext& ctx) {
  std::vector<Multivector> out(ctx.n + 1, Multivector(ctx.n));
  for (int j = 1; j <= ctx.n; ++j) out[j] = derive(x, j);
  return out;
}

}  // namespace

std::string PerturbationSpec::name() const {
  switch (kind) {
    case PerturbationKind::Scalar: return "scalar";
    case PerturbationKind::OneFormImaginary: return "one-form-i-c-eta";
    case PerturbationKind::OneForm: return "one-form";
    case PerturbationKind::TwoForm: return "two-form";
    case PerturbationKind::General: return "general";
    case PerturbationKind::ConformalPair: return "conformal-pair";
  }
  return "?";
}

Multivector clifford_gradient(const IndexedSymbol& field, const GaugeContext& ctx) {
  Multivector out(ctx.n);
  for (int k = 1; k <= ctx.n; ++k) out += var(sym::d1(field, k)) * gen(k, ctx);
  return out;
}

Multivector build_psi(const PerturbationSpec& spec, const GaugeContext& ctx) {
  check_dimension(ctx);
  const int n = ctx.n;
  Multivector psi(n);
  switch (spec.kind) {
    case PerturbationKind::Scalar:
      psi = scalar_mv(var(sym::f()), ctx);
      break;
    case PerturbationKind::OneForm:
    case PerturbationKind::OneFormImaginary:
      for (int k = 1; k <= n; ++k) psi += var(sym::b(k)) * gen(k, ctx);
      if (spec.kind == PerturbationKind::OneFormImaginary) psi *= ScalarPoly::imag();
      break;
    case PerturbationKind::TwoForm:
      for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l)
          if (k != l) psi += var(sym::a(k, l)) * gen(k, ctx) * gen(l, ctx);
      break;
    case PerturbationKind::General:
      if (spec.grades.empty()) throw DomainError("general perturbation needs at least one grade");
      for (int grade : spec.grades) {
        if (grade < 0 || grade > n) throw DomainError("grade outside [0, n]");
        for (unsigned m = 0; m < (1u << n); ++m)
          if (mask_grade(static_cast<BladeMask>(m)) == grade)
            psi += Multivector::blade(static_cast<BladeMask>(m), var(sym::coef(static_cast<int>(m))), n);
      }
      break;
    case PerturbationKind::ConformalPair:
      psi = -(var(sym::g(), -1) * clifford_gradient(sym::g(), ctx));
      break;
  }
  if (spec.numeric) {
    psi = psi.map_coefficients([&](const ScalarPoly& c) {
      return c.substitute([&](const IndexedSymbol& s) -> std::optional<ScalarPoly> {
        auto it = spec.values.find(s);
        if (it == spec.values.end()) return std::nullopt;
        return ScalarPoly(it->second);
      });
    });
  }
  return psi;
}

OperatorData squared_operator_data(const Multivector& psi, const GaugeContext& ctx) {
  // D_Psi^2 = D^2 + sum_j (c_j Psi + Psi c_j) d_j + sum_i c_i d_i(Psi) + Psi^2
  OperatorData op{std::vector<Multivector>(ctx.n + 1, Multivector(ctx.n)), psi * psi};
  for (int j = 1; j <= ctx.n; ++j) {
    op.V[j] = anticommutator(gen(j, ctx), psi);
    op.W += gen(j, ctx) * derive(psi, j);
  }
  return op;
}

OperatorData product_operator_data(const Multivector& psi, const GaugeContext& ctx) {
  // D_Psi D = D^2 + sum_j Psi c_j d_j
  OperatorData op{std::vector<Multivector>(ctx.n + 1, Multivector(ctx.n)), Multivector(ctx.n)};
  for (int j = 1; j <= ctx.n; ++j) op.V[j] = psi * gen(j, ctx);
  return op;
}

LaplaceNormalForm laplace_normal_form(const OperatorData& op, const GaugeContext& ctx) {
  check_dimension(ctx);
  LaplaceNormalForm out{scalar_mv(ScalarPoly::rational(-1, 4) * var(sym::s()), ctx),
                        std::vector<Multivector>(ctx.n + 1, Multivector(ctx.n))};
  out.E -= op.W;
  const ScalarPoly half = ScalarPoly::rational(1, 2);
  const ScalarPoly quarter = ScalarPoly::rational(1, 4);
  for (int i = 1; i <= ctx.n; ++i) {
    out.E += half * derive(op.V[i], i);
    out.E -= quarter * (op.V[i] * op.V[i]);
    out.connection[i] = ScalarPoly::rational(-1, 2) * op.V[i];
  }
  return out;
}

Multivector endomorphism_E(const PerturbationSpec& spec, const GaugeContext& ctx) {
  if (spec.kind == PerturbationKind::ConformalPair)
    throw CapabilityError("use endomorphism_E_conformal for the conformal pair");
  return laplace_normal_form(squared_operator_data(build_psi(spec, ctx), ctx), ctx).E;
}

Multivector endomorphism_E_product(const PerturbationSpec& spec, const GaugeContext& ctx) {
  return laplace_normal_form(product_operator_data(build_psi(spec, ctx), ctx), ctx).E;
}

ConformalEndomorphism endomorphism_E_conformal(const GaugeContext& ctx) {
  const Multivector psi = build_psi(PerturbationSpec::conformal_pair(), ctx);
  ConformalEndomorphism out{laplace_normal_form(product_operator_data(psi, ctx), ctx).E, {}};
  out.trace_s6_E = spinor_trace(scalar_mv(ScalarPoly::rational(1, 6) * var(sym::s()), ctx) + out.E);
  return out;
}

Multivector spin_curvature(int i, int j, const GaugeContext& ctx) {
  Multivector out(ctx.n);
  for (int s = 1; s <= ctx.n; ++s)
    for (int t = 1; t <= ctx.n; ++t)
      if (s != t) out += var(sym::riemann(i, j, s, t)) * gen(s, ctx) * gen(t, ctx);
  return ScalarPoly::rational(-1, 4) * out;
}

CurvatureFamily curvature_Omega_generic(const PerturbationSpec& spec, const GaugeContext& ctx) {
  if (spec.kind == PerturbationKind::ConformalPair)
    throw CapabilityError("curvature of the conformal pair operator is not provided");
  const Multivector psi = build_psi(spec, ctx);
  const auto nf = laplace_normal_form(squared_operator_data(psi, ctx), ctx);
  const int n = ctx.n;
  CurvatureFamily omega(n + 1, std::vector<Multivector>(n + 1, Multivector(n)));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      omega[i][j] = spin_curvature(i, j, ctx) + derive(nf.connection[j], i) -
                    derive(nf.connection[i], j) + commutator(nf.connection[i], nf.connection[j]);
    }
  return omega;
}

CurvatureFamily curvature_Omega(const PerturbationSpec& spec, const GaugeContext& ctx) {
  switch (spec.kind) {
    case PerturbationKind::Scalar:
      return curvature_Omega_generic(spec, ctx);
    case PerturbationKind::TwoForm: {
      const int n = ctx.n;
      const Multivector psi = build_psi(spec, ctx);
      const auto dpsi = derivatives(psi, ctx);
      const ScalarPoly quarter = ScalarPoly::rational(1, 4);
      CurvatureFamily omega(n + 1, std::vector<Multivector>(n + 1, Multivector(n)));
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
          if (i == j) continue;
          omega[i][j] = spin_curvature(i, j, ctx) - quarter * anticommutator(dpsi[i], gen(j, ctx)) +
                        quarter * anticommutator(dpsi[j], gen(i, ctx));
        }
      return omega;
    }
    default:
      throw CapabilityError("curvature_Omega is implemented for scalar and two-form perturbations");
  }
}

ScalarPoly trace_Omega_sq(const CurvatureFamily& omega, const GaugeContext& ctx) {
  ScalarPoly out;
  for (int i = 1; i <= ctx.n; ++i)
    for (int j = 1; j <= ctx.n; ++j)
      if (!omega[i][j].is_zero()) out += spinor_trace(omega[i][j] * omega[i][j]);
  return out;
}

ScalarPoly trace_Omega_sq(const PerturbationSpec& spec, const GaugeContext& ctx) {
  return trace_Omega_sq(curvature_Omega(spec, ctx), ctx);
}

ScalarPoly scalar_curvature_contraction(const GaugeContext& ctx) {
  ScalarPoly out;
  for (int i = 1; i <= ctx.n; ++i)
    for (int j = 1; j <= ctx.n; ++j) out += var(sym::riemann(i, j, i, j));
  return out;
}

ScalarPoly riemann_norm_sq(const GaugeContext& ctx) {
  ScalarPoly out;
  const int n = ctx.n;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      for (int s = 1; s <= n; ++s)
        for (int t = 1; t <= n; ++t) out += var(sym::riemann(i, j, s, t), 2);
  return out;
}

ScalarPoly ricci_contraction_sq(const GaugeContext& ctx) {
  const int n = ctx.n;
  ScalarPoly out;
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k) {
      ScalarPoly ric;
      for (int i = 1; i <= n; ++i) ric += var(sym::riemann(i, j, i, k));
      out += ric * ric;
    }
  return out;
}

ScalarPoly two_form_norm_sq(const GaugeContext& ctx) {
  ScalarPoly out;
  for (int k = 1; k <= ctx.n; ++k)
    for (int l = 1; l <= ctx.n; ++l) out += var(sym::a(k, l), 2);
  return out;
}

ScalarPoly one_form_norm_sq(const GaugeContext& ctx) {
  ScalarPoly out;
  for (int k = 1; k <= ctx.n; ++k) out += var(sym::b(k), 2);
  return out;
}

ScalarPoly grad_sq(const IndexedSymbol& field, const GaugeContext& ctx) {
  ScalarPoly out;
  for (int k = 1; k <= ctx.n; ++k) out += var(sym::d1(field, k), 2);
  return out;
}

ScalarPoly one_form_divergence(const GaugeContext& ctx) {
  ScalarPoly out;
  for (int k = 1; k <= ctx.n; ++k) out += var(sym::d1(sym::b(k), k));
  return out;
}

ScalarPoly two_form_codifferential_sq(const GaugeContext& ctx) {
  ScalarPoly out;
  for (int l = 1; l <= ctx.n; ++l) {
    ScalarPoly comp;
    for (int k = 1; k <= ctx.n; ++k) comp += ScalarPoly(2L) * var(sym::d1(sym::a(k, l), k));
    out += comp * comp;
  }
  return out;
}

ScalarPoly two_form_quartic_contraction(const GaugeContext& ctx) {
  const int n = ctx.n;
  ScalarPoly out;
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l)
      for (int k1 = 1; k1 <= n; ++k1)
        for (int l1 = 1; l1 <= n; ++l1)
          out += var(sym::a(k, l)) * var(sym::a(k1, l1)) * var(sym::a(k, k1)) * var(sym::a(l, l1));
  return ScalarPoly(16L) * out;
}

}  // namespace kkw
