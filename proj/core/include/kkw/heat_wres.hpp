#pragma once

// Seeley-deWitt coefficients a0, a2, a4 and interior residue densities built
// from the endomorphism E and the curvature Omega.

#include <string>
#include <vector>

#include "kkw/perturbation.hpp"

namespace kkw {

struct HeatCoefficients {
  int n = 4;
  ScalarPoly a0;  // densities including (4 pi)^{-n/2}
  ScalarPoly a2;
  ScalarPoly a4;
  // 360 (4 pi)^{n/2} a4: the trace bracket of the a4 formula.
  ScalarPoly a4_bracket;
};

struct CutoffMoments {
  ScalarPoly F4 = ScalarPoly::variable(sym::moment(4));
  ScalarPoly F2 = ScalarPoly::variable(sym::moment(2));
  ScalarPoly F0 = ScalarPoly::variable(sym::moment(0));
};

// (4 pi)^{-n/2} as an exact rational times a power of pi.
ScalarPoly heat_normalization(int n);

// a0 and a2 for every kind except the conformal pair; a4 only for scalar and
// two-form (CapabilityError otherwise, unless with_a4 is false).
HeatCoefficients assemble_heat_coefficients(const PerturbationSpec& spec, const GaugeContext& ctx,
                                            bool with_a4 = true);

// s -> sigma * sum R_ijij (with derivatives), so that curvature expressions
// built from s and from Riemann contractions can be compared.
ScalarPoly apply_curvature_dictionary(const ScalarPoly& p, const GaugeContext& ctx);

// Lambda^4 F4 a0 + Lambda^2 F2 a2 + F0 a4 (n = 4).
ScalarPoly spectral_action_expansion(const HeatCoefficients& coeffs, const CutoffMoments& moments);

struct WresDensity {
  ScalarPoly density;
  std::string statement;
};

// (2 pi)^{n/2} / (n/2 - 2)! * Tr[s/6 + E]; requires n >= 4.
WresDensity wres_interior(const PerturbationSpec& spec, const GaugeContext& ctx);

// 4 pi^2 Tr[s/6 + E] for D_Psi D at n = 4.
WresDensity wres_product_interior(const PerturbationSpec& spec, const GaugeContext& ctx);

struct ConformalWres {
  ScalarPoly pointwise;   // -4 pi^2 [f g s / 3 + 2 f Delta g]
  ScalarPoly integrated;  // after f Delta g -> <df, dg>
  std::string statement;
};
ConformalWres wres_conformal(const GaugeContext& ctx);
// f = g = exp(-2h).
ConformalWres wres_conformal_exponential(const GaugeContext& ctx);

// Exact linear decomposition of p onto a list of named template polynomials.
struct TemplateTerm {
  std::string name;
  ScalarPoly value;
};

struct Decomposition {
  std::vector<Rational> coefficients;
  ScalarPoly residual;
  bool exact() const { return residual.is_zero(); }
};

Decomposition decompose(const ScalarPoly& p, const std::vector<TemplateTerm>& basis);
std::string render_combination(const std::vector<Rational>& coefficients,
                               const std::vector<TemplateTerm>& basis);

// Template bases for the a4 brackets divided by d. Curvature dictionary
// already applied.
std::vector<TemplateTerm> scalar_a4_template(const GaugeContext& ctx);
std::vector<TemplateTerm> two_form_a4_template(const GaugeContext& ctx);

// Tr[sum_ij (-{nabla_i Psi, c_j} + {nabla_j Psi, c_i})^2] for the two-form.
ScalarPoly two_form_derivative_square_trace(const GaugeContext& ctx);

}  // namespace kkw
