#pragma once

// Perturbations Psi of the Dirac operator and the Laplace-type data they
// induce at a base point x0 in normal coordinates.
//
// Every second-order operator handled here has the form
//   P = D^2 + sum_j V_j d_j + W      (at x0, in the normal-coordinate gauge)
// and its Weitzenboeck decomposition P = -(nabla nabla) - E is extracted
// mechanically from (V, W).

#include <map>
#include <string>
#include <vector>

#include "kkw/clifford.hpp"
#include "kkw/scalar_ring.hpp"

namespace kkw {

enum class PerturbationKind {
  Scalar,            // Psi = f
  OneFormImaginary,  // Psi = I * c(eta), eta = sum b_k e^k
  OneForm,           // Psi = c(eta)
  TwoForm,           // Psi = sum_{k,l} a_kl c(e_k) c(e_l), a_kl = -a_lk
  General,           // Psi = sum over blades of the listed grades, coefficient c[mask]
  ConformalPair,     // pair (f, g); enters as Psi = -g^-1 c(dg) in D_Psi D
};

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::Scalar;
  std::vector<int> grades;  // General only
  // Numeric mode: base coefficient symbols take constant values, so every
  // formal derivative of them vanishes.
  bool numeric = false;
  std::map<IndexedSymbol, Rational> values;

  static PerturbationSpec scalar() { return {PerturbationKind::Scalar, {}, false, {}}; }
  static PerturbationSpec one_form_imaginary() { return {PerturbationKind::OneFormImaginary, {}, false, {}}; }
  static PerturbationSpec one_form() { return {PerturbationKind::OneForm, {}, false, {}}; }
  static PerturbationSpec two_form() { return {PerturbationKind::TwoForm, {}, false, {}}; }
  static PerturbationSpec general(std::vector<int> grades) {
    return {PerturbationKind::General, std::move(grades), false, {}};
  }
  static PerturbationSpec conformal_pair() { return {PerturbationKind::ConformalPair, {}, false, {}}; }

  std::string name() const;
};

struct GaugeContext {
  int n = 4;
  // Curvature dictionary: sum_{i,j} R_ijij = curvature_sign * s.
  int curvature_sign = -1;
};

Multivector build_psi(const PerturbationSpec& spec, const GaugeContext& ctx);

// First-order data (V_1..V_n, W) of an operator D^2 + V_j d_j + W at x0.
struct OperatorData {
  std::vector<Multivector> V;  // index 0 unused
  Multivector W;
};

OperatorData squared_operator_data(const Multivector& psi, const GaugeContext& ctx);  // D_Psi^2
OperatorData product_operator_data(const Multivector& psi, const GaugeContext& ctx);  // D_Psi D

struct LaplaceNormalForm {
  Multivector E;
  std::vector<Multivector> connection;  // A_i, so that nabla_i = nabla^S_i + A_i; index 0 unused
};

// E = -s/4 - W + 1/2 sum_i d_i V_i - 1/4 sum_i V_i V_i,  A_i = -V_i / 2.
LaplaceNormalForm laplace_normal_form(const OperatorData& op, const GaugeContext& ctx);

Multivector endomorphism_E(const PerturbationSpec& spec, const GaugeContext& ctx);
Multivector endomorphism_E_product(const PerturbationSpec& spec, const GaugeContext& ctx);

struct ConformalEndomorphism {
  Multivector E;           // of D^2 - g^-1 c(dg) D
  ScalarPoly trace_s6_E;   // Tr[s/6 + E]
};
ConformalEndomorphism endomorphism_E_conformal(const GaugeContext& ctx);

// R^S(e_i, e_j) = -1/4 sum_{s,t} R_ijst c(e_s) c(e_t).
Multivector spin_curvature(int i, int j, const GaugeContext& ctx);

// Omega[i][j], 1-indexed.
using CurvatureFamily = std::vector<std::vector<Multivector>>;

// Curvature of the connection of D_Psi^2 computed from the extracted A_i:
// Omega_ij = R^S_ij + d_i A_j - d_j A_i + [A_i, A_j].
CurvatureFamily curvature_Omega_generic(const PerturbationSpec& spec, const GaugeContext& ctx);

// Scalar: the generic curvature. Two-form: the five-term form
// R^S_ij - 1/4{nabla_i Psi, c_j} + 1/4{nabla_j Psi, c_i}.
CurvatureFamily curvature_Omega(const PerturbationSpec& spec, const GaugeContext& ctx);

// sum_{i,j} Tr[Omega_ij Omega_ij] for curvature_Omega.
ScalarPoly trace_Omega_sq(const PerturbationSpec& spec, const GaugeContext& ctx);
ScalarPoly trace_Omega_sq(const CurvatureFamily& omega, const GaugeContext& ctx);

// Frequently used scalar invariants, all expanded in canonical symbols.
ScalarPoly scalar_curvature_contraction(const GaugeContext& ctx);  // sum R_ijij
ScalarPoly riemann_norm_sq(const GaugeContext& ctx);               // sum R_ijst^2
ScalarPoly ricci_contraction_sq(const GaugeContext& ctx);          // sum R_ijik R_ljlk
ScalarPoly two_form_norm_sq(const GaugeContext& ctx);              // sum_{k,l} a_kl^2
ScalarPoly one_form_norm_sq(const GaugeContext& ctx);              // sum_k b_k^2
ScalarPoly grad_sq(const IndexedSymbol& field, const GaugeContext& ctx);  // sum_k (D1[k] x)^2
ScalarPoly one_form_divergence(const GaugeContext& ctx);           // sum_k D1[k] b_k
// sum_l (sum_k 2 e_k(a_kl))^2
ScalarPoly two_form_codifferential_sq(const GaugeContext& ctx);
// sum 16 a_kl a_k1l1 a_kk1 a_ll1, the interior-product quartic of a two-form
ScalarPoly two_form_quartic_contraction(const GaugeContext& ctx);

// Clifford representative sum_k D1[k] x c(e_k) of dx.
Multivector clifford_gradient(const IndexedSymbol& field, const GaugeContext& ctx);

}  // namespace kkw
