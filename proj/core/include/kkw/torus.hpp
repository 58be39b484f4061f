#pragma once

// Heat trace of D_Psi^2 on the flat torus (R / 2 pi Z)^4 with a constant
// perturbation, by summing over Fourier modes k in Z^4, and a least-squares
// fit of its small-t expansion.

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

namespace kkw {

enum class TorusPerturbation { None, Scalar, TwoForm };

TorusPerturbation parse_torus_perturbation(const std::string& name);
std::string torus_perturbation_name(TorusPerturbation p);

struct TorusConfig {
  TorusPerturbation perturbation = TorusPerturbation::None;
  double value = 0.0;  // f, or a_12 of the two-form
  // Full antisymmetric a_kl (0-based); when left zero, a_12 = value is used.
  std::array<std::array<double, 4>, 4> two_form{};
  int cutoff = 30;  // max |k_j|
  double t_min = 0.02;
  double t_max = 0.2;
  int steps = 20;
  int representation = 0;  // 0 or 1, see gamma_matrices
  // Tail bound relative to the trace above which the cutoff is rejected.
  double tail_tolerance = 1e-8;

  void validate() const;
  std::vector<double> t_grid() const;
  std::array<std::array<double, 4>, 4> two_form_coefficients() const;
};

// gamma_j (j = 0..3), anti-Hermitian, gamma_j gamma_l + gamma_l gamma_j = -2 delta_jl.
// Representation 0 is chiral, 1 is built from Pauli tensor products.
std::array<Eigen::Matrix4cd, 4> gamma_matrices(int representation);

// i sum_j k_j gamma_j + P with P = f or P = i sum a_kl gamma_k gamma_l.
// Throws NumericalError when the result is not Hermitian.
Eigen::Matrix4cd mode_matrix(const std::array<int, 4>& k, const TorusConfig& cfg);

struct HeatTraceSample {
  double t = 0.0;
  double value = 0.0;
  double tail_bound = 0.0;
};

// Sum over |k|_inf <= K of tr exp(-t M_k^2) at every grid point. Throws
// NumericalError if a tail bound exceeds tail_tolerance * value.
std::vector<HeatTraceSample> heat_trace(const TorusConfig& cfg, const std::vector<double>& ts);
HeatTraceSample heat_trace(const TorusConfig& cfg, double t);

// Bound on sum_{|k|_inf > K} 4 exp(-t' |k|^2) with t' = t (1 - 2 p / (K + 1)),
// p the operator norm of the perturbation.
double tail_bound(double t, int cutoff, double perturbation_norm);

struct FitResult {
  double a0 = 0.0;  // coefficient of t^-2
  double a2 = 0.0;  // t^-1
  double a4 = 0.0;  // t^0, diagnostic only
  double max_relative_residual = 0.0;
  double condition = 0.0;
};

// Weighted relative least squares on the basis t^-2, t^-1, 1, t.
FitResult fit_heat_trace(const std::vector<HeatTraceSample>& samples, double max_condition = 1e10,
                         double max_residual = 1e-6);

struct TorusComparison {
  TorusConfig config;
  std::vector<HeatTraceSample> samples;
  FitResult fit;
  double a0_predicted = 0.0;
  double a2_predicted = 0.0;
  double a0_relative_error = 0.0;
  // Relative to |a2_predicted|, or to a0_predicted when the prediction is 0.
  double a2_relative_error = 0.0;
  std::string a2_symbolic;  // heat-wres density before evaluation
  double wall_seconds = 0.0;
};

// Predictions come from the symbolic a0, a2 densities at s = 0 times the
// torus volume (2 pi)^4.
TorusComparison fit_and_compare(const TorusConfig& cfg);

}  // namespace kkw
