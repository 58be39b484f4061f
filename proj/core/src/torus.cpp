#include "kkw/torus.hpp"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <numbers>

#include "kkw/errors.hpp"
#include "kkw/heat_wres.hpp"

namespace kkw {

namespace {

using Mat = Eigen::Matrix4cd;
using cd = std::complex<double>;

Eigen::Matrix2cd pauli(int j) {
  Eigen::Matrix2cd m;
  const cd i(0.0, 1.0);
  switch (j) {
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: m.setIdentity();
  }
  return m;
}

Mat kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Mat out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

// Largest |eigenvalue| of the constant perturbation matrix.
double perturbation_norm(const TorusConfig& cfg) {
  const Mat p = mode_matrix({0, 0, 0, 0}, cfg);
  Eigen::SelfAdjointEigenSolver<Mat> es(p, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double theta(double t, int limit) {
  double out = 1.0;
  for (int m = 1; m <= limit; ++m) out += 2.0 * std::exp(-t * m * static_cast<double>(m));
  return out;
}

}  // namespace

TorusPerturbation parse_torus_perturbation(const std::string& name) {
  if (name == "none") return TorusPerturbation::None;
  if (name == "scalar") return TorusPerturbation::Scalar;
  if (name == "two-form") return TorusPerturbation::TwoForm;
  throw DomainError("unknown torus perturbation '" + name + "'");
}

std::string torus_perturbation_name(TorusPerturbation p) {
  switch (p) {
    case TorusPerturbation::None: return "none";
    case TorusPerturbation::Scalar: return "scalar";
    case TorusPerturbation::TwoForm: return "two-form";
  }
  return "?";
}

void TorusConfig::validate() const {
  if (!(t_min > 0.0) || !(t_max > t_min)) throw DomainError("torus t-grid needs 0 < tmin < tmax");
  if (cutoff < 10) throw DomainError("torus cutoff must be at least 10");
  if (steps < 5) throw DomainError("torus fit needs at least 5 grid points");
  if (representation != 0 && representation != 1) throw DomainError("representation must be 0 or 1");
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      if (two_form[k][l] != -two_form[l][k]) throw DomainError("two-form coefficients must be antisymmetric");
}

std::vector<double> TorusConfig::t_grid() const {
  std::vector<double> out(steps);
  const double ratio = std::log(t_max / t_min) / (steps - 1);
  for (int i = 0; i < steps; ++i) out[i] = t_min * std::exp(ratio * i);
  out.back() = t_max;
  return out;
}

std::array<std::array<double, 4>, 4> TorusConfig::two_form_coefficients() const {
  bool any = false;
  for (const auto& row : two_form)
    for (double x : row) any = any || x != 0.0;
  if (any) return two_form;
  std::array<std::array<double, 4>, 4> out{};
  out[0][1] = value;
  out[1][0] = -value;
  return out;
}

std::array<Mat, 4> gamma_matrices(int representation) {
  const cd i(0.0, 1.0);
  std::array<Mat, 4> herm;
  if (representation == 0) {
    // [[0, sigma_j], [sigma_j, 0]] and [[0, -i], [i, 0]]
    for (int j = 0; j < 3; ++j) herm[j] = kron(pauli(1), pauli(j + 1));
    herm[3] = kron(pauli(2), pauli(0));
  } else if (representation == 1) {
    herm[0] = kron(pauli(3), pauli(1));
    herm[1] = kron(pauli(3), pauli(2));
    herm[2] = kron(pauli(1), pauli(0));
    herm[3] = kron(pauli(3), pauli(3));
  } else {
    throw DomainError("representation must be 0 or 1");
  }
  std::array<Mat, 4> out;
  for (int j = 0; j < 4; ++j) out[j] = i * herm[j];
  return out;
}

namespace {

// i gamma_j and the constant perturbation, assembled once per configuration.
struct ModeBuilder {
  std::array<Mat, 4> igamma;
  Mat perturbation = Mat::Zero();

  explicit ModeBuilder(const TorusConfig& cfg) {
    const cd i(0.0, 1.0);
    const auto g = gamma_matrices(cfg.representation);
    for (int j = 0; j < 4; ++j) igamma[j] = i * g[j];
    if (cfg.perturbation == TorusPerturbation::Scalar) {
      perturbation = cfg.value * Mat::Identity();
    } else if (cfg.perturbation == TorusPerturbation::TwoForm) {
      const auto a = cfg.two_form_coefficients();
      for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s)
          if (r != s && a[r][s] != 0.0) perturbation += i * a[r][s] * g[r] * g[s];
    }
  }

  Mat operator()(const std::array<int, 4>& k) const {
    Mat m = perturbation;
    for (int j = 0; j < 4; ++j) m += static_cast<double>(k[j]) * igamma[j];
    return m;
  }
};

}  // namespace

Mat mode_matrix(const std::array<int, 4>& k, const TorusConfig& cfg) {
  const Mat m = ModeBuilder(cfg)(k);
  if ((m - m.adjoint()).norm() > 1e-12 * (1.0 + m.norm()))
    throw NumericalError("mode matrix is not Hermitian; gamma representation is broken");
  return m;
}

double tail_bound(double t, int cutoff, double p) {
  const double tp = t * (1.0 - 2.0 * p / (cutoff + 1));
  if (!(tp > 0.0)) return std::numeric_limits<double>::infinity();
  const int limit = cutoff + static_cast<int>(std::ceil(std::sqrt(80.0 / tp))) + 1;
  const double tk = theta(tp, cutoff);
  // 4 (theta^4 - theta_K^4), factored to avoid cancellation
  double diff = 0.0;
  for (int m = limit; m > cutoff; --m) diff += 2.0 * std::exp(-tp * m * static_cast<double>(m));
  const double full = tk + diff;
  return 4.0 * diff * (full * full * full + full * full * tk + full * tk * tk + tk * tk * tk);
}

std::vector<HeatTraceSample> heat_trace(const TorusConfig& cfg, const std::vector<double>& ts) {
  cfg.validate();
  const int K = cfg.cutoff;
  const std::size_t nt = ts.size();
  std::vector<double> total(nt, 0.0);
  const ModeBuilder build(cfg);
  mode_matrix({1, 2, 3, 4}, cfg);  // Hermiticity check of the representation

  if (cfg.perturbation != TorusPerturbation::TwoForm) {
    // The spectrum of M_k depends on |k|^2 only: one eigensolve per shell.
    std::vector<long> count(4 * K * K + 1, 0);
    std::vector<std::array<int, 4>> representative(count.size());
    for (int a = -K; a <= K; ++a)
      for (int b = -K; b <= K; ++b)
        for (int c = -K; c <= K; ++c)
          for (int d = -K; d <= K; ++d) {
            const int r2 = a * a + b * b + c * c + d * d;
            if (count[r2]++ == 0) representative[r2] = {a, b, c, d};
          }
    for (std::size_t r2 = 0; r2 < count.size(); ++r2) {
      if (count[r2] == 0) continue;
      Eigen::SelfAdjointEigenSolver<Mat> es(build(representative[r2]), Eigen::EigenvaluesOnly);
      const Eigen::Array4d lam2 = es.eigenvalues().array().square();
      for (std::size_t i = 0; i < nt; ++i) total[i] += static_cast<double>(count[r2]) * (-ts[i] * lam2).exp().sum();
    }
  } else {
    // Slab partial sums over k_1, merged in order.
    for (int a = -K; a <= K; ++a) {
      std::vector<double> slab(nt, 0.0);
      for (int b = -K; b <= K; ++b)
        for (int c = -K; c <= K; ++c)
          for (int d = -K; d <= K; ++d) {
            Eigen::SelfAdjointEigenSolver<Mat> es(build({a, b, c, d}), Eigen::EigenvaluesOnly);
            const Eigen::Array4d lam2 = es.eigenvalues().array().square();
            for (std::size_t i = 0; i < nt; ++i) slab[i] += (-ts[i] * lam2).exp().sum();
          }
      for (std::size_t i = 0; i < nt; ++i) total[i] += slab[i];
    }
  }

  const double p = perturbation_norm(cfg);
  std::vector<HeatTraceSample> out;
  for (std::size_t i = 0; i < nt; ++i) {
    HeatTraceSample s{ts[i], total[i], tail_bound(ts[i], K, p)};
    if (s.tail_bound > cfg.tail_tolerance * s.value)
      throw NumericalError("cutoff K=" + std::to_string(K) + " too small at t=" + std::to_string(ts[i]) +
                           ": tail bound " + std::to_string(s.tail_bound / s.value) + " relative");
    out.push_back(s);
  }
  return out;
}

HeatTraceSample heat_trace(const TorusConfig& cfg, double t) { return heat_trace(cfg, std::vector<double>{t})[0]; }

FitResult fit_heat_trace(const std::vector<HeatTraceSample>& samples, double max_condition, double max_residual) {
  const int m = static_cast<int>(samples.size());
  constexpr int kBasis = 4;
  if (m < kBasis + 1) throw NumericalError("too few samples for the heat-trace fit");
  Eigen::MatrixXd A(m, kBasis);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(m);
  for (int i = 0; i < m; ++i) {
    const double t = samples[i].t;
    A(i, 0) = 1.0 / (t * t);
    A(i, 1) = 1.0 / t;
    A(i, 2) = 1.0;
    A(i, 3) = t;
    A.row(i) /= samples[i].value;
  }
  const Eigen::VectorXd scale = A.colwise().norm().transpose();
  const Eigen::MatrixXd As = A * scale.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  FitResult out;
  out.condition = sv(0) / sv(kBasis - 1);
  if (!(out.condition < max_condition))
    throw NumericalError("heat-trace fit is ill-conditioned (condition " + std::to_string(out.condition) +
                         "); widen the t-range");
  const Eigen::VectorXd x = svd.solve(b).cwiseQuotient(scale);
  out.a0 = x(0);
  out.a2 = x(1);
  out.a4 = x(2);
  out.max_relative_residual = (A * x - b).cwiseAbs().maxCoeff();
  if (out.max_relative_residual > max_residual)
    throw NumericalError("heat-trace fit residual " + std::to_string(out.max_relative_residual) +
                         " exceeds " + std::to_string(max_residual) +
                         "; shrink the t-range toward the asymptotic window");
  return out;
}

TorusComparison fit_and_compare(const TorusConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  TorusComparison out;
  out.config = cfg;
  out.samples = heat_trace(cfg, cfg.t_grid());
  out.fit = fit_heat_trace(out.samples);

  // Symbolic densities of the operator actually diagonalized: the two-form
  // enters multiplied by the imaginary unit.
  const GaugeContext ctx{4};
  const PerturbationSpec spec =
      cfg.perturbation == TorusPerturbation::TwoForm ? PerturbationSpec::two_form() : PerturbationSpec::scalar();
  const auto hc = assemble_heat_coefficients(spec, ctx, false);
  const auto a = cfg.two_form_coefficients();
  const double f = cfg.perturbation == TorusPerturbation::Scalar ? cfg.value : 0.0;
  auto flat = [&](const IndexedSymbol& s) -> std::optional<ScalarPoly> {
    switch (s.family) {
      case Family::S:
      case Family::R: return ScalarPoly();
      case Family::F: return ScalarPoly(Rational(f));
      case Family::A:
        return ScalarPoly(Rational(a[s.index[0] - 1][s.index[1] - 1])) * ScalarPoly::imag();
      default: return std::nullopt;
    }
  };
  const ScalarPoly vol = ScalarPoly(16L) * pi_power(4);
  const ScalarPoly a0 = hc.a0 * vol;
  const ScalarPoly a2 = hc.a2.substitute(flat) * vol;
  out.a2_symbolic = hc.a2.to_string();
  auto no_symbols = [](const IndexedSymbol& s) -> std::complex<double> {
    throw DomainError("unresolved symbol " + s.to_string() + " in torus prediction");
  };
  out.a0_predicted = a0.evaluate(no_symbols).real();
  const std::complex<double> a2v = a2.evaluate(no_symbols);
  if (std::abs(a2v.imag()) > 1e-12 * (1.0 + std::abs(a2v))) throw NumericalError("a2 prediction is not real");
  out.a2_predicted = a2v.real();
  out.a0_relative_error = std::abs(out.fit.a0 - out.a0_predicted) / std::abs(out.a0_predicted);
  const double a2_scale = out.a2_predicted != 0.0 ? std::abs(out.a2_predicted) : std::abs(out.a0_predicted);
  out.a2_relative_error = std::abs(out.fit.a2 - out.a2_predicted) / a2_scale;
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace kkw
