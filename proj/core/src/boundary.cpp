#include "kkw/boundary.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kkw/errors.hpp"

namespace kkw {

namespace {

using Poly = std::vector<Multivector>;

ScalarPoly var(const IndexedSymbol& s, int e = 1) { return ScalarPoly::variable(s, e); }
ScalarPoly q(long a, long b = 1) { return ScalarPoly::rational(a, b); }
ScalarPoly I() { return ScalarPoly::imag(); }
Multivector zero() { return Multivector(kBoundaryDim); }
Multivector gen(int i) { return Multivector::generator(i, kBoundaryDim); }

void trim(Poly& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

Poly add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), zero());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) out[k] += b[k];
  trim(out);
  return out;
}

Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, zero());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  trim(out);
  return out;
}

Poly scale(const ScalarPoly& c, const Poly& a) {
  Poly out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(c * x);
  trim(out);
  return out;
}

// a * (xi - r)
Poly mul_linear(const Poly& a, const ScalarPoly& r) {
  if (a.empty()) return {};
  Poly out(a.size() + 1, zero());
  for (std::size_t k = 0; k < a.size(); ++k) {
    out[k + 1] += a[k];
    out[k] -= r * a[k];
  }
  trim(out);
  return out;
}

Multivector eval_at(const Poly& a, const ScalarPoly& r) {
  Multivector out = zero();
  for (std::size_t k = a.size(); k-- > 0;) out = r * out + a[k];
  return out;
}

// Quotient of a by (xi - r); the remainder must vanish.
Poly divide_linear(const Poly& a, const ScalarPoly& r) {
  if (a.size() < 2) return {};
  Poly out(a.size() - 1, zero());
  out.back() = a.back();
  for (std::size_t k = a.size() - 2; k >= 1; --k) out[k - 1] = a[k] + r * out[k];
  trim(out);
  return out;
}

Poly derivative(const Poly& a) {
  Poly out;
  for (std::size_t k = 1; k < a.size(); ++k) out.push_back(ScalarPoly(static_cast<long>(k)) * a[k]);
  trim(out);
  return out;
}

Rational binomial(long n, long k) {
  if (k < 0) return 0;
  Rational out = 1;
  for (long i = 0; i < k; ++i) out = out * Rational(n - i) / Rational(i + 1);
  return out;
}

// Taylor coefficients (t^0 .. t^{count-1}) of N(r + t) (r - r_other + t)^{-m}.
Poly local_expansion(const Poly& num, const ScalarPoly& r, const ScalarPoly& c_inv, int m, int count) {
  Poly shifted(count, zero());
  for (int j = 0; j < count; ++j)
    for (std::size_t k = static_cast<std::size_t>(j); k < num.size(); ++k)
      shifted[j] += (ScalarPoly(binomial(static_cast<long>(k), j)) * r.pow(static_cast<int>(k) - j)) * num[k];
  std::vector<ScalarPoly> factor(count);
  for (int j = 0; j < count; ++j) {
    // binom(-m, j) c^{-m-j}
    const Rational b = binomial(m + j - 1, j) * (j % 2 ? -1 : 1);
    factor[j] = ScalarPoly(b) * c_inv.pow(m + j);
  }
  Poly out(count, zero());
  for (int i = 0; i < count; ++i)
    for (int j = 0; i + j < count; ++j) out[i + j] += factor[j] * shifted[i];
  return out;
}

ScalarPoly derive_wrt(const ScalarPoly& p, const IndexedSymbol& x) {
  std::map<Monomial, Rational> out;
  for (const auto& [m, c] : p.terms()) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!(m[i].first == x)) continue;
      Monomial rest = m;
      const int e = m[i].second;
      if (e == 1) {
        rest.erase(rest.begin() + static_cast<long>(i));
      } else {
        rest[i].second = e - 1;
      }
      out[rest] += c * e;
    }
  }
  return ScalarPoly::from_terms(std::move(out));
}

}  // namespace

// ---------------------------------------------------------------------------

RationalSymbol::RationalSymbol(std::vector<Multivector> numerator, int pole_plus, int pole_minus)
    : num_(std::move(numerator)), p_(pole_plus), q_(pole_minus) {
  if (p_ < 0 || q_ < 0) throw DomainError("pole orders must be nonnegative");
  for (const auto& c : num_)
    if (c.dim() != kBoundaryDim) throw DomainError("boundary symbols live in Cl(4)");
  normalize();
}

RationalSymbol RationalSymbol::constant(const Multivector& c) { return RationalSymbol({c}, 0, 0); }

void RationalSymbol::normalize() {
  for (auto& c : num_) c = c.map_coefficients(reduce_unit_sphere);
  trim(num_);
  if (num_.empty()) {
    p_ = q_ = 0;
    return;
  }
  const ScalarPoly i = I();
  while (p_ > 0 && eval_at(num_, i).is_zero()) {
    num_ = divide_linear(num_, i);
    --p_;
  }
  while (q_ > 0 && eval_at(num_, -i).is_zero()) {
    num_ = divide_linear(num_, -i);
    --q_;
  }
}

namespace {
Poly raise(const Poly& num, int from_p, int to_p, int from_q, int to_q) {
  Poly out = num;
  for (int k = from_p; k < to_p; ++k) out = mul_linear(out, I());
  for (int k = from_q; k < to_q; ++k) out = mul_linear(out, -I());
  return out;
}
}  // namespace

RationalSymbol& RationalSymbol::operator+=(const RationalSymbol& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  const int P = std::max(p_, o.p_);
  const int Q = std::max(q_, o.q_);
  num_ = add(raise(num_, p_, P, q_, Q), raise(o.num_, o.p_, P, o.q_, Q));
  p_ = P;
  q_ = Q;
  normalize();
  return *this;
}

RationalSymbol& RationalSymbol::operator-=(const RationalSymbol& o) { return *this += ScalarPoly(-1L) * o; }

RationalSymbol operator*(const RationalSymbol& a, const RationalSymbol& b) {
  return RationalSymbol(mul(a.num_, b.num_), a.p_ + b.p_, a.q_ + b.q_);
}

RationalSymbol operator*(const ScalarPoly& c, const RationalSymbol& a) {
  return RationalSymbol(scale(c, a.num_), a.p_, a.q_);
}

bool RationalSymbol::operator==(const RationalSymbol& o) const { return (*this - o).is_zero(); }

RationalSymbol RationalSymbol::map(const std::function<Multivector(const Multivector&)>& fn) const {
  Poly out;
  for (const auto& c : num_) out.push_back(fn(c));
  return RationalSymbol(out, p_, q_);
}

std::map<BladeMask, std::complex<double>> RationalSymbol::evaluate(
    double xi_n, const std::function<std::complex<double>(const IndexedSymbol&)>& value) const {
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> den = std::pow(xi_n - i, p_) * std::pow(xi_n + i, q_);
  std::map<BladeMask, std::complex<double>> out;
  double power = 1.0;
  for (const auto& c : num_) {
    for (const auto& [m, coef] : c.terms()) out[m] += coef.evaluate(value) * power;
    power *= xi_n;
  }
  for (auto& [m, v] : out) v /= den;
  return out;
}

std::string RationalSymbol::to_string() const {
  if (num_.empty()) return "0";
  std::string out = "[";
  for (std::size_t k = 0; k < num_.size(); ++k) {
    if (num_[k].is_zero()) continue;
    if (out.size() > 1) out += " + ";
    out += num_[k].to_string();
    if (k > 0) out += "*xi_n^" + std::to_string(k);
  }
  out += "] / ((xi_n - i)^" + std::to_string(p_) + " (xi_n + i)^" + std::to_string(q_) + ")";
  return out;
}

RationalSymbol dxi_derivative(const RationalSymbol& s, int order) {
  RationalSymbol cur = s;
  for (int k = 0; k < order; ++k) {
    if (cur.is_zero()) break;
    const Poly& n = cur.numerator();
    const int p = cur.pole_plus();
    const int qq = cur.pole_minus();
    // N'(xi - i)(xi + i) - p N (xi + i) - q N (xi - i)
    Poly t1 = mul_linear(mul_linear(derivative(n), I()), -I());
    Poly t2 = scale(q(-p), mul_linear(n, -I()));
    Poly t3 = scale(q(-qq), mul_linear(n, I()));
    cur = RationalSymbol(add(add(t1, t2), t3), p + 1, qq + 1);
  }
  return cur;
}

namespace {

void require_proper(const RationalSymbol& s) {
  if (!s.is_zero() && s.decay() < 1)
    throw DomainError("symbol does not decay in xi_n: " + s.to_string());
}

}  // namespace

RationalSymbol pi_plus(const RationalSymbol& s) {
  require_proper(s);
  const int p = s.pole_plus();
  if (s.is_zero() || p == 0) return {};
  // c = 2i, c^{-1} = -i/2
  const Poly a = local_expansion(s.numerator(), I(), q(-1, 2) * I(), s.pole_minus(), p);
  // principal part sum_m A_m (xi - i)^{-m}, A_m = a[p - m]
  Poly num;
  for (int m = 1; m <= p; ++m) {
    Poly term{a[p - m]};
    for (int k = 0; k < p - m; ++k) term = mul_linear(term, I());
    num = add(num, term);
  }
  return RationalSymbol(num, p, 0);
}

RationalSymbol pi_minus(const RationalSymbol& s) {
  require_proper(s);
  const int qq = s.pole_minus();
  if (s.is_zero() || qq == 0) return {};
  // c = -2i, c^{-1} = i/2
  const Poly a = local_expansion(s.numerator(), -I(), q(1, 2) * I(), s.pole_plus(), qq);
  Poly num;
  for (int m = 1; m <= qq; ++m) {
    Poly term{a[qq - m]};
    for (int k = 0; k < qq - m; ++k) term = mul_linear(term, -I());
    num = add(num, term);
  }
  return RationalSymbol(num, 0, qq);
}

Multivector integrate_xi_n(const RationalSymbol& s) {
  if (s.is_zero()) return zero();
  if (s.decay() < 2) throw DomainError("integral over xi_n diverges: " + s.to_string());
  const int p = s.pole_plus();
  if (p == 0) return zero();
  const Poly a = local_expansion(s.numerator(), I(), q(-1, 2) * I(), s.pole_minus(), p);
  return (q(2) * pi_power(1) * I()) * a[p - 1];
}

// ---------------------------------------------------------------------------

HomogeneousSymbol HomogeneousSymbol::xi_prime_derivative(int j) const {
  if (j < 1 || j > 3) throw DomainError("tangential covariable index must lie in [1, 3]");
  const IndexedSymbol xj = sym::xi(j);
  ScalarPoly rho;
  for (int i = 1; i <= 3; ++i) rho += var(sym::xi(i), 2);
  Poly dn;
  for (const auto& c : numerator)
    dn.push_back(c.map_coefficients([&](const ScalarPoly& x) { return derive_wrt(x, xj); }));
  trim(dn);
  // dN (rho + xi_n^2) - 2k xi_j N
  Poly out = add(scale(rho, dn), mul(Poly{zero(), zero(), Multivector(kBoundaryDim, ScalarPoly(1L))}, dn));
  out = add(out, scale(q(-2L * power) * var(xj), numerator));
  return {out, power + 1};
}

RationalSymbol HomogeneousSymbol::restrict_to_unit_sphere() const {
  return RationalSymbol(numerator, power, power);
}

Multivector clifford_xi_prime() {
  Multivector out = zero();
  for (int j = 1; j <= 3; ++j) out += var(sym::xi(j)) * gen(j);
  return out;
}

HomogeneousSymbol q_minus1() {
  return {{I() * clifford_xi_prime(), I() * gen(4)}, 1};
}

HomogeneousSymbol psi_correction(const Multivector& psi) {
  const Multivector cp = clifford_xi_prime();
  const Multivector cn = gen(4);
  return {{cp * psi * cp, cn * psi * cp + cp * psi * cn, cn * psi * cn}, 2};
}

Rational sphere_moment(int a, int b, int c) {
  if (a % 2 || b % 2 || c % 2) return 0;
  auto dfact = [](int k) {
    Rational out = 1;
    for (int i = k; i > 1; i -= 2) out *= i;
    return out;
  };
  return dfact(a - 1) * dfact(b - 1) * dfact(c - 1) / dfact(a + b + c + 1);
}

ScalarPoly sphere_integrate(const ScalarPoly& p) {
  std::map<Monomial, Rational> out;
  const IndexedSymbol omega = sym::omega3();
  for (const auto& [m, c] : p.terms()) {
    int e[4] = {0, 0, 0, 0};
    Monomial rest;
    for (const auto& [s, k] : m) {
      if (s.family == Family::Xi) {
        if (k < 0) throw DomainError("negative power of xi' in sphere integral");
        e[s.index[0]] = k;
      } else {
        rest.emplace_back(s, k);
      }
    }
    const Rational w = sphere_moment(e[1], e[2], e[3]);
    if (w == 0) continue;
    ScalarPoly term = ScalarPoly::from_terms({{rest, c * w}}) * var(omega);
    for (const auto& [mm, cc] : term.terms()) out[mm] += cc;
  }
  return ScalarPoly::from_terms(std::move(out));
}

// ---------------------------------------------------------------------------

const ScalarPoly& BoundaryFixtures::get(const std::string& name) const {
  auto it = values.find(name);
  if (it == values.end()) throw ConfigurationError("missing boundary fixture '" + name + "'");
  return it->second;
}

namespace {

std::string trim_ws(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
    s.replace(pos, from.size(), to);
}

int parse_exponent(const std::string& tok, std::size_t at, const std::string& line) {
  if (at >= tok.size()) return 1;
  if (tok[at] != '^') throw ConfigurationError("malformed factor '" + tok + "' in: " + line);
  try {
    std::size_t used = 0;
    const int e = std::stoi(tok.substr(at + 1), &used);
    if (used != tok.size() - at - 1) throw std::invalid_argument("trailing");
    return e;
  } catch (const std::exception&) {
    throw ConfigurationError("malformed exponent in '" + tok + "' in: " + line);
  }
}

ScalarPoly parse_value(std::string v, const std::string& line) {
  replace_all(v, "\xC2\xB7", "*");      // middle dot
  replace_all(v, "\xCF\x80", "pi");     // pi
  replace_all(v, "\xE2\x80\xB2", "'");  // prime
  replace_all(v, "h'(0)", "hprime0");
  replace_all(v, "\xCE\xA9\xE2\x82\x83", "Omega3");  // Omega with subscript 3
  std::vector<std::string> tokens;
  std::stringstream ss(v);
  for (std::string tok; std::getline(ss, tok, '*');) tokens.push_back(trim_ws(tok));
  if (tokens.empty() || tokens[0].empty()) throw ConfigurationError("empty fixture value in: " + line);
  ScalarPoly out(1L);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string tok = tokens[i];
    if (tok.empty()) throw ConfigurationError("empty factor in: " + line);
    if (i == 0 && (std::isdigit(static_cast<unsigned char>(tok[0])) || tok[0] == '-' || tok[0] == '+')) {
      std::string r = tok[0] == '+' ? tok.substr(1) : tok;
      if (r == "-") {
        out = ScalarPoly(-1L);
        continue;
      }
      Rational value;
      if (value.set_str(r, 10) != 0) throw ConfigurationError("malformed rational '" + tok + "' in: " + line);
      value.canonicalize();
      out = ScalarPoly(value);
      continue;
    }
    if (tok.rfind("-", 0) == 0 && i == 0) {
      out = ScalarPoly(-1L);
      tok = tok.substr(1);
    }
    if (tok.rfind("pi", 0) == 0) {
      out *= pi_power(parse_exponent(tok, 2, line));
    } else if (tok.rfind("hprime0", 0) == 0) {
      out *= var(sym::hprime0(), parse_exponent(tok, 7, line));
    } else if (tok.rfind("Omega3", 0) == 0) {
      out *= var(sym::omega3(), parse_exponent(tok, 6, line));
    } else {
      throw ConfigurationError("unknown factor '" + tok + "' in: " + line);
    }
  }
  return out;
}

}  // namespace

BoundaryFixtures parse_fixtures(const std::string& text) {
  BoundaryFixtures out;
  std::stringstream ss(text);
  for (std::string raw; std::getline(ss, raw);) {
    std::string line = raw.substr(0, raw.find('#'));
    line = trim_ws(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigurationError("fixture line without '=': " + raw);
    const std::string name = trim_ws(line.substr(0, eq));
    if (name.empty()) throw ConfigurationError("fixture line without a name: " + raw);
    if (out.values.count(name)) throw ConfigurationError("duplicate fixture '" + name + "'");
    out.values.emplace(name, parse_value(trim_ws(line.substr(eq + 1)), raw));
  }
  return out;
}

BoundaryFixtures load_fixtures(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open fixture file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_fixtures(buf.str());
}

std::string default_fixture_path() {
  namespace fs = std::filesystem;
  if (const char* env = std::getenv("KKW_DATA_DIR")) return (fs::path(env) / "boundary_fixtures.txt").string();
  const fs::path source = fs::path(KKW_SOURCE_DATA_DIR) / "boundary_fixtures.txt";
  if (fs::exists(source)) return source.string();
  return (fs::path(KKW_INSTALL_DATA_DIR) / "boundary_fixtures.txt").string();
}

BoundaryCase parse_boundary_case(const std::string& name) {
  if (name == "thm-2.10") return BoundaryCase::Theorem210;
  if (name == "prop-2.15") return BoundaryCase::Proposition215;
  if (name == "thm-3.2") return BoundaryCase::Theorem32;
  throw DomainError("unknown boundary case '" + name + "'");
}

std::string boundary_case_name(BoundaryCase c) {
  switch (c) {
    case BoundaryCase::Theorem210: return "thm-2.10";
    case BoundaryCase::Proposition215: return "prop-2.15";
    case BoundaryCase::Theorem32: return "thm-3.2";
  }
  return "?";
}

// ---------------------------------------------------------------------------

namespace {

// int_{|xi'|=1} int_R tr[s] dxi_n sigma(xi')
ScalarPoly cosphere_integral(const RationalSymbol& s) {
  return sphere_integrate(spinor_trace(integrate_xi_n(s)));
}

}  // namespace

ScalarPoly normal_trace(const Multivector& psi) { return spinor_trace(gen(4) * psi); }

ScalarPoly psi_part_term_b(const Multivector& psi) {
  const RationalSymbol corr = psi_correction(psi).restrict_to_unit_sphere();
  const RationalSymbol dq = dxi_derivative(q_minus1().restrict_to_unit_sphere());
  return -I() * cosphere_integral(pi_plus(corr) * dq);
}

ScalarPoly psi_part_term_c(const Multivector& psi) {
  const RationalSymbol q1 = q_minus1().restrict_to_unit_sphere();
  const RationalSymbol dcorr = dxi_derivative(psi_correction(psi).restrict_to_unit_sphere());
  return -I() * cosphere_integral(pi_plus(q1) * dcorr);
}

BoundaryResult boundary_phi(BoundaryCase which, const PerturbationSpec& spec,
                            const BoundaryFixtures& fixtures) {
  BoundaryResult out;
  auto push = [&](const std::string& name, const ScalarPoly& v, const std::string& origin) {
    out.terms.push_back({name, v, origin});
    out.phi += v;
  };
  const RationalSymbol q1 = q_minus1().restrict_to_unit_sphere();
  const RationalSymbol dq1 = dxi_derivative(q1);

  if (which == BoundaryCase::Theorem32) {
    const ScalarPoly f = var(sym::f());
    const ScalarPoly g = var(sym::g());
    const ScalarPoly fg = f * g;
    // (a) I: the x'-derivative of q_{-1} vanishes at x0; the derivative of g
    // pairs with an odd sphere moment.
    push("a-I tangential derivative of q-1", ScalarPoly(), "gauge");
    ScalarPoly a1;
    for (int j = 1; j <= 3; ++j) {
      const RationalSymbol dj = q_minus1().xi_prime_derivative(j).restrict_to_unit_sphere();
      a1 -= f * var(sym::d1(sym::g(), j)) * cosphere_integral(pi_plus(dj) * dq1);
    }
    push("a-I tangential derivative of g", a1, "computed");
    push("a-II metric part", fg * fixtures.get("a_II"), "fixture");
    push("a-II normal derivative of f",
         q(-1, 2) * g * var(sym::d1(sym::f(), 4)) * cosphere_integral(pi_plus(q1) * dxi_derivative(q1, 2)),
         "computed");
    push("a-III metric part", fg * fixtures.get("a_III"), "fixture");
    push("a-III normal derivative of g",
         q(-1, 2) * f * var(sym::d1(sym::g(), 4)) * cosphere_integral(dxi_derivative(pi_plus(q1)) * dq1),
         "computed");
    push("b q-2 part", fg * fixtures.get("two_function_b_q2"), "fixture");
    push("c q-2 part", fg * fixtures.get("two_function_c_q2"), "fixture");
    return out;
  }

  const Multivector psi = build_psi(spec, GaugeContext{kBoundaryDim});
  push("a-I", ScalarPoly(), "gauge");
  push("a-II", fixtures.get("a_II"), "fixture");
  push("a-III", fixtures.get("a_III"), "fixture");
  push("b q-2 part", fixtures.get("b_q2"), "fixture");
  push("b psi part", psi_part_term_b(psi), "computed");
  push("c q-2 part", fixtures.get("c_q2"), "fixture");
  if (which == BoundaryCase::Theorem210) push("c psi part", psi_part_term_c(psi), "computed");
  return out;
}

}  // namespace kkw
