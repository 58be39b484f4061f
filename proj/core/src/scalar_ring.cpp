#include "kkw/scalar_ring.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kkw/errors.hpp"

namespace kkw {

bool is_constant(Family f) {
  switch (f) {
    case Family::ImagUnit:
    case Family::Pi:
    case Family::DimN:
    case Family::SpinorDim:
    case Family::Omega3:
    case Family::HPrime0:
    case Family::Lambda:
    case Family::F4:
    case Family::F2:
    case Family::F0:
    case Family::Xi:
      return true;
    default:
      return false;
  }
}

std::string family_name(Family f) {
  switch (f) {
    case Family::ImagUnit: return "I";
    case Family::Pi: return "pi";
    case Family::DimN: return "n";
    case Family::SpinorDim: return "d";
    case Family::Omega3: return "Omega3";
    case Family::HPrime0: return "hprime0";
    case Family::Lambda: return "Lambda";
    case Family::F4: return "F4";
    case Family::F2: return "F2";
    case Family::F0: return "F0";
    case Family::Xi: return "xi";
    case Family::S: return "s";
    case Family::F: return "f";
    case Family::G: return "g";
    case Family::H: return "h";
    case Family::ExpM2H: return "exp(-2h)";
    case Family::A: return "a";
    case Family::B: return "b";
    case Family::R: return "R";
    case Family::Coef: return "c";
  }
  return "?";
}

int IndexedSymbol::arity() const {
  switch (family) {
    case Family::Xi:
    case Family::B:
    case Family::Coef:
      return 1;
    case Family::A:
      return 2;
    case Family::R:
      return 4;
    default:
      return 0;
  }
}

int IndexedSymbol::derivative_order() const {
  return (deriv[0] != 0 ? 1 : 0) + (deriv[1] != 0 ? 1 : 0);
}

std::string IndexedSymbol::to_string() const {
  std::ostringstream os;
  if (derivative_order() == 1) {
    os << "D1[" << int(deriv[0]) << "]";
  } else if (derivative_order() == 2) {
    os << "D2[" << int(deriv[0]) << "," << int(deriv[1]) << "]";
  }
  os << family_name(family);
  const int k = arity();
  if (k > 0) {
    os << "[";
    for (int i = 0; i < k; ++i) {
      if (i) os << ",";
      os << index[i];
    }
    os << "]";
  }
  return os.str();
}

namespace sym {
namespace {
IndexedSymbol make(Family f, std::initializer_list<int> idx = {}) {
  IndexedSymbol s;
  s.family = f;
  int i = 0;
  for (int v : idx) s.index[i++] = static_cast<std::int16_t>(v);
  return s;
}
}  // namespace

IndexedSymbol imag() { return make(Family::ImagUnit); }
IndexedSymbol pi() { return make(Family::Pi); }
IndexedSymbol omega3() { return make(Family::Omega3); }
IndexedSymbol hprime0() { return make(Family::HPrime0); }
IndexedSymbol lambda() { return make(Family::Lambda); }
IndexedSymbol moment(int which) {
  switch (which) {
    case 0: return make(Family::F0);
    case 2: return make(Family::F2);
    case 4: return make(Family::F4);
    default: throw DomainError("cut-off moment must be F0, F2 or F4");
  }
}
IndexedSymbol dim_n() { return make(Family::DimN); }
IndexedSymbol spinor_dim() { return make(Family::SpinorDim); }
IndexedSymbol xi(int j) { return make(Family::Xi, {j}); }
IndexedSymbol s() { return make(Family::S); }
IndexedSymbol f() { return make(Family::F); }
IndexedSymbol g() { return make(Family::G); }
IndexedSymbol h() { return make(Family::H); }
IndexedSymbol exp_m2h() { return make(Family::ExpM2H); }
IndexedSymbol a(int k, int l) { return make(Family::A, {k, l}); }
IndexedSymbol b(int k) { return make(Family::B, {k}); }
IndexedSymbol riemann(int i, int j, int s, int t) { return make(Family::R, {i, j, s, t}); }
IndexedSymbol coef(int blade_mask) { return make(Family::Coef, {blade_mask}); }

IndexedSymbol d1(const IndexedSymbol& x, int j) {
  if (x.derivative_order() != 0) throw DomainError("d1 expects an underived symbol");
  IndexedSymbol out = x;
  out.deriv = {static_cast<std::int8_t>(j), 0};
  return out;
}

IndexedSymbol d2(const IndexedSymbol& x, int j, int k) {
  if (x.derivative_order() != 0) throw DomainError("d2 expects an underived symbol");
  IndexedSymbol out = x;
  out.deriv = {static_cast<std::int8_t>(std::min(j, k)), static_cast<std::int8_t>(std::max(j, k))};
  return out;
}
}  // namespace sym

namespace {

void check_range(int v, int lo, int hi, const IndexedSymbol& s) {
  if (v < lo || v > hi) {
    throw DomainError("index " + std::to_string(v) + " of " + s.to_string() + " outside [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

}  // namespace

Canonical canonicalize(const IndexedSymbol& symbol, int n) {
  Canonical out{1, symbol};
  IndexedSymbol& rep = out.rep;

  for (int k = 0; k < symbol.derivative_order(); ++k) check_range(symbol.deriv[k], 1, n, symbol);
  if (symbol.derivative_order() == 2 && rep.deriv[0] > rep.deriv[1]) std::swap(rep.deriv[0], rep.deriv[1]);
  if (symbol.derivative_order() == 1 && rep.deriv[0] == 0) std::swap(rep.deriv[0], rep.deriv[1]);

  switch (symbol.family) {
    case Family::A: {
      check_range(symbol.index[0], 1, n, symbol);
      check_range(symbol.index[1], 1, n, symbol);
      if (rep.index[0] == rep.index[1]) return {0, rep};
      if (rep.index[0] > rep.index[1]) {
        std::swap(rep.index[0], rep.index[1]);
        out.sign = -1;
      }
      return out;
    }
    case Family::B:
      check_range(symbol.index[0], 1, n, symbol);
      return out;
    case Family::Xi:
      check_range(symbol.index[0], 1, n - 1, symbol);
      return out;
    case Family::Coef:
      check_range(symbol.index[0], 0, (1 << n) - 1, symbol);
      return out;
    case Family::R: {
      for (int k = 0; k < 4; ++k) check_range(symbol.index[k], 1, n, symbol);
      const auto& ix = symbol.index;
      if (ix[0] == ix[1] || ix[2] == ix[3]) return {0, rep};
      // Orbit under (ij) antisymmetry, (st) antisymmetry and pair exchange.
      std::array<std::int16_t, 4> best{};
      int best_sign = 0;
      bool first = true;
      bool conflict = false;
      for (int swap_ij = 0; swap_ij < 2; ++swap_ij) {
        for (int swap_st = 0; swap_st < 2; ++swap_st) {
          for (int exchange = 0; exchange < 2; ++exchange) {
            std::array<std::int16_t, 4> t = ix;
            if (swap_ij) std::swap(t[0], t[1]);
            if (swap_st) std::swap(t[2], t[3]);
            if (exchange) t = {t[2], t[3], t[0], t[1]};
            const int sign = ((swap_ij + swap_st) % 2) ? -1 : 1;
            if (first || t < best) {
              best = t;
              best_sign = sign;
              conflict = false;
              first = false;
            } else if (t == best && sign != best_sign) {
              conflict = true;
            }
          }
        }
      }
      rep.index = best;
      if (conflict) return {0, rep};
      out.sign = best_sign;
      return out;
    }
    default:
      return out;
  }
}

// ---------------------------------------------------------------------------

std::pair<int, Monomial> multiply_monomials(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      out.push_back(*ia++);
    } else if (ia == a.end() || ib->first < ia->first) {
      out.push_back(*ib++);
    } else {
      const int e = ia->second + ib->second;
      if (e != 0) out.emplace_back(ia->first, e);
      ++ia;
      ++ib;
    }
  }
  int sign = 1;
  if (!out.empty() && out.front().first.family == Family::ImagUnit) {
    const int r = ((out.front().second % 4) + 4) % 4;
    if (r >= 2) sign = -1;
    if (r % 2 == 0) {
      out.erase(out.begin());
    } else {
      out.front().second = 1;
    }
  }
  return {sign, std::move(out)};
}

std::string monomial_to_string(const Monomial& m) {
  std::string out;
  for (const auto& [s, e] : m) {
    if (!out.empty()) out += "*";
    out += s.to_string();
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

ScalarPoly::ScalarPoly(long value) {
  if (value != 0) terms_.emplace(Monomial{}, Rational(value));
}

ScalarPoly::ScalarPoly(const Rational& value) {
  if (value != 0) terms_.emplace(Monomial{}, value);
}

ScalarPoly ScalarPoly::variable(const IndexedSymbol& symbol, int exponent) {
  const Canonical c = canonicalize(symbol);
  if (c.sign == 0) return {};
  if (exponent == 0) return ScalarPoly(1L);
  Monomial m{{c.rep, 1}};
  ScalarPoly base;
  base.terms_.emplace(m, Rational(c.sign));
  if (symbol.family == Family::ImagUnit) return base.pow(exponent);
  if (exponent == 1) return base;
  ScalarPoly out;
  const int sign = (c.sign < 0 && (exponent % 2 != 0)) ? -1 : 1;
  out.terms_.emplace(Monomial{{c.rep, exponent}}, Rational(sign));
  return out;
}

ScalarPoly ScalarPoly::rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return ScalarPoly(q);
}

ScalarPoly ScalarPoly::from_terms(std::map<Monomial, Rational> terms) {
  ScalarPoly out;
  for (auto& [m, c] : terms) out.add_term(m, c);
  return out;
}

bool ScalarPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

std::optional<Rational> ScalarPoly::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (is_constant()) return terms_.begin()->second;
  return std::nullopt;
}

Rational ScalarPoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void ScalarPoly::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

ScalarPoly& ScalarPoly::operator+=(const ScalarPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

ScalarPoly& ScalarPoly::operator-=(const ScalarPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

ScalarPoly& ScalarPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

ScalarPoly operator*(const ScalarPoly& a, const ScalarPoly& b) {
  ScalarPoly out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      auto [sign, m] = multiply_monomials(ma, mb);
      Rational c = ca * cb;
      if (sign < 0) c = -c;
      out.add_term(m, c);
    }
  }
  return out;
}

ScalarPoly& ScalarPoly::operator*=(const ScalarPoly& o) {
  *this = *this * o;
  return *this;
}

ScalarPoly ScalarPoly::operator-() const {
  ScalarPoly out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

ScalarPoly ScalarPoly::pow(int e) const {
  if (e < 0) {
    if (terms_.size() != 1) throw DomainError("negative power of a non-monomial polynomial");
    const auto& [m, c] = *terms_.begin();
    Monomial inv = m;
    Rational inv_c = 1 / c;
    for (auto& [s, k] : inv) {
      if (s.family == Family::ImagUnit) {
        inv_c = -inv_c;  // I^{-1} = -I
      } else {
        k = -k;
      }
    }
    ScalarPoly base;
    base.terms_.emplace(std::move(inv), inv_c);
    return base.pow(-e);
  }
  ScalarPoly out(1L);
  ScalarPoly base = *this;
  while (e > 0) {
    if (e & 1) out *= base;
    e >>= 1;
    if (e) base = base * base;
  }
  return out;
}

std::string ScalarPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational mag = abs(c);
    const bool negative = c < 0;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    if (m.empty()) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += monomial_to_string(m);
    } else {
      out += mag.get_str() + "*" + monomial_to_string(m);
    }
  }
  return out;
}

ScalarPoly ScalarPoly::substitute(
    const std::function<std::optional<ScalarPoly>(const IndexedSymbol&)>& rule) const {
  ScalarPoly out;
  for (const auto& [m, c] : terms_) {
    ScalarPoly term(c);
    Monomial kept;
    for (const auto& [s, e] : m) {
      if (auto rep = rule(s)) {
        term *= rep->pow(e);
      } else {
        kept.emplace_back(s, e);
      }
    }
    ScalarPoly rest;
    rest.terms_.emplace(std::move(kept), Rational(1));
    out += term * rest;
  }
  return out;
}

std::complex<double> ScalarPoly::evaluate(
    const std::function<std::complex<double>(const IndexedSymbol&)>& value) const {
  std::complex<double> total = 0.0;
  for (const auto& [m, c] : terms_) {
    std::complex<double> term = c.get_d();
    for (const auto& [s, e] : m) {
      std::complex<double> v;
      if (s.family == Family::ImagUnit) {
        v = {0.0, 1.0};
      } else if (s.family == Family::Pi) {
        v = std::numbers::pi;
      } else {
        v = value(s);
      }
      term *= std::pow(v, e);
    }
    total += term;
  }
  return total;
}

std::pair<ScalarPoly, ScalarPoly> ScalarPoly::split_imaginary() const {
  ScalarPoly re;
  ScalarPoly im;
  for (const auto& [m, c] : terms_) {
    if (!m.empty() && m.front().first.family == Family::ImagUnit) {
      Monomial rest(m.begin() + 1, m.end());
      im.add_term(rest, c);
    } else {
      re.add_term(m, c);
    }
  }
  return {re, im};
}

// ---------------------------------------------------------------------------

namespace {

ScalarPoly derive_symbol(const IndexedSymbol& x, int j) {
  if (is_constant(x.family)) return {};
  if (x.family == Family::ExpM2H) {
    if (x.derivative_order() != 0) throw DomainError("exp(-2h) carries no derivative marks");
    return ScalarPoly(-2L) * ScalarPoly::variable(x) * ScalarPoly::variable(sym::d1(sym::h(), j));
  }
  IndexedSymbol out = x;
  switch (x.derivative_order()) {
    case 0:
      out.deriv = {static_cast<std::int8_t>(j), 0};
      break;
    case 1: {
      const int k = x.deriv[0];
      out.deriv = {static_cast<std::int8_t>(std::min(j, k)), static_cast<std::int8_t>(std::max(j, k))};
      break;
    }
    default:
      throw UnsupportedOrderError("third-order formal derivative of " + x.to_string() +
                                  " requested; at most second order is supported");
  }
  return ScalarPoly::variable(out);
}

}  // namespace

ScalarPoly formal_derive(const ScalarPoly& p, int j) {
  if (j < 1 || j > kMaxDim) throw DomainError("derivative direction out of range");
  ScalarPoly out;
  for (const auto& [m, c] : p.terms()) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      const auto& [x, e] = m[i];
      ScalarPoly dx = derive_symbol(x, j);
      if (dx.is_zero()) continue;
      Monomial rest = m;
      if (e == 1) {
        rest.erase(rest.begin() + static_cast<long>(i));
      } else {
        rest[i].second = e - 1;
      }
      out += ScalarPoly::from_terms({{rest, c * e}}) * dx;
    }
  }
  return out;
}

ScalarPoly formal_laplacian(const ScalarPoly& p, int n) {
  ScalarPoly out;
  for (int k = 1; k <= n; ++k) out -= formal_derive(formal_derive(p, k), k);
  return out;
}

ScalarPoly substitute_field(const ScalarPoly& p, const IndexedSymbol& field,
                            const ScalarPoly& replacement, int n) {
  (void)n;
  return p.substitute([&](const IndexedSymbol& s) -> std::optional<ScalarPoly> {
    if (s.family != field.family || s.index != field.index) return std::nullopt;
    switch (s.derivative_order()) {
      case 0: return replacement;
      case 1: return formal_derive(replacement, s.deriv[0]);
      default: return formal_derive(formal_derive(replacement, s.deriv[1]), s.deriv[0]);
    }
  });
}

ScalarPoly reduce_unit_sphere(const ScalarPoly& p) {
  const ScalarPoly x3_sq = ScalarPoly(1L) - ScalarPoly::variable(sym::xi(1), 2) -
                           ScalarPoly::variable(sym::xi(2), 2);
  const IndexedSymbol x3 = sym::xi(3);
  ScalarPoly out;
  for (const auto& [m, c] : p.terms()) {
    Monomial rest;
    int e3 = 0;
    for (const auto& [s, e] : m) {
      if (s == x3) {
        e3 = e;
      } else {
        rest.emplace_back(s, e);
      }
    }
    if (e3 < 0) throw DomainError("negative power of xi_3 in unit-sphere reduction");
    ScalarPoly term = ScalarPoly::from_terms({{rest, c}});
    term *= x3_sq.pow(e3 / 2);
    if (e3 % 2) term *= ScalarPoly::variable(x3);
    out += term;
  }
  return out;
}

ScalarPoly pi_power(int e) { return ScalarPoly::variable(sym::pi(), e); }

}  // namespace kkw
