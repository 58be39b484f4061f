#include "kkw/clifford.hpp"

#include <array>
#include <bit>

#include "kkw/errors.hpp"

namespace kkw {

std::pair<int, BladeMask> normalize_word(const std::vector<int>& word) {
  std::vector<int> w = word;
  int sign = 1;
  // Insertion sort; each adjacent transposition of distinct generators flips
  // the sign, equal neighbours contract to -1.
  std::size_t i = 1;
  while (i < w.size()) {
    std::size_t j = i;
    bool contracted = false;
    while (j > 0 && w[j - 1] >= w[j]) {
      if (w[j - 1] == w[j]) {
        sign = -sign;
        w.erase(w.begin() + static_cast<long>(j - 1), w.begin() + static_cast<long>(j + 1));
        contracted = true;
        break;
      }
      std::swap(w[j - 1], w[j]);
      sign = -sign;
      --j;
    }
    // A contraction removes two entries and leaves w[0, i-1) sorted.
    i = contracted ? std::max<std::size_t>(i - 1, 1) : i + 1;
  }
  BladeMask mask = 0;
  for (int g : w) {
    if (g < 1 || g > kMaxDim) throw DomainError("generator index out of range");
    mask |= static_cast<BladeMask>(1u << (g - 1));
  }
  return {sign, mask};
}

std::vector<int> mask_indices(BladeMask m) {
  std::vector<int> out;
  for (int i = 0; i < 16; ++i)
    if (m & (1u << i)) out.push_back(i + 1);
  return out;
}

int mask_grade(BladeMask m) { return std::popcount(static_cast<unsigned>(m)); }

namespace {

constexpr int kTableSize = 1 << kMaxDim;

const std::array<std::int8_t, kTableSize * kTableSize>& sign_table() {
  static const auto table = [] {
    std::array<std::int8_t, kTableSize * kTableSize> t{};
    for (int a = 0; a < kTableSize; ++a) {
      const auto ia = mask_indices(static_cast<BladeMask>(a));
      for (int b = 0; b < kTableSize; ++b) {
        std::vector<int> w = ia;
        const auto ib = mask_indices(static_cast<BladeMask>(b));
        w.insert(w.end(), ib.begin(), ib.end());
        t[a * kTableSize + b] = static_cast<std::int8_t>(normalize_word(w).first);
      }
    }
    return t;
  }();
  return table;
}

}  // namespace

int blade_product_sign(BladeMask a, BladeMask b) { return sign_table()[a * kTableSize + b]; }

Multivector::Multivector(int n) : n_(n) {
  if (n < 1 || n > kMaxDim) throw DomainError("Clifford dimension must lie in [1, 8]");
}

Multivector::Multivector(int n, const ScalarPoly& scalar) : Multivector(n) { add(0, scalar); }

Multivector Multivector::generator(int i, int n) {
  if (i < 1 || i > n) throw DomainError("generator c(e_" + std::to_string(i) + ") outside dimension");
  return blade(static_cast<BladeMask>(1u << (i - 1)), ScalarPoly(1L), n);
}

Multivector Multivector::blade(BladeMask m, const ScalarPoly& coef, int n) {
  Multivector out(n);
  if (m >= (1u << n)) throw DomainError("blade outside dimension");
  out.add(m, coef);
  return out;
}

Multivector Multivector::word(const std::vector<int>& indices, int n) {
  for (int i : indices)
    if (i < 1 || i > n) throw DomainError("generator index out of range");
  auto [sign, mask] = normalize_word(indices);
  return blade(mask, ScalarPoly(static_cast<long>(sign)), n);
}

ScalarPoly Multivector::coefficient(BladeMask m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? ScalarPoly() : it->second;
}

void Multivector::add(BladeMask m, const ScalarPoly& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Multivector& Multivector::operator+=(const Multivector& o) {
  if (o.n_ != n_) throw DomainError("Clifford dimension mismatch");
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& o) {
  if (o.n_ != n_) throw DomainError("Clifford dimension mismatch");
  for (const auto& [m, c] : o.terms_) add(m, -c);
  return *this;
}

Multivector& Multivector::operator*=(const ScalarPoly& c) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= c;
    it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

Multivector operator*(const Multivector& a, const Multivector& b) {
  if (a.n_ != b.n_) throw DomainError("Clifford dimension mismatch");
  Multivector out(a.n_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      ScalarPoly c = ca * cb;
      if (blade_product_sign(ma, mb) < 0) c = -c;
      out.add(static_cast<BladeMask>(ma ^ mb), c);
    }
  }
  return out;
}

Multivector Multivector::operator-() const {
  Multivector out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Multivector Multivector::map_coefficients(
    const std::function<ScalarPoly(const ScalarPoly&)>& fn) const {
  Multivector out(n_);
  for (const auto& [m, c] : terms_) out.add(m, fn(c));
  return out;
}

std::string Multivector::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    if (!out.empty()) out += " + ";
    if (m == 0) {
      out += "(" + c.to_string() + ")";
      continue;
    }
    out += "(" + c.to_string() + ")*c[";
    bool first = true;
    for (int i : mask_indices(m)) {
      if (!first) out += ",";
      out += std::to_string(i);
      first = false;
    }
    out += "]";
  }
  return out;
}

Multivector cliff_mul(const Multivector& a, const Multivector& b) { return a * b; }

Multivector commutator(const Multivector& a, const Multivector& b) { return a * b - b * a; }

Multivector anticommutator(const Multivector& a, const Multivector& b) { return a * b + b * a; }

Multivector grade_project(const Multivector& a, int k) {
  Multivector out(a.dim());
  for (const auto& [m, c] : a.terms())
    if (mask_grade(m) == k) out += Multivector::blade(m, c, a.dim());
  return out;
}

long spinor_dimension(int n) { return 1L << (n / 2); }

ScalarPoly spinor_trace(const Multivector& a) {
  return ScalarPoly(spinor_dimension(a.dim())) * a.scalar_part();
}

Multivector derive(const Multivector& a, int j) {
  return a.map_coefficients([j](const ScalarPoly& c) { return formal_derive(c, j); });
}

}  // namespace kkw
