#include "curv4/polynomial.hpp"

#include <sstream>

namespace curv4 {

Poly9 Poly9::constant(std::int64_t c) {
  Poly9 p;
  if (c != 0) p.terms_[Monomial{}] = c;
  return p;
}

Poly9 Poly9::var(int i) {
  Poly9 p;
  Monomial m{};
  m[static_cast<std::size_t>(i)] = 1;
  p.terms_[m] = 1;
  return p;
}

void Poly9::prune() {
  for (auto it = terms_.begin(); it != terms_.end();)
    it = it->second == 0 ? terms_.erase(it) : std::next(it);
}

Poly9 Poly9::operator+(const Poly9& o) const {
  Poly9 r = *this;
  for (const auto& [m, c] : o.terms_) r.terms_[m] += c;
  r.prune();
  return r;
}

Poly9 Poly9::operator-(const Poly9& o) const {
  Poly9 r = *this;
  for (const auto& [m, c] : o.terms_) r.terms_[m] -= c;
  r.prune();
  return r;
}

Poly9 Poly9::operator*(const Poly9& o) const {
  Poly9 r;
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) {
      Monomial m;
      for (int i = 0; i < kVars; ++i)
        m[static_cast<std::size_t>(i)] =
            static_cast<std::uint8_t>(m1[static_cast<std::size_t>(i)] +
                                      m2[static_cast<std::size_t>(i)]);
      r.terms_[m] += c1 * c2;
    }
  r.prune();
  return r;
}

Poly9 Poly9::operator*(std::int64_t s) const {
  Poly9 r = *this;
  for (auto& [m, c] : r.terms_) c *= s;
  r.prune();
  return r;
}

std::string Poly9::str() const {
  static const char* names[kVars] = {"a1", "a2", "a3", "c1", "c2",
                                     "c3", "b1", "b2", "b3"};
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << (c >= 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    first = false;
    os << std::abs(c);
    for (int i = 0; i < kVars; ++i)
      for (int k = 0; k < m[static_cast<std::size_t>(i)]; ++k)
        os << "*" << names[i];
  }
  return os.str();
}

namespace {

struct Vars {
  Poly9 a1 = Poly9::var(0), a2 = Poly9::var(1), a3 = Poly9::var(2);
  Poly9 c1 = Poly9::var(3), c2 = Poly9::var(4), c3 = Poly9::var(5);
  Poly9 b1 = Poly9::var(6), b2 = Poly9::var(7), b3 = Poly9::var(8);
  Poly9 r() const { return (a1 + a2 + a3 + c1 + c2 + c3) * 2; }
  Poly9 b_norm_sq() const { return b1 * b1 + b2 * b2 + b3 * b3; }
};

CertificateResult certify(const Poly9& lhs, const Poly9& rhs) {
  CertificateResult res;
  res.lhs_terms = lhs.term_count();
  res.rhs_terms = rhs.term_count();
  Poly9 diff = lhs - rhs;
  res.zero = diff.is_zero();
  if (!res.zero) res.residual = diff.str();
  return res;
}

}  // namespace

CertificateResult thm31_certificate() {
  Vars v;
  Poly9 r = v.r();
  Poly9 u = r + v.b1 * 4 - (v.b2 + v.b3) * 4;
  // Twice the drift expression for R + 4 b1 - 4 (b2 + b3).
  Poly9 lhs = r * r + v.b_norm_sq() * 16 + (v.a1 + v.c1) * v.b1 * 16 +
              v.b2 * v.b3 * 32 - (v.a2 + v.c2) * v.b2 * 16 -
              (v.a3 + v.c3) * v.b3 * 16 - v.b1 * (v.b2 + v.b3) * 32;
  Poly9 rhs = u * u + (v.b2 - v.b1) * (v.a3 + v.c3) * 16 +
              (v.b3 - v.b1) * (v.a2 + v.c2) * 16 +
              (v.b2 + v.b3) * (v.a1 + v.c1) * 16;
  return certify(lhs, rhs);
}

CertificateResult prop61_certificate() {
  Vars v;
  Poly9 r = v.r();
  Poly9 w = r - v.b3 * 4;
  // Twice the drift expression for R - 4 b3.
  Poly9 lhs = r * r + v.b_norm_sq() * 16 -
              (v.a3 + v.c3) * v.b3 * 16 - v.b1 * v.b2 * 32;
  Poly9 rhs = w * w + (v.b2 - v.b1) * (v.b2 - v.b1) * 16 +
              (v.a1 + v.a2 + v.c1 + v.c2) * v.b3 * 16;
  return certify(lhs, rhs);
}

}  // namespace curv4
