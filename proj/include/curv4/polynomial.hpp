#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

namespace curv4 {

// Exact multivariate polynomial over the nine block eigenvalue variables
// a1,a2,a3,c1,c2,c3,b1,b2,b3 with 64-bit integer coefficients. Only what the
// rearrangement certificates need: ring operations and an exact zero test.
class Poly9 {
 public:
  static constexpr int kVars = 9;
  using Monomial = std::array<std::uint8_t, kVars>;

  Poly9() = default;
  static Poly9 constant(std::int64_t c);
  static Poly9 var(int i);

  Poly9 operator+(const Poly9& o) const;
  Poly9 operator-(const Poly9& o) const;
  Poly9 operator*(const Poly9& o) const;
  Poly9 operator*(std::int64_t s) const;

  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  std::string str() const;

 private:
  void prune();
  std::map<Monomial, std::int64_t> terms_;
};

struct CertificateResult {
  bool zero = false;
  std::size_t lhs_terms = 0;  // expanded term count before cancellation
  std::size_t rhs_terms = 0;
  std::string residual;       // leftover polynomial when not zero
};

// Exact expansions of both rearrangement identities with R = 2 (a1+a2+a3+
// c1+c2+c3) substituted, multiplied by 2 to clear the half-integer
// coefficients. zero == true certifies the identity as polynomials in the
// nine variables.
CertificateResult thm31_certificate();
CertificateResult prop61_certificate();

}  // namespace curv4
