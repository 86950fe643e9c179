// Reference tensors and frozen expected values for the test suites.
//
// Every tensor here is assembled index-by-index from the textbook sectional
// formulas, deliberately bypassing the library's own constructors, so that a
// convention bug in the builders cannot cancel against the same bug in the
// checks. Expected spectra are hand-derived constants:
//
//   flat R^4     A = B = C = 0,          R = 0
//   round S^4    A = C = I, B = 0,       R = 12, Ric = 3 I
//   S^3 x R      A = C = I/2,            R = 6,  Ric = diag(2,2,2,0),
//                b_signed = (-1/2, 1/2, 1/2), det B < 0
//   S^2 x S^2    A = C ~ diag(0,0,1),    R = 4,  Ric = I
//   CP^2 (FS)    A ~ diag(0,0,6), C = 2I, R = 24, Ric = 6 I
//                (holomorphic sectional curvature 4)

#pragma once

#include <cmath>

#include "curv4/riemann.hpp"

namespace oracles {

inline double kd(int i, int j) { return i == j ? 1.0 : 0.0; }

// R(i,j,k,l) = k (d_ik d_jl - d_il d_jk): constant sectional curvature k.
inline curv4::RiemannTensor constant_sec(int dim, double k) {
  curv4::RiemannTensor rm(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int p = 0; p < dim; ++p)
        for (int q = 0; q < dim; ++q)
          rm.set_sym(i, j, p, q, k * (kd(i, p) * kd(j, q) - kd(i, q) * kd(j, p)));
  return rm;
}

inline curv4::RiemannTensor flat4() { return constant_sec(4, 0.0); }
inline curv4::RiemannTensor s4_round() { return constant_sec(4, 1.0); }

// Unit S^3 spanned by directions {0,1,2}; direction 3 flat.
inline curv4::RiemannTensor s3xr() {
  curv4::RiemannTensor rm(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) {
          bool sphere = i < 3 && j < 3 && p < 3 && q < 3;
          double v =
              sphere ? kd(i, p) * kd(j, q) - kd(i, q) * kd(j, p) : 0.0;
          rm.set_sym(i, j, p, q, v);
        }
  return rm;
}

// Unit spheres spanned by {0,1} and {2,3}.
inline curv4::RiemannTensor s2xs2() {
  curv4::RiemannTensor rm(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) {
          bool first = i < 2 && j < 2 && p < 2 && q < 2;
          bool second = i >= 2 && j >= 2 && p >= 2 && q >= 2;
          double v = (first || second)
                         ? kd(i, p) * kd(j, q) - kd(i, q) * kd(j, p)
                         : 0.0;
          rm.set_sym(i, j, p, q, v);
        }
  return rm;
}

// Fubini-Study with the standard complex structure J(e1)=e2, J(e3)=e4:
//   R(i,j,p,q) = gg - gg + JJ - JJ + 2JJ, holomorphic sectional curvature 4.
inline curv4::RiemannTensor cp2_fs() {
  double J[4][4] = {{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}};
  curv4::RiemannTensor rm(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) {
          double v = kd(i, p) * kd(j, q) - kd(i, q) * kd(j, p) +
                     J[i][p] * J[j][q] - J[i][q] * J[j][p] +
                     2.0 * J[i][j] * J[p][q];
          rm.set_sym(i, j, p, q, v);
        }
  return rm;
}

inline double max_abs_diff(const curv4::RiemannTensor& a,
                           const curv4::RiemannTensor& b) {
  double worst = 0.0;
  int n = a.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
          worst = std::max(worst, std::abs(a(i, j, p, q) - b(i, j, p, q)));
  return worst;
}

}  // namespace oracles
