#pragma once

#include <optional>

#include "curv4/riemann.hpp"

namespace curv4 {

// Curvature operator on two-forms in dimension four, stored as the blocks of
// the matrix [[A, B], [B^t, C]] with respect to the splitting of two-forms
// into self-dual and anti-self-dual parts. A and C are kept symmetric;
// bianchi_flag records whether the source tensor satisfied the first Bianchi
// identity, which for the blocks is equivalent to tr A = tr C.
struct CurvOp4 {
  Mat3 A = Mat3::Zero();
  Mat3 B = Mat3::Zero();
  Mat3 C = Mat3::Zero();
  bool bianchi_flag = false;
};

// Scalar curvature of the operator; by the trace identity R = 4 tr A.
inline double scalar_curvature(const CurvOp4& op) { return 4.0 * op.A.trace(); }

// Validates symmetry of A and C (within 1e-12 of their scale), symmetrizes
// exactly, and sets bianchi_flag from |tr A - tr C| <= 1e-10 (1 + |tr A|).
CurvOp4 make_curvop(const Mat3& A, const Mat3& B, const Mat3& C);

// Blocks of a curvature tensor given in an orthonormal frame.
// `orientation` (+1 or -1) says how the frame is oriented; for -1 the roles
// of the self-dual and anti-self-dual spaces are exchanged (A and C swap and
// B transposes). The frame Gram matrix may be passed to assert orthonormality.
CurvOp4 build_from_riemann(const RiemannTensor& rm, int orientation = +1,
                           const MatX* gram = nullptr);

// Curvature tensor with the given blocks (orthonormal frame, positively
// oriented). Inverse of build_from_riemann on symmetric block data.
RiemannTensor curvop_to_riemann(const CurvOp4& op);

// Ricci endomorphism reconstructed from (R, B): (R/4) I plus the traceless
// part determined linearly by B. For Bianchi operators this agrees with the
// contraction of curvop_to_riemann(op).
Mat4 ricci_endomorphism(const CurvOp4& op);

struct SpectralSummary {
  Vec3 a_eigs;                // ascending
  Vec3 c_eigs;                // ascending
  Vec3 b_singular;            // ascending, nonnegative
  int b_det_sign = 0;         // sign of det B; 0 when degenerate
  Vec3 b_signed;              // ascending; singular values with det sign on one
  Vec4 ricci_eigs;            // ascending
  Vec4 traceless_ricci_eigs;  // ricci_eigs - R/4
  double scalar = 0.0;
  double rm_norm = 0.0;       // sqrt(|A|^2 + |C|^2 + 2 |B|^2)
  double ricci_norm_sq = 0.0;
};

SpectralSummary spectral_summary(const CurvOp4& op);

// Ricci eigenvalues from the signed B-spectrum and R alone:
// {b1 - b2 - b3, b2 - b1 - b3, b3 - b1 - b2, b1 + b2 + b3} + R/4, sorted.
// Cross-checked against summary.ricci_eigs; on mismatch the four even
// sign-flip gauges of b_signed are retried and the error reports which, if
// any, matches.
Vec4 ricci_from_blocks(const SpectralSummary& s, double tol = 1e-9);

struct ConeReport {
  bool pic = false;          // A1 + A2 > 0 and C1 + C2 > 0
  bool wpic = false;         // A1 + A2 >= 0 and C1 + C2 >= 0
  bool half_pic = false;     // A1 + A2 > 0 or C1 + C2 > 0
  bool half_wpic = false;    // A1 + A2 >= 0 or C1 + C2 >= 0
  bool a_nonneg = false;     // A >= 0
  bool c_nonneg = false;     // C >= 0
  bool ricci_nonneg = false;
  bool ricci_2nonneg = false;  // sum of two smallest Ricci eigenvalues >= 0
  double margin_a12 = 0.0;     // A1 + A2
  double margin_c12 = 0.0;     // C1 + C2
  double margin_ricci1 = 0.0;  // smallest Ricci eigenvalue
  double margin_ricci2 = 0.0;  // sum of two smallest Ricci eigenvalues
  double margin_v = 0.0;       // R - 4 sigma3(B)
  std::optional<double> uniform_pic_lambda;  // max{A3,sigma3,C3}/min margin
};

// All tests use the effective tolerance tol * (1 + rm_norm).
ConeReport classify_cones(const SpectralSummary& s, double tol = 1e-9);

// Complex sectional curvature of the isotropic plane spanned by the frame:
// R(f1,f3,f1,f3) + R(f1,f4,f1,f4) + R(f2,f3,f2,f3) + R(f2,f4,f2,f4)
// - 2 R(f1,f2,f3,f4). `frame` holds f1..f4 as columns; it must be orthonormal
// within 1e-10.
double isotropic_curvature(const RiemannTensor& rm, const Mat4& frame);

struct NormBoundReport {
  bool applicable = false;  // A >= 0, C >= 0 and Ricci >= 0 at tolerance
  bool holds = false;       // rm_norm <= R (1 + 1e-9) when applicable
  double rm_norm = 0.0;
  double scalar = 0.0;
};

NormBoundReport norm_bound_check(const SpectralSummary& s, double tol = 1e-9);

// Monitored functionals of the reaction flow, all exact functions of the
// summary: u = R + 4 b1 - 4 (b2 + b3) on the signed spectrum (equal to four
// times the smallest Ricci eigenvalue) and v = R - 4 sigma3 (equal to twice
// the sum of the two smallest Ricci eigenvalues).
struct MonitorValues {
  double u = 0.0;
  double v = 0.0;
  double min_a12 = 0.0;
  double min_c12 = 0.0;
  double tr_gap = 0.0;  // tr A - tr C
  double rm_norm = 0.0;
  double scalar = 0.0;
};

MonitorValues monitor_functionals(const CurvOp4& op);

}  // namespace curv4
