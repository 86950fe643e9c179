#include "curv4/curvop.hpp"

#include <cmath>
#include <sstream>

#include "curv4/errors.hpp"

namespace curv4 {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

struct FormTerm {
  int i, j;   // i < j
  double w;
};

// Orthonormal bases of the self-dual (0..2) and anti-self-dual (3..5)
// two-forms, for the inner product in which {e_i ^ e_j, i < j} is an
// orthonormal basis and with the orientation e0 ^ e1 ^ e2 ^ e3.
const FormTerm kForms[6][2] = {
    {{0, 1, kInvSqrt2}, {2, 3, kInvSqrt2}},
    {{0, 2, kInvSqrt2}, {1, 3, -kInvSqrt2}},
    {{0, 3, kInvSqrt2}, {1, 2, kInvSqrt2}},
    {{0, 1, kInvSqrt2}, {2, 3, -kInvSqrt2}},
    {{0, 2, kInvSqrt2}, {1, 3, kInvSqrt2}},
    {{0, 3, kInvSqrt2}, {1, 2, -kInvSqrt2}},
};

double block_entry(const RiemannTensor& rm, int b, int c) {
  double s = 0.0;
  for (const FormTerm& p : kForms[b])
    for (const FormTerm& q : kForms[c])
      s += p.w * q.w * rm(p.i, p.j, q.i, q.j);
  return s;
}

// Traceless symmetric endomorphism carried by the off-diagonal block: the
// Ricci contraction of the reconstructed tensor with A = C = 0.
Mat4 traceless_ricci_from_b(const Mat3& B) {
  CurvOp4 mixed;
  mixed.B = B;
  RiemannTensor rm = curvop_to_riemann(mixed);
  return rm.ricci();
}

}  // namespace

CurvOp4 make_curvop(const Mat3& A, const Mat3& B, const Mat3& C) {
  double scale = std::max({A.cwiseAbs().maxCoeff(), B.cwiseAbs().maxCoeff(),
                           C.cwiseAbs().maxCoeff()});
  double tol = 1e-12 * (1.0 + scale);
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > tol ||
      (C - C.transpose()).cwiseAbs().maxCoeff() > tol)
    raise(ErrorCode::symmetry_violation, "diagonal blocks must be symmetric");
  CurvOp4 op;
  op.A = 0.5 * (A + A.transpose());
  op.B = B;
  op.C = 0.5 * (C + C.transpose());
  op.bianchi_flag =
      std::abs(op.A.trace() - op.C.trace()) <= 1e-10 * (1.0 + std::abs(op.A.trace()));
  return op;
}

CurvOp4 build_from_riemann(const RiemannTensor& rm, int orientation,
                           const MatX* gram) {
  if (rm.dim() != 4)
    raise(ErrorCode::invalid_argument, "curvature operator requires dim 4");
  if (orientation != 1 && orientation != -1)
    raise(ErrorCode::invalid_argument, "orientation must be +1 or -1");
  if (gram != nullptr) {
    MatX dev = *gram - MatX::Identity(4, 4);
    if (dev.cwiseAbs().maxCoeff() > 1e-10)
      raise(ErrorCode::non_orthonormal_frame,
            "frame Gram matrix deviates from identity");
  }
  double scale = rm.max_abs();
  double tol = 1e-8 * (1.0 + scale);
  if (rm.symmetry_residual() > tol)
    raise(ErrorCode::symmetry_violation,
          "input violates algebraic curvature symmetries");

  Eigen::Matrix<double, 6, 6> m;
  for (int b = 0; b < 6; ++b)
    for (int c = 0; c < 6; ++c) m(b, c) = block_entry(rm, b, c);

  CurvOp4 op;
  if (orientation == 1) {
    op.A = m.block<3, 3>(0, 0);
    op.B = m.block<3, 3>(0, 3);
    op.C = m.block<3, 3>(3, 3);
  } else {
    op.A = m.block<3, 3>(3, 3);
    op.B = m.block<3, 3>(0, 3).transpose();
    op.C = m.block<3, 3>(0, 0);
  }
  op.A = 0.5 * (op.A + op.A.transpose());
  op.C = 0.5 * (op.C + op.C.transpose());
  op.bianchi_flag = rm.bianchi_residual() <= tol;
  return op;
}

RiemannTensor curvop_to_riemann(const CurvOp4& op) {
  Eigen::Matrix<double, 6, 6> m;
  m.block<3, 3>(0, 0) = op.A;
  m.block<3, 3>(0, 3) = op.B;
  m.block<3, 3>(3, 0) = op.B.transpose();
  m.block<3, 3>(3, 3) = op.C;
  RiemannTensor rm(4);
  for (int b = 0; b < 6; ++b)
    for (int c = 0; c < 6; ++c) {
      double v = m(b, c);
      if (v == 0.0) continue;
      for (const FormTerm& p : kForms[b])
        for (const FormTerm& q : kForms[c]) {
          double w = v * p.w * q.w;
          rm.at(p.i, p.j, q.i, q.j) += w;
          rm.at(p.j, p.i, q.i, q.j) -= w;
          rm.at(p.i, p.j, q.j, q.i) -= w;
          rm.at(p.j, p.i, q.j, q.i) += w;
        }
    }
  return rm;
}

Mat4 ricci_endomorphism(const CurvOp4& op) {
  double r = scalar_curvature(op);
  return 0.25 * r * Mat4::Identity() + traceless_ricci_from_b(op.B);
}

SpectralSummary spectral_summary(const CurvOp4& op) {
  SpectralSummary s;
  s.a_eigs = sym_eigs(op.A);
  s.c_eigs = sym_eigs(op.C);
  s.b_singular = singular_values(op.B);
  double det = op.B.determinant();
  double degeneracy = 1e-12 * std::pow(1.0 + s.b_singular(2), 3);
  s.b_det_sign = std::abs(det) <= degeneracy ? 0 : (det > 0 ? 1 : -1);
  s.b_signed = s.b_singular;
  if (s.b_det_sign < 0) s.b_signed(0) = -s.b_singular(0);
  s.scalar = scalar_curvature(op);
  Mat4 ric = ricci_endomorphism(op);
  s.ricci_eigs = sym_eigs(ric);
  s.traceless_ricci_eigs = s.ricci_eigs - Vec4::Constant(0.25 * s.scalar);
  s.rm_norm = std::sqrt(op.A.squaredNorm() + op.C.squaredNorm() +
                        2.0 * op.B.squaredNorm());
  s.ricci_norm_sq = s.ricci_eigs.squaredNorm();
  return s;
}

Vec4 ricci_from_blocks(const SpectralSummary& s, double tol) {
  double quarter_r = 0.25 * s.scalar;
  auto eigs_for = [&](double b1, double b2, double b3) {
    return sorted4(b1 - b2 - b3 + quarter_r, b2 - b1 - b3 + quarter_r,
                   b3 - b1 - b2 + quarter_r, b1 + b2 + b3 + quarter_r);
  };
  double tol_eff = tol * (1.0 + s.rm_norm);
  // Even sign flips are gauge; pattern 0 is the signed convention itself.
  const int patterns[4][3] = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  int matched = -1;
  Vec4 candidate;
  for (int p = 0; p < 4; ++p) {
    Vec4 v = eigs_for(patterns[p][0] * s.b_signed(0),
                      patterns[p][1] * s.b_signed(1),
                      patterns[p][2] * s.b_signed(2));
    if ((v - s.ricci_eigs).cwiseAbs().maxCoeff() <= tol_eff) {
      matched = p;
      candidate = v;
      break;
    }
  }
  if (matched == 0) return candidate;
  std::ostringstream msg;
  if (matched < 0)
    msg << "no even sign-flip gauge of b_signed reproduces the Ricci spectrum";
  else
    msg << "Ricci spectrum matches sign-flip gauge " << matched
        << " instead of the signed convention";
  raise(ErrorCode::convention_mismatch, msg.str());
}

ConeReport classify_cones(const SpectralSummary& s, double tol) {
  double t = tol * (1.0 + s.rm_norm);
  ConeReport rep;
  rep.margin_a12 = s.a_eigs(0) + s.a_eigs(1);
  rep.margin_c12 = s.c_eigs(0) + s.c_eigs(1);
  rep.margin_ricci1 = s.ricci_eigs(0);
  rep.margin_ricci2 = s.ricci_eigs(0) + s.ricci_eigs(1);
  rep.margin_v = s.scalar - 4.0 * s.b_singular(2);
  rep.pic = rep.margin_a12 > t && rep.margin_c12 > t;
  rep.wpic = rep.margin_a12 >= -t && rep.margin_c12 >= -t;
  rep.half_pic = rep.margin_a12 > t || rep.margin_c12 > t;
  rep.half_wpic = rep.margin_a12 >= -t || rep.margin_c12 >= -t;
  rep.a_nonneg = s.a_eigs(0) >= -t;
  rep.c_nonneg = s.c_eigs(0) >= -t;
  rep.ricci_nonneg = rep.margin_ricci1 >= -t;
  // ricci_nonneg must imply ricci_2nonneg at the tolerance boundary.
  rep.ricci_2nonneg = rep.margin_ricci2 >= -t || rep.ricci_nonneg;
  double denom = std::min(rep.margin_a12, rep.margin_c12);
  if (denom > t) {
    double numer =
        std::max({s.a_eigs(2), s.b_singular(2), s.c_eigs(2)});
    rep.uniform_pic_lambda = numer / denom;
  }
  return rep;
}

double isotropic_curvature(const RiemannTensor& rm, const Mat4& frame) {
  if (rm.dim() != 4)
    raise(ErrorCode::invalid_argument, "isotropic curvature requires dim 4");
  Mat4 gram = frame.transpose() * frame;
  if ((gram - Mat4::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    raise(ErrorCode::non_orthonormal_frame, "frame is not orthonormal");
  VecX f1 = frame.col(0), f2 = frame.col(1), f3 = frame.col(2),
       f4 = frame.col(3);
  return rm.contract(f1, f3, f1, f3) + rm.contract(f1, f4, f1, f4) +
         rm.contract(f2, f3, f2, f3) + rm.contract(f2, f4, f2, f4) -
         2.0 * rm.contract(f1, f2, f3, f4);
}

NormBoundReport norm_bound_check(const SpectralSummary& s, double tol) {
  double t = tol * (1.0 + s.rm_norm);
  NormBoundReport rep;
  rep.rm_norm = s.rm_norm;
  rep.scalar = s.scalar;
  rep.applicable =
      s.a_eigs(0) >= -t && s.c_eigs(0) >= -t && s.ricci_eigs(0) >= -t;
  rep.holds = rep.applicable && s.rm_norm <= s.scalar * (1.0 + 1e-9) + t;
  return rep;
}

MonitorValues monitor_functionals(const CurvOp4& op) {
  MonitorValues mv;
  Vec3 a = sym_eigs(op.A);
  Vec3 c = sym_eigs(op.C);
  Vec3 sig = singular_values(op.B);
  double det = op.B.determinant();
  double degeneracy = 1e-12 * std::pow(1.0 + sig(2), 3);
  double b1 = (std::abs(det) > degeneracy && det < 0) ? -sig(0) : sig(0);
  mv.scalar = scalar_curvature(op);
  mv.u = mv.scalar + 4.0 * (b1 - sig(1) - sig(2));
  mv.v = mv.scalar - 4.0 * sig(2);
  mv.min_a12 = a(0) + a(1);
  mv.min_c12 = c(0) + c(1);
  mv.tr_gap = op.A.trace() - op.C.trace();
  mv.rm_norm = std::sqrt(op.A.squaredNorm() + op.C.squaredNorm() +
                         2.0 * op.B.squaredNorm());
  return mv;
}

}  // namespace curv4
