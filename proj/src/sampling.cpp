#include "curv4/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "curv4/errors.hpp"
#include "curv4/rng.hpp"

namespace curv4 {

namespace {

constexpr int kAttemptBudget = 512;
constexpr std::uint64_t kOpStream = 0x4f50u;     // curvature operators
constexpr std::uint64_t kFrameStream = 0x4652u;  // frames
constexpr std::uint64_t kM3Stream = 0x4d33u;     // 3d triples

Mat3 gaussian_sym3(Rng& rng, double scale) {
  Mat3 g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = scale * rng.normal();
  return 0.5 * (g + g.transpose());
}

Mat3 gaussian3(Rng& rng, double scale) {
  Mat3 g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = scale * rng.normal();
  return g;
}

// Rejection check on the hot sampling path. Spectra are computed lazily --
// most draws fail on the first diagonal-block cone and never pay for the
// 4x4 Ricci eigensolve, let alone the B singular values (which no
// constraint uses). The same eigensolvers as spectral_summary keep the
// accept/reject decision bit-identical to a check against the full summary.
bool satisfies(const CurvOp4& op, const SampleSpec& spec) {
  Vec3 a_eigs, c_eigs;
  Vec4 ricci_eigs;
  bool have_a = false, have_c = false, have_ricci = false;
  auto a = [&]() -> const Vec3& {
    if (!have_a) {
      a_eigs = sym_eigs(op.A);
      have_a = true;
    }
    return a_eigs;
  };
  auto c = [&]() -> const Vec3& {
    if (!have_c) {
      c_eigs = sym_eigs(op.C);
      have_c = true;
    }
    return c_eigs;
  };
  auto ricci = [&]() -> const Vec4& {
    if (!have_ricci) {
      ricci_eigs = sym_eigs(ricci_endomorphism(op));
      have_ricci = true;
    }
    return ricci_eigs;
  };
  for (Constraint cst : spec.constraints) {
    switch (cst) {
      case Constraint::bianchi:
      case Constraint::einstein:
        break;  // enforced by construction
      case Constraint::wpic:
        if (a()(0) + a()(1) < 0 || c()(0) + c()(1) < 0) return false;
        break;
      case Constraint::pic:
        if (a()(0) + a()(1) <= 0 || c()(0) + c()(1) <= 0) return false;
        break;
      case Constraint::a_nonneg:
        if (a()(0) < 0) return false;
        break;
      case Constraint::c_nonneg:
        if (c()(0) < 0) return false;
        break;
      case Constraint::ricci_nonneg:
        if (ricci()(0) < 0) return false;
        break;
      case Constraint::ricci_2nonneg:
        if (ricci()(0) + ricci()(1) < 0) return false;
        break;
    }
  }
  return true;
}

// Smallest s >= 0 such that A + sI, C + sI satisfy every cone constraint
// with margin delta. Shifting both blocks adds s times the identity of the
// whole operator, which preserves tr A - tr C, moves each Ricci eigenvalue
// by 3s (sphere calibration: A = C = I has Ric = 3I) and the scalar by 12s.
double required_shift(const SpectralSummary& s, const SampleSpec& spec,
                      double delta) {
  double shift = 0.0;
  for (Constraint c : spec.constraints) {
    switch (c) {
      case Constraint::bianchi:
      case Constraint::einstein:
        break;
      case Constraint::wpic:
      case Constraint::pic: {
        double m = std::min(s.a_eigs(0) + s.a_eigs(1),
                            s.c_eigs(0) + s.c_eigs(1));
        shift = std::max(shift, (delta - m) / 2.0);
        break;
      }
      case Constraint::a_nonneg:
        shift = std::max(shift, delta - s.a_eigs(0));
        break;
      case Constraint::c_nonneg:
        shift = std::max(shift, delta - s.c_eigs(0));
        break;
      case Constraint::ricci_nonneg:
        shift = std::max(shift, (delta - s.ricci_eigs(0)) / 3.0);
        break;
      case Constraint::ricci_2nonneg:
        shift = std::max(
            shift, (delta - s.ricci_eigs(0) - s.ricci_eigs(1)) / 6.0);
        break;
    }
  }
  return std::max(shift, 0.0);
}

}  // namespace

const char* constraint_name(Constraint c) {
  switch (c) {
    case Constraint::bianchi: return "bianchi";
    case Constraint::wpic: return "wpic";
    case Constraint::pic: return "pic";
    case Constraint::a_nonneg: return "a_nonneg";
    case Constraint::c_nonneg: return "c_nonneg";
    case Constraint::ricci_nonneg: return "ricci_nonneg";
    case Constraint::ricci_2nonneg: return "ricci_2nonneg";
    case Constraint::einstein: return "einstein";
  }
  return "unknown";
}

Constraint constraint_from_name(const std::string& name) {
  for (Constraint c :
       {Constraint::bianchi, Constraint::wpic, Constraint::pic,
        Constraint::a_nonneg, Constraint::c_nonneg, Constraint::ricci_nonneg,
        Constraint::ricci_2nonneg, Constraint::einstein})
    if (name == constraint_name(c)) return c;
  raise(ErrorCode::invalid_argument, "unknown constraint '" + name + "'");
}

bool SampleSpec::has(Constraint c) const {
  return std::find(constraints.begin(), constraints.end(), c) !=
         constraints.end();
}

CurvOp4 sample_curvop(const SampleSpec& spec, std::uint64_t index,
                      SampleMeta* meta) {
  if (spec.scale <= 0.0)
    raise(ErrorCode::invalid_argument, "sample scale must be positive");
  bool einstein = spec.has(Constraint::einstein);
  bool bianchi = spec.has(Constraint::bianchi) || einstein;
  CurvOp4 op;
  SampleMeta local;
  local.index = index;
  for (int attempt = 0; attempt < kAttemptBudget; ++attempt) {
    Rng rng(spec.seed, kOpStream ^ index,
            static_cast<std::uint64_t>(attempt));
    op.A = gaussian_sym3(rng, spec.scale);
    op.B = einstein ? Mat3::Zero() : gaussian3(rng, spec.scale);
    op.C = gaussian_sym3(rng, spec.scale);
    if (bianchi) {
      double gap = op.A.trace() - op.C.trace();
      op.C += (gap / 3.0) * Mat3::Identity();
    }
    op.bianchi_flag = std::abs(op.A.trace() - op.C.trace()) <=
                      1e-10 * (1.0 + std::abs(op.A.trace()));
    local.attempts = attempt + 1;
    if (satisfies(op, spec)) {
      if (meta) *meta = local;
      return op;
    }
  }
  // Fallback: one identity shift on both diagonal blocks repairs every cone
  // constraint at once and keeps the Bianchi identity intact. The margin
  // keeps the repaired eigenvalues clear of the boundary under eigensolver
  // roundoff; strict cones get a visible interior margin.
  SpectralSummary s = spectral_summary(op);
  double delta = (spec.has(Constraint::pic) ? 1e-3 : 1e-9) * spec.scale;
  double shift = required_shift(s, spec, delta);
  op.A += shift * Mat3::Identity();
  op.C += shift * Mat3::Identity();
  local.shifted = true;
  local.shift = shift;
  if (!satisfies(op, spec))
    raise(ErrorCode::rejection_budget_exceeded,
          "constraints unmet after rejection budget and identity shift");
  if (meta) *meta = local;
  return op;
}

Mat4 sample_frame(std::uint64_t seed, std::uint64_t index) {
  Rng rng(seed, kFrameStream ^ index);
  Mat4 g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = rng.normal();
  // Modified Gram-Schmidt, applied twice for orthogonality near roundoff.
  for (int pass = 0; pass < 2; ++pass) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < j; ++k) g.col(j) -= g.col(k).dot(g.col(j)) * g.col(k);
      double n = g.col(j).norm();
      if (n < 1e-12) {
        // Degenerate draw; nudge deterministically and renormalize.
        g(j, j) += 1.0;
        n = g.col(j).norm();
      }
      g.col(j) /= n;
    }
  }
  if (g.determinant() < 0) g.col(3) = -g.col(3);
  return g;
}

Vec3 sample_m3(std::uint64_t seed, std::uint64_t index, double scale) {
  for (int attempt = 0; attempt < kAttemptBudget; ++attempt) {
    Rng rng(seed, kM3Stream ^ index, static_cast<std::uint64_t>(attempt));
    Vec3 m(scale * rng.normal(), scale * rng.normal(), scale * rng.normal());
    std::sort(m.data(), m.data() + 3);
    if (2.0 * m(0) + m(1) + m(2) >= 0.0) return m;
  }
  raise(ErrorCode::rejection_budget_exceeded,
        "no admissible 3d triple within attempt budget");
}

}  // namespace curv4
