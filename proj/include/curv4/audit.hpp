#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "curv4/reaction.hpp"
#include "curv4/sampling.hpp"

namespace curv4 {

// One failing (or, for falsification searches, finding) sample: the input
// operator plus the named margins that witnessed the violation.
struct Counterexample {
  std::uint64_t index = 0;
  CurvOp4 op;
  std::map<std::string, double> margins;
  std::string note;
};

// Outcome of a sampling campaign. `counterexamples` stores at most
// kMaxStoredCounterexamples payloads; `counterexample_count` is the full
// count, so passes + counterexample_count == total always holds.
struct AuditReport {
  std::string campaign;
  std::uint64_t seed = 0;
  std::uint64_t total = 0;
  std::uint64_t passes = 0;
  double worst_residual = 0.0;
  std::vector<Counterexample> counterexamples;
  std::uint64_t counterexample_count = 0;
  double wall_time = 0.0;  // seconds; informational, not part of report identity
  double tol = 0.0;
  double scale = 1.0;
  std::vector<std::string> notes;
};

inline constexpr int kMaxStoredCounterexamples = 16;

// Registered campaign names, in the order they are documented.
const std::vector<std::string>& campaign_names();

// Constraints a campaign requires in its SampleSpec (extra constraints are
// allowed, missing ones raise ConstraintMismatch).
const std::vector<Constraint>& campaign_required_constraints(
    const std::string& name);

// Runs one campaign over spec.count samples. Every sample outcome is a pure
// function of (campaign, spec.seed, index, spec.scale, tol); threads only
// split the index range, so reports are identical for any thread count.
// threads <= 0 picks a machine-dependent worker count.
//
// Campaigns:
//   thm31_rearrangement   exact rearrangement of 1/2 R^2 + 8|B|^2 + ... into
//                         1/2 u^2 + nonnegative-under-WPIC terms (signed B).
//   prop61_rearrangement  the analogous rearrangement for v = R - 4 sigma3
//                         (unsigned singular values).
//   lemma22_correspondence signed-B multiset formula vs the direct Ricci
//                         spectrum.
//   lemma21_consequences  on WPIC samples, Ric_ii + Ric_jj - 2 R_ijij >= 0
//                         and R >= 0 over sampled orthonormal frames.
//   rm_leq_r              on A,C,Ric >= 0 samples, |Rm| <= R and
//                         |Rc|^2 <= R^2.
//   prop64_forward        A3 <= L(A1+A2) and C3 <= L(C1+C2) imply
//                         R <= 4(L+1) min(A1+A2, C1+C2).
//   prop64_max_equivalence falsification search: operators that satisfy the
//                         max-side bound R <= 4(L+1) max(A1+A2,C1+C2) with
//                         small L yet admit no pairwise pinching constant
//                         below 1e3; findings are the expected product.
AuditReport run_identity_campaign(const std::string& name,
                                  const SampleSpec& spec, double tol = 1e-9,
                                  int threads = 0);

struct FrameMinResult {
  double min_value = 0.0;
  Mat4 frame = Mat4::Identity();
  int restarts = 0;
  long iterations = 0;  // accepted descent steps over all restarts
};

// Local minimization of the frame isotropic-curvature functional by gradient
// descent over the rotation group (Cayley steps in the six skew directions),
// restarted from Haar-random frames of both orientations. For tensors built
// from Bianchi block operators the minimum equals 2 min(A1+A2, C1+C2).
FrameMinResult minimize_isotropic_over_frames(const RiemannTensor& rm,
                                              int restarts,
                                              std::uint64_t seed = 0x46524d45);

// Cone-preservation audit for the four-dimensional reaction flow: integrates
// spec.count trajectories from sampled initial operators and checks, on every
// accepted step, min(A1+A2, C1+C2) >= -tol (1 + |Rm|), the same for u and v
// whenever the corresponding initial value is nonnegative, and the trace-gap
// bound |tr A - tr C| <= (tol/10) (1 + |Rm|). Requires bianchi and wpic in
// the spec constraints.
struct FlowAuditReport {
  std::uint64_t total = 0;
  std::uint64_t passes = 0;
  double worst_min_a12c12 = 0.0;  // min over steps of margin / (1 + |Rm|)
  double worst_u = 0.0;
  double worst_v = 0.0;
  double worst_tr_gap = 0.0;  // max over steps of |tr gap| / (1 + |Rm|)
  std::uint64_t blow_ups = 0;
  std::uint64_t step_failures = 0;
  std::vector<std::uint64_t> failing_indices;  // capped like counterexamples
  std::uint64_t failure_count = 0;
  double wall_time = 0.0;
};

FlowAuditReport audit_wpic_flow(const SampleSpec& spec,
                                const FlowControls& controls,
                                double tol = 1e-6, int threads = 0);

// Same for the three-dimensional eigenvalue system: trajectories start from
// sorted triples with 2 m1 + m2 + m3 >= 0 and must keep that quantity above
// -tol (1 + |m|).
struct FlowAuditReport3 {
  std::uint64_t total = 0;
  std::uint64_t passes = 0;
  double worst_q = 0.0;  // min over steps of (2 m1 + m2 + m3) / (1 + |m|)
  std::uint64_t blow_ups = 0;
  std::uint64_t step_failures = 0;
  std::vector<std::uint64_t> failing_indices;
  std::uint64_t failure_count = 0;
  double wall_time = 0.0;
};

FlowAuditReport3 audit_m3_flow(std::uint64_t seed, std::uint64_t count,
                               double scale, const FlowControls& controls,
                               double tol = 1e-8, int threads = 0);

}  // namespace curv4
