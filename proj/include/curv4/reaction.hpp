#pragma once

#include <string>
#include <vector>

#include "curv4/curvop.hpp"

namespace curv4 {

// Cofactor matrix: D * sharp(D)^t = det(D) * I. Symmetric for symmetric D.
Mat3 sharp(const Mat3& d);

struct CurvOpRate {
  Mat3 dA, dB, dC;
};

// Reaction part of the curvature operator evolution:
//   A' = 2 (A^2 + 2 A# + B B^t),
//   B' = 2 (A B + B C + 2 B#),
//   C' = 2 (C^2 + 2 C# + B^t B).
// tr A' = 2 ((tr A)^2 + |B|^2), so tr A - tr C is a first integral on the
// Bianchi subspace.
CurvOpRate reaction_rhs4(const CurvOp4& op);

// d m_i = m_i^2 + m_j m_k (cyclic) on sorted triples.
Vec3 reaction_rhs3(const Vec3& m);

struct FlowControls {
  double t_max = 1.0;
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double norm_ceiling = 1e8;  // blow-up detection threshold on |Rm| (or |m|)
  double h_init = 1e-6;
  double min_step = 1e-13;
  long max_steps = 2000000;
  bool store_states = false;
  int store_stride = 1;  // every k-th accepted step when storing
};

enum class FlowStatus { completed, blow_up, step_failure };

const char* flow_status_name(FlowStatus s);

struct ReactionTrajectory4 {
  std::vector<double> times;            // accepted step times
  std::vector<MonitorValues> monitors;  // one row per accepted step
  std::vector<double> state_times;
  std::vector<CurvOp4> states;
  FlowStatus status = FlowStatus::completed;
  double t_star = 0.0;  // blow-up time when status == blow_up
  std::string diagnostic;
  long steps_accepted = 0;
  long steps_rejected = 0;
};

struct Monitor3 {
  double t = 0.0;
  double q = 0.0;    // 2 m1 + m2 + m3
  double m12 = 0.0;  // m1 + m2
  double norm = 0.0;
};

struct ReactionTrajectory3 {
  std::vector<double> times;
  std::vector<Vec3> states;  // kept sorted ascending after each step
  std::vector<Monitor3> monitors;
  FlowStatus status = FlowStatus::completed;
  double t_star = 0.0;
  std::string diagnostic;
  long steps_accepted = 0;
  long steps_rejected = 0;
};

// Embedded Dormand-Prince 5(4) pair with PI step-size control. Blow-up is
// declared once the norm exceeds controls.norm_ceiling after growing
// monotonically over the last three accepted steps; a step-size underflow
// without that growth pattern reports step_failure instead.
ReactionTrajectory4 integrate4(const CurvOp4& init, const FlowControls& controls);
ReactionTrajectory3 integrate3(const Vec3& init, const FlowControls& controls);

}  // namespace curv4
