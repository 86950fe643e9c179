#include "curv4/reaction.hpp"

#include <cmath>
#include <functional>

#include "curv4/errors.hpp"

namespace curv4 {

Mat3 sharp(const Mat3& d) {
  Mat3 c;
  c(0, 0) = d(1, 1) * d(2, 2) - d(1, 2) * d(2, 1);
  c(0, 1) = d(1, 2) * d(2, 0) - d(1, 0) * d(2, 2);
  c(0, 2) = d(1, 0) * d(2, 1) - d(1, 1) * d(2, 0);
  c(1, 0) = d(0, 2) * d(2, 1) - d(0, 1) * d(2, 2);
  c(1, 1) = d(0, 0) * d(2, 2) - d(0, 2) * d(2, 0);
  c(1, 2) = d(0, 1) * d(2, 0) - d(0, 0) * d(2, 1);
  c(2, 0) = d(0, 1) * d(1, 2) - d(0, 2) * d(1, 1);
  c(2, 1) = d(0, 2) * d(1, 0) - d(0, 0) * d(1, 2);
  c(2, 2) = d(0, 0) * d(1, 1) - d(0, 1) * d(1, 0);
  return c;
}

CurvOpRate reaction_rhs4(const CurvOp4& op) {
  CurvOpRate r;
  r.dA = 2.0 * (op.A * op.A + 2.0 * sharp(op.A) + op.B * op.B.transpose());
  r.dB = 2.0 * (op.A * op.B + op.B * op.C + 2.0 * sharp(op.B));
  r.dC = 2.0 * (op.C * op.C + 2.0 * sharp(op.C) + op.B.transpose() * op.B);
  return r;
}

Vec3 reaction_rhs3(const Vec3& m) {
  return Vec3(m(0) * m(0) + m(1) * m(2), m(1) * m(1) + m(0) * m(2),
              m(2) * m(2) + m(0) * m(1));
}

const char* flow_status_name(FlowStatus s) {
  switch (s) {
    case FlowStatus::completed: return "completed";
    case FlowStatus::blow_up: return "blow_up";
    case FlowStatus::step_failure: return "step_failure";
  }
  return "unknown";
}

namespace {

// Dormand-Prince 5(4) tableau (FSAL).
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kE[7] = {71.0 / 57600,     0.0,        -71.0 / 16695,
                          71.0 / 1920,      -17253.0 / 339200,
                          22.0 / 525,       -1.0 / 40};

struct StepOutcome {
  FlowStatus status = FlowStatus::completed;
  double t_star = 0.0;
  std::string diagnostic;
  long accepted = 0;
  long rejected = 0;
};

// Generic driver; on_accept returns the norm used for blow-up detection.
StepOutcome drive(VecX& y, const FlowControls& ctl,
                  const std::function<VecX(const VecX&)>& rhs,
                  const std::function<double(double, const VecX&)>& on_accept) {
  StepOutcome out;
  const int n = static_cast<int>(y.size());
  double t = 0.0;
  double h = ctl.h_init;
  double facold = 1e-4;
  constexpr double kBeta = 0.04;
  constexpr double kExpo = 0.2 - kBeta * 0.75;
  constexpr double kSafe = 0.9;

  double norms[3] = {0.0, 0.0, 0.0};
  int norm_count = 0;
  auto push_norm = [&](double v) {
    norms[0] = norms[1];
    norms[1] = norms[2];
    norms[2] = v;
    if (norm_count < 3) ++norm_count;
  };
  push_norm(on_accept(0.0, y));
  auto growing = [&]() {
    return norm_count >= 3 && norms[2] > norms[1] && norms[1] > norms[0];
  };

  std::vector<VecX> k(7, VecX::Zero(n));
  k[0] = rhs(y);
  for (long step = 0; step < ctl.max_steps; ++step) {
    if (t >= ctl.t_max) {
      out.status = FlowStatus::completed;
      return out;
    }
    h = std::min(h, ctl.t_max - t);
    VecX yt(n);
    for (int s = 1; s < 7; ++s) {
      yt = y;
      for (int j = 0; j < s; ++j) yt += h * kA[s][j] * k[j];
      k[s] = rhs(yt);
    }
    const VecX& y_new = yt;  // stage 7 argument equals the 5th-order solution
    double err = 0.0;
    bool finite = y_new.allFinite();
    if (finite) {
      for (int i = 0; i < n; ++i) {
        double e = 0.0;
        for (int s = 0; s < 7; ++s) e += kE[s] * k[s](i);
        e *= h;
        double sc = ctl.abs_tol +
                    ctl.rel_tol * std::max(std::abs(y(i)), std::abs(y_new(i)));
        err += (e / sc) * (e / sc);
      }
      err = std::sqrt(err / n);
    }
    if (finite && err <= 1.0) {
      t += h;
      y = y_new;
      k[0] = k[6];
      ++out.accepted;
      double nv = on_accept(t, y);
      push_norm(nv);
      if (nv > ctl.norm_ceiling && growing()) {
        out.status = FlowStatus::blow_up;
        out.t_star = t;
        return out;
      }
      double fac11 = std::pow(std::max(err, 1e-16), kExpo);
      double fac = fac11 / std::pow(facold, kBeta);
      fac = std::max(0.1, std::min(5.0, fac / kSafe));
      h = h / fac;
      facold = std::max(err, 1e-4);
    } else {
      ++out.rejected;
      if (!finite)
        h *= 0.1;
      else
        h /= std::min(5.0, std::pow(err, 0.2) / kSafe);
    }
    if (h < ctl.min_step) {
      if (growing()) {
        out.status = FlowStatus::blow_up;
        out.t_star = t;
      } else {
        out.status = FlowStatus::step_failure;
        out.diagnostic = "step size underflow at t = " + std::to_string(t);
      }
      return out;
    }
  }
  out.status = FlowStatus::step_failure;
  out.diagnostic = "step budget exhausted";
  return out;
}

void pack(const CurvOp4& op, VecX& y) {
  y(0) = op.A(0, 0); y(1) = op.A(0, 1); y(2) = op.A(0, 2);
  y(3) = op.A(1, 1); y(4) = op.A(1, 2); y(5) = op.A(2, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) y(6 + 3 * i + j) = op.B(i, j);
  y(15) = op.C(0, 0); y(16) = op.C(0, 1); y(17) = op.C(0, 2);
  y(18) = op.C(1, 1); y(19) = op.C(1, 2); y(20) = op.C(2, 2);
}

CurvOp4 unpack(const VecX& y, bool bianchi) {
  CurvOp4 op;
  op.A << y(0), y(1), y(2), y(1), y(3), y(4), y(2), y(4), y(5);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) op.B(i, j) = y(6 + 3 * i + j);
  op.C << y(15), y(16), y(17), y(16), y(18), y(19), y(17), y(19), y(20);
  op.bianchi_flag = bianchi;
  return op;
}

}  // namespace

ReactionTrajectory4 integrate4(const CurvOp4& init, const FlowControls& ctl) {
  if (!init.A.allFinite() || !init.B.allFinite() || !init.C.allFinite())
    raise(ErrorCode::invalid_argument, "initial operator has non-finite entries");
  ReactionTrajectory4 traj;
  VecX y(21);
  pack(init, y);
  auto rhs = [&](const VecX& v) {
    CurvOpRate r = reaction_rhs4(unpack(v, init.bianchi_flag));
    VecX dy(21);
    dy(0) = r.dA(0, 0); dy(1) = r.dA(0, 1); dy(2) = r.dA(0, 2);
    dy(3) = r.dA(1, 1); dy(4) = r.dA(1, 2); dy(5) = r.dA(2, 2);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) dy(6 + 3 * i + j) = r.dB(i, j);
    dy(15) = r.dC(0, 0); dy(16) = r.dC(0, 1); dy(17) = r.dC(0, 2);
    dy(18) = r.dC(1, 1); dy(19) = r.dC(1, 2); dy(20) = r.dC(2, 2);
    return dy;
  };
  long accepted_seen = 0;
  auto on_accept = [&](double t, const VecX& v) {
    CurvOp4 op = unpack(v, init.bianchi_flag);
    MonitorValues mv = monitor_functionals(op);
    traj.times.push_back(t);
    traj.monitors.push_back(mv);
    if (ctl.store_states && (accepted_seen % ctl.store_stride == 0)) {
      traj.state_times.push_back(t);
      traj.states.push_back(op);
    }
    ++accepted_seen;
    return mv.rm_norm;
  };
  StepOutcome out = drive(y, ctl, rhs, on_accept);
  traj.status = out.status;
  traj.t_star = out.t_star;
  traj.diagnostic = out.diagnostic;
  traj.steps_accepted = out.accepted;
  traj.steps_rejected = out.rejected;
  if (ctl.store_states &&
      (traj.state_times.empty() || traj.state_times.back() != traj.times.back())) {
    traj.state_times.push_back(traj.times.back());
    traj.states.push_back(unpack(y, init.bianchi_flag));
  }
  return traj;
}

ReactionTrajectory3 integrate3(const Vec3& init, const FlowControls& ctl) {
  if (!init.allFinite())
    raise(ErrorCode::invalid_argument, "initial triple has non-finite entries");
  ReactionTrajectory3 traj;
  VecX y(3);
  Vec3 m0 = init;
  std::sort(m0.data(), m0.data() + 3);
  y = m0;
  auto rhs = [](const VecX& v) -> VecX {
    return reaction_rhs3(Vec3(v(0), v(1), v(2)));
  };
  auto on_accept = [&](double t, const VecX& v) {
    Vec3 m(v(0), v(1), v(2));
    std::sort(m.data(), m.data() + 3);
    traj.times.push_back(t);
    traj.states.push_back(m);
    Monitor3 row;
    row.t = t;
    row.q = 2.0 * m(0) + m(1) + m(2);
    row.m12 = m(0) + m(1);
    row.norm = m.norm();
    traj.monitors.push_back(row);
    return row.norm;
  };
  StepOutcome out = drive(y, ctl, rhs, on_accept);
  traj.status = out.status;
  traj.t_star = out.t_star;
  traj.diagnostic = out.diagnostic;
  traj.steps_accepted = out.accepted;
  traj.steps_rejected = out.rejected;
  return traj;
}

}  // namespace curv4
