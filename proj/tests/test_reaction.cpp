#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "curv4/reaction.hpp"
#include "curv4/sampling.hpp"

using namespace curv4;

TEST_CASE("sharp is the cofactor matrix") {
  Mat3 d;
  d << 2, 1, 0, 1, 3, -1, 0, -1, 1;
  Mat3 s = sharp(d);
  CHECK((d * s.transpose() - d.determinant() * Mat3::Identity()).norm() <
        1e-12);
  CHECK((s - s.transpose()).norm() < 1e-12);  // symmetric input

  CHECK((sharp(Mat3::Identity()) - Mat3::Identity()).norm() < 1e-14);
}

TEST_CASE("rhs structure on symmetric data") {
  // A = C = a I, B = 0 evolves like a' = 6 a^2 for the diagonal entries
  CurvOp4 op = make_curvop(2.0 * Mat3::Identity(), Mat3::Zero(),
                           2.0 * Mat3::Identity());
  CurvOpRate rate = reaction_rhs4(op);
  CHECK((rate.dA - 24.0 * Mat3::Identity()).norm() < 1e-12);
  CHECK((rate.dC - 24.0 * Mat3::Identity()).norm() < 1e-12);
  CHECK(rate.dB.norm() < 1e-14);

  // the trace gap tr A - tr C is a first integral: d(tr A) = d(tr C) on
  // Bianchi data
  SampleSpec spec;
  spec.seed = 99;
  spec.count = 1;
  spec.constraints = {Constraint::bianchi};
  for (std::uint64_t i = 0; i < 20; ++i) {
    CurvOp4 s = sample_curvop(spec, i);
    CurvOpRate r = reaction_rhs4(s);
    CHECK(std::abs(r.dA.trace() - r.dC.trace()) <
          1e-10 * (1.0 + std::abs(r.dA.trace())));
  }
}

TEST_CASE("three-dimensional rhs at the cone boundary") {
  Vec3 rhs = reaction_rhs3(Vec3(-1.0, 1.0, 1.0));
  // q = 2 m1 + m2 + m3 has derivative exactly 4 here
  CHECK(2.0 * rhs(0) + rhs(1) + rhs(2) == 4.0);
}

TEST_CASE("symmetric initial data blows up at t = 1/(6 a0)") {
  for (double a0 : {0.5, 1.0, 2.0}) {
    CurvOp4 op = make_curvop(a0 * Mat3::Identity(), Mat3::Zero(),
                             a0 * Mat3::Identity());
    FlowControls controls;
    controls.t_max = 1.0 / (3.0 * a0);  // past the expected singularity
    ReactionTrajectory4 tr = integrate4(op, controls);
    REQUIRE(tr.status == FlowStatus::blow_up);
    double expected = 1.0 / (6.0 * a0);
    CHECK(std::abs(tr.t_star - expected) <= 0.01 * expected);
  }
}

TEST_CASE("integrator matches the closed-form symmetric solution") {
  // a(t) = a0 / (1 - 6 a0 t); compare the scalar monitor at stored times
  double a0 = 1.0;
  CurvOp4 op = make_curvop(a0 * Mat3::Identity(), Mat3::Zero(),
                           a0 * Mat3::Identity());
  FlowControls controls;
  controls.t_max = 0.9 / 6.0;  // stop before the singularity
  controls.rel_tol = 1e-10;
  controls.store_states = true;
  ReactionTrajectory4 tr = integrate4(op, controls);
  REQUIRE(tr.status == FlowStatus::completed);
  REQUIRE(tr.states.size() == tr.state_times.size());
  REQUIRE(!tr.states.empty());
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    double t = tr.state_times[i];
    double exact = 12.0 * a0 / (1.0 - 6.0 * a0 * t);
    double got = scalar_curvature(tr.states[i]);
    CHECK(std::abs(got - exact) <= 1e-6 * exact);
  }
}

TEST_CASE("zero initial data stays zero") {
  FlowControls controls;
  ReactionTrajectory4 tr = integrate4(CurvOp4{}, controls);
  CHECK(tr.status == FlowStatus::completed);
  for (const MonitorValues& m : tr.monitors) CHECK(m.rm_norm == 0.0);
}

TEST_CASE("monitor rows are aligned and start at t = 0") {
  SampleSpec spec;
  spec.seed = 31;
  spec.count = 1;
  spec.scale = 0.5;
  spec.constraints = {Constraint::bianchi, Constraint::wpic};
  CurvOp4 op = sample_curvop(spec, 3);
  FlowControls controls;
  controls.t_max = 0.05;
  controls.store_states = true;
  controls.store_stride = 4;
  ReactionTrajectory4 tr = integrate4(op, controls);
  REQUIRE(!tr.times.empty());
  CHECK(tr.times.front() == 0.0);
  CHECK(tr.times.size() == tr.monitors.size());
  for (std::size_t i = 1; i < tr.times.size(); ++i)
    CHECK(tr.times[i] > tr.times[i - 1]);
  // the final state is stored regardless of the stride
  REQUIRE(!tr.state_times.empty());
  CHECK(tr.state_times.back() == tr.times.back());

  MonitorValues m0 = monitor_functionals(op);
  CHECK(tr.monitors.front().u == m0.u);
  CHECK(tr.monitors.front().v == m0.v);
}

TEST_CASE("trace gap is preserved along the flow") {
  SampleSpec spec;
  spec.seed = 77;
  spec.count = 1;
  spec.constraints = {Constraint::bianchi, Constraint::wpic};
  for (std::uint64_t i = 0; i < 5; ++i) {
    CurvOp4 op = sample_curvop(spec, i);
    FlowControls controls;
    controls.t_max = 0.02;
    ReactionTrajectory4 tr = integrate4(op, controls);
    for (const MonitorValues& m : tr.monitors)
      CHECK(std::abs(m.tr_gap) <= 1e-8 * (1.0 + m.rm_norm));
  }
}

TEST_CASE("three-dimensional system preserves the half-space") {
  SUBCASE("symmetric triple matches m(t) = m0/(1 - 2 m0 t)") {
    FlowControls controls;
    controls.t_max = 1.0;
    ReactionTrajectory3 tr = integrate3(Vec3(1.0, 1.0, 1.0), controls);
    REQUIRE(tr.status == FlowStatus::blow_up);
    CHECK(std::abs(tr.t_star - 0.5) <= 0.005);
    for (const Monitor3& m : tr.monitors) CHECK(m.q >= 0.0);
  }

  SUBCASE("sampled triples keep q nonnegative") {
    FlowControls controls;
    controls.t_max = 0.25;
    for (std::uint64_t i = 0; i < 25; ++i) {
      Vec3 m0 = sample_m3(13, i);
      ReactionTrajectory3 tr = integrate3(m0, controls);
      double worst = 0.0;
      for (const Monitor3& m : tr.monitors)
        worst = std::min(worst, m.q / (1.0 + m.norm));
      CHECK(worst >= -1e-8);
      // states remain sorted
      for (const Vec3& s : tr.states) {
        CHECK(s(0) <= s(1) + 1e-12);
        CHECK(s(1) <= s(2) + 1e-12);
      }
    }
  }

  SUBCASE("boundary ray stays on the boundary") {
    // m = (-s, s, s): q = 0 and dq/dt = 4 s^2 >= 0 pushes inward; the flow
    // must not cross to q < 0 beyond tolerance
    FlowControls controls;
    controls.t_max = 0.2;
    ReactionTrajectory3 tr = integrate3(Vec3(-1.0, 1.0, 1.0), controls);
    for (const Monitor3& m : tr.monitors)
      CHECK(m.q >= -1e-8 * (1.0 + m.norm));
  }
}

TEST_CASE("status names") {
  CHECK(std::string(flow_status_name(FlowStatus::completed)) == "completed");
  CHECK(std::string(flow_status_name(FlowStatus::blow_up)) == "blow_up");
  CHECK(std::string(flow_status_name(FlowStatus::step_failure)) ==
        "step_failure");
}
