#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "curv4/audit.hpp"
#include "curv4/metric.hpp"
#include "curv4/serialize.hpp"
#include "oracles.hpp"

using namespace curv4;

namespace {

AuditReport small_campaign(const std::string& name, std::uint64_t seed,
                           std::uint64_t count) {
  SampleSpec spec;
  spec.seed = seed;
  spec.count = count;
  spec.constraints = campaign_required_constraints(name);
  return run_identity_campaign(name, spec);
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("curvop json round trip preserves every entry") {
  SampleSpec spec;
  spec.seed = 8;
  spec.count = 1;
  spec.constraints = {Constraint::bianchi};
  CurvOp4 op = sample_curvop(spec, 4);
  json j = curvop_to_json(op);
  CHECK(j["bianchi_flag"].get<bool>());
  CHECK(j["A"].size() == 9);

  Mat3 a;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) a(r, c) = j["A"][3 * r + c].get<double>();
  CHECK((a - op.A).norm() == 0.0);
}

TEST_CASE("spectral summary and cone report field names") {
  SpectralSummary s = spectral_summary(build_from_riemann(oracles::s4_round()));
  json js = summary_to_json(s);
  CHECK(js["scalar"].get<double>() == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(js["a_eigs"].size() == 3);
  CHECK(js["b_signed"].size() == 3);
  CHECK(js["ricci_eigs"].size() == 4);
  CHECK(js["b_det_sign"].get<int>() == 0);  // B = 0 is degenerate

  json jc = cone_report_to_json(classify_cones(s));
  for (const char* key :
       {"pic", "wpic", "half_pic", "half_wpic", "a_nonneg", "c_nonneg",
        "ricci_nonneg", "ricci_2nonneg"})
    CHECK(jc.contains(key));
  CHECK(jc["margins"].contains("A1_plus_A2"));
  CHECK(jc["margins"].contains("C1_plus_C2"));
  CHECK(jc["margins"].contains("Lambda_1"));
  CHECK(jc["margins"].contains("Lambda1_plus_Lambda2"));
  CHECK(jc["margins"].contains("R_minus_4sigma3"));
  CHECK(jc["uniform_pic_lambda"].get<double>() == doctest::Approx(0.5));

  SpectralSummary flat =
      spectral_summary(build_from_riemann(oracles::flat4()));
  json jf = cone_report_to_json(classify_cones(flat));
  CHECK(jf["uniform_pic_lambda"].is_null());
}

TEST_CASE("audit report serialization is deterministic and versioned") {
  AuditReport rep = small_campaign("thm31_rearrangement", 123, 500);
  json j = audit_report_to_json(rep);
  CHECK(j["schema_version"].get<int>() == 1);
  CHECK(j["campaign"].get<std::string>() == "thm31_rearrangement");
  CHECK(j["seed"].get<std::uint64_t>() == 123);
  CHECK(j["total"].get<std::uint64_t>() == 500);
  CHECK(j["passes"].get<std::uint64_t>() == 500);
  CHECK(j["counterexample_count"].get<std::uint64_t>() == 0);
  CHECK(!j.contains("wall_time"));  // excluded for byte identity
  CHECK(j.contains("tol"));
  CHECK(j.contains("scale"));

  AuditReport rep2 = small_campaign("thm31_rearrangement", 123, 500);
  CHECK(audit_report_to_json(rep2).dump(2) == j.dump(2));

  json with_time = audit_report_to_json(rep, true);
  CHECK(with_time.contains("wall_time"));
}

TEST_CASE("falsification payloads serialize with margins and notes") {
  AuditReport rep = small_campaign("prop64_max_equivalence", 9, 64);
  json j = audit_report_to_json(rep);
  REQUIRE(j["counterexamples"].size() > 0);
  const json& ce = j["counterexamples"][0];
  CHECK(ce.contains("index"));
  CHECK(ce.contains("op"));
  CHECK(ce["margins"].contains("L_max_form"));
  CHECK(ce["margins"].contains("L_pairwise_min"));
  CHECK(ce["note"].is_string());
}

TEST_CASE("trajectory serialization") {
  CurvOp4 op = make_curvop(Mat3::Identity(), Mat3::Zero(), Mat3::Identity());
  FlowControls controls;
  controls.t_max = 0.1;
  controls.store_states = true;
  controls.store_stride = 16;
  ReactionTrajectory4 tr = integrate4(op, controls);

  json j = trajectory4_to_json(tr);
  CHECK(j["schema_version"].get<int>() == 1);
  CHECK(j["status"].get<std::string>() == "completed");
  CHECK(j["steps_accepted"].get<long>() == tr.steps_accepted);
  CHECK(j["extrema"].contains("min_u"));
  CHECK(j["extrema"].contains("min_v"));
  CHECK(j["extrema"].contains("min_a12c12"));
  CHECK(j["extrema"].contains("max_rm_norm"));
  CHECK(j["checkpoints"].size() == tr.states.size());

  std::string csv = trajectory4_csv(tr);
  CHECK(csv.rfind("t,", 0) == 0);  // header first
  CHECK(count_lines(csv) == tr.times.size() + 1);

  FlowControls c3;
  c3.t_max = 0.05;
  ReactionTrajectory3 tr3 = integrate3(Vec3(-1.0, 1.0, 1.5), c3);
  json j3 = trajectory3_to_json(tr3);
  CHECK(j3["extrema"].contains("min_q"));
  CHECK(j3["extrema"].contains("max_norm"));
  std::string csv3 = trajectory3_csv(tr3);
  CHECK(count_lines(csv3) == tr3.times.size() + 1);
}

TEST_CASE("catalog report aggregates and formats") {
  MetricChart cigar = catalog_metric("cigar");
  CatalogReport rep =
      build_catalog_report(cigar, 12, 5, CurvatureScheme::closed_form);
  CHECK(rep.metric == "cigar");
  CHECK(rep.dim == 2);
  CHECK(rep.has_potential);
  CHECK(rep.points.size() == 12);
  CHECK(rep.ham3_constancy <= 1e-12);
  CHECK(rep.energy_mean == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(rep.worst_eq_residual <= 1e-12);
  CHECK(rep.scalar_max <= 4.0 + 1e-9);

  json j = catalog_report_to_json(rep);
  CHECK(j["schema_version"].get<int>() == 1);
  CHECK(j["metric"].get<std::string>() == "cigar");
  CHECK(j["summary"]["ham3_constancy"].get<double>() <= 1e-12);
  CHECK(j["points"].size() == 12);

  std::string csv = catalog_report_csv(rep);
  CHECK(count_lines(csv) == 13);  // header + one row per probe
  CHECK(csv.rfind("metric,", 0) == 0);

  // a 4d chart adds cone flags to the rows and summary
  CatalogReport s4 = build_catalog_report(catalog_metric("s4_round"), 6, 5,
                                          CurvatureScheme::closed_form);
  CHECK(s4.wpic_all);
  CHECK(s4.ricci_nonneg_all);
  CHECK(s4.rm_leq_r_all);
  CHECK(s4.min_a12c12 == doctest::Approx(2.0).epsilon(1e-9));
  json js4 = catalog_report_to_json(s4);
  CHECK(js4["points"][0].contains("cones"));
  CHECK(js4["points"][0]["bianchi_flag"].get<bool>());
}

TEST_CASE("flow audit reports serialize without wall time by default") {
  SampleSpec spec;
  spec.seed = 21;
  spec.count = 8;
  spec.constraints = {Constraint::bianchi, Constraint::wpic};
  FlowControls controls;
  controls.t_max = 0.02;
  FlowAuditReport rep = audit_wpic_flow(spec, controls);
  json j = flow_audit_to_json(rep);
  CHECK(j["schema_version"].get<int>() == 1);
  CHECK(!j.contains("wall_time"));
  CHECK(j["total"].get<std::uint64_t>() == 8);
  CHECK(j.contains("worst_min_a12c12"));

  FlowAuditReport3 rep3 = audit_m3_flow(3, 8, 1.0, controls);
  json j3 = flow_audit3_to_json(rep3);
  CHECK(j3["total"].get<std::uint64_t>() == 8);
  CHECK(j3.contains("worst_q"));
}
