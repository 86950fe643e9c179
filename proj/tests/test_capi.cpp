// Exercises the shared-library C surface: status codes, error messages,
// handle lifecycles and the JSON/CSV endpoints. Links only against the
// public header plus the vendored JSON parser for inspecting results.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>

#include "curv4lab/curv4lab.h"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Str {
  char* p = nullptr;
  ~Str() { c4_string_free(p); }
  std::string view() const { return p ? std::string(p) : std::string(); }
};

const double kIdentity[9] = {1, 0, 0, 0, 1, 0, 0, 0, 1};
const double kZero[9] = {0, 0, 0, 0, 0, 0, 0, 0, 0};

}  // namespace

TEST_CASE("metadata") {
  CHECK(c4_schema_version() == 1);
  CHECK(c4_version() != nullptr);
  CHECK(std::string(c4_status_name(C4_OK)) == "Ok");
  CHECK(std::string(c4_status_name(C4_UNKNOWN_NAME)) == "UnknownName");
  CHECK(std::string(c4_status_name(C4_CONSTRAINT_MISMATCH)) ==
        "ConstraintMismatch");
}

TEST_CASE("curvop lifecycle and scalar") {
  c4_curvop* op = nullptr;
  REQUIRE(c4_curvop_make(kIdentity, kZero, kIdentity, &op) == C4_OK);
  REQUIRE(op != nullptr);
  double r = 0.0;
  CHECK(c4_curvop_scalar(op, &r) == C4_OK);
  CHECK(r == 12.0);

  Str js;
  REQUIRE(c4_curvop_to_json(op, &js.p) == C4_OK);
  json j = json::parse(js.view());
  CHECK(j["bianchi_flag"].get<bool>());

  c4_curvop* back = nullptr;
  REQUIRE(c4_curvop_from_json(js.p, &back) == C4_OK);
  double r2 = 0.0;
  CHECK(c4_curvop_scalar(back, &r2) == C4_OK);
  CHECK(r2 == r);
  c4_curvop_free(back);
  c4_curvop_free(op);
}

TEST_CASE("null arguments and malformed input set the error message") {
  CHECK(c4_curvop_make(nullptr, kZero, kIdentity, nullptr) ==
        C4_INVALID_ARGUMENT);
  CHECK(std::strlen(c4_last_error()) > 0);

  c4_curvop* op = nullptr;
  CHECK(c4_curvop_from_json("{not json", &op) == C4_INVALID_ARGUMENT);
  CHECK(op == nullptr);

  // asymmetric A block is rejected
  double bad[9] = {1, 2, 0, 0, 1, 0, 0, 0, 1};
  CHECK(c4_curvop_make(bad, kZero, kIdentity, &op) == C4_SYMMETRY_VIOLATION);
}

TEST_CASE("summary, cones and monitors endpoints") {
  c4_curvop* op = nullptr;
  REQUIRE(c4_curvop_make(kIdentity, kZero, kIdentity, &op) == C4_OK);

  Str summary, cones, monitors;
  REQUIRE(c4_curvop_summary_json(op, &summary.p) == C4_OK);
  json js = json::parse(summary.view());
  CHECK(js["scalar"].get<double>() == 12.0);
  CHECK(js["a_eigs"][0].get<double>() == 1.0);

  REQUIRE(c4_curvop_cones_json(op, 1e-9, &cones.p) == C4_OK);
  json jc = json::parse(cones.view());
  CHECK(jc["pic"].get<bool>());
  CHECK(jc["margins"]["A1_plus_A2"].get<double>() == 2.0);

  REQUIRE(c4_curvop_monitors_json(op, &monitors.p) == C4_OK);
  json jm = json::parse(monitors.view());
  CHECK(jm["u"].get<double>() == 12.0);
  CHECK(jm["v"].get<double>() == 12.0);
  c4_curvop_free(op);
}

TEST_CASE("sampling through the boundary") {
  c4_curvop* op = nullptr;
  REQUIRE(c4_sample_curvop(42, 7, 1.0, "bianchi,wpic", &op) == C4_OK);
  Str js;
  REQUIRE(c4_curvop_cones_json(op, 1e-9, &js.p) == C4_OK);
  CHECK(json::parse(js.view())["wpic"].get<bool>());
  c4_curvop_free(op);

  CHECK(c4_sample_curvop(42, 7, 1.0, "bianchi,no_such_cone", &op) ==
        C4_INVALID_ARGUMENT);
  CHECK(c4_sample_curvop(42, 7, -1.0, "bianchi", &op) == C4_INVALID_ARGUMENT);
}

TEST_CASE("flow endpoints") {
  c4_curvop* op = nullptr;
  REQUIRE(c4_curvop_make(kIdentity, kZero, kIdentity, &op) == C4_OK);
  Str js, cs;
  REQUIRE(c4_flow4_json(op, 1.0, 1e-8, 1e8, 0, &js.p) == C4_OK);
  json j = json::parse(js.view());
  CHECK(j["status"].get<std::string>() == "blow_up");
  double t_star = j["t_star"].get<double>();
  CHECK(std::abs(t_star - 1.0 / 6.0) <= 0.01 / 6.0);

  REQUIRE(c4_flow4_csv(op, 0.1, 1e-8, 1e8, &cs.p) == C4_OK);
  CHECK(cs.view().rfind("t,", 0) == 0);
  c4_curvop_free(op);

  Str j3;
  REQUIRE(c4_flow3_json(-1.0, 1.0, 1.0, 0.1, 1e-8, 1e8, &j3.p) == C4_OK);
  json jm = json::parse(j3.view());
  CHECK(jm["extrema"]["min_q"].get<double>() >= -1e-8);
}

TEST_CASE("campaign endpoints and error mapping") {
  Str names;
  REQUIRE(c4_campaign_names_json(&names.p) == C4_OK);
  json jn = json::parse(names.view());
  CHECK(jn["campaigns"].size() == 7);

  Str rep;
  REQUIRE(c4_run_campaign_json("thm31_rearrangement", 11, 500, 1.0, "bianchi",
                               1e-9, 0, &rep.p) == C4_OK);
  json jr = json::parse(rep.view());
  CHECK(jr["passes"].get<int>() == 500);
  CHECK(jr["counterexample_count"].get<int>() == 0);
  CHECK(!jr.contains("wall_time"));

  // byte-identical rerun
  Str rep2;
  REQUIRE(c4_run_campaign_json("thm31_rearrangement", 11, 500, 1.0, "bianchi",
                               1e-9, 2, &rep2.p) == C4_OK);
  CHECK(rep.view() == rep2.view());

  c4_status st = c4_run_campaign_json("thm31_rearrangement", 11, 10, 1.0, "",
                                      1e-9, 0, &rep2.p);
  CHECK(st == C4_CONSTRAINT_MISMATCH);
  st = c4_run_campaign_json("unheard_of", 11, 10, 1.0, "bianchi", 1e-9, 0,
                            &rep2.p);
  CHECK(st == C4_UNKNOWN_CAMPAIGN);

  Str certs;
  REQUIRE(c4_certificates_json(&certs.p) == C4_OK);
  json jc = json::parse(certs.view());
  CHECK(jc["thm31_rearrangement"]["zero"].get<bool>());
  CHECK(jc["prop61_rearrangement"]["zero"].get<bool>());
}

TEST_CASE("flow audits and frame audit through the boundary") {
  Str flow;
  REQUIRE(c4_flow_audit_json(5, 6, 1.0, "bianchi,wpic", 0.02, 1e-8, 1e8, 1e-6,
                             0, &flow.p) == C4_OK);
  json jf = json::parse(flow.view());
  CHECK(jf["failure_count"].get<int>() == 0);

  Str flow3;
  REQUIRE(c4_flow_audit3_json(5, 6, 1.0, 0.05, 1e-8, 1e8, 1e-8, 0,
                              &flow3.p) == C4_OK);
  CHECK(json::parse(flow3.view())["failure_count"].get<int>() == 0);

  Str frames;
  REQUIRE(c4_frames_audit_json(5, 4, 1.0, 4, 1e-6, &frames.p) == C4_OK);
  json jr = json::parse(frames.view());
  CHECK(jr["failure_count"].get<int>() == 0);
  CHECK(jr["campaign"].get<std::string>() == "frame_min_consistency");
}

TEST_CASE("metric chart endpoints") {
  Str names;
  REQUIRE(c4_catalog_names_json(&names.p) == C4_OK);
  CHECK(json::parse(names.view())["metrics"].size() == 12);

  c4_chart* chart = nullptr;
  REQUIRE(c4_chart_open("cigar", nullptr, &chart) == C4_OK);
  Str rep, csv;
  REQUIRE(c4_catalog_report_json(chart, 8, 3, "closed_form", 1e-4, &rep.p) ==
          C4_OK);
  json j = json::parse(rep.view());
  CHECK(j["metric"].get<std::string>() == "cigar");
  CHECK(j["summary"]["ham3_constancy"].get<double>() <= 1e-12);
  REQUIRE(c4_catalog_report_csv(chart, 8, 3, "closed_form", 1e-4, &csv.p) ==
          C4_OK);
  CHECK(csv.view().rfind("metric,", 0) == 0);

  c4_chart* unit = nullptr;
  REQUIRE(c4_chart_normalize_steady(chart, "closed_form", &unit) == C4_OK);
  Str rep2;
  REQUIRE(c4_catalog_report_json(unit, 8, 3, "closed_form", 1e-4, &rep2.p) ==
          C4_OK);
  json j2 = json::parse(rep2.view());
  CHECK(j2["summary"]["energy_mean"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-9));
  c4_chart_free(unit);
  c4_chart_free(chart);

  CHECK(c4_chart_open("no_such_chart", nullptr, &chart) == C4_UNKNOWN_NAME);
  CHECK(c4_chart_open("cigar", "{\"bogus\": 1}", &chart) == C4_BAD_PARAMS);
  CHECK(c4_chart_open("cigar", "not json", &chart) == C4_BAD_PARAMS);

  // shrinkers cannot be steady-normalized; status maps the library error
  REQUIRE(c4_chart_open("gaussian_shrinker", "", &chart) == C4_OK);
  CHECK(c4_chart_normalize_steady(chart, "closed_form", &unit) ==
        C4_NOT_STEADY);
  c4_chart_free(chart);
}
