#include "curv4lab/curv4lab.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "curv4/audit.hpp"
#include "curv4/errors.hpp"
#include "curv4/polynomial.hpp"
#include "curv4/serialize.hpp"

namespace {

thread_local std::string g_last_error;

c4_status status_from(curv4::ErrorCode code) {
  using curv4::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return C4_INVALID_ARGUMENT;
    case ErrorCode::symmetry_violation: return C4_SYMMETRY_VIOLATION;
    case ErrorCode::non_orthonormal_frame: return C4_NON_ORTHONORMAL_FRAME;
    case ErrorCode::convention_mismatch: return C4_CONVENTION_MISMATCH;
    case ErrorCode::unknown_name: return C4_UNKNOWN_NAME;
    case ErrorCode::bad_params: return C4_BAD_PARAMS;
    case ErrorCode::out_of_domain: return C4_OUT_OF_DOMAIN;
    case ErrorCode::singular_metric: return C4_SINGULAR_METRIC;
    case ErrorCode::missing_potential: return C4_MISSING_POTENTIAL;
    case ErrorCode::not_steady: return C4_NOT_STEADY;
    case ErrorCode::non_constant_energy: return C4_NON_CONSTANT_ENERGY;
    case ErrorCode::shooting_failed: return C4_SHOOTING_FAILED;
    case ErrorCode::step_failure: return C4_STEP_FAILURE;
    case ErrorCode::unknown_campaign: return C4_UNKNOWN_CAMPAIGN;
    case ErrorCode::constraint_mismatch: return C4_CONSTRAINT_MISMATCH;
    case ErrorCode::rejection_budget_exceeded:
      return C4_REJECTION_BUDGET_EXCEEDED;
  }
  return C4_UNKNOWN_ERROR;
}

template <typename Fn>
c4_status wrap(const Fn& fn) {
  try {
    fn();
    g_last_error.clear();
    return C4_OK;
  } catch (const curv4::Error& e) {
    g_last_error = e.what();
    return status_from(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return C4_UNKNOWN_ERROR;
  } catch (...) {
    g_last_error = "unknown failure";
    return C4_UNKNOWN_ERROR;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(const curv4::json& j, char** out) {
  *out = dup_string(j.dump(2) + "\n");
}

curv4::Mat3 mat_from_array(const double m[9]) {
  curv4::Mat3 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out(i, j) = m[3 * i + j];
  return out;
}

std::vector<curv4::Constraint> parse_constraints(const char* csv) {
  std::vector<curv4::Constraint> out;
  if (csv == nullptr) return out;
  std::string text = csv;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(',', pos);
    std::string item = text.substr(
        pos, next == std::string::npos ? std::string::npos : next - pos);
    std::size_t b = item.find_first_not_of(" \t");
    std::size_t e = item.find_last_not_of(" \t");
    if (b != std::string::npos)
      out.push_back(curv4::constraint_from_name(item.substr(b, e - b + 1)));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

curv4::SampleSpec make_spec(uint64_t seed, uint64_t count, double scale,
                            const char* constraints_csv) {
  if (scale <= 0.0)
    curv4::raise(curv4::ErrorCode::invalid_argument, "scale must be positive");
  curv4::SampleSpec spec;
  spec.seed = seed;
  spec.count = count;
  spec.scale = scale;
  spec.constraints = parse_constraints(constraints_csv);
  return spec;
}

curv4::FlowControls make_controls(double t_max, double rel_tol,
                                  double ceiling) {
  if (t_max <= 0.0 || rel_tol <= 0.0 || ceiling <= 0.0)
    curv4::raise(curv4::ErrorCode::invalid_argument,
                 "t_max, rel_tol and the blow-up ceiling must be positive");
  curv4::FlowControls ctl;
  ctl.t_max = t_max;
  ctl.rel_tol = rel_tol;
  ctl.norm_ceiling = ceiling;
  return ctl;
}

curv4::CurvatureScheme parse_scheme(const char* scheme) {
  std::string s = scheme == nullptr ? "" : scheme;
  if (s == "closed_form") return curv4::CurvatureScheme::closed_form;
  if (s == "finite_difference" || s.empty())
    return curv4::CurvatureScheme::finite_difference;
  curv4::raise(curv4::ErrorCode::invalid_argument,
               "scheme must be finite_difference or closed_form");
}

void require(bool ok, const char* what) {
  if (!ok) curv4::raise(curv4::ErrorCode::invalid_argument, what);
}

}  // namespace

struct c4_curvop {
  curv4::CurvOp4 op;
};

struct c4_chart {
  curv4::MetricChart chart;
};

extern "C" {

int c4_schema_version(void) { return curv4::kSchemaVersion; }

const char* c4_version(void) { return "1.0.0"; }

const char* c4_status_name(c4_status status) {
  switch (status) {
    case C4_OK: return "Ok";
    case C4_INVALID_ARGUMENT: return "InvalidArgument";
    case C4_SYMMETRY_VIOLATION: return "SymmetryViolation";
    case C4_NON_ORTHONORMAL_FRAME: return "NonOrthonormalFrame";
    case C4_CONVENTION_MISMATCH: return "ConventionMismatch";
    case C4_UNKNOWN_NAME: return "UnknownName";
    case C4_BAD_PARAMS: return "BadParams";
    case C4_OUT_OF_DOMAIN: return "OutOfDomain";
    case C4_SINGULAR_METRIC: return "SingularMetric";
    case C4_MISSING_POTENTIAL: return "MissingPotential";
    case C4_NOT_STEADY: return "NotSteady";
    case C4_NON_CONSTANT_ENERGY: return "NonConstantEnergy";
    case C4_SHOOTING_FAILED: return "ShootingFailed";
    case C4_STEP_FAILURE: return "StepFailure";
    case C4_UNKNOWN_CAMPAIGN: return "UnknownCampaign";
    case C4_CONSTRAINT_MISMATCH: return "ConstraintMismatch";
    case C4_REJECTION_BUDGET_EXCEEDED: return "RejectionBudgetExceeded";
    case C4_UNKNOWN_ERROR: return "UnknownError";
  }
  return "UnknownError";
}

const char* c4_last_error(void) { return g_last_error.c_str(); }

void c4_string_free(char* s) { std::free(s); }

c4_status c4_curvop_make(const double a[9], const double b[9],
                         const double c[9], c4_curvop** out) {
  return wrap([&] {
    require(a && b && c && out, "null argument");
    *out = new c4_curvop{
        curv4::make_curvop(mat_from_array(a), mat_from_array(b),
                           mat_from_array(c))};
  });
}

c4_status c4_curvop_from_json(const char* json_text, c4_curvop** out) {
  return wrap([&] {
    require(json_text && out, "null argument");
    curv4::json j = curv4::json::parse(json_text, nullptr, false);
    if (j.is_discarded())
      curv4::raise(curv4::ErrorCode::invalid_argument,
                   "operator JSON does not parse");
    *out = new c4_curvop{curv4::curvop_from_json(j)};
  });
}

void c4_curvop_free(c4_curvop* op) { delete op; }

c4_status c4_curvop_to_json(const c4_curvop* op, char** out_json) {
  return wrap([&] {
    require(op && out_json, "null argument");
    emit(curv4::curvop_to_json(op->op), out_json);
  });
}

c4_status c4_curvop_scalar(const c4_curvop* op, double* out) {
  return wrap([&] {
    require(op && out, "null argument");
    *out = curv4::scalar_curvature(op->op);
  });
}

c4_status c4_curvop_summary_json(const c4_curvop* op, char** out_json) {
  return wrap([&] {
    require(op && out_json, "null argument");
    emit(curv4::summary_to_json(curv4::spectral_summary(op->op)), out_json);
  });
}

c4_status c4_curvop_cones_json(const c4_curvop* op, double tol,
                               char** out_json) {
  return wrap([&] {
    require(op && out_json, "null argument");
    require(tol >= 0.0, "tolerance must be nonnegative");
    emit(curv4::cone_report_to_json(
             curv4::classify_cones(curv4::spectral_summary(op->op), tol)),
         out_json);
  });
}

c4_status c4_curvop_monitors_json(const c4_curvop* op, char** out_json) {
  return wrap([&] {
    require(op && out_json, "null argument");
    emit(curv4::monitor_to_json(curv4::monitor_functionals(op->op)), out_json);
  });
}

c4_status c4_sample_curvop(uint64_t seed, uint64_t index, double scale,
                           const char* constraints_csv, c4_curvop** out) {
  return wrap([&] {
    require(out != nullptr, "null argument");
    curv4::SampleSpec spec = make_spec(seed, index + 1, scale, constraints_csv);
    *out = new c4_curvop{curv4::sample_curvop(spec, index)};
  });
}

c4_status c4_flow4_json(const c4_curvop* init, double t_max, double rel_tol,
                        double rm_ceiling, int store_stride, char** out_json) {
  return wrap([&] {
    require(init && out_json, "null argument");
    curv4::FlowControls ctl = make_controls(t_max, rel_tol, rm_ceiling);
    if (store_stride > 0) {
      ctl.store_states = true;
      ctl.store_stride = store_stride;
    }
    emit(curv4::trajectory4_to_json(curv4::integrate4(init->op, ctl)),
         out_json);
  });
}

c4_status c4_flow4_csv(const c4_curvop* init, double t_max, double rel_tol,
                       double rm_ceiling, char** out_csv) {
  return wrap([&] {
    require(init && out_csv, "null argument");
    curv4::FlowControls ctl = make_controls(t_max, rel_tol, rm_ceiling);
    *out_csv =
        dup_string(curv4::trajectory4_csv(curv4::integrate4(init->op, ctl)));
  });
}

c4_status c4_flow3_json(double m1, double m2, double m3, double t_max,
                        double rel_tol, double ceiling, char** out_json) {
  return wrap([&] {
    require(out_json != nullptr, "null argument");
    curv4::FlowControls ctl = make_controls(t_max, rel_tol, ceiling);
    emit(curv4::trajectory3_to_json(
             curv4::integrate3(curv4::Vec3(m1, m2, m3), ctl)),
         out_json);
  });
}

c4_status c4_flow3_csv(double m1, double m2, double m3, double t_max,
                       double rel_tol, double ceiling, char** out_csv) {
  return wrap([&] {
    require(out_csv != nullptr, "null argument");
    curv4::FlowControls ctl = make_controls(t_max, rel_tol, ceiling);
    *out_csv = dup_string(curv4::trajectory3_csv(
        curv4::integrate3(curv4::Vec3(m1, m2, m3), ctl)));
  });
}

c4_status c4_campaign_names_json(char** out_json) {
  return wrap([&] {
    require(out_json != nullptr, "null argument");
    curv4::json j;
    j["schema_version"] = curv4::kSchemaVersion;
    j["campaigns"] = curv4::campaign_names();
    emit(j, out_json);
  });
}

c4_status c4_run_campaign_json(const char* name, uint64_t seed, uint64_t count,
                               double scale, const char* constraints_csv,
                               double tol, int threads, char** out_json) {
  return wrap([&] {
    require(name && out_json, "null argument");
    require(tol >= 0.0, "tolerance must be nonnegative");
    curv4::SampleSpec spec = make_spec(seed, count, scale, constraints_csv);
    emit(curv4::audit_report_to_json(
             curv4::run_identity_campaign(name, spec, tol, threads)),
         out_json);
  });
}

c4_status c4_certificates_json(char** out_json) {
  return wrap([&] {
    require(out_json != nullptr, "null argument");
    auto cert_json = [](const curv4::CertificateResult& c) {
      curv4::json j;
      j["zero"] = c.zero;
      j["lhs_terms"] = c.lhs_terms;
      j["rhs_terms"] = c.rhs_terms;
      if (!c.zero) j["residual"] = c.residual;
      return j;
    };
    curv4::json j;
    j["schema_version"] = curv4::kSchemaVersion;
    j["thm31_rearrangement"] = cert_json(curv4::thm31_certificate());
    j["prop61_rearrangement"] = cert_json(curv4::prop61_certificate());
    emit(j, out_json);
  });
}

c4_status c4_flow_audit_json(uint64_t seed, uint64_t count, double scale,
                             const char* constraints_csv, double t_max,
                             double rel_tol, double rm_ceiling, double tol,
                             int threads, char** out_json) {
  return wrap([&] {
    require(out_json != nullptr, "null argument");
    require(tol >= 0.0, "tolerance must be nonnegative");
    curv4::SampleSpec spec = make_spec(seed, count, scale, constraints_csv);
    curv4::FlowControls ctl = make_controls(t_max, rel_tol, rm_ceiling);
    emit(curv4::flow_audit_to_json(
             curv4::audit_wpic_flow(spec, ctl, tol, threads)),
         out_json);
  });
}

c4_status c4_flow_audit3_json(uint64_t seed, uint64_t count, double scale,
                              double t_max, double rel_tol, double ceiling,
                              double tol, int threads, char** out_json) {
  return wrap([&] {
    require(out_json != nullptr, "null argument");
    require(scale > 0.0, "scale must be positive");
    require(tol >= 0.0, "tolerance must be nonnegative");
    curv4::FlowControls ctl = make_controls(t_max, rel_tol, ceiling);
    emit(curv4::flow_audit3_to_json(
             curv4::audit_m3_flow(seed, count, scale, ctl, tol, threads)),
         out_json);
  });
}

c4_status c4_frames_audit_json(uint64_t seed, uint64_t count, double scale,
                               int restarts, double tol, char** out_json) {
  return wrap([&] {
    require(out_json != nullptr, "null argument");
    require(restarts >= 1, "restarts must be at least 1");
    require(tol >= 0.0, "tolerance must be nonnegative");
    curv4::SampleSpec spec =
        make_spec(seed, count, scale, "bianchi");
    double worst = 0.0;
    std::uint64_t passes = 0;
    std::vector<std::uint64_t> failures;
    long iterations = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
      curv4::CurvOp4 op = curv4::sample_curvop(spec, i);
      curv4::SpectralSummary s = curv4::spectral_summary(op);
      curv4::RiemannTensor rm = curv4::curvop_to_riemann(op);
      curv4::FrameMinResult res =
          curv4::minimize_isotropic_over_frames(rm, restarts);
      double expected = 2.0 * std::min(s.a_eigs(0) + s.a_eigs(1),
                                       s.c_eigs(0) + s.c_eigs(1));
      double diff = std::abs(res.min_value - expected) / (1.0 + s.rm_norm);
      worst = std::max(worst, diff);
      iterations += res.iterations;
      if (diff <= tol) {
        ++passes;
      } else if (failures.size() <
                 static_cast<std::size_t>(curv4::kMaxStoredCounterexamples)) {
        failures.push_back(i);
      }
    }
    curv4::json j;
    j["schema_version"] = curv4::kSchemaVersion;
    j["campaign"] = "frame_min_consistency";
    j["seed"] = seed;
    j["total"] = count;
    j["passes"] = passes;
    j["failure_count"] = count - passes;
    j["worst_scaled_diff"] = worst;
    j["restarts"] = restarts;
    j["descent_iterations"] = iterations;
    j["tol"] = tol;
    j["scale"] = scale;
    j["failing_indices"] = failures;
    emit(j, out_json);
  });
}

c4_status c4_chart_open(const char* name, const char* params_json,
                        c4_chart** out) {
  return wrap([&] {
    require(name && out, "null argument");
    std::map<std::string, double> params;
    if (params_json != nullptr && params_json[0] != '\0') {
      curv4::json j = curv4::json::parse(params_json, nullptr, false);
      if (j.is_discarded() || !j.is_object())
        curv4::raise(curv4::ErrorCode::bad_params,
                     "params must be a JSON object of named reals");
      for (const auto& kv : j.items()) {
        if (!kv.value().is_number())
          curv4::raise(curv4::ErrorCode::bad_params,
                       "param '" + kv.key() + "' is not a number");
        params[kv.key()] = kv.value().get<double>();
      }
    }
    *out = new c4_chart{curv4::catalog_metric(name, params)};
  });
}

void c4_chart_free(c4_chart* chart) { delete chart; }

c4_status c4_catalog_names_json(char** out_json) {
  return wrap([&] {
    require(out_json != nullptr, "null argument");
    curv4::json j;
    j["schema_version"] = curv4::kSchemaVersion;
    j["metrics"] = curv4::catalog_names();
    emit(j, out_json);
  });
}

c4_status c4_chart_normalize_steady(const c4_chart* chart, const char* scheme,
                                    c4_chart** out) {
  return wrap([&] {
    require(chart && out, "null argument");
    *out = new c4_chart{
        curv4::normalize_steady(chart->chart, parse_scheme(scheme))};
  });
}

c4_status c4_catalog_report_json(const c4_chart* chart, int probes,
                                 uint64_t seed, const char* scheme, double h,
                                 char** out_json) {
  return wrap([&] {
    require(chart && out_json, "null argument");
    require(probes > 0, "probe count must be positive");
    require(h > 0.0, "finite-difference step must be positive");
    emit(curv4::catalog_report_to_json(curv4::build_catalog_report(
             chart->chart, probes, seed, parse_scheme(scheme), h)),
         out_json);
  });
}

c4_status c4_catalog_report_csv(const c4_chart* chart, int probes,
                                uint64_t seed, const char* scheme, double h,
                                char** out_csv) {
  return wrap([&] {
    require(chart && out_csv, "null argument");
    require(probes > 0, "probe count must be positive");
    require(h > 0.0, "finite-difference step must be positive");
    *out_csv = dup_string(curv4::catalog_report_csv(curv4::build_catalog_report(
        chart->chart, probes, seed, parse_scheme(scheme), h)));
  });
}

}  // extern "C"
