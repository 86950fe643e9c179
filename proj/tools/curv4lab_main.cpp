// Command-line front end: catalog probes, reaction-flow runs, audit
// campaigns and the frame-minimization consistency check, all through the
// shared-library C interface. Reports are JSON (optionally CSV) written
// atomically; the process exit code encodes the verdict:
//   0  full pass (or a falsification search, whose findings are expected)
//   1  an invariant violation or counterexample was detected
//   2  usage error

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "curv4lab/curv4lab.h"

namespace {

using ordered_json = nlohmann::ordered_json;

struct CStr {
  char* p = nullptr;
  ~CStr() { c4_string_free(p); }
  CStr() = default;
  CStr(const CStr&) = delete;
  CStr& operator=(const CStr&) = delete;
};

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double bound = 0.0;
};

int status_exit_code(c4_status st) {
  switch (st) {
    case C4_INVALID_ARGUMENT:
    case C4_UNKNOWN_NAME:
    case C4_BAD_PARAMS:
    case C4_UNKNOWN_CAMPAIGN:
    case C4_CONSTRAINT_MISMATCH:
      return 2;  // bad user input
    default:
      return 1;
  }
}

// Returns 0 on success, otherwise the exit code to use.
int report_failure(c4_status st) {
  if (st == C4_OK) return 0;
  std::cerr << "error: " << c4_status_name(st) << ": " << c4_last_error()
            << "\n";
  return status_exit_code(st);
}

bool write_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f << content;
    f.flush();
    if (!f) {
      std::cerr << "error: cannot write " << tmp << "\n";
      return false;
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::cerr << "error: cannot rename " << tmp << " to " << path << "\n";
    std::remove(tmp.c_str());
    return false;
  }
  return true;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Common per-command output options.
struct OutputOpts {
  std::string out;
  std::string format = "json";

  void attach(CLI::App* cmd) {
    cmd->add_option("--out", out,
                    "output path (prefix when --format both); default is "
                    "stdout, or $CURV4LAB_OUT/<command>_report.* when that "
                    "variable is set");
    cmd->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"json", "csv", "both"}))
        ->capture_default_str();
  }

  // Resolves the destination and writes; returns false on I/O failure.
  bool deliver(const std::string& command, const std::string& json_text,
               const std::string& csv_text) const {
    std::string base = out;
    if (base.empty()) {
      const char* dir = std::getenv("CURV4LAB_OUT");
      if (dir != nullptr && dir[0] != '\0')
        base = std::string(dir) + "/" + command + "_report";
    }
    if (base.empty()) {
      if (format == "json" || format == "both") std::cout << json_text;
      if (format == "csv" || format == "both") std::cout << csv_text;
      return true;
    }
    bool has_ext = base.size() > 5 && (base.rfind(".json") == base.size() - 5 ||
                                       base.rfind(".csv") == base.size() - 4);
    if (format == "both") {
      std::string prefix = base;
      if (has_ext) prefix = base.substr(0, base.rfind('.'));
      return write_atomic(prefix + ".json", json_text) &&
             write_atomic(prefix + ".csv", csv_text);
    }
    std::string path = base;
    if (!has_ext) path += format == "json" ? ".json" : ".csv";
    return write_atomic(path, format == "json" ? json_text : csv_text);
  }
};

ordered_json attach_verdict(const std::string& library_json,
                            const std::string& command,
                            const std::vector<Check>& checks) {
  ordered_json j = ordered_json::parse(library_json);
  ordered_json v;
  v["command"] = command;
  bool all = true;
  ordered_json rows = ordered_json::array();
  for (const Check& c : checks) {
    all = all && c.pass;
    ordered_json row;
    row["name"] = c.name;
    row["pass"] = c.pass;
    row["value"] = c.value;
    row["bound"] = c.bound;
    rows.push_back(std::move(row));
  }
  v["pass"] = all;
  v["checks"] = std::move(rows);
  j["verdict"] = std::move(v);
  return j;
}

bool all_pass(const std::vector<Check>& checks) {
  for (const Check& c : checks)
    if (!c.pass) return false;
  return true;
}

// ---- catalog -------------------------------------------------------------

struct CatalogOpts {
  std::string metric;
  std::vector<std::string> params;
  int probes = 32;
  std::uint64_t seed = 42;
  std::string scheme = "finite_difference";
  double h = 1e-4;
  double tol = 0.0;  // 0: scheme default
  bool normalize = false;
  OutputOpts output;
};

int run_catalog(const CatalogOpts& o) {
  ordered_json params = ordered_json::object();
  for (const std::string& kv : o.params) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "error: --param expects key=value, got '" << kv << "'\n";
      return 2;
    }
    try {
      params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      std::cerr << "error: --param value in '" << kv << "' is not a number\n";
      return 2;
    }
  }

  c4_chart* chart = nullptr;
  c4_status st = c4_chart_open(o.metric.c_str(), params.dump().c_str(), &chart);
  if (int rc = report_failure(st)) return rc;

  if (o.normalize) {
    c4_chart* normalized = nullptr;
    st = c4_chart_normalize_steady(chart, o.scheme.c_str(), &normalized);
    c4_chart_free(chart);
    if (int rc = report_failure(st)) return rc;
    chart = normalized;
  }

  CStr js, cs;
  st = c4_catalog_report_json(chart, o.probes, o.seed, o.scheme.c_str(), o.h,
                              &js.p);
  if (st == C4_OK)
    st = c4_catalog_report_csv(chart, o.probes, o.seed, o.scheme.c_str(), o.h,
                               &cs.p);
  c4_chart_free(chart);
  if (int rc = report_failure(st)) return rc;

  ordered_json rep = ordered_json::parse(js.p);
  double tol = o.tol > 0.0 ? o.tol
                           : (o.scheme == "closed_form" ? 1e-10 : 1e-6);
  std::vector<Check> checks;
  const auto& summary = rep["summary"];
  if (rep["has_potential"].get<bool>()) {
    checks.push_back({"ham3_constancy",
                      summary["ham3_constancy"].get<double>() <= tol,
                      summary["ham3_constancy"].get<double>(), tol});
    checks.push_back({"worst_eq_residual",
                      summary["worst_eq_residual"].get<double>() <= tol,
                      summary["worst_eq_residual"].get<double>(), tol});
    checks.push_back({"worst_ham1",
                      summary["worst_ham1"].get<double>() <= tol,
                      summary["worst_ham1"].get<double>(), tol});
    checks.push_back({"worst_ham2",
                      summary["worst_ham2"].get<double>() <= tol,
                      summary["worst_ham2"].get<double>(), tol});
  }
  if (rep["dim"].get<int>() == 4) {
    bool bianchi_all = true;
    for (const auto& p : rep["points"])
      if (p.contains("bianchi_flag") && !p["bianchi_flag"].get<bool>())
        bianchi_all = false;
    checks.push_back({"bianchi_flag_all", bianchi_all,
                      bianchi_all ? 1.0 : 0.0, 1.0});
  }

  ordered_json out = attach_verdict(js.p, "catalog", checks);
  if (!o.output.deliver("catalog", out.dump(2) + "\n", cs.p ? cs.p : ""))
    return 1;
  return all_pass(checks) ? 0 : 1;
}

// ---- flow ----------------------------------------------------------------

struct FlowOpts {
  std::string system = "4d";
  std::string init = "sphere";
  double a0 = 1.0;
  std::string m0 = "-1,1,1";
  std::uint64_t count = 1;
  std::uint64_t seed = 42;
  double scale = 1.0;
  double t_max = 1.0;
  double rel_tol = 1e-8;
  double rm_ceiling = 1e8;
  int store_stride = 0;
  double tol = 1e-6;
  int threads = 0;
  OutputOpts output;
};

int run_flow_3d(const FlowOpts& o) {
  double m1 = 0.0, m2 = 0.0, m3 = 0.0;
  if (o.count <= 1 &&
      std::sscanf(o.m0.c_str(), "%lf,%lf,%lf", &m1, &m2, &m3) != 3) {
    std::cerr << "error: --m0 expects three comma-separated reals\n";
    return 2;
  }
  CStr js, cs;
  std::vector<Check> checks;
  if (o.count > 1) {
    c4_status st =
        c4_flow_audit3_json(o.seed, o.count, o.scale, o.t_max, o.rel_tol,
                            o.rm_ceiling, 1e-8, o.threads, &js.p);
    if (int rc = report_failure(st)) return rc;
    ordered_json rep = ordered_json::parse(js.p);
    double failures = rep["failure_count"].get<double>();
    checks.push_back({"trajectories_within_cone", failures == 0.0, failures,
                      0.0});
    std::string csv =
        "campaign,seed,total,passes,failure_count,worst_q\n"
        "m3_flow_preservation," + std::to_string(o.seed) + ',' +
        std::to_string(o.count) + ',' + rep["passes"].dump() + ',' +
        rep["failure_count"].dump() + ',' +
        fmt_double(rep["worst_q"].get<double>()) + '\n';
    ordered_json out = attach_verdict(js.p, "flow", checks);
    if (!o.output.deliver("flow", out.dump(2) + "\n", csv)) return 1;
    return all_pass(checks) ? 0 : 1;
  }
  c4_status st = c4_flow3_json(m1, m2, m3, o.t_max, o.rel_tol, o.rm_ceiling,
                               &js.p);
  if (st == C4_OK)
    st = c4_flow3_csv(m1, m2, m3, o.t_max, o.rel_tol, o.rm_ceiling, &cs.p);
  if (int rc = report_failure(st)) return rc;
  ordered_json rep = ordered_json::parse(js.p);
  double min_q = rep["extrema"]["min_q"].get<double>();
  double max_norm = rep["extrema"]["max_norm"].get<double>();
  double bound = -1e-8 * (1.0 + max_norm);
  checks.push_back({"q_stays_nonnegative", min_q >= bound, min_q, bound});
  ordered_json out = attach_verdict(js.p, "flow", checks);
  if (!o.output.deliver("flow", out.dump(2) + "\n", cs.p ? cs.p : ""))
    return 1;
  return all_pass(checks) ? 0 : 1;
}

int run_flow(const FlowOpts& o) {
  if (o.system == "3d") return run_flow_3d(o);

  CStr js, cs;
  std::vector<Check> checks;
  if (o.init == "random-wpic") {
    const char* constraints = "bianchi,wpic,ricci_nonneg";
    if (o.count > 1) {
      c4_status st = c4_flow_audit_json(o.seed, o.count, o.scale, constraints,
                                        o.t_max, o.rel_tol, o.rm_ceiling,
                                        o.tol, o.threads, &js.p);
      if (int rc = report_failure(st)) return rc;
      ordered_json rep = ordered_json::parse(js.p);
      double failures = rep["failure_count"].get<double>();
      checks.push_back({"trajectories_within_cone", failures == 0.0, failures,
                        0.0});
      std::string csv =
          "campaign,seed,total,passes,failure_count,worst_min_a12c12,worst_u,"
          "worst_v,worst_tr_gap\n"
          "wpic_flow_preservation," + std::to_string(o.seed) + ',' +
          std::to_string(o.count) + ',' + rep["passes"].dump() + ',' +
          rep["failure_count"].dump() + ',' +
          fmt_double(rep["worst_min_a12c12"].get<double>()) + ',' +
          fmt_double(rep["worst_u"].get<double>()) + ',' +
          fmt_double(rep["worst_v"].get<double>()) + ',' +
          fmt_double(rep["worst_tr_gap"].get<double>()) + '\n';
      ordered_json out = attach_verdict(js.p, "flow", checks);
      if (!o.output.deliver("flow", out.dump(2) + "\n", csv)) return 1;
      return all_pass(checks) ? 0 : 1;
    }
    c4_curvop* op = nullptr;
    c4_status st = c4_sample_curvop(o.seed, 0, o.scale, constraints, &op);
    if (int rc = report_failure(st)) return rc;
    st = c4_flow4_json(op, o.t_max, o.rel_tol, o.rm_ceiling, o.store_stride,
                       &js.p);
    if (st == C4_OK)
      st = c4_flow4_csv(op, o.t_max, o.rel_tol, o.rm_ceiling, &cs.p);
    c4_curvop_free(op);
    if (int rc = report_failure(st)) return rc;
    ordered_json rep = ordered_json::parse(js.p);
    double min_ac = rep["extrema"]["min_a12c12"].get<double>();
    double min_u = rep["extrema"]["min_u"].get<double>();
    double min_v = rep["extrema"]["min_v"].get<double>();
    double max_rm = rep["extrema"]["max_rm_norm"].get<double>();
    double bound = -o.tol * (1.0 + max_rm);
    checks.push_back({"min_a12c12", min_ac >= bound, min_ac, bound});
    checks.push_back({"min_u", min_u >= bound, min_u, bound});
    checks.push_back({"min_v", min_v >= bound, min_v, bound});
    ordered_json out = attach_verdict(js.p, "flow", checks);
    if (!o.output.deliver("flow", out.dump(2) + "\n", cs.p ? cs.p : ""))
      return 1;
    return all_pass(checks) ? 0 : 1;
  }

  // sphere and zero initial data
  double a[9] = {0}, b[9] = {0}, c[9] = {0};
  if (o.init == "sphere") {
    if (o.a0 <= 0.0) {
      std::cerr << "error: --a0 must be positive for the sphere family\n";
      return 2;
    }
    a[0] = a[4] = a[8] = o.a0;
    c[0] = c[4] = c[8] = o.a0;
  } else if (o.init != "zero") {
    std::cerr << "error: --init must be sphere, zero or random-wpic\n";
    return 2;
  }
  c4_curvop* op = nullptr;
  c4_status st = c4_curvop_make(a, b, c, &op);
  if (int rc = report_failure(st)) return rc;
  st = c4_flow4_json(op, o.t_max, o.rel_tol, o.rm_ceiling, o.store_stride,
                     &js.p);
  if (st == C4_OK)
    st = c4_flow4_csv(op, o.t_max, o.rel_tol, o.rm_ceiling, &cs.p);
  c4_curvop_free(op);
  if (int rc = report_failure(st)) return rc;

  ordered_json rep = ordered_json::parse(js.p);
  if (o.init == "sphere") {
    double t_exp = 1.0 / (6.0 * o.a0);
    bool blew_up = rep["status"].get<std::string>() == "blow_up";
    double t_star = blew_up ? rep["t_star"].get<double>() : 0.0;
    checks.push_back({"blow_up_detected", blew_up, blew_up ? 1.0 : 0.0, 1.0});
    checks.push_back({"blow_up_time_rel_err",
                      blew_up && std::abs(t_star - t_exp) <= 0.01 * t_exp,
                      blew_up ? std::abs(t_star - t_exp) / t_exp : 1.0, 0.01});
  } else {
    bool completed = rep["status"].get<std::string>() == "completed";
    double max_rm = rep["extrema"]["max_rm_norm"].get<double>();
    checks.push_back({"completed", completed, completed ? 1.0 : 0.0, 1.0});
    checks.push_back({"stays_zero", max_rm <= 1e-12, max_rm, 1e-12});
  }
  ordered_json out = attach_verdict(js.p, "flow", checks);
  if (!o.output.deliver("flow", out.dump(2) + "\n", cs.p ? cs.p : ""))
    return 1;
  return all_pass(checks) ? 0 : 1;
}

// ---- audit ---------------------------------------------------------------

struct AuditOpts {
  std::string campaign;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 42;
  double scale = 1.0;
  double tol = 1e-9;
  std::string constraints;  // empty: campaign default
  int threads = 0;
  OutputOpts output;
};

std::string default_constraints(const std::string& campaign) {
  if (campaign == "lemma21_consequences") return "bianchi,wpic";
  if (campaign == "rm_leq_r")
    return "bianchi,a_nonneg,c_nonneg,ricci_nonneg";
  if (campaign == "prop64_forward" || campaign == "prop64_max_equivalence")
    return "bianchi,pic";
  return "bianchi";
}

int run_audit(const AuditOpts& o) {
  std::string constraints =
      o.constraints.empty() ? default_constraints(o.campaign) : o.constraints;
  CStr js;
  c4_status st =
      c4_run_campaign_json(o.campaign.c_str(), o.seed, o.samples, o.scale,
                           constraints.c_str(), o.tol, o.threads, &js.p);
  if (int rc = report_failure(st)) return rc;
  ordered_json rep = ordered_json::parse(js.p);

  std::vector<Check> checks;
  bool falsification = o.campaign == "prop64_max_equivalence";
  double ce_count = rep["counterexample_count"].get<double>();
  double worst = rep["worst_residual"].get<double>();
  if (falsification) {
    // Findings are the expected product; the run itself always passes.
    checks.push_back({"report_generated", true, ce_count, 0.0});
  } else {
    checks.push_back({"zero_counterexamples", ce_count == 0.0, ce_count, 0.0});
    checks.push_back({"worst_residual", worst <= o.tol, worst, o.tol});
  }
  if (o.campaign == "thm31_rearrangement" ||
      o.campaign == "prop61_rearrangement") {
    CStr cert;
    st = c4_certificates_json(&cert.p);
    if (int rc = report_failure(st)) return rc;
    ordered_json cj = ordered_json::parse(cert.p);
    bool zero = cj[o.campaign]["zero"].get<bool>();
    rep["certificate"] = cj[o.campaign];
    checks.push_back({"symbolic_certificate_zero", zero, zero ? 1.0 : 0.0,
                      1.0});
  }

  std::string csv =
      "campaign,seed,scale,tol,total,passes,counterexample_count,"
      "worst_residual\n" +
      o.campaign + ',' + std::to_string(o.seed) + ',' + fmt_double(o.scale) +
      ',' + fmt_double(o.tol) + ',' + std::to_string(o.samples) + ',' +
      rep["passes"].dump() + ',' + rep["counterexample_count"].dump() + ',' +
      fmt_double(worst) + '\n';

  ordered_json out = attach_verdict(rep.dump(2) + "\n", "audit", checks);
  if (!o.output.deliver("audit", out.dump(2) + "\n", csv)) return 1;
  return all_pass(checks) ? 0 : 1;
}

// ---- frames ---------------------------------------------------------------

struct FramesOpts {
  std::uint64_t count = 100;
  std::uint64_t seed = 42;
  double scale = 1.0;
  int restarts = 8;
  double tol = 1e-6;
  OutputOpts output;
};

int run_frames(const FramesOpts& o) {
  CStr js;
  c4_status st = c4_frames_audit_json(o.seed, o.count, o.scale, o.restarts,
                                      o.tol, &js.p);
  if (int rc = report_failure(st)) return rc;
  ordered_json rep = ordered_json::parse(js.p);
  std::vector<Check> checks;
  double failures = rep["failure_count"].get<double>();
  double worst = rep["worst_scaled_diff"].get<double>();
  checks.push_back({"descent_matches_eigen_minimum", failures == 0.0,
                    failures, 0.0});
  checks.push_back({"worst_scaled_diff", worst <= o.tol, worst, o.tol});
  std::string csv =
      "campaign,seed,scale,tol,total,passes,failure_count,worst_scaled_diff\n"
      "frame_min_consistency," + std::to_string(o.seed) + ',' +
      fmt_double(o.scale) + ',' + fmt_double(o.tol) + ',' +
      std::to_string(o.count) + ',' + rep["passes"].dump() + ',' +
      rep["failure_count"].dump() + ',' + fmt_double(worst) + '\n';
  ordered_json out = attach_verdict(js.p, "frames", checks);
  if (!o.output.deliver("frames", out.dump(2) + "\n", csv)) return 1;
  return all_pass(checks) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "curv4lab: four-dimensional curvature-operator laboratory.\n"
      "Block-decomposed curvature algebra, soliton metric probes, reaction\n"
      "ODE trajectories and seeded verification campaigns."};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "config file (key = value; [section] per subcommand)");
  app.failure_message(CLI::FailureMessage::help);

  CatalogOpts cat;
  auto* catalog = app.add_subcommand(
      "catalog", "probe a catalog metric and verify soliton identities");
  catalog->add_option("--metric", cat.metric, "catalog metric name")
      ->required();
  catalog->add_option("--param", cat.params,
                      "chart parameter as key=value (repeatable)");
  catalog->add_option("--probes", cat.probes, "number of probe points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  catalog->add_option("--seed", cat.seed, "probe-point seed")
      ->capture_default_str();
  catalog->add_option("--scheme", cat.scheme, "curvature scheme")
      ->check(CLI::IsMember({"finite_difference", "closed_form"}))
      ->capture_default_str();
  catalog->add_option("--step", cat.h, "finite-difference step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  catalog->add_option("--tol", cat.tol,
                      "residual tolerance (default 1e-6 fd, 1e-10 closed)");
  catalog->add_flag("--normalize", cat.normalize,
                    "rescale a steady chart so R + |grad f|^2 = 1");
  cat.output.attach(catalog);

  FlowOpts flow;
  auto* flowc = app.add_subcommand(
      "flow", "integrate the reaction ODE and monitor the cone quantities");
  flowc->add_option("--system", flow.system, "reaction system")
      ->check(CLI::IsMember({"4d", "3d"}))
      ->capture_default_str();
  flowc->add_option("--init", flow.init,
                    "initial data family: sphere, zero or random-wpic")
      ->capture_default_str();
  flowc->add_option("--a0", flow.a0, "sphere family coefficient")
      ->capture_default_str();
  flowc->add_option("--m0", flow.m0, "3d initial triple m1,m2,m3")
      ->capture_default_str();
  flowc->add_option("--count", flow.count,
                    "trajectories to audit (1 = single run)")
      ->capture_default_str();
  flowc->add_option("--seed", flow.seed, "sampling seed")
      ->capture_default_str();
  flowc->add_option("--scale", flow.scale, "sampling scale")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  flowc->add_option("--t-max", flow.t_max, "integration horizon")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  flowc->add_option("--rel-tol", flow.rel_tol, "integrator relative tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  flowc->add_option("--rm-ceiling", flow.rm_ceiling,
                    "blow-up detection ceiling on |Rm| (or |m|)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  flowc->add_option("--store-stride", flow.store_stride,
                    "store every k-th state as a JSON checkpoint (0 = none)");
  flowc->add_option("--tol", flow.tol, "cone-exit tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  flowc->add_option("--threads", flow.threads,
                    "worker threads for --count audits (0 = auto)");
  flow.output.attach(flowc);

  AuditOpts audit;
  auto* auditc = app.add_subcommand(
      "audit", "run a seeded verification campaign over random operators");
  auditc->add_option("--campaign", audit.campaign, "campaign name")
      ->required();
  auditc->add_option("--samples", audit.samples, "sample count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auditc->add_option("--seed", audit.seed, "sampling seed")
      ->capture_default_str();
  auditc->add_option("--scale", audit.scale, "sampling scale")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auditc->add_option("--tol", audit.tol, "scaled residual tolerance")
      ->capture_default_str();
  auditc->add_option("--constraints", audit.constraints,
                     "comma-separated sampling constraints "
                     "(default: the campaign's required set)");
  auditc->add_option("--threads", audit.threads, "worker threads (0 = auto)");
  audit.output.attach(auditc);

  FramesOpts frames;
  auto* framesc = app.add_subcommand(
      "frames",
      "check the frame-minimization descent against the eigenvalue formula");
  framesc->add_option("--count", frames.count, "operator count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  framesc->add_option("--seed", frames.seed, "sampling seed")
      ->capture_default_str();
  framesc->add_option("--scale", frames.scale, "sampling scale")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  framesc->add_option("--restarts", frames.restarts, "descent restarts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  framesc->add_option("--tol", frames.tol, "agreement tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  frames.output.attach(framesc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (catalog->parsed()) return run_catalog(cat);
    if (flowc->parsed()) return run_flow(flow);
    if (auditc->parsed()) return run_audit(audit);
    if (framesc->parsed()) return run_frames(frames);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
