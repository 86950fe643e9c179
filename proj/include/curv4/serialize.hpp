#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "curv4/audit.hpp"
#include "curv4/metric.hpp"

namespace curv4 {

// All report emitters use ordered JSON so field order (and therefore the
// serialized bytes) is a pure function of the data.
using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

json matrix_to_json(const MatX& m);  // row-major flat array
json vector_to_json(const VecX& v);

json curvop_to_json(const CurvOp4& op);
CurvOp4 curvop_from_json(const json& j);

json summary_to_json(const SpectralSummary& s);
json cone_report_to_json(const ConeReport& r);
json monitor_to_json(const MonitorValues& m);
json norm_bound_to_json(const NormBoundReport& r);

// Audit reports: wall time is excluded by default so that the serialized
// report is identical across runs of the same (campaign, spec, tol).
json audit_report_to_json(const AuditReport& r, bool include_wall_time = false);
json flow_audit_to_json(const FlowAuditReport& r,
                        bool include_wall_time = false);
json flow_audit3_to_json(const FlowAuditReport3& r,
                         bool include_wall_time = false);

// Trajectory dumps: JSON carries status, summary extrema over the monitor
// channels, and the stored state checkpoints; the CSV carries one row of
// monitor channels per accepted step.
json trajectory4_to_json(const ReactionTrajectory4& tr);
json trajectory3_to_json(const ReactionTrajectory3& tr);
std::string trajectory4_csv(const ReactionTrajectory4& tr);
std::string trajectory3_csv(const ReactionTrajectory3& tr);

// Probe sweep over a catalog chart: curvature, cone classification (4D) and
// soliton residuals (charts with a potential) at seeded probe points.
struct ProbePointReport {
  VecX point;
  double scalar = 0.0;
  double fd_error_bar = 0.0;
  bool has_soliton = false;
  double eq_residual = 0.0;
  double ham1 = 0.0;
  double ham2 = 0.0;
  double energy = 0.0;
  double grad_f_norm_sq = 0.0;
  bool has_cones = false;
  ConeReport cones;
  double rm_norm = 0.0;
  bool bianchi_flag = false;
};

struct CatalogReport {
  std::string metric;
  int dim = 0;
  double rho = 0.0;
  std::map<std::string, double> params;
  std::string scheme;
  double h = 0.0;
  std::uint64_t seed = 0;
  bool has_potential = false;
  std::vector<ProbePointReport> points;
  double ham3_constancy = 0.0;   // only when has_potential
  double energy_mean = 0.0;      // mean of R + |grad f|^2 - 2 rho f
  double worst_eq_residual = 0.0;
  double worst_ham1 = 0.0;
  double worst_ham2 = 0.0;
  double max_fd_error_bar = 0.0;
  double scalar_min = 0.0;
  double scalar_max = 0.0;
  bool wpic_all = true;        // 4D charts only
  bool ricci_nonneg_all = true;
  bool rm_leq_r_all = true;
  double min_a12c12 = 0.0;     // min over probes of min(A1+A2, C1+C2)
};

CatalogReport build_catalog_report(
    const MetricChart& chart, int probes, std::uint64_t seed,
    CurvatureScheme scheme = CurvatureScheme::finite_difference,
    double h = 1e-4);

json catalog_report_to_json(const CatalogReport& r);
std::string catalog_report_csv(const CatalogReport& r);

}  // namespace curv4
