#include "curv4/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "curv4/curvop.hpp"
#include "curv4/errors.hpp"

namespace curv4 {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json mat3_to_json(const Mat3& m) {
  json a = json::array();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a.push_back(m(i, j));
  return a;
}

Mat3 mat3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 9)
    raise(ErrorCode::invalid_argument, "expected a 9-entry row-major array");
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j2 = 0; j2 < 3; ++j2)
      m(i, j2) = j[static_cast<std::size_t>(3 * i + j2)].get<double>();
  return m;
}

json vec_to_json_fixed(const double* v, int n) {
  json a = json::array();
  for (int i = 0; i < n; ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

json matrix_to_json(const MatX& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) a.push_back(m(i, j));
  return a;
}

json vector_to_json(const VecX& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json curvop_to_json(const CurvOp4& op) {
  json j;
  j["A"] = mat3_to_json(op.A);
  j["B"] = mat3_to_json(op.B);
  j["C"] = mat3_to_json(op.C);
  j["bianchi_flag"] = op.bianchi_flag;
  return j;
}

CurvOp4 curvop_from_json(const json& j) {
  if (!j.is_object() || !j.contains("A") || !j.contains("B") ||
      !j.contains("C"))
    raise(ErrorCode::invalid_argument,
          "operator JSON needs A, B and C matrices");
  return make_curvop(mat3_from_json(j["A"]), mat3_from_json(j["B"]),
                     mat3_from_json(j["C"]));
}

json summary_to_json(const SpectralSummary& s) {
  json j;
  j["a_eigs"] = vec_to_json_fixed(s.a_eigs.data(), 3);
  j["c_eigs"] = vec_to_json_fixed(s.c_eigs.data(), 3);
  j["b_singular"] = vec_to_json_fixed(s.b_singular.data(), 3);
  j["b_det_sign"] = s.b_det_sign;
  j["b_signed"] = vec_to_json_fixed(s.b_signed.data(), 3);
  j["ricci_eigs"] = vec_to_json_fixed(s.ricci_eigs.data(), 4);
  j["traceless_ricci_eigs"] = vec_to_json_fixed(s.traceless_ricci_eigs.data(), 4);
  j["scalar"] = s.scalar;
  j["rm_norm"] = s.rm_norm;
  j["ricci_norm_sq"] = s.ricci_norm_sq;
  return j;
}

json cone_report_to_json(const ConeReport& r) {
  json j;
  j["pic"] = r.pic;
  j["wpic"] = r.wpic;
  j["half_pic"] = r.half_pic;
  j["half_wpic"] = r.half_wpic;
  j["a_nonneg"] = r.a_nonneg;
  j["c_nonneg"] = r.c_nonneg;
  j["ricci_nonneg"] = r.ricci_nonneg;
  j["ricci_2nonneg"] = r.ricci_2nonneg;
  json margins;
  margins["A1_plus_A2"] = r.margin_a12;
  margins["C1_plus_C2"] = r.margin_c12;
  margins["Lambda_1"] = r.margin_ricci1;
  margins["Lambda1_plus_Lambda2"] = r.margin_ricci2;
  margins["R_minus_4sigma3"] = r.margin_v;
  j["margins"] = margins;
  if (r.uniform_pic_lambda)
    j["uniform_pic_lambda"] = *r.uniform_pic_lambda;
  else
    j["uniform_pic_lambda"] = nullptr;
  return j;
}

json monitor_to_json(const MonitorValues& m) {
  json j;
  j["u"] = m.u;
  j["v"] = m.v;
  j["min_a12"] = m.min_a12;
  j["min_c12"] = m.min_c12;
  j["tr_gap"] = m.tr_gap;
  j["rm_norm"] = m.rm_norm;
  j["scalar"] = m.scalar;
  return j;
}

json norm_bound_to_json(const NormBoundReport& r) {
  json j;
  j["applicable"] = r.applicable;
  j["holds"] = r.holds;
  j["rm_norm"] = r.rm_norm;
  j["scalar"] = r.scalar;
  return j;
}

json audit_report_to_json(const AuditReport& r, bool include_wall_time) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["campaign"] = r.campaign;
  j["seed"] = r.seed;
  j["total"] = r.total;
  j["passes"] = r.passes;
  j["worst_residual"] = r.worst_residual;
  j["counterexample_count"] = r.counterexample_count;
  json ces = json::array();
  for (const Counterexample& ce : r.counterexamples) {
    json c;
    c["index"] = ce.index;
    c["op"] = curvop_to_json(ce.op);
    json margins;
    for (const auto& kv : ce.margins) margins[kv.first] = kv.second;
    c["margins"] = margins;
    if (!ce.note.empty()) c["note"] = ce.note;
    ces.push_back(std::move(c));
  }
  j["counterexamples"] = std::move(ces);
  j["tol"] = r.tol;
  j["scale"] = r.scale;
  j["notes"] = r.notes;
  if (include_wall_time) j["wall_time"] = r.wall_time;
  return j;
}

json flow_audit_to_json(const FlowAuditReport& r, bool include_wall_time) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["campaign"] = "wpic_flow_preservation";
  j["total"] = r.total;
  j["passes"] = r.passes;
  j["failure_count"] = r.failure_count;
  j["worst_min_a12c12"] = r.worst_min_a12c12;
  j["worst_u"] = r.worst_u;
  j["worst_v"] = r.worst_v;
  j["worst_tr_gap"] = r.worst_tr_gap;
  j["blow_ups"] = r.blow_ups;
  j["step_failures"] = r.step_failures;
  j["failing_indices"] = r.failing_indices;
  if (include_wall_time) j["wall_time"] = r.wall_time;
  return j;
}

json flow_audit3_to_json(const FlowAuditReport3& r, bool include_wall_time) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["campaign"] = "m3_flow_preservation";
  j["total"] = r.total;
  j["passes"] = r.passes;
  j["failure_count"] = r.failure_count;
  j["worst_q"] = r.worst_q;
  j["blow_ups"] = r.blow_ups;
  j["step_failures"] = r.step_failures;
  j["failing_indices"] = r.failing_indices;
  if (include_wall_time) j["wall_time"] = r.wall_time;
  return j;
}

json trajectory4_to_json(const ReactionTrajectory4& tr) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["system"] = "4d";
  j["status"] = flow_status_name(tr.status);
  if (tr.status == FlowStatus::blow_up) j["t_star"] = tr.t_star;
  if (!tr.diagnostic.empty()) j["diagnostic"] = tr.diagnostic;
  j["steps_accepted"] = tr.steps_accepted;
  j["steps_rejected"] = tr.steps_rejected;
  j["t_final"] = tr.times.empty() ? 0.0 : tr.times.back();
  double min_u = std::numeric_limits<double>::infinity();
  double min_v = min_u, min_ac = min_u;
  double max_rm = 0.0, max_gap = 0.0;
  for (const MonitorValues& m : tr.monitors) {
    min_u = std::min(min_u, m.u);
    min_v = std::min(min_v, m.v);
    min_ac = std::min(min_ac, std::min(m.min_a12, m.min_c12));
    max_rm = std::max(max_rm, m.rm_norm);
    max_gap = std::max(max_gap, std::abs(m.tr_gap));
  }
  json worst;
  worst["min_u"] = std::isfinite(min_u) ? min_u : 0.0;
  worst["min_v"] = std::isfinite(min_v) ? min_v : 0.0;
  worst["min_a12c12"] = std::isfinite(min_ac) ? min_ac : 0.0;
  worst["max_rm_norm"] = max_rm;
  worst["max_tr_gap"] = max_gap;
  j["extrema"] = worst;
  if (!tr.monitors.empty()) {
    j["initial_monitors"] = monitor_to_json(tr.monitors.front());
    j["final_monitors"] = monitor_to_json(tr.monitors.back());
  }
  json cps = json::array();
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    json c;
    c["t"] = tr.state_times[i];
    c["op"] = curvop_to_json(tr.states[i]);
    c["monitors"] = monitor_to_json(monitor_functionals(tr.states[i]));
    cps.push_back(std::move(c));
  }
  j["checkpoints"] = std::move(cps);
  return j;
}

json trajectory3_to_json(const ReactionTrajectory3& tr) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["system"] = "3d";
  j["status"] = flow_status_name(tr.status);
  if (tr.status == FlowStatus::blow_up) j["t_star"] = tr.t_star;
  if (!tr.diagnostic.empty()) j["diagnostic"] = tr.diagnostic;
  j["steps_accepted"] = tr.steps_accepted;
  j["steps_rejected"] = tr.steps_rejected;
  j["t_final"] = tr.times.empty() ? 0.0 : tr.times.back();
  double min_q = std::numeric_limits<double>::infinity();
  double min_m12 = min_q;
  double max_norm = 0.0;
  for (const Monitor3& m : tr.monitors) {
    min_q = std::min(min_q, m.q);
    min_m12 = std::min(min_m12, m.m12);
    max_norm = std::max(max_norm, m.norm);
  }
  json worst;
  worst["min_q"] = std::isfinite(min_q) ? min_q : 0.0;
  worst["min_m12"] = std::isfinite(min_m12) ? min_m12 : 0.0;
  worst["max_norm"] = max_norm;
  j["extrema"] = worst;
  json cps = json::array();
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    json c;
    c["t"] = tr.times[i];
    c["m"] = vec_to_json_fixed(tr.states[i].data(), 3);
    cps.push_back(std::move(c));
  }
  j["checkpoints"] = std::move(cps);
  return j;
}

std::string trajectory4_csv(const ReactionTrajectory4& tr) {
  std::string out = "t,u,v,min_a12,min_c12,tr_gap,rm_norm,scalar\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const MonitorValues& m = tr.monitors[i];
    out += fmt(tr.times[i]) + ',' + fmt(m.u) + ',' + fmt(m.v) + ',' +
           fmt(m.min_a12) + ',' + fmt(m.min_c12) + ',' + fmt(m.tr_gap) + ',' +
           fmt(m.rm_norm) + ',' + fmt(m.scalar) + '\n';
  }
  return out;
}

std::string trajectory3_csv(const ReactionTrajectory3& tr) {
  std::string out = "t,m1,m2,m3,q,m12,norm\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const Vec3& m = tr.states[i];
    const Monitor3& mo = tr.monitors[i];
    out += fmt(tr.times[i]) + ',' + fmt(m(0)) + ',' + fmt(m(1)) + ',' +
           fmt(m(2)) + ',' + fmt(mo.q) + ',' + fmt(mo.m12) + ',' +
           fmt(mo.norm) + '\n';
  }
  return out;
}

CatalogReport build_catalog_report(const MetricChart& chart, int probes,
                                   std::uint64_t seed, CurvatureScheme scheme,
                                   double h) {
  CatalogReport rep;
  rep.metric = chart.name;
  rep.dim = chart.dim;
  rep.rho = chart.rho;
  rep.params = chart.params;
  rep.scheme = scheme == CurvatureScheme::closed_form ? "closed_form"
                                                      : "finite_difference";
  rep.h = h;
  rep.seed = seed;
  rep.has_potential = chart.has_potential;
  rep.scalar_min = std::numeric_limits<double>::infinity();
  rep.scalar_max = -rep.scalar_min;
  rep.min_a12c12 = std::numeric_limits<double>::infinity();

  std::vector<VecX> pts = probe_points(chart, probes, seed);
  double energy_sum = 0.0;
  for (const VecX& x : pts) {
    ProbePointReport row;
    row.point = x;
    CurvatureData cd = riemann_at(chart, x, scheme, h);
    row.scalar = cd.scalar;
    row.fd_error_bar = cd.fd_error_bar;
    rep.scalar_min = std::min(rep.scalar_min, cd.scalar);
    rep.scalar_max = std::max(rep.scalar_max, cd.scalar);
    rep.max_fd_error_bar = std::max(rep.max_fd_error_bar, cd.fd_error_bar);
    if (chart.dim == 4) {
      CurvOp4 op = build_from_riemann(cd.rm);
      SpectralSummary s = spectral_summary(op);
      row.has_cones = true;
      row.cones = classify_cones(s);
      row.rm_norm = s.rm_norm;
      row.bianchi_flag = op.bianchi_flag;
      rep.wpic_all = rep.wpic_all && row.cones.wpic;
      rep.ricci_nonneg_all = rep.ricci_nonneg_all && row.cones.ricci_nonneg;
      NormBoundReport nb = norm_bound_check(s);
      rep.rm_leq_r_all = rep.rm_leq_r_all && (!nb.applicable || nb.holds);
      rep.min_a12c12 = std::min(
          rep.min_a12c12, std::min(row.cones.margin_a12, row.cones.margin_c12));
    }
    if (chart.has_potential) {
      SolitonResiduals sr = soliton_residuals(chart, x, scheme, h);
      row.has_soliton = true;
      row.eq_residual = sr.eq_residual;
      row.ham1 = sr.ham1;
      row.ham2 = sr.ham2;
      row.energy = sr.energy;
      row.grad_f_norm_sq = sr.grad_f_norm_sq;
      rep.ham3_constancy = sr.ham3_constancy;
      rep.worst_eq_residual = std::max(rep.worst_eq_residual, sr.eq_residual);
      rep.worst_ham1 = std::max(rep.worst_ham1, sr.ham1);
      rep.worst_ham2 = std::max(rep.worst_ham2, sr.ham2);
      energy_sum += sr.energy;
    }
    rep.points.push_back(std::move(row));
  }
  if (chart.has_potential && !pts.empty())
    rep.energy_mean = energy_sum / static_cast<double>(pts.size());
  if (rep.points.empty()) {
    rep.scalar_min = 0.0;
    rep.scalar_max = 0.0;
  }
  if (!std::isfinite(rep.min_a12c12)) rep.min_a12c12 = 0.0;
  return rep;
}

json catalog_report_to_json(const CatalogReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["metric"] = r.metric;
  j["dim"] = r.dim;
  j["rho"] = r.rho;
  json params;
  for (const auto& kv : r.params) params[kv.first] = kv.second;
  j["params"] = params;
  j["scheme"] = r.scheme;
  j["h"] = r.h;
  j["seed"] = r.seed;
  j["probes"] = r.points.size();
  j["has_potential"] = r.has_potential;
  json summary;
  summary["scalar_min"] = r.scalar_min;
  summary["scalar_max"] = r.scalar_max;
  summary["max_fd_error_bar"] = r.max_fd_error_bar;
  if (r.has_potential) {
    summary["ham3_constancy"] = r.ham3_constancy;
    summary["energy_mean"] = r.energy_mean;
    summary["worst_eq_residual"] = r.worst_eq_residual;
    summary["worst_ham1"] = r.worst_ham1;
    summary["worst_ham2"] = r.worst_ham2;
  }
  if (r.dim == 4) {
    summary["wpic_all"] = r.wpic_all;
    summary["ricci_nonneg_all"] = r.ricci_nonneg_all;
    summary["rm_leq_r_all"] = r.rm_leq_r_all;
    summary["min_a12c12"] = r.min_a12c12;
  }
  j["summary"] = summary;
  json pts = json::array();
  for (const ProbePointReport& p : r.points) {
    json row;
    row["x"] = vector_to_json(p.point);
    row["scalar"] = p.scalar;
    row["fd_error_bar"] = p.fd_error_bar;
    if (p.has_soliton) {
      row["eq_residual"] = p.eq_residual;
      row["ham1"] = p.ham1;
      row["ham2"] = p.ham2;
      row["energy"] = p.energy;
      row["grad_f_norm_sq"] = p.grad_f_norm_sq;
    }
    if (p.has_cones) {
      row["cones"] = cone_report_to_json(p.cones);
      row["rm_norm"] = p.rm_norm;
      row["bianchi_flag"] = p.bianchi_flag;
    }
    pts.push_back(std::move(row));
  }
  j["points"] = std::move(pts);
  return j;
}

std::string catalog_report_csv(const CatalogReport& r) {
  std::string out =
      "metric,point_index,x0,x1,x2,x3,scalar,fd_error_bar,eq_residual,ham1,"
      "ham2,energy,margin_a12,margin_c12,lambda1,rm_norm\n";
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const ProbePointReport& p = r.points[i];
    std::string row = r.metric + ',' + std::to_string(i);
    for (int k = 0; k < 4; ++k)
      row += ',' + (k < p.point.size() ? fmt(p.point(k)) : std::string());
    row += ',' + fmt(p.scalar) + ',' + fmt(p.fd_error_bar);
    if (p.has_soliton)
      row += ',' + fmt(p.eq_residual) + ',' + fmt(p.ham1) + ',' +
             fmt(p.ham2) + ',' + fmt(p.energy);
    else
      row += ",,,,";
    if (p.has_cones)
      row += ',' + fmt(p.cones.margin_a12) + ',' + fmt(p.cones.margin_c12) +
             ',' + fmt(p.cones.margin_ricci1) + ',' + fmt(p.rm_norm);
    else
      row += ",,,,";
    out += row + '\n';
  }
  return out;
}

}  // namespace curv4
