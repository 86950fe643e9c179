#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "curv4/riemann.hpp"

namespace curv4 {

// Coordinate box used for probe sampling, with optional radial shells on
// index sub-ranges (used by rotationally symmetric charts).
struct ProbeRegion {
  VecX lo, hi;
  struct RadialShell {
    int start = 0, count = 0;
    double r_min = 0.0, r_max = 0.0;
  };
  std::vector<RadialShell> shells;

  bool contains(const VecX& x) const;
};

// A coordinate chart with a Riemannian metric and an optional soliton
// potential. Closed-form curvature and potential derivatives are attached
// where available; the finite-difference scheme only needs metric().
struct MetricChart {
  std::string name;
  int dim = 0;
  std::map<std::string, double> params;
  double rho = 0.0;  // soliton constant: shrinking > 0, steady 0, expanding < 0
  bool has_potential = false;
  ProbeRegion region;

  std::function<MatX(const VecX&)> metric;
  std::function<double(const VecX&)> potential;

  bool has_closed_form = false;
  std::function<RiemannTensor(const VecX&)> riemann_coord;  // all indices down
  std::function<VecX(const VecX&)> potential_grad;          // partial_i f
  std::function<MatX(const VecX&)> potential_hess;          // covariant Hessian
  std::function<VecX(const VecX&)> scalar_grad;             // partial_i R
};

// Catalog lookup. Names: cigar, cigar_x_r2, cigar_x_cigar, gaussian_shrinker,
// gaussian_expander, s4_round, cp2_fubini_study, s2xs2, s3xr, bryant3_x_r,
// bryant4, flat4. Unknown keys in params raise BadParams.
MetricChart catalog_metric(const std::string& name,
                           const std::map<std::string, double>& params = {});

std::vector<std::string> catalog_names();

// Riemannian product. Factors must agree on the soliton constant
// (error BadParams); potentials add; closed forms compose blockwise.
MetricChart product_chart(const MetricChart& f1, const MetricChart& f2,
                          const std::string& name);

enum class CurvatureScheme { finite_difference, closed_form };

struct CurvatureData {
  RiemannTensor rm;      // components in the orthonormal frame
  MatX ricci;            // same frame
  double scalar = 0.0;
  MatX frame;            // columns: frame vectors in chart coordinates
  MatX g;                // metric at the point
  double fd_error_bar = 0.0;  // h vs 2h Richardson estimate; 0 for closed form
};

// Curvature at a point, expressed in the orthonormal frame from the Cholesky
// factor g = L L^t (frame matrix L^{-t}, orientation-preserving).
CurvatureData riemann_at(const MetricChart& chart, const VecX& x,
                         CurvatureScheme scheme = CurvatureScheme::finite_difference,
                         double h = 1e-4);

struct SolitonResiduals {
  double eq_residual = 0.0;      // |Ric + Hess f - rho g| in the frame
  double ham1 = 0.0;             // |R + Lap f - dim * rho|
  double ham2 = 0.0;             // |grad R - 2 Ric(grad f)|_g
  double ham3_constancy = 0.0;   // spread of R + |grad f|^2 - 2 rho f on probes
  double energy = 0.0;           // R + |grad f|^2 - 2 rho f at the point
  double scalar = 0.0;
  double grad_f_norm_sq = 0.0;
};

SolitonResiduals soliton_residuals(const MetricChart& chart, const VecX& x,
                                   CurvatureScheme scheme =
                                       CurvatureScheme::finite_difference,
                                   double h = 1e-4, int probes = 32,
                                   std::uint64_t probe_seed = 7);

// Probe points inside the chart region, a pure function of the seed.
std::vector<VecX> probe_points(const MetricChart& chart, int count,
                               std::uint64_t seed);

// For a steady chart (rho == 0, error NotSteady): measures
// c0 = R + |grad f|^2 over probes (error NonConstantEnergy if not constant),
// and returns the chart with metric scaled by c0 so the constant becomes 1.
// Charts with c0 below tolerance (flat geometry) are returned unchanged.
MetricChart normalize_steady(const MetricChart& chart,
                             CurvatureScheme scheme =
                                 CurvatureScheme::closed_form,
                             int probes = 32, std::uint64_t probe_seed = 7);

}  // namespace curv4
