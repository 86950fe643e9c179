#pragma once

#include <cstdint>
#include <vector>

#include "curv4/metric.hpp"

namespace curv4 {

// Rotationally symmetric steady soliton profile on R^n (n = 3 or 4):
// metric dr^2 + phi(r)^2 g_{S^{n-1}}, potential f(r).  First-order system in
// (phi, psi, q, f) with psi = phi', q = f':
//   phi' = psi,
//   psi' = (n-2)(1 - psi^2)/phi + psi q,
//   q'   = (n-1) psi'/phi,
//   f'   = q,
// closed near the tip by phi = r + alpha r^3 + ..., q = 6 alpha (n-1) r + ...
// The tip parameter alpha < 0 is found by bisection so that the conserved
// energy R + q^2 equals 1 (measured at r_max), hence R(0) ~ 1.
struct BryantProfile {
  int dim = 0;
  double r_max = 0.0;
  double h = 0.0;            // uniform grid spacing
  double alpha = 0.0;        // tip expansion coefficient
  double shoot_residual = 0.0;  // |measured energy - 1|
  std::vector<double> r, phi, psi, q, f;

  // Cubic Hermite interpolation (derivatives supplied by the system RHS).
  double phi_at(double rr) const;
  double psi_at(double rr) const;
  double q_at(double rr) const;
  double f_at(double rr) const;

  // Sectional curvatures of radial and spherical planes, and scalar.
  double k_rad_at(double rr) const;  // -phi''/phi
  double k_sph_at(double rr) const;  // (1 - psi^2)/phi^2
  double scalar_at(double rr) const;
  double energy_at(double rr) const;  // R + q^2

  double series_threshold() const;   // below this radius use the tip series
};

BryantProfile bryant_profile(int dim, double r_max = 50.0,
                             double shoot_tol = 1e-8, int grid_points = 50000);

// Catalog charts backed by a shared profile (Cartesian coordinates).
MetricChart bryant_chart(int dim, const std::map<std::string, double>& params);
MetricChart bryant3_x_r_chart(const std::map<std::string, double>& params);

}  // namespace curv4
