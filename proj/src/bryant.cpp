#include "curv4/bryant.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "curv4/errors.hpp"

namespace curv4 {

namespace {

// Tip expansion coefficients: phi = r + alpha r^3 + a5 r^5 + a7 r^7 (psi is
// its derivative), q = beta r + q3 r^3 + q5 r^5, f the integral of q, all
// matched to the system order by order. The handoff to the integrator has to
// happen outside the stiff zone near the tip (the right-hand side carries a
// 4(n-2)/r Jacobian scale), so the series is kept accurate out to r ~ 0.1.
struct TipSeries {
  int n;
  double alpha, beta, q3, a5, q5, a7;
  TipSeries(int dim, double a) : n(dim), alpha(a) {
    beta = 6.0 * alpha * (n - 1);
    q3 = 24.0 * (n - 1) * (n - 1) * alpha * alpha / (n + 2);
    a5 = (q3 + (15.0 * n - 12.0) * alpha * alpha) / (10.0 * n);
    a7 = ((21.0 * n - 36.0) * alpha * alpha * alpha +
          (54.0 * n + 16.0) * alpha * a5 + 15.0 * alpha * q3) /
         (28.0 * (n + 4.0));
    q5 = (n - 1) *
         (42.0 * a7 - 26.0 * alpha * a5 + 6.0 * alpha * alpha * alpha) / 5.0;
  }
  double phi(double r) const {
    double r2 = r * r;
    return r * (1.0 + r2 * (alpha + r2 * (a5 + r2 * a7)));
  }
  double psi(double r) const {
    double r2 = r * r;
    return 1.0 + r2 * (3.0 * alpha + r2 * (5.0 * a5 + r2 * 7.0 * a7));
  }
  double q(double r) const {
    double r2 = r * r;
    return r * (beta + r2 * (q3 + r2 * q5));
  }
  double f(double r) const {
    double r2 = r * r;
    return r2 * (0.5 * beta + r2 * (0.25 * q3 + r2 * q5 / 6.0));
  }
};

struct ProfileState {
  double phi, psi, q, f;
};

ProfileState rhs(int n, const ProfileState& s) {
  double ddphi = (n - 2) * (1.0 - s.psi * s.psi) / s.phi + s.psi * s.q;
  return {s.psi, ddphi, (n - 1) * ddphi / s.phi, s.q};
}

ProfileState axpy(const ProfileState& y, double h, const ProfileState& d) {
  return {y.phi + h * d.phi, y.psi + h * d.psi, y.q + h * d.q, y.f + h * d.f};
}

ProfileState rk4_step(int n, const ProfileState& y, double h) {
  ProfileState k1 = rhs(n, y);
  ProfileState k2 = rhs(n, axpy(y, 0.5 * h, k1));
  ProfileState k3 = rhs(n, axpy(y, 0.5 * h, k2));
  ProfileState k4 = rhs(n, axpy(y, h, k3));
  return {y.phi + h / 6.0 * (k1.phi + 2 * k2.phi + 2 * k3.phi + k4.phi),
          y.psi + h / 6.0 * (k1.psi + 2 * k2.psi + 2 * k3.psi + k4.psi),
          y.q + h / 6.0 * (k1.q + 2 * k2.q + 2 * k3.q + k4.q),
          y.f + h / 6.0 * (k1.f + 2 * k2.f + 2 * k3.f + k4.f)};
}

double scalar_of(int n, const ProfileState& s) {
  double ddphi = (n - 2) * (1.0 - s.psi * s.psi) / s.phi + s.psi * s.q;
  double k_rad = -ddphi / s.phi;
  double k_sph = (1.0 - s.psi * s.psi) / (s.phi * s.phi);
  return 2.0 * (n - 1) * k_rad + (n - 1) * (n - 2) * k_sph;
}

// Far-field value of the conserved energy R + q^2 for tip parameter alpha.
double shoot_energy(int n, double alpha, double r_max, int steps,
                    BryantProfile* store) {
  TipSeries tip(n, alpha);
  double h = r_max / steps;
  int i0 = std::max(1, static_cast<int>(std::ceil(0.1 / h)));
  ProfileState y{tip.phi(i0 * h), tip.psi(i0 * h), tip.q(i0 * h), tip.f(i0 * h)};
  if (store) {
    store->r.resize(static_cast<std::size_t>(steps) + 1);
    store->phi.resize(store->r.size());
    store->psi.resize(store->r.size());
    store->q.resize(store->r.size());
    store->f.resize(store->r.size());
    for (int i = 0; i <= i0; ++i) {
      double r = i * h;
      store->r[static_cast<std::size_t>(i)] = r;
      store->phi[static_cast<std::size_t>(i)] = tip.phi(r);
      store->psi[static_cast<std::size_t>(i)] = tip.psi(r);
      store->q[static_cast<std::size_t>(i)] = tip.q(r);
      store->f[static_cast<std::size_t>(i)] = tip.f(r);
    }
  }
  for (int i = i0; i < steps; ++i) {
    y = rk4_step(n, y, h);
    if (!(y.phi > 0.0) || !std::isfinite(y.psi))
      raise(ErrorCode::shooting_failed, "profile integration left the domain");
    if (store) {
      std::size_t k = static_cast<std::size_t>(i) + 1;
      store->r[k] = (i + 1) * h;
      store->phi[k] = y.phi;
      store->psi[k] = y.psi;
      store->q[k] = y.q;
      store->f[k] = y.f;
    }
  }
  return scalar_of(n, y) + y.q * y.q;
}

double hermite(double t, double h, double y0, double y1, double d0, double d1) {
  double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 +
         (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * d1;
}

}  // namespace

double BryantProfile::series_threshold() const { return 0.02; }

namespace {

struct NodeDerivs {
  double dphi, dpsi, dq, df;
};

NodeDerivs node_derivs(int n, const BryantProfile& p, std::size_t i) {
  if (p.r[i] <= 0.0) return {1.0, 0.0, 6.0 * p.alpha * (n - 1), 0.0};
  ProfileState s{p.phi[i], p.psi[i], p.q[i], p.f[i]};
  ProfileState d = rhs(n, s);
  return {d.phi, d.psi, d.q, d.f};
}

enum class Channel { phi, psi, q, f };

double interp(const BryantProfile& p, Channel ch, double rr) {
  if (rr < 0.0 || rr > p.r_max)
    raise(ErrorCode::invalid_argument, "radius outside the profile grid");
  std::size_t i = std::min(static_cast<std::size_t>(rr / p.h),
                           p.r.size() - 2);
  double t = (rr - p.r[i]) / p.h;
  NodeDerivs d0 = node_derivs(p.dim, p, i);
  NodeDerivs d1 = node_derivs(p.dim, p, i + 1);
  switch (ch) {
    case Channel::phi:
      return hermite(t, p.h, p.phi[i], p.phi[i + 1], d0.dphi, d1.dphi);
    case Channel::psi:
      return hermite(t, p.h, p.psi[i], p.psi[i + 1], d0.dpsi, d1.dpsi);
    case Channel::q:
      return hermite(t, p.h, p.q[i], p.q[i + 1], d0.dq, d1.dq);
    case Channel::f:
      return hermite(t, p.h, p.f[i], p.f[i + 1], d0.df, d1.df);
  }
  return 0.0;
}

}  // namespace

double BryantProfile::phi_at(double rr) const {
  if (rr < series_threshold()) return TipSeries(dim, alpha).phi(rr);
  return interp(*this, Channel::phi, rr);
}
double BryantProfile::psi_at(double rr) const {
  if (rr < series_threshold()) return TipSeries(dim, alpha).psi(rr);
  return interp(*this, Channel::psi, rr);
}
double BryantProfile::q_at(double rr) const {
  if (rr < series_threshold()) return TipSeries(dim, alpha).q(rr);
  return interp(*this, Channel::q, rr);
}
double BryantProfile::f_at(double rr) const {
  if (rr < series_threshold()) return TipSeries(dim, alpha).f(rr);
  return interp(*this, Channel::f, rr);
}

double BryantProfile::k_rad_at(double rr) const {
  if (rr < series_threshold()) {
    TipSeries t(dim, alpha);
    double r2 = rr * rr;
    double a3 = alpha * alpha * alpha;
    return -6.0 * alpha + (6.0 * alpha * alpha - 20.0 * t.a5) * r2 -
           (42.0 * t.a7 - 26.0 * alpha * t.a5 + 6.0 * a3) * r2 * r2;
  }
  ProfileState s{phi_at(rr), psi_at(rr), q_at(rr), f_at(rr)};
  return -rhs(dim, s).psi / s.phi;
}

double BryantProfile::k_sph_at(double rr) const {
  if (rr < series_threshold()) {
    TipSeries t(dim, alpha);
    double r2 = rr * rr;
    return -6.0 * alpha + (3.0 * alpha * alpha - 10.0 * t.a5) * r2 +
           (2.0 * alpha * t.a5 - 14.0 * t.a7) * r2 * r2;
  }
  double ph = phi_at(rr), ps = psi_at(rr);
  return (1.0 - ps * ps) / (ph * ph);
}

double BryantProfile::scalar_at(double rr) const {
  return 2.0 * (dim - 1) * k_rad_at(rr) + (dim - 1) * (dim - 2) * k_sph_at(rr);
}

double BryantProfile::energy_at(double rr) const {
  double qq = q_at(rr);
  return scalar_at(rr) + qq * qq;
}

BryantProfile bryant_profile(int dim, double r_max, double shoot_tol,
                             int grid_points) {
  if (dim != 3 && dim != 4)
    raise(ErrorCode::bad_params, "profile dimension must be 3 or 4");
  if (r_max < 10.0 || grid_points < 1000)
    raise(ErrorCode::bad_params, "profile grid too small");
  if (shoot_tol <= 0.0 || shoot_tol > 1e-2)
    raise(ErrorCode::bad_params, "shoot tolerance out of range");

  // R(0) = -6 n (n-1) alpha and the energy is conserved, so the measured
  // far-field energy is monotone in alpha; bracket around -1/(6 n (n-1)).
  double a_lo = -1.0 / (3.0 * dim * (dim - 1));   // energy ~ 2
  double a_hi = -1.0 / (12.0 * dim * (dim - 1));  // energy ~ 1/2
  double e_lo = shoot_energy(dim, a_lo, r_max, grid_points, nullptr);
  double e_hi = shoot_energy(dim, a_hi, r_max, grid_points, nullptr);
  if (!(e_lo > 1.0 && e_hi < 1.0))
    raise(ErrorCode::shooting_failed, "bisection bracket does not straddle 1");
  double alpha = 0.5 * (a_lo + a_hi);
  for (int it = 0; it < 100 && (a_hi - a_lo) > 1e-16; ++it) {
    alpha = 0.5 * (a_lo + a_hi);
    double e = shoot_energy(dim, alpha, r_max, grid_points, nullptr);
    if (e > 1.0)
      a_lo = alpha;
    else
      a_hi = alpha;
  }

  BryantProfile p;
  p.dim = dim;
  p.r_max = r_max;
  p.h = r_max / grid_points;
  p.alpha = alpha;
  double energy = shoot_energy(dim, alpha, r_max, grid_points, &p);
  p.shoot_residual = std::abs(energy - 1.0);
  if (p.shoot_residual > shoot_tol)
    raise(ErrorCode::shooting_failed,
          "shoot residual " + std::to_string(p.shoot_residual) +
              " exceeds tolerance");
  return p;
}

namespace {

std::shared_ptr<const BryantProfile> cached_profile(int dim, double r_max,
                                                    double shoot_tol,
                                                    int grid_points) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, double, int>,
                  std::shared_ptr<const BryantProfile>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(dim, r_max, shoot_tol, grid_points);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto p = std::make_shared<const BryantProfile>(
      bryant_profile(dim, r_max, shoot_tol, grid_points));
  cache[key] = p;
  return p;
}

MatX bryant_metric_at(const BryantProfile& p, const VecX& x) {
  int n = p.dim;
  double r = x.norm();
  if (r < 1e-8) return MatX::Identity(n, n);
  double s = p.phi_at(r) / r;
  if (r < p.series_threshold()) {
    TipSeries t(n, p.alpha);
    double r2 = r * r;
    s = 1.0 + r2 * (t.alpha + r2 * (t.a5 + r2 * t.a7));
  }
  VecX u = x / r;
  return MatX(s * s * MatX::Identity(n, n) +
              (1.0 - s * s) * u * u.transpose());
}

RiemannTensor bryant_riemann_at(const BryantProfile& p, const VecX& x) {
  int n = p.dim;
  double r = x.norm();
  double k0 = -6.0 * p.alpha;
  if (r < 1e-8) {
    MatX id = MatX::Identity(n, n);
    RiemannTensor rm = kulkarni_nomizu_half(id, id);
    rm *= k0;
    return rm;
  }
  double k_rad = p.k_rad_at(r);
  double k_sph = p.k_sph_at(r);
  MatX g = bryant_metric_at(p, x);
  VecX u = x / r;
  MatX k = u * u.transpose();        // radial part of the metric
  MatX h = g - k;                    // spherical part
  RiemannTensor rm = kulkarni_nomizu_half(h, h);
  rm *= k_sph;
  RiemannTensor mixed = kulkarni_nomizu_half(k, h);
  mixed *= 2.0 * k_rad;
  rm += mixed;
  return rm;
}

VecX bryant_grad_at(const BryantProfile& p, const VecX& x) {
  int n = p.dim;
  double r = x.norm();
  if (r < 1e-8) return VecX::Zero(n);
  return VecX(p.q_at(r) / r * x);
}

MatX bryant_hess_at(const BryantProfile& p, const VecX& x) {
  int n = p.dim;
  double r = x.norm();
  double beta = 6.0 * p.alpha * (n - 1);
  if (r < 1e-8) return MatX(beta * MatX::Identity(n, n));
  double phi = p.phi_at(r), psi = p.psi_at(r), q = p.q_at(r);
  ProfileState s{phi, psi, q, 0.0};
  double dq = rhs(n, s).q;
  MatX g = bryant_metric_at(p, x);
  VecX u = x / r;
  MatX k = u * u.transpose();
  MatX h = g - k;
  return MatX(dq * k + (psi * q / phi) * h);
}

MetricChart bryant_factor(int dim, const std::map<std::string, double>& params) {
  double r_max = params.count("r_max") ? params.at("r_max") : 50.0;
  double shoot_tol =
      params.count("shoot_tol") ? params.at("shoot_tol") : 1e-8;
  int grid = params.count("grid")
                 ? static_cast<int>(params.at("grid"))
                 : 50000;
  auto p = cached_profile(dim, r_max, shoot_tol, grid);
  MetricChart ch;
  ch.dim = dim;
  ch.rho = 0.0;
  ch.has_potential = true;
  double half = std::min(3.0, (r_max - 1.0) / 2.0);
  ch.region.lo = VecX::Constant(dim, -half);
  ch.region.hi = VecX::Constant(dim, half);
  ch.region.shells.push_back({0, dim, 0.05, std::min(2.0 * half, r_max - 1.0)});
  ch.metric = [p](const VecX& x) { return bryant_metric_at(*p, x); };
  ch.potential = [p](const VecX& x) { return p->f_at(x.norm()); };
  ch.has_closed_form = true;
  ch.riemann_coord = [p](const VecX& x) { return bryant_riemann_at(*p, x); };
  ch.potential_grad = [p](const VecX& x) { return bryant_grad_at(*p, x); };
  ch.potential_hess = [p](const VecX& x) { return bryant_hess_at(*p, x); };
  return ch;
}

MetricChart flat_line() {
  MetricChart ch;
  ch.dim = 1;
  ch.rho = 0.0;
  ch.has_potential = true;
  ch.region.lo = VecX::Constant(1, -2.0);
  ch.region.hi = VecX::Constant(1, 2.0);
  ch.metric = [](const VecX&) { return MatX(MatX::Identity(1, 1)); };
  ch.potential = [](const VecX&) { return 0.0; };
  ch.has_closed_form = true;
  ch.riemann_coord = [](const VecX&) { return RiemannTensor(1); };
  ch.potential_grad = [](const VecX&) { return VecX(VecX::Zero(1)); };
  ch.potential_hess = [](const VecX&) { return MatX(MatX::Zero(1, 1)); };
  return ch;
}

}  // namespace

namespace {

void check_bryant_params(const std::map<std::string, double>& params) {
  for (const auto& kv : params)
    if (kv.first != "r_max" && kv.first != "shoot_tol" && kv.first != "grid")
      raise(ErrorCode::bad_params, "unknown parameter '" + kv.first + "'");
}

}  // namespace

MetricChart bryant_chart(int dim, const std::map<std::string, double>& params) {
  check_bryant_params(params);
  return bryant_factor(dim, params);
}

MetricChart bryant3_x_r_chart(const std::map<std::string, double>& params) {
  check_bryant_params(params);
  return product_chart(bryant_factor(3, params), flat_line(), "bryant3_x_r");
}

}  // namespace curv4
