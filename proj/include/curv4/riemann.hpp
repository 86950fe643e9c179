#pragma once

#include <vector>

#include "curv4/linalg.hpp"

namespace curv4 {

// Fully covariant curvature tensor R_{ijkl} in a fixed basis.
// Sign convention: for the unit round sphere, R_{ijij} = +1 for i != j in an
// orthonormal frame (sectional curvature sec(e_i, e_j) = R_{ijij}).
class RiemannTensor {
 public:
  RiemannTensor() : dim_(0) {}
  explicit RiemannTensor(int dim)
      : dim_(dim), data_(static_cast<std::size_t>(dim * dim * dim * dim), 0.0) {}

  int dim() const { return dim_; }

  double operator()(int i, int j, int k, int l) const {
    return data_[idx(i, j, k, l)];
  }
  double& at(int i, int j, int k, int l) { return data_[idx(i, j, k, l)]; }

  // Writes R_{ijkl} together with the images under the algebraic symmetries.
  void set_sym(int i, int j, int k, int l, double v) {
    at(i, j, k, l) = v;
    at(j, i, k, l) = -v;
    at(i, j, l, k) = -v;
    at(j, i, l, k) = v;
    at(k, l, i, j) = v;
    at(l, k, i, j) = -v;
    at(k, l, j, i) = -v;
    at(l, k, j, i) = v;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  // Largest violation among antisymmetry in each index pair and the pair
  // interchange symmetry. Zero for a valid algebraic curvature tensor.
  double symmetry_residual() const;

  // Largest first-Bianchi cyclic sum |R_{ijkl} + R_{iklj} + R_{iljk}|.
  double bianchi_residual() const;

  MatX ricci() const;     // Ric_{ik} = sum_j R_{ijkj}
  double scalar() const;  // trace of ricci()

  double contract(const VecX& a, const VecX& b, const VecX& c,
                  const VecX& d) const;

  // Components in the basis with vectors given by the columns of m.
  RiemannTensor transformed(const MatX& m) const;

  RiemannTensor& operator+=(const RiemannTensor& o);
  RiemannTensor& operator*=(double s);

 private:
  std::size_t idx(int i, int j, int k, int l) const {
    return static_cast<std::size_t>(((i * dim_ + j) * dim_ + k) * dim_ + l);
  }

  int dim_;
  std::vector<double> data_;
};

// Constant sectional curvature k: R = (k/2) g ^ g for g = identity.
RiemannTensor constant_curvature_tensor(int dim, double k);

// Kulkarni-Nomizu product (h ^ g)/2 contribution R_{ijkl} =
// (h_{ik} g_{jl} + h_{jl} g_{ik} - h_{il} g_{jk} - h_{jk} g_{il}) / 2.
RiemannTensor kulkarni_nomizu_half(const MatX& h, const MatX& g);

// Direct sum of factor tensors on index blocks [0,d1) and [d1,d1+d2).
RiemannTensor product_tensor(const RiemannTensor& r1, const RiemannTensor& r2);

}  // namespace curv4
