#include "curv4/riemann.hpp"

namespace curv4 {

double RiemannTensor::symmetry_residual() const {
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        for (int l = 0; l < dim_; ++l) {
          double v = (*this)(i, j, k, l);
          worst = std::max(worst, std::abs(v + (*this)(j, i, k, l)));
          worst = std::max(worst, std::abs(v + (*this)(i, j, l, k)));
          worst = std::max(worst, std::abs(v - (*this)(k, l, i, j)));
        }
  return worst;
}

double RiemannTensor::bianchi_residual() const {
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        for (int l = 0; l < dim_; ++l) {
          double c = (*this)(i, j, k, l) + (*this)(i, k, l, j) +
                     (*this)(i, l, j, k);
          worst = std::max(worst, std::abs(c));
        }
  return worst;
}

MatX RiemannTensor::ricci() const {
  MatX ric = MatX::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int k = 0; k < dim_; ++k) {
      double s = 0.0;
      for (int j = 0; j < dim_; ++j) s += (*this)(i, j, k, j);
      ric(i, k) = s;
    }
  return ric;
}

double RiemannTensor::scalar() const { return ricci().trace(); }

double RiemannTensor::contract(const VecX& a, const VecX& b, const VecX& c,
                               const VecX& d) const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) {
    if (a(i) == 0.0) continue;
    for (int j = 0; j < dim_; ++j) {
      if (b(j) == 0.0) continue;
      for (int k = 0; k < dim_; ++k) {
        if (c(k) == 0.0) continue;
        double partial = 0.0;
        for (int l = 0; l < dim_; ++l) partial += (*this)(i, j, k, l) * d(l);
        s += a(i) * b(j) * c(k) * partial;
      }
    }
  }
  return s;
}

RiemannTensor RiemannTensor::transformed(const MatX& m) const {
  // One index at a time; cost O(dim^5) per pass.
  int n = dim_;
  RiemannTensor t1(n), t2(n);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int i = 0; i < n; ++i) s += m(i, a) * (*this)(i, j, k, l);
          t1.at(a, j, k, l) = s;
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int j = 0; j < n; ++j) s += m(j, b) * t1(a, j, k, l);
          t2.at(a, b, k, l) = s;
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int k = 0; k < n; ++k) s += m(k, c) * t2(a, b, k, l);
          t1.at(a, b, c, l) = s;
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) s += m(l, d) * t1(a, b, c, l);
          t2.at(a, b, c, d) = s;
        }
  return t2;
}

RiemannTensor& RiemannTensor::operator+=(const RiemannTensor& o) {
  for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += o.data_[n];
  return *this;
}

RiemannTensor& RiemannTensor::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

RiemannTensor constant_curvature_tensor(int dim, double k) {
  MatX id = MatX::Identity(dim, dim);
  RiemannTensor rm = kulkarni_nomizu_half(id, id);
  rm *= k;
  return rm;
}

RiemannTensor kulkarni_nomizu_half(const MatX& h, const MatX& g) {
  int n = static_cast<int>(g.rows());
  RiemannTensor rm(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          rm.at(i, j, k, l) = 0.5 * (h(i, k) * g(j, l) + h(j, l) * g(i, k) -
                                     h(i, l) * g(j, k) - h(j, k) * g(i, l));
  return rm;
}

RiemannTensor product_tensor(const RiemannTensor& r1, const RiemannTensor& r2) {
  int d1 = r1.dim(), d2 = r2.dim();
  RiemannTensor rm(d1 + d2);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j)
      for (int k = 0; k < d1; ++k)
        for (int l = 0; l < d1; ++l) rm.at(i, j, k, l) = r1(i, j, k, l);
  for (int i = 0; i < d2; ++i)
    for (int j = 0; j < d2; ++j)
      for (int k = 0; k < d2; ++k)
        for (int l = 0; l < d2; ++l)
          rm.at(d1 + i, d1 + j, d1 + k, d1 + l) = r2(i, j, k, l);
  return rm;
}

}  // namespace curv4
