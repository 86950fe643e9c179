#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>

namespace curv4 {

using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using MatX = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;

// Eigenvalues of a symmetric matrix, ascending.
inline Vec3 sym_eigs(const Mat3& m) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline Vec4 sym_eigs(const Mat4& m) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// Singular values, ascending (Eigen reports them descending).
inline Vec3 singular_values(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m);
  Vec3 s = svd.singularValues();
  return Vec3(s(2), s(1), s(0));
}

inline Vec3 sorted3(double a, double b, double c) {
  std::array<double, 3> v{a, b, c};
  std::sort(v.begin(), v.end());
  return Vec3(v[0], v[1], v[2]);
}

inline Vec4 sorted4(double a, double b, double c, double d) {
  std::array<double, 4> v{a, b, c, d};
  std::sort(v.begin(), v.end());
  return Vec4(v[0], v[1], v[2], v[3]);
}

}  // namespace curv4
