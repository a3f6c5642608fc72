#pragma once

// Small dense helpers: numerical rank and null spaces by SVD.

#include "hamred/types.hpp"

#include <Eigen/SVD>

namespace hamred {

/// Default relative singular-value threshold.
inline constexpr double kRankThreshold = 1e-8;

inline Vector singular_values(const Matrix& A) {
  if (A.size() == 0) return Vector();
  return Eigen::JacobiSVD<Matrix>(A).singularValues();
}

/// Number of singular values above rel_tol * sigma_max.
inline int numerical_rank(const Matrix& A, double rel_tol = kRankThreshold) {
  const Vector s = singular_values(A);
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > rel_tol * s[0]) ++r;
  return r;
}

/// Orthonormal basis (columns) of ker A.
inline Matrix null_space(const Matrix& A, double rel_tol = kRankThreshold) {
  const Eigen::Index n = A.cols();
  if (A.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullV);
  const Vector s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[0] > 0.0 && s[i] > rel_tol * s[0]) ++r;
  return svd.matrixV().rightCols(n - r);
}

/// Relative distance of v from the column span of an orthonormal basis Q.
inline double span_residual(const Matrix& Q, const Vector& v) {
  const double nv = v.norm();
  if (nv == 0.0) return 0.0;
  return (v - Q * (Q.transpose() * v)).norm() / nv;
}

}  // namespace hamred
