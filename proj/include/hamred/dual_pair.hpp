#pragma once

// The pair (O(3), Sp(2)) inside Sp(6): centralizers computed as null
// spaces of commutator maps over a basis of sp(6).

#include "hamred/sp2k.hpp"

#include <array>
#include <vector>

namespace hamred::sp2k {

/// Basis of sp(2m): J^{-1} E for E running over the symmetric unit
/// matrices. Dimension m(2m+1).
inline std::vector<Matrix> sp_basis(int m) {
  require(m >= 1, "sp_basis: m must be positive");
  const Matrix Jinv = -symplectic_form(m);
  std::vector<Matrix> out;
  for (int a = 0; a < 2 * m; ++a)
    for (int b = a; b < 2 * m; ++b) {
      Matrix E = Matrix::Zero(2 * m, 2 * m);
      E(a, b) = E(b, a) = 1.0;
      out.push_back(Jinv * E);
    }
  return out;
}

/// so(3) generators acting diagonally on (q, p): diag(a, a).
inline std::array<Matrix, 3> embedded_so3() {
  std::array<Matrix, 3> out;
  for (int i = 0; i < 3; ++i) {
    Mat3 a = Mat3::Zero();
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    a(k, j) = 1.0;
    a(j, k) = -1.0;
    Matrix g = Matrix::Zero(6, 6);
    g.topLeftCorner(3, 3) = a;
    g.bottomRightCorner(3, 3) = a;
    out[i] = g;
  }
  return out;
}

/// W tensor I_3: (q, p) -> (a q + b p, c q + d p).
inline Matrix embed_sp2(const Matrix& W) {
  require(W.rows() == 2 && W.cols() == 2, "embed_sp2: W must be 2 x 2");
  Matrix g(6, 6);
  const Matrix I = Matrix::Identity(3, 3);
  g << W(0, 0) * I, W(0, 1) * I, W(1, 0) * I, W(1, 1) * I;
  return g;
}

inline std::array<Matrix, 3> embedded_sp2() {
  const auto b = sp2_basis();
  return {embed_sp2(to_real(b.W1)), embed_sp2(to_real(b.W2)), embed_sp2(to_real(b.W3))};
}

struct CentralizerResult {
  int dimension = 0;
  std::vector<Matrix> basis;  // elements of sp(6)
  /// max relative distance of the expected generators from span(basis)
  double span_residual = 0.0;
};

inline Vector flatten(const Matrix& A) { return A.reshaped(); }

/// Centralizer of `gens` in sp(6), with the span of `expected` checked.
inline CentralizerResult centralizer_in_sp6(const std::vector<Matrix>& gens, const std::vector<Matrix>& expected) {
  const auto B = sp_basis(3);
  const int d = static_cast<int>(B.size());
  Matrix A(36 * static_cast<Eigen::Index>(gens.size()), d);
  for (int i = 0; i < d; ++i)
    for (std::size_t g = 0; g < gens.size(); ++g)
      A.block(36 * static_cast<Eigen::Index>(g), i, 36, 1) = flatten(commutator(B[i], gens[g]));
  const Matrix N = null_space(A);

  CentralizerResult r;
  r.dimension = static_cast<int>(N.cols());
  Matrix span(36, N.cols());
  for (Eigen::Index c = 0; c < N.cols(); ++c) {
    Matrix x = Matrix::Zero(6, 6);
    for (int i = 0; i < d; ++i) x += N(i, c) * B[i];
    r.basis.push_back(x);
    span.col(c) = flatten(x);
  }
  if (span.cols() > 0) {
    const Matrix Q = Eigen::HouseholderQR<Matrix>(span).householderQ() * Matrix::Identity(36, span.cols());
    for (const auto& e : expected) r.span_residual = std::max(r.span_residual, span_residual(Q, flatten(e)));
  } else if (!expected.empty()) {
    r.span_residual = 1.0;
  }
  return r;
}

struct DualPairReport {
  CentralizerResult of_so3;  // expected: span of W1, W2, W3 embedded
  CentralizerResult of_sp2;  // expected: embedded so(3)
};

inline DualPairReport dual_pair_centralizer_check() {
  const auto so3 = embedded_so3();
  const auto sp2 = embedded_sp2();
  const std::vector<Matrix> so3v(so3.begin(), so3.end()), sp2v(sp2.begin(), sp2.end());
  return {centralizer_in_sp6(so3v, sp2v), centralizer_in_sp6(sp2v, so3v)};
}

/// (q, p) -> (a q + b p, c q + d p).
inline std::pair<Vec3, Vec3> sp2_action(const Eigen::Matrix2d& g, const Vec3& q, const Vec3& p) {
  return {g(0, 0) * q + g(0, 1) * p, g(1, 0) * q + g(1, 1) * p};
}

}  // namespace hamred::sp2k
