#pragma once

// Poisson systems  w' = K(w) grad H(w)  on a finite-dimensional state space.

#include "hamred/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace hamred {

using ScalarField = std::function<double(const Vector&)>;
using GradientField = std::function<Vector(const Vector&)>;
using TensorField = std::function<Matrix(const Vector&)>;

/// Central-difference gradient. Step scales with |x_i| so that O(1)
/// and O(10^3) coordinates see comparable relative perturbations.
inline Vector finite_difference_gradient(const ScalarField& f, const Vector& x,
                                         double rel_step = 6e-6) {
  Vector g(x.size());
  Vector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = rel_step * (1.0 + std::abs(x[i]));
    xp[i] = x[i] + h;
    const double fp = f(xp);
    xp[i] = x[i] - h;
    const double fm = f(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// A scalar function with (optionally) an analytic gradient.
struct SmoothFunction {
  std::string name;
  int dim = 0;
  ScalarField value;
  GradientField gradient;  // empty: finite-difference fallback

  bool has_analytic_gradient() const { return static_cast<bool>(gradient); }

  double operator()(const Vector& w) const { return value(w); }

  Vector grad(const Vector& w) const {
    return gradient ? gradient(w) : finite_difference_gradient(value, w);
  }
};

inline SmoothFunction make_function(std::string name, int dim, ScalarField value,
                                    GradientField gradient = {}) {
  return SmoothFunction{std::move(name), dim, std::move(value), std::move(gradient)};
}

/// Constant function; its Hamiltonian vector field vanishes identically.
inline SmoothFunction constant_function(int dim, double c) {
  return make_function(
      "const", dim, [c](const Vector&) { return c; },
      [dim](const Vector&) { return Vector::Zero(dim).eval(); });
}

/// State-dependent antisymmetric tensor plus its registered Casimirs.
struct PoissonStructure {
  std::string name;
  int dim = 0;
  TensorField tensor;
  std::vector<SmoothFunction> casimirs;
  std::vector<std::string> coord_names;  // empty: x1..xd

  Matrix operator()(const Vector& w) const { return tensor(w); }

  std::string coord_name(int i) const {
    if (static_cast<std::size_t>(i) < coord_names.size()) return coord_names[i];
    return "x" + std::to_string(i + 1);
  }
};

namespace detail {

inline void check_dims(const PoissonStructure& P, const Vector& w) {
  require(P.dim >= 1, "PoissonStructure '" + P.name + "' has no dimension");
  require(w.size() == P.dim, "state dimension " + std::to_string(w.size()) +
                                 " does not match structure '" + P.name + "' of dimension " +
                                 std::to_string(P.dim));
  require(w.allFinite(), "state has non-finite coordinates");
}

inline void check_dims(const PoissonStructure& P, const SmoothFunction& F) {
  require(F.dim == P.dim, "function '" + F.name + "' has dimension " + std::to_string(F.dim) +
                              ", structure '" + P.name + "' has " + std::to_string(P.dim));
}

}  // namespace detail

/// {F,G}(w) = grad F^T K(w) grad G.
inline double bracket(const PoissonStructure& P, const SmoothFunction& F, const SmoothFunction& G,
                      const Vector& w) {
  detail::check_dims(P, w);
  detail::check_dims(P, F);
  detail::check_dims(P, G);
  return F.grad(w).dot(P(w) * G.grad(w));
}

inline Vector hamiltonian_vector_field(const PoissonStructure& P, const SmoothFunction& H,
                                       const Vector& w) {
  detail::check_dims(P, w);
  detail::check_dims(P, H);
  return P(w) * H.grad(w);
}

inline double antisymmetry_defect(const PoissonStructure& P, const Vector& w) {
  const Matrix K = P(w);
  return (K + K.transpose()).cwiseAbs().maxCoeff();
}

/// Default finite-difference step for the Jacobi residual.
inline double jacobi_step(const Vector& w) { return 1e-5 * (1.0 + w.norm()); }

/// max_{i,j,k} |sum_l K_il d_l K_jk + K_jl d_l K_ki + K_kl d_l K_ij|,
/// with d_l by central differences.
inline double jacobi_residual(const PoissonStructure& P, const Vector& w, double fd_step = -1.0) {
  detail::check_dims(P, w);
  const int d = P.dim;
  const double h = fd_step > 0.0 ? fd_step : jacobi_step(w);
  const Matrix K = P(w);
  std::vector<Matrix> dK(d);
  Vector wp = w;
  for (int l = 0; l < d; ++l) {
    wp[l] = w[l] + h;
    const Matrix Kp = P(wp);
    wp[l] = w[l] - h;
    const Matrix Km = P(wp);
    wp[l] = w[l];
    dK[l] = (Kp - Km) / (2.0 * h);
  }
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double s = 0.0;
        for (int l = 0; l < d; ++l)
          s += K(i, l) * dK[l](j, k) + K(j, l) * dK[l](k, i) + K(k, l) * dK[l](i, j);
        worst = std::max(worst, std::abs(s));
      }
  return worst;
}

/// Largest |K(w) grad C(w)| over registered Casimirs.
inline double casimir_defect(const PoissonStructure& P, const Vector& w) {
  double worst = 0.0;
  const Matrix K = P(w);
  for (const auto& C : P.casimirs)
    worst = std::max(worst, (K * C.grad(w)).cwiseAbs().maxCoeff());
  return worst;
}

/// Max absolute difference between the analytic gradient and central
/// finite differences of the value. Zero when no analytic gradient exists.
inline double gradient_check(const SmoothFunction& F, const Vector& w, double rel_step = 1e-5) {
  if (!F.has_analytic_gradient()) return 0.0;
  return (F.gradient(w) - finite_difference_gradient(F.value, w, rel_step)).cwiseAbs().maxCoeff();
}

/// Canonical structure on R^{2n}: z = (q, p), K = [[0, I], [-I, 0]].
inline PoissonStructure canonical_structure(int n) {
  require(n >= 1, "canonical structure needs n >= 1");
  Matrix J = Matrix::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = Matrix::Identity(n, n);
  J.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  PoissonStructure P;
  P.name = "canonical";
  P.dim = 2 * n;
  P.tensor = [J](const Vector&) { return J; };
  return P;
}

}  // namespace hamred
