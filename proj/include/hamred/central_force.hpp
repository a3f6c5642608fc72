#pragma once

// Central-force motion reduced by O(3): invariants w = (|q|^2, q.p, |p|^2),
// the Lie-Poisson structure they carry, and the Hamiltonian catalog.

#include "hamred/integrator.hpp"

#include <cmath>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hamred::central {

struct CanonicalState {
  Vec3 q = Vec3::Zero();
  Vec3 p = Vec3::Zero();

  Vector packed() const {
    Vector z(6);
    z << q, p;
    return z;
  }

  static CanonicalState unpack(const Vector& z) {
    require(z.size() == 6, "canonical state must have 6 coordinates");
    return {z.head<3>(), z.tail<3>()};
  }

  Vec3 angular_momentum() const { return q.cross(p); }
};

/// Absolute slack allowed on w1 w3 - w2^2 >= 0.
inline constexpr double kConeSlack = 1e-9;

inline double cone_casimir(const Vec3& w) { return w[0] * w[2] - w[1] * w[1]; }

inline bool in_cone(const Vec3& w, double eps = kConeSlack) {
  return w[0] >= 0.0 && w[2] >= 0.0 && cone_casimir(w) >= -eps;
}

/// Orbit invariants (|q|^2, q.p, |p|^2).
inline Vec3 invariants_map(const CanonicalState& s) {
  return {s.q.squaredNorm(), s.q.dot(s.p), s.p.squaredNorm()};
}

inline Vec3 as_vec3(const Vector& v) {
  require(v.size() == 3, "reduced state must have 3 coordinates");
  return {v[0], v[1], v[2]};
}

/// Hamilton's equations for H(w(q,p)):
///   q' = q dH/dw2 + 2 p dH/dw3,  p' = -2 q dH/dw1 - p dH/dw2.
inline std::pair<Vec3, Vec3> canonical_vector_field(const SmoothFunction& H, const CanonicalState& s) {
  require(H.dim == 3, "reduced Hamiltonian must be a function of (w1, w2, w3)");
  const Vector g = H.grad(Vector(invariants_map(s)));
  return {s.q * g[1] + 2.0 * s.p * g[2], -2.0 * s.q * g[0] - s.p * g[1]};
}

/// Hbar(q, p) = H(w(q, p)) on R^6 with its chain-rule gradient.
inline SmoothFunction lifted_hamiltonian(const SmoothFunction& H) {
  require(H.dim == 3, "reduced Hamiltonian must be a function of (w1, w2, w3)");
  return make_function(
      H.name + "_lifted", 6,
      [H](const Vector& z) { return H(Vector(invariants_map(CanonicalState::unpack(z)))); },
      [H](const Vector& z) {
        const auto s = CanonicalState::unpack(z);
        const Vector g = H.grad(Vector(invariants_map(s)));
        Vector out(6);
        out << 2.0 * s.q * g[0] + s.p * g[1], s.q * g[1] + 2.0 * s.p * g[2];
        return out;
      });
}

/// K(w) for the reduced central-force bracket.
inline Matrix reduced_tensor(const Vector& w) {
  Matrix K(3, 3);
  K << 0.0, 2.0 * w[0], 4.0 * w[1],
      -2.0 * w[0], 0.0, 2.0 * w[2],
      -4.0 * w[1], -2.0 * w[2], 0.0;
  return K;
}

inline SmoothFunction cone_casimir_function() {
  return make_function(
      "C", 3, [](const Vector& w) { return w[0] * w[2] - w[1] * w[1]; },
      [](const Vector& w) {
        Vector g(3);
        g << w[2], -2.0 * w[1], w[0];
        return g;
      });
}

struct ReducedSystem {
  PoissonStructure structure;
  SmoothFunction C;
};

inline ReducedSystem reduced_structure() {
  ReducedSystem sys;
  sys.structure.name = "central_force";
  sys.structure.dim = 3;
  sys.structure.tensor = reduced_tensor;
  sys.structure.coord_names = {"w1", "w2", "w3"};
  sys.C = cone_casimir_function();
  sys.structure.casimirs = {sys.C};
  return sys;
}

/// Chain-rule form of the reduced equations (independent of the tensor).
inline Vec3 reduced_vector_field(const SmoothFunction& H, const Vec3& w) {
  require(H.dim == 3, "reduced Hamiltonian must be a function of (w1, w2, w3)");
  const Vector g = H.grad(Vector(w));
  return {2.0 * w[0] * g[1] + 4.0 * w[1] * g[2],
          -2.0 * w[0] * g[0] + 2.0 * w[2] * g[2],
          -4.0 * w[1] * g[0] - 2.0 * w[2] * g[1]};
}

// ---------------------------------------------------------------------------
// Hamiltonian catalog

/// Kepler: Hbar = |p|^2 / 2 - 1/|q|  =>  H = w3/2 - w1^{-1/2}.
inline SmoothFunction kepler_hamiltonian() {
  return make_function(
      "kepler", 3, [](const Vector& w) { return 0.5 * w[2] - 1.0 / std::sqrt(w[0]); },
      [](const Vector& w) {
        Vector g(3);
        g << 0.5 * std::pow(w[0], -1.5), 0.0, 0.5;
        return g;
      });
}

/// H = w1^2 + w3^2 + w2^4 - 4 w2^2. On the leaf C = a the level H = 2a
/// is homoclinic to the saddle (sqrt(a), 0, sqrt(a)).
inline SmoothFunction homoclinic_hamiltonian() {
  return make_function(
      "homoclinic", 3,
      [](const Vector& w) {
        const double w2s = w[1] * w[1];
        return w[0] * w[0] + w[2] * w[2] + w2s * w2s - 4.0 * w2s;
      },
      [](const Vector& w) {
        Vector g(3);
        g << 2.0 * w[0], 4.0 * w[1] * w[1] * w[1] - 8.0 * w[1], 2.0 * w[2];
        return g;
      });
}

/// Reduction of Hbar = |q|^2 + |p|^2 + (q.p)^4 - 4 (q.p)^2:
/// H = w1 + w3 + w2^4 - 4 w2^2.
inline SmoothFunction homoclinic_linear_hamiltonian() {
  return make_function(
      "homoclinic_linear", 3,
      [](const Vector& w) {
        const double w2s = w[1] * w[1];
        return w[0] + w[2] + w2s * w2s - 4.0 * w2s;
      },
      [](const Vector& w) {
        Vector g(3);
        g << 1.0, 4.0 * w[1] * w[1] * w[1] - 8.0 * w[1], 1.0;
        return g;
      });
}

/// H = cos w1 + cos w2 + cos w3.
inline SmoothFunction cosine_hamiltonian() {
  return make_function(
      "cosine", 3, [](const Vector& w) { return std::cos(w[0]) + std::cos(w[1]) + std::cos(w[2]); },
      [](const Vector& w) {
        Vector g(3);
        g << -std::sin(w[0]), -std::sin(w[1]), -std::sin(w[2]);
        return g;
      });
}

inline std::vector<std::string> builtin_hamiltonian_names() {
  return {"kepler", "homoclinic", "homoclinic_linear", "cosine"};
}

inline SmoothFunction builtin_hamiltonian(std::string_view name) {
  if (name == "kepler") return kepler_hamiltonian();
  if (name == "homoclinic") return homoclinic_hamiltonian();
  if (name == "homoclinic_linear") return homoclinic_linear_hamiltonian();
  if (name == "cosine") return cosine_hamiltonian();
  throw UnknownName("unknown reduced Hamiltonian '" + std::string(name) + "'");
}

}  // namespace hamred::central
