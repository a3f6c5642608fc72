#pragma once

// Reconstruction of full central-force orbits from reduced ones: the
// conserved momentum fixes the plane of motion and a single phase theta(t)
// along the z-axis rotation A(theta) remains, obtained by quadrature.

#include "hamred/central_force.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

namespace hamred::central {

struct AlignedFrame {
  CanonicalState state;
  Vec3 mu = Vec3::Zero();
};

/// q(0) = (sqrt w1, 0, 0), p(0) = (w2/sqrt w1, sqrt(w3 - w2^2/w1), 0),
/// mu = q x p = (0, 0, sqrt C).
inline AlignedFrame align_initial_frame(const Vec3& w0) {
  const double C = cone_casimir(w0);
  if (!(w0[0] > 0.0) || !(C > 0.0))
    throw DegenerateData(
        "align_initial_frame: w0 must lie strictly inside the cone (w1 > 0, C > 0); "
        "for zero angular momentum q and p are collinear, use the collinear branch");
  const double r = std::sqrt(w0[0]);
  AlignedFrame f;
  f.state.q = Vec3(r, 0.0, 0.0);
  f.state.p = Vec3(w0[1] / r, std::sqrt(C / w0[0]), 0.0);
  f.mu = f.state.angular_momentum();
  return f;
}

/// theta' = 2 (dH/dw3)(w) |mu| / w1.
inline double reconstruction_rate(const SmoothFunction& H, const Vec3& w, double mu_norm) {
  if (!(w[0] > 0.0)) throw SingularChart("reconstruction_rate: w1 must be positive");
  require(mu_norm >= 0.0, "reconstruction_rate: |mu| must be non-negative");
  return 2.0 * H.grad(Vector(w))[2] * mu_norm / w[0];
}

/// Full period of a relative equilibrium, 2 pi w1 / (2 dH/dw3 |mu|).
inline double relative_equilibrium_period(const SmoothFunction& H, const Vec3& w, double mu_norm) {
  return 2.0 * std::numbers::pi / reconstruction_rate(H, w, mu_norm);
}

inline Mat3 planar_rotation(double theta) {
  Mat3 A;
  A << std::cos(theta), -std::sin(theta), 0.0,
       std::sin(theta), std::cos(theta), 0.0,
       0.0, 0.0, 1.0;
  return A;
}

/// The point of the chart section with invariants w, rotated by theta.
/// With mu_norm == 0 the collinear branch is used: q and p lie on the
/// positive x-axis ray.
inline CanonicalState ansatz_state(const Vec3& w, double theta, double mu_norm) {
  if (!(w[0] > 0.0)) throw SingularChart("reconstruction chart is singular at w1 = 0");
  const double r = std::sqrt(w[0]);
  const double py = mu_norm > 0.0 ? std::sqrt(std::max(0.0, w[2] - w[1] * w[1] / w[0])) : 0.0;
  const Mat3 A = planar_rotation(theta);
  return {A * Vec3(r, 0.0, 0.0), A * Vec3(w[1] / r, py, 0.0)};
}

struct ReconstructionResult {
  std::vector<double> times;
  std::vector<double> theta;
  std::vector<CanonicalState> full_states;

  std::size_t size() const { return times.size(); }

  /// Flattened view with columns qx..pz, theta.
  Trajectory flatten() const {
    Trajectory tr;
    tr.state_names = {"qx", "qy", "qz", "px", "py", "pz", "theta"};
    tr.times = times;
    for (std::size_t i = 0; i < size(); ++i) {
      Vector x(7);
      x << full_states[i].q, full_states[i].p, theta[i];
      tr.states.push_back(std::move(x));
    }
    return tr;
  }
};

/// theta by cumulative trapezoid quadrature on the trajectory grid;
/// full states from the ansatz.
inline ReconstructionResult reconstruct_orbit(const SmoothFunction& H, const Trajectory& reduced,
                                              double mu_norm) {
  reduced.validate();
  require(!reduced.empty(), "reconstruct_orbit: empty reduced trajectory");
  require(mu_norm >= 0.0, "reconstruct_orbit: |mu| must be non-negative");
  ReconstructionResult out;
  double theta = 0.0;
  double prev_rate = 0.0;
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    const Vec3 w = as_vec3(reduced.states[i]);
    if (!(w[0] > 0.0))
      throw SingularChart("reconstruct_orbit: trajectory reaches w1 = 0 at t=" +
                          std::to_string(reduced.times[i]));
    const double rate = reconstruction_rate(H, w, mu_norm);
    if (i > 0) theta += 0.5 * (reduced.times[i] - reduced.times[i - 1]) * (rate + prev_rate);
    prev_rate = rate;
    out.times.push_back(reduced.times[i]);
    out.theta.push_back(theta);
    out.full_states.push_back(ansatz_state(w, theta, mu_norm));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Relative periodic orbits

enum class ReturnKind { none, fixed_point, periodic };

struct RelativePeriodicReport {
  ReturnKind kind = ReturnKind::none;
  std::optional<double> period;  // reduced period T
  std::optional<double> phase;   // theta(T)
  double return_distance = 0.0;  // |w(T) - w(0)| at the accepted return
  bool stalled = false;          // a return was rejected: the loop passed next to an equilibrium
};

struct ReturnOptions {
  double delta = 1e-6;  // relative to |w(0)|
  int bisection_steps = 60;
  // A loop whose speed drops below stall_ratio * |w'(0)| has brushed a
  // hyperbolic equilibrium; its "period" is set by integration error.
  double stall_ratio = 1e-3;
};

namespace detail {

// Cubic Hermite interpolation of w on [t0, t1].
inline Vec3 hermite(const Vec3& w0, const Vec3& f0, const Vec3& w1, const Vec3& f1, double dt,
                    double s) {
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * w0 + (s3 - 2 * s2 + s) * dt * f0 + (-2 * s3 + 3 * s2) * w1 +
         (s3 - s2) * dt * f1;
}

}  // namespace detail

/// First return of the reduced orbit to the section through w(0)
/// orthogonal to w'(0), crossed in the direction of w'(0). The crossing
/// time is refined by bisection on a cubic Hermite interpolant. Returns
/// from loops that stall next to an equilibrium are rejected (none).
inline RelativePeriodicReport detect_relative_periodic(const SmoothFunction& H, const Trajectory& reduced,
                                                       double mu_norm, const ReturnOptions& opt = {}) {
  reduced.validate();
  require(reduced.size() >= 2, "detect_relative_periodic: trajectory too short");
  const auto sys = reduced_structure();
  auto field = [&](const Vec3& w) { return Vec3(as_vec3(sys.structure(Vector(w)) * H.grad(Vector(w)))); };

  RelativePeriodicReport rep;
  const Vec3 w0 = as_vec3(reduced.states[0]);
  const double scale = std::max(w0.norm(), 1e-300);
  const Vec3 v0 = field(w0);

  double excursion = 0.0;
  for (const auto& s : reduced.states) excursion = std::max(excursion, (as_vec3(s) - w0).norm());
  if (v0.norm() <= 1e-12 * (1.0 + scale) || excursion <= opt.delta * scale) {
    rep.kind = ReturnKind::fixed_point;
    return rep;
  }

  auto g = [&](const Vec3& w) { return (w - w0).dot(v0); };
  double theta = 0.0, min_speed = v0.norm();
  for (std::size_t i = 1; i < reduced.size(); ++i) {
    const Vec3 wa = as_vec3(reduced.states[i - 1]);
    const Vec3 wb = as_vec3(reduced.states[i]);
    const double ta = reduced.times[i - 1], tb = reduced.times[i];
    const double rate_a = reconstruction_rate(H, wa, mu_norm);
    const double ga = g(wa), gb = g(wb);
    min_speed = std::min(min_speed, field(wb).norm());
    if (ga < 0.0 && gb >= 0.0) {
      const Vec3 fa = field(wa), fb = field(wb);
      const double dt = tb - ta;
      double lo = 0.0, hi = 1.0;
      for (int k = 0; k < opt.bisection_steps; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (g(detail::hermite(wa, fa, wb, fb, dt, mid)) < 0.0) lo = mid;
        else hi = mid;
      }
      const double s = 0.5 * (lo + hi);
      const Vec3 wT = detail::hermite(wa, fa, wb, fb, dt, s);
      const double dist = (wT - w0).norm();
      if (dist <= opt.delta * scale && min_speed < opt.stall_ratio * v0.norm()) {
        rep.stalled = true;
        return rep;
      }
      if (dist <= opt.delta * scale) {
        const double rate_T = reconstruction_rate(H, wT, mu_norm);
        rep.kind = ReturnKind::periodic;
        rep.period = ta + s * dt;
        rep.phase = theta + 0.5 * s * dt * (rate_a + rate_T);
        rep.return_distance = dist;
        return rep;
      }
    }
    theta += 0.5 * (tb - ta) * (rate_a + reconstruction_rate(H, wb, mu_norm));
  }
  return rep;
}

}  // namespace hamred::central
