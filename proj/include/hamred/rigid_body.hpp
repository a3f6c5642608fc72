#pragma once

// Free rigid body: Euler equations on so(3)*, full attitude dynamics on
// SO(3) x R^3, equilibrium classification and the hammer-throw scenario.

#include "hamred/integrator.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace hamred::rigid {

/// Principal moments, ordered I1 >= I2 >= I3 > 0.
struct InertiaTensor {
  double I1 = 1.0, I2 = 1.0, I3 = 1.0;

  void validate() const {
    require(std::isfinite(I1) && std::isfinite(I2) && std::isfinite(I3),
            "inertia moments must be finite");
    require(I3 > 0.0, "inertia moments must be positive");
    require(I1 >= I2 && I2 >= I3, "inertia moments must satisfy I1 >= I2 >= I3");
  }

  Vec3 moments() const { return {I1, I2, I3}; }
  Vec3 angular_velocity(const Vec3& m) const { return m.cwiseQuotient(moments()); }
};

inline InertiaTensor make_inertia(double I1, double I2, double I3) {
  InertiaTensor I{I1, I2, I3};
  I.validate();
  return I;
}

/// hat(w) v = w x v.
inline Mat3 hat(const Vec3& w) {
  Mat3 W;
  W << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
      -w.y(), w.x(), 0.0;
  return W;
}

/// Closed-form Rodrigues exponential of hat(a).
inline Mat3 rotation_exp(const Vec3& a) {
  const double th2 = a.squaredNorm();
  const double th = std::sqrt(th2);
  double s, c;  // sin(th)/th, (1 - cos th)/th^2
  if (th < 1e-4) {
    s = 1.0 - th2 / 6.0 + th2 * th2 / 120.0;
    c = 0.5 - th2 / 24.0 + th2 * th2 / 720.0;
  } else {
    s = std::sin(th) / th;
    c = (1.0 - std::cos(th)) / th2;
  }
  const Mat3 A = hat(a);
  return Mat3::Identity() + s * A + c * A * A;
}

/// Rotation angle in [0, pi].
inline double rotation_angle(const Mat3& R) {
  // Near pi the trace formula loses precision; use the symmetric part there.
  const double c = std::clamp((R.trace() - 1.0) / 2.0, -1.0, 1.0);
  const Vec3 v(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
  return std::atan2(0.5 * v.norm(), c);
}

/// Signed rotation angle of R about the unit axis n (R assumed to fix n).
inline double rotation_angle_about(const Mat3& R, const Vec3& n) {
  const Vec3 v(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
  return std::atan2(0.5 * v.dot(n), (R.trace() - 1.0) / 2.0);
}

inline double orthogonality_defect(const Mat3& Q) {
  return (Q.transpose() * Q - Mat3::Identity()).cwiseAbs().maxCoeff();
}

inline bool is_rotation(const Mat3& Q, double tol = 1e-9) {
  return orthogonality_defect(Q) <= tol && Q.determinant() > 0.0;
}

/// Right-hand side of the Euler equations.
inline Vec3 euler_vector_field(const InertiaTensor& I, const Vec3& m) {
  return {(1.0 / I.I3 - 1.0 / I.I2) * m.y() * m.z(),
          (1.0 / I.I1 - 1.0 / I.I3) * m.z() * m.x(),
          (1.0 / I.I2 - 1.0 / I.I1) * m.x() * m.y()};
}

/// so(3)* Lie-Poisson tensor K(m) = hat(m).
inline Matrix rigid_body_tensor(const Vector& m) {
  return hat(Vec3(m[0], m[1], m[2]));
}

struct RigidBodySystem {
  PoissonStructure structure;
  SmoothFunction H;  // kinetic energy
  SmoothFunction C;  // |m|^2, registered as Casimir
};

inline SmoothFunction kinetic_energy(const InertiaTensor& I) {
  I.validate();
  const Vec3 inv = I.moments().cwiseInverse();
  return make_function(
      "H", 3,
      [inv](const Vector& m) {
        return 0.5 * (m[0] * m[0] * inv[0] + m[1] * m[1] * inv[1] + m[2] * m[2] * inv[2]);
      },
      [inv](const Vector& m) { return Vector(m.cwiseProduct(inv)); });
}

inline SmoothFunction momentum_casimir() {
  return make_function(
      "C", 3, [](const Vector& m) { return m.squaredNorm(); },
      [](const Vector& m) { return Vector(2.0 * m); });
}

inline RigidBodySystem rigid_body_structure(const InertiaTensor& I) {
  I.validate();
  RigidBodySystem sys;
  sys.structure.name = "rigid_body";
  sys.structure.dim = 3;
  sys.structure.tensor = rigid_body_tensor;
  sys.structure.coord_names = {"m1", "m2", "m3"};
  sys.C = momentum_casimir();
  sys.structure.casimirs = {sys.C};
  sys.H = kinetic_energy(I);
  return sys;
}

// ---------------------------------------------------------------------------
// Full attitude dynamics

struct FullRigidState {
  Mat3 Q = Mat3::Identity();
  Vec3 m = Vec3::Zero();

  void validate() const {
    require(Q.allFinite() && m.allFinite(), "rigid state must be finite");
    require(is_rotation(Q), "attitude must be a proper rotation (|Q^T Q - I| <= 1e-9, det > 0)");
  }

  Vec3 spatial_momentum() const { return Q * m; }
};

struct FullRate {
  Mat3 Qdot;
  Vec3 mdot;
};

/// Q' = Q hat(omega), m' = m x omega, with I_j omega_j = m_j.
inline FullRate full_vector_field(const InertiaTensor& I, const FullRigidState& s) {
  I.validate();
  s.validate();
  const Vec3 omega = I.angular_velocity(s.m);
  return {s.Q * hat(omega), s.m.cross(omega)};
}

struct FullTrajectory {
  std::vector<double> times;
  std::vector<FullRigidState> states;
  std::vector<double> C, H;
  std::vector<Vec3> spatial_momentum;

  std::size_t size() const { return times.size(); }

  double max_spatial_momentum_drift() const {
    double worst = 0.0;
    for (const auto& p : spatial_momentum) worst = std::max(worst, (p - spatial_momentum.front()).norm());
    return worst;
  }

  double max_orthogonality_defect() const {
    double worst = 0.0;
    for (const auto& s : states) worst = std::max(worst, orthogonality_defect(s.Q));
    return worst;
  }

  /// Flattened view: Q11..Q33, m1..m3 with audits C, H, pi1..pi3.
  Trajectory flatten() const {
    Trajectory tr;
    for (int r = 1; r <= 3; ++r)
      for (int c = 1; c <= 3; ++c) tr.state_names.push_back("Q" + std::to_string(r) + std::to_string(c));
    tr.state_names.insert(tr.state_names.end(), {"m1", "m2", "m3"});
    tr.times = times;
    tr.audits = {{"H", H}, {"C", C}, {"pi1", {}}, {"pi2", {}}, {"pi3", {}}};
    for (std::size_t i = 0; i < size(); ++i) {
      Vector x(12);
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) x[3 * r + c] = states[i].Q(r, c);
      x.tail<3>() = states[i].m;
      tr.states.push_back(std::move(x));
      for (int k = 0; k < 3; ++k) tr.audits[2 + k].values.push_back(spatial_momentum[i][k]);
    }
    return tr;
  }
};

/// Momentum advanced by the Poisson integrator; attitude by
/// Q+ = Q exp(h hat(omega_mid)), omega_mid from the step midpoint.
inline FullTrajectory integrate_full(const InertiaTensor& I, const FullRigidState& s0, double t_end,
                                     const IntegratorConfig& cfg,
                                     const IntegrateOptions& opt = {}) {
  I.validate();
  s0.validate();
  cfg.validate();
  require(t_end > 0.0, "t_end must be positive");
  const auto sys = rigid_body_structure(I);
  auto field = [&I](const Vector& m) -> Vector { return euler_vector_field(I, Vec3(m[0], m[1], m[2])); };

  FullTrajectory tr;
  auto record = [&](double t, const FullRigidState& s) {
    tr.times.push_back(t);
    tr.states.push_back(s);
    const Vector mv = s.m;
    tr.C.push_back(sys.C(mv));
    tr.H.push_back(sys.H(mv));
    tr.spatial_momentum.push_back(s.spatial_momentum());
  };

  FullRigidState s = s0;
  record(0.0, s);
  const std::int64_t n = step_count(t_end, cfg.step);
  for (std::int64_t i = 1; i <= n; ++i) {
    const double t0 = static_cast<double>(i - 1) * cfg.step;
    const double t1 = i == n ? t_end : static_cast<double>(i) * cfg.step;
    const double h = t1 - t0;
    Vector m_next;
    try {
      m_next = advance(field, Vector(s.m), h, cfg);
    } catch (const SolverDivergence& e) {
      throw SolverDivergence(std::string(e.what()) + " at t=" + std::to_string(t0), e.iterations(), t0);
    }
    const Vec3 m1(m_next[0], m_next[1], m_next[2]);
    const Vec3 omega_mid = I.angular_velocity(0.5 * (s.m + m1));
    s.Q = s.Q * rotation_exp(h * omega_mid);
    s.m = m1;
    const bool last = i == n;
    const bool stop = opt.stop && opt.stop(t1, m_next);
    if (last || stop || i % static_cast<std::int64_t>(opt.record_every) == 0) record(t1, s);
    if (stop) break;
  }
  return tr;
}

/// Closed-form steady rotation about body axis `axis` (0-based) at rate a / I_axis.
inline Mat3 steady_rotation(const InertiaTensor& I, int axis, double a, double t) {
  Vec3 w = Vec3::Zero();
  w[axis] = a / I.moments()[axis];
  return rotation_exp(t * w);
}

// ---------------------------------------------------------------------------
// Equilibria

enum class Stability { stable, unstable, degenerate };

inline std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    default: return "degenerate";
  }
}

struct Equilibrium {
  Vec3 point;
  int axis = 0;  // 0-based principal axis
  Stability stability = Stability::degenerate;
  /// Cross-check audit: largest real part of the linearization spectrum.
  double max_real_eigenvalue = 0.0;
};

inline Mat3 euler_jacobian(const InertiaTensor& I, const Vec3& m) {
  const double a = 1.0 / I.I3 - 1.0 / I.I2;
  const double b = 1.0 / I.I1 - 1.0 / I.I3;
  const double c = 1.0 / I.I2 - 1.0 / I.I1;
  Mat3 J;
  J << 0.0, a * m.z(), a * m.y(),
       b * m.z(), 0.0, b * m.x(),
       c * m.y(), c * m.x(), 0.0;
  return J;
}

/// The six points +-a e_k on the sphere C = a^2. Labels follow the
/// intermediate-axis theorem; axes whose moment coincides with another
/// moment are flagged degenerate.
inline std::vector<Equilibrium> classify_equilibria(const InertiaTensor& I, double radius = 1.0) {
  I.validate();
  require(radius > 0.0, "sphere radius must be positive");
  const Vec3 mom = I.moments();
  std::vector<Equilibrium> out;
  for (int k = 0; k < 3; ++k) {
    bool degenerate = false;
    for (int j = 0; j < 3; ++j)
      if (j != k && mom[j] == mom[k]) degenerate = true;
    for (int sign : {1, -1}) {
      Equilibrium e;
      e.axis = k;
      e.point = Vec3::Zero();
      e.point[k] = sign * radius;
      if (degenerate)
        e.stability = Stability::degenerate;
      else
        e.stability = k == 1 ? Stability::unstable : Stability::stable;
      const Eigen::Vector3cd ev = Eigen::EigenSolver<Mat3>(euler_jacobian(I, e.point)).eigenvalues();
      e.max_real_eigenvalue = ev.real().maxCoeff();
      out.push_back(e);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hammer throw

enum class AxisBehaviour { equilibrium, stable_oscillation, heteroclinic_transit };

inline std::string_view to_string(AxisBehaviour b) {
  switch (b) {
    case AxisBehaviour::equilibrium: return "equilibrium";
    case AxisBehaviour::stable_oscillation: return "stable_oscillation";
    default: return "heteroclinic_transit";
  }
}

struct AxisLaunch {
  int axis = 0;
  Vec3 m0 = Vec3::Zero();
  AxisBehaviour behaviour = AxisBehaviour::equilibrium;
  /// max_t |m(t) - m(0)| / |m(0)|.
  double max_relative_deviation = 0.0;
};

struct FlipReport {
  bool transit = false;
  std::optional<double> first_sign_change;  // time m2 first changes sign
  /// Successive m2 extrema bracketing the first transit.
  std::optional<double> extremum_start, extremum_end;
  Vec3 m_start = Vec3::Zero(), m_end = Vec3::Zero();
  /// Net rotation angle of the attitude from one extremum to the next.
  std::optional<double> twist_angle;
  /// Rotation about the spatial momentum left after the body half-turn
  /// symmetry and the dynamic phase 2E dt / |pi| are removed.
  std::optional<double> geometric_phase;
  std::array<AxisLaunch, 3> axes{};
  std::string note;
};

inline double wrap_angle(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a + std::numbers::pi, two_pi);
  if (a < 0.0) a += two_pi;
  return a - std::numbers::pi;
}

namespace detail {

inline AxisLaunch launch_about_axis(const InertiaTensor& I, int axis, double magnitude, double offset,
                                    double t_end, const IntegratorConfig& cfg) {
  AxisLaunch L;
  L.axis = axis;
  L.m0 = Vec3::Constant(offset);
  L.m0[axis] = magnitude;
  const auto sys = rigid_body_structure(I);
  const Vector m0 = L.m0;
  if (offset == 0.0) {
    L.behaviour = AxisBehaviour::equilibrium;
    return L;
  }
  bool flipped = false;
  double dev = 0.0;
  auto field = [&](const Vector& m) -> Vector { return euler_vector_field(I, Vec3(m[0], m[1], m[2])); };
  drive(field, m0, t_end, cfg, [&](double, const Vector& m) {
    if (m[axis] * m0[axis] < 0.0) flipped = true;
    dev = std::max(dev, (m - m0).norm());
  });
  L.max_relative_deviation = dev / m0.norm();
  L.behaviour = flipped ? AxisBehaviour::heteroclinic_transit : AxisBehaviour::stable_oscillation;
  return L;
}

}  // namespace detail

/// Integrates the full motion from s0 (meant to be near the intermediate
/// axis) and reports the m2 flip. Companion launches about each principal
/// axis, with the off-axis perturbation of s0, classify all three axes.
inline FlipReport hammer_throw(const InertiaTensor& I, const FullRigidState& s0, double t_end,
                               const IntegratorConfig& cfg, FullTrajectory* trajectory_out = nullptr) {
  I.validate();
  s0.validate();
  FlipReport rep;
  const FullTrajectory tr = integrate_full(I, s0, t_end, cfg);

  const double mnorm = s0.m.norm();
  const double offset = std::sqrt(0.5 * (s0.m.x() * s0.m.x() + s0.m.z() * s0.m.z()));
  for (int k = 0; k < 3; ++k)
    rep.axes[k] = detail::launch_about_axis(I, k, mnorm, offset, t_end, cfg);

  const std::size_t n = tr.size();
  auto m2 = [&](std::size_t i) { return tr.states[i].m.y(); };
  for (std::size_t i = 1; i < n && !rep.first_sign_change; ++i) {
    if (m2(i - 1) * m2(i) < 0.0) {
      const double a = m2(i - 1), b = m2(i);
      rep.first_sign_change = tr.times[i - 1] + (tr.times[i] - tr.times[i - 1]) * a / (a - b);
    }
  }
  rep.transit = rep.first_sign_change.has_value();

  // Extrema of m2 on the grid; t = 0 counts when |m2| starts out non-increasing.
  std::vector<std::size_t> ext;
  if (n >= 2 && m2(0) * (m2(1) - m2(0)) <= 0.0 && m2(1) != m2(0)) ext.push_back(0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d0 = m2(i) - m2(i - 1), d1 = m2(i + 1) - m2(i);
    if (d0 * d1 < 0.0) ext.push_back(i);
  }

  for (std::size_t e = 0; e + 1 < ext.size(); ++e) {
    const std::size_t a = ext[e], b = ext[e + 1];
    if (m2(a) * m2(b) >= 0.0) continue;
    const auto& sa = tr.states[a];
    const auto& sb = tr.states[b];
    rep.extremum_start = tr.times[a];
    rep.extremum_end = tr.times[b];
    rep.m_start = sa.m;
    rep.m_end = sb.m;
    rep.twist_angle = rotation_angle(sb.Q * sa.Q.transpose());

    const Mat3 S1 = Vec3(1.0, -1.0, -1.0).asDiagonal();
    const Mat3 S3 = Vec3(-1.0, -1.0, 1.0).asDiagonal();
    const Mat3 S = (S1 * sa.m - sb.m).norm() <= (S3 * sa.m - sb.m).norm() ? S1 : S3;
    const Vec3 pi = sa.spatial_momentum();
    const double energy = 0.5 * sa.m.dot(I.angular_velocity(sa.m));
    const double phi = rotation_angle_about(sb.Q * S * sa.Q.transpose(), pi.normalized());
    const double dynamic = 2.0 * energy * (tr.times[b] - tr.times[a]) / pi.norm();
    rep.geometric_phase = wrap_angle(phi - dynamic);
    break;
  }
  if (!rep.transit)
    rep.note = "no transit of m2 within t_end";
  else if (!rep.twist_angle)
    rep.note = "m2 changed sign but no bracketing pair of extrema was found within t_end";

  if (trajectory_out) *trajectory_out = tr;
  return rep;
}

}  // namespace hamred::rigid
