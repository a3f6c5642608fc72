#pragma once

// Test-side reference computations. Plain arrays and hand-written RK4,
// nothing from the library, so agreement is evidence rather than echo.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using Vec6 = std::array<double, 6>;
using IMat2 = std::array<std::array<long long, 2>, 2>;

// --- sp(2) in integers ---------------------------------------------------

inline IMat2 imul(const IMat2& a, const IMat2& b) {
  IMat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

inline IMat2 ibracket(const IMat2& a, const IMat2& b) {
  const IMat2 ab = imul(a, b), ba = imul(b, a);
  IMat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = ab[i][j] - ba[i][j];
  return c;
}

inline IMat2 iscale(long long s, const IMat2& a) {
  IMat2 c = a;
  for (auto& r : c)
    for (auto& x : r) x *= s;
  return c;
}

// the matrices written out by hand
inline const IMat2 W1{{{0, 2}, {0, 0}}};
inline const IMat2 W2{{{-1, 0}, {0, 1}}};
inline const IMat2 W3{{{0, 0}, {-2, 0}}};

// --- 3-vectors -------------------------------------------------------------

inline double dot3(const double* a, const double* b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline std::array<double, 3> cross3(const double* a, const double* b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// (|q|^2, q.p, |p|^2) for z = (q, p).
inline std::array<double, 3> invariants(const Vec6& z) {
  return {dot3(&z[0], &z[0]), dot3(&z[0], &z[3]), dot3(&z[3], &z[3])};
}

// --- canonical flows in R^6 -----------------------------------------------

using Rhs6 = std::function<Vec6(const Vec6&)>;

inline Vec6 axpy(const Vec6& x, double a, const Vec6& k) {
  Vec6 y;
  for (int i = 0; i < 6; ++i) y[i] = x[i] + a * k[i];
  return y;
}

inline Vec6 rk4_step(const Rhs6& f, const Vec6& z, double h) {
  const Vec6 k1 = f(z), k2 = f(axpy(z, h / 2, k1)), k3 = f(axpy(z, h / 2, k2)), k4 = f(axpy(z, h, k3));
  Vec6 out;
  for (int i = 0; i < 6; ++i) out[i] = z[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return out;
}

/// Uniform RK4 on [0, t]; `each(t, z)` after every step.
inline Vec6 rk4(const Rhs6& f, Vec6 z, double t, double h,
                const std::function<bool(double, const Vec6&)>& each = {}) {
  const long n = std::lround(t / h);
  for (long i = 1; i <= n; ++i) {
    z = rk4_step(f, z, h);
    if (each && each(i * h, z)) break;
  }
  return z;
}

/// Kepler in Cartesian form, H = |p|^2/2 - 1/|q|.
inline Vec6 kepler_rhs(const Vec6& z) {
  const double r = std::sqrt(dot3(&z[0], &z[0]));
  const double c = 1.0 / (r * r * r);
  return {z[3], z[4], z[5], -c * z[0], -c * z[1], -c * z[2]};
}

inline double kepler_energy(const Vec6& z) { return 0.5 * dot3(&z[3], &z[3]) - 1.0 / std::sqrt(dot3(&z[0], &z[0])); }

/// Period of a bound Kepler orbit from its energy: 2 pi a^{3/2}, a = -1/(2E).
inline double kepler_period(double E) { return 2.0 * std::numbers::pi * std::pow(-0.5 / E, 1.5); }

/// Quartic example: |q|^4 + |p|^4 + (q.p)^4 - 4 (q.p)^2.
inline Vec6 homoclinic_rhs(const Vec6& z) {
  const double a = dot3(&z[0], &z[0]), b = dot3(&z[0], &z[3]), c = dot3(&z[3], &z[3]);
  const double Hb = 4 * b * b * b - 8 * b;  // dH/d(q.p)
  Vec6 d;
  for (int i = 0; i < 3; ++i) {
    d[i] = 4 * c * z[3 + i] + Hb * z[i];           // dH/dp
    d[3 + i] = -(4 * a * z[i] + Hb * z[3 + i]);    // -dH/dq
  }
  return d;
}

inline double homoclinic_energy(double w1, double w2, double w3) {
  return w1 * w1 + w3 * w3 + w2 * w2 * w2 * w2 - 4 * w2 * w2;
}

/// Angle swept in the orbit plane (about q0 x p0) while integrating from
/// a periapsis to the next one, and the time it took.
struct Sweep {
  double angle = 0.0, time = 0.0;
  bool returned = false;
};

inline Sweep kepler_sweep_between_periapses(const Vec6& z0, double h, double t_max) {
  const auto L = cross3(&z0[0], &z0[3]);
  const double Ln = std::sqrt(dot3(L.data(), L.data()));
  const std::array<double, 3> n{L[0] / Ln, L[1] / Ln, L[2] / Ln};
  const double r0 = std::sqrt(dot3(&z0[0], &z0[0]));
  const std::array<double, 3> e1{z0[0] / r0, z0[1] / r0, z0[2] / r0};
  const auto e2 = cross3(n.data(), e1.data());
  auto angle_of = [&](const Vec6& z) { return std::atan2(dot3(&z[0], e2.data()), dot3(&z[0], e1.data())); };
  auto radial = [](const Vec6& z) { return dot3(&z[0], &z[3]); };

  Sweep s;
  double prev_angle = angle_of(z0), unwrapped = 0.0, prev_rv = radial(z0), prev_t = 0.0;
  Vec6 prev = z0;
  rk4(kepler_rhs, z0, t_max, h, [&](double t, const Vec6& z) {
    double a = angle_of(z), d = a - prev_angle;
    if (d > std::numbers::pi) d -= 2 * std::numbers::pi;
    if (d < -std::numbers::pi) d += 2 * std::numbers::pi;
    const double rv = radial(z);
    if (prev_rv < 0.0 && rv >= 0.0 && t > h) {
      // r.v crosses zero upward: periapsis; interpolate inside the step
      const double f = prev_rv / (prev_rv - rv);
      s.time = prev_t + f * (t - prev_t);
      s.angle = unwrapped + f * d;
      s.returned = true;
      return true;
    }
    unwrapped += d;
    prev_angle = a;
    prev_rv = rv;
    prev_t = t;
    prev = z;
    return false;
  });
  return s;
}

/// Time for the circular orbit through z0 to sweep 2 pi.
inline double circular_revolution_time(const Vec6& z0, double h) {
  const double r0 = std::sqrt(dot3(&z0[0], &z0[0]));
  const std::array<double, 3> e1{z0[0] / r0, z0[1] / r0, z0[2] / r0};
  const auto L = cross3(&z0[0], &z0[3]);
  const auto e2u = cross3(L.data(), e1.data());
  const double e2n = std::sqrt(dot3(e2u.data(), e2u.data()));
  const std::array<double, 3> e2{e2u[0] / e2n, e2u[1] / e2n, e2u[2] / e2n};
  double unwrapped = 0.0, prev_angle = 0.0, prev_t = 0.0, result = NAN;
  rk4(kepler_rhs, z0, 10.0 * std::pow(r0, 1.5) * 2 * std::numbers::pi, h, [&](double t, const Vec6& z) {
    const double a = std::atan2(dot3(&z[0], e2.data()), dot3(&z[0], e1.data()));
    double d = a - prev_angle;
    if (d < -std::numbers::pi) d += 2 * std::numbers::pi;
    if (unwrapped + d >= 2 * std::numbers::pi) {
      result = prev_t + (2 * std::numbers::pi - unwrapped) / d * (t - prev_t);
      return true;
    }
    unwrapped += d;
    prev_angle = a;
    prev_t = t;
    return false;
  });
  return result;
}

// --- Gram coordinates on (R^n)^k x (R^n)^k --------------------------------

/// z packs q_1..q_k then p_1..p_k, each of length n. Coordinates are
/// q_i.q_j (i <= j), p_i.q_j (all), p_i.p_j (i <= j).
inline std::vector<double> gram_coordinates(const std::vector<double>& z, int n, int k) {
  auto q = [&](int i) { return &z[n * i]; };
  auto p = [&](int i) { return &z[n * k + n * i]; };
  auto d = [n](const double* a, const double* b) {
    double s = 0;
    for (int c = 0; c < n; ++c) s += a[c] * b[c];
    return s;
  };
  std::vector<double> out;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) out.push_back(d(q(i), q(j)));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) out.push_back(d(p(i), q(j)));
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) out.push_back(d(p(i), p(j)));
  return out;
}

/// Five-point derivative; exact up to round-off for quartic polynomials.
inline std::vector<double> gradient5(const std::function<double(const std::vector<double>&)>& f,
                                     std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    auto at = [&](double s) {
      x[i] = xi + s * h;
      return f(x);
    };
    g[i] = (-at(2) + 8 * at(1) - 8 * at(-1) + at(-2)) / (12 * h);
    x[i] = xi;
  }
  return g;
}

/// Canonical bracket {f, g} = sum df/dq dg/dp - df/dp dg/dq.
inline double canonical_bracket(const std::vector<double>& df, const std::vector<double>& dg) {
  const std::size_t m = df.size() / 2;
  double s = 0;
  for (std::size_t i = 0; i < m; ++i) s += df[i] * dg[m + i] - df[m + i] * dg[i];
  return s;
}

}  // namespace oracle
