#pragma once

// Phase portraits: level sets of H restricted to a symplectic leaf, drawn
// in a 2-D chart of the leaf.

#include "hamred/central_force.hpp"
#include "hamred/rigid_body.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hamred::portrait {

using Point2 = Eigen::Vector2d;

enum class ChartKind { sphere, hyperboloid, cone, plane_chart };

inline std::string_view to_string(ChartKind k) {
  switch (k) {
    case ChartKind::sphere: return "sphere";
    case ChartKind::hyperboloid: return "hyperboloid";
    case ChartKind::cone: return "cone";
    case ChartKind::plane_chart: return "plane_chart";
  }
  return "?";
}

inline ChartKind parse_chart_kind(std::string_view s) {
  if (s == "sphere") return ChartKind::sphere;
  if (s == "hyperboloid") return ChartKind::hyperboloid;
  if (s == "cone") return ChartKind::cone;
  if (s == "plane" || s == "plane_chart") return ChartKind::plane_chart;
  throw UnknownName("unknown chart kind '" + std::string(s) + "'");
}

/// Box [w1] x [w2] x [w3] of the ambient space shown in a portrait.
struct Region {
  double w1_min = 0.0, w1_max = 12.0;
  double w2_min = -6.0, w2_max = 6.0;
  double w3_min = 0.0, w3_max = 12.0;

  bool contains(const Vec3& w, double slack = 1e-12) const {
    return w[0] >= w1_min - slack && w[0] <= w1_max + slack && w[1] >= w2_min - slack &&
           w[1] <= w2_max + slack && w[2] >= w3_min - slack && w[2] <= w3_max + slack;
  }

  void validate() const {
    require(w1_min < w1_max && w2_min < w2_max && w3_min < w3_max, "region bounds must be increasing");
    require(w1_max > 0.0 && w3_max > 0.0, "region must reach w1 > 0 and w3 > 0");
  }
};

inline Region kepler_region() { return {}; }
inline Region homoclinic_region() { return {0.0, 4.0, -2.0, 2.0, 0.0, 4.0}; }

/// Default region for a named Hamiltonian.
inline Region default_region(std::string_view hamiltonian) {
  if (hamiltonian.starts_with("homoclinic")) return homoclinic_region();
  return kepler_region();
}

struct Rect {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
};

/// A leaf with a 2-D chart. Chart coordinates (x, y) are:
///   sphere:      (polar angle from +m3, azimuth)
///   hyperboloid: (w2, u) with w1 = s e^u, w3 = s e^-u, s = sqrt(C + w2^2)
///   cone:        same as hyperboloid with C = 0 (apex excluded)
///   plane_chart: (w1, w2) with w3 = (C + w2^2) / w1
struct LeafChart {
  ChartKind kind = ChartKind::hyperboloid;
  double param = 1.0;  // radius (sphere) or Casimir value
  Rect domain;
  std::optional<Region> region;  // central force only: points outside are masked

  std::string x_name() const {
    switch (kind) {
      case ChartKind::sphere: return "polar";
      case ChartKind::plane_chart: return "w1";
      default: return "w2";
    }
  }
  std::string y_name() const {
    switch (kind) {
      case ChartKind::sphere: return "azimuth";
      case ChartKind::plane_chart: return "w2";
      default: return "u";
    }
  }

  bool central() const { return kind != ChartKind::sphere; }

  Vec3 embed(double x, double y) const {
    switch (kind) {
      case ChartKind::sphere:
        return param * Vec3(std::sin(x) * std::cos(y), std::sin(x) * std::sin(y), std::cos(x));
      case ChartKind::hyperboloid:
      case ChartKind::cone: {
        const double s = std::sqrt(param + x * x);
        return {s * std::exp(y), x, s * std::exp(-y)};
      }
      case ChartKind::plane_chart:
        if (!(x > 0.0)) throw SingularChart("plane chart needs w1 > 0");
        return {x, y, (param + y * y) / x};
    }
    return Vec3::Zero();
  }

  Vec3 embed(const Point2& p) const { return embed(p[0], p[1]); }

  Point2 chart_of(const Vec3& w) const {
    switch (kind) {
      case ChartKind::sphere: {
        const double r = w.norm();
        if (!(r > 0.0)) throw SingularChart("sphere chart undefined at the origin");
        return {std::acos(std::clamp(w[2] / r, -1.0, 1.0)), std::atan2(w[1], w[0])};
      }
      case ChartKind::hyperboloid:
      case ChartKind::cone:
        if (!(w[0] > 0.0) || !(w[2] > 0.0)) throw SingularChart("hyperboloid chart needs w1, w3 > 0");
        return {w[1], 0.5 * std::log(w[0] / w[2])};
      case ChartKind::plane_chart:
        if (!(w[0] > 0.0)) throw SingularChart("plane chart needs w1 > 0");
        return {w[0], w[1]};
    }
    return Point2::Zero();
  }

  /// |C(w) - C| for central charts, | |m| - radius | for the sphere.
  double leaf_defect(const Vec3& w) const {
    if (kind == ChartKind::sphere) return std::abs(w.norm() - param);
    return std::abs(central::cone_casimir(w) - param);
  }

  /// False where the chart point is excluded from the picture.
  bool visible(double x, double y) const {
    if (kind == ChartKind::cone && x == 0.0) return false;  // apex
    if (!region) return true;
    return region->contains(embed(x, y));
  }

  Matrix ambient_tensor(const Vec3& w) const {
    return kind == ChartKind::sphere ? rigid::rigid_body_tensor(Vector(w)) : central::reduced_tensor(Vector(w));
  }
};

/// Chart over the given region (central force) or the whole sphere.
inline LeafChart make_chart(ChartKind kind, double param, const Region& region = {}) {
  require(std::isfinite(param), "chart parameter must be finite");
  LeafChart c;
  c.kind = kind;
  c.param = param;
  if (kind == ChartKind::sphere) {
    require(param > 0.0, "sphere radius must be positive");
    c.domain = {0.0, std::numbers::pi, -std::numbers::pi, std::numbers::pi};
    return c;
  }
  if (param < 0.0) throw ContractViolation("no symplectic leaf with C < 0 in the orbit-space cone");
  region.validate();
  c.region = region;
  const double wmax = std::max(region.w1_max, region.w3_max);
  switch (kind) {
    case ChartKind::hyperboloid: {
      require(param > 0.0, "hyperboloid chart needs C > 0 (use the cone chart for C = 0)");
      const double U = std::max(1.0, std::log(wmax / std::sqrt(param)));
      c.domain = {region.w2_min, region.w2_max, -U, U};
      break;
    }
    case ChartKind::cone: {
      require(param == 0.0, "cone chart is the leaf C = 0");
      const double sref = 1e-2 * std::max(std::abs(region.w2_min), std::abs(region.w2_max));
      const double U = std::max(1.0, std::log(wmax / sref));
      c.domain = {region.w2_min, region.w2_max, -U, U};
      break;
    }
    case ChartKind::plane_chart:
      c.domain = {std::max(region.w1_min, 1e-3 * region.w1_max), region.w1_max, region.w2_min, region.w2_max};
      break;
    case ChartKind::sphere: break;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Sampling and marching squares

struct Grid {
  int nx = 0, ny = 0;
  std::vector<double> xs, ys;
  std::vector<double> values;  // row-major by y; NaN where masked

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
  double dx() const { return nx > 1 ? xs[1] - xs[0] : 0.0; }
  double dy() const { return ny > 1 ? ys[1] - ys[0] : 0.0; }
  double cell_diameter() const { return std::hypot(dx(), dy()); }
};

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / (n - 1);
  return v;
}

inline Grid sample(const LeafChart& chart, const SmoothFunction& H, int nx, int ny) {
  require(nx >= 2 && ny >= 2, "grid must be at least 2 x 2");
  require(H.dim == 3, "portrait Hamiltonian must be a function on R^3");
  Grid g;
  g.nx = nx;
  g.ny = ny;
  g.xs = linspace(chart.domain.x0, chart.domain.x1, nx);
  g.ys = linspace(chart.domain.y0, chart.domain.y1, ny);
  g.values.resize(static_cast<std::size_t>(nx) * ny);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double v = nan;
      if (chart.visible(g.xs[i], g.ys[j])) {
        v = H(Vector(chart.embed(g.xs[i], g.ys[j])));
        if (!std::isfinite(v)) v = nan;
      }
      g.values[static_cast<std::size_t>(j) * nx + i] = v;
    }
  return g;
}

struct Polyline {
  std::vector<Point2> uv;
  std::vector<Vec3> w;
  bool closed = false;
};

struct ContourLevel {
  double value = 0.0;
  std::vector<Polyline> polylines;
  bool degenerate = false;  // H is constant on the chart and equal to this level
  bool emphasized = false;
};

struct Marker {
  Point2 uv = Point2::Zero();
  Vec3 w = Vec3::Zero();
  std::string tag;  // saddle, center, degenerate, apex
  double H = 0.0;
};

struct ContourSet {
  LeafChart chart;
  std::string hamiltonian;
  int nx = 0, ny = 0;
  double cell_diameter = 0.0;
  std::vector<ContourLevel> levels;
  std::vector<Marker> markers;

  std::size_t vertex_count() const {
    std::size_t n = 0;
    for (const auto& l : levels)
      for (const auto& p : l.polylines) n += p.uv.size();
    return n;
  }
};

namespace detail {

struct EdgeKey {
  // horizontal edge (i,j)-(i+1,j) or vertical edge (i,j)-(i,j+1)
  static long horizontal(int i, int j, int nx) { return 2L * (static_cast<long>(j) * nx + i); }
  static long vertical(int i, int j, int nx) { return 2L * (static_cast<long>(j) * nx + i) + 1; }
};

struct Segment {
  long a, b;
};

inline std::vector<Polyline> join_segments(const std::vector<Segment>& segs,
                                           const std::unordered_map<long, Point2>& pts,
                                           const LeafChart& chart) {
  std::unordered_map<long, std::vector<std::size_t>> adj;
  std::vector<long> order;  // nodes in first-seen order, for determinism
  for (std::size_t s = 0; s < segs.size(); ++s)
    for (long e : {segs[s].a, segs[s].b}) {
      auto& v = adj[e];
      if (v.empty()) order.push_back(e);
      v.push_back(s);
    }
  std::vector<bool> used(segs.size(), false);
  std::vector<Polyline> out;

  auto walk = [&](long start) {
    Polyline pl;
    long node = start;
    pl.uv.push_back(pts.at(node));
    while (true) {
      std::size_t next = segs.size();
      for (std::size_t s : adj[node])
        if (!used[s]) {
          next = s;
          break;
        }
      if (next == segs.size()) break;
      used[next] = true;
      node = segs[next].a == node ? segs[next].b : segs[next].a;
      if (node == start) {
        pl.closed = true;
        break;
      }
      pl.uv.push_back(pts.at(node));
    }
    for (const auto& p : pl.uv) pl.w.push_back(chart.embed(p));
    if (pl.uv.size() >= 2) out.push_back(std::move(pl));
  };

  for (long e : order)
    if (adj[e].size() == 1 && !used[adj[e][0]]) walk(e);
  for (long e : order)
    for (std::size_t s : adj[e])
      if (!used[s]) walk(e);
  return out;
}

}  // namespace detail

/// Marching squares for one level on a sampled grid.
inline ContourLevel contour_level(const LeafChart& chart, const Grid& g, double level) {
  ContourLevel cl;
  cl.value = level;

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : g.values)
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (!(lo <= hi)) return cl;
  if (hi - lo <= 1e-12 * (1.0 + std::abs(hi))) {
    cl.degenerate = std::abs(level - hi) <= 1e-12 * (1.0 + std::abs(level));
    return cl;
  }
  if (level < lo || level > hi) return cl;

  std::unordered_map<long, Point2> pts;
  auto crossing = [&](long key, int i0, int j0, int i1, int j1) {
    if (!pts.count(key)) {
      const double f0 = g.at(i0, j0), f1 = g.at(i1, j1);
      const double t = (level - f0) / (f1 - f0);
      pts[key] = Point2(g.xs[i0] + t * (g.xs[i1] - g.xs[i0]), g.ys[j0] + t * (g.ys[j1] - g.ys[j0]));
    }
    return key;
  };

  std::vector<detail::Segment> segs;
  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i) {
      const std::array<double, 4> f{g.at(i, j), g.at(i + 1, j), g.at(i + 1, j + 1), g.at(i, j + 1)};
      if (!std::all_of(f.begin(), f.end(), [](double v) { return std::isfinite(v); })) continue;
      std::array<bool, 4> up{};
      for (int c = 0; c < 4; ++c) up[c] = f[c] >= level;
      // edges: 0 bottom, 1 right, 2 top, 3 left
      std::array<long, 4> key{};
      std::array<bool, 4> cut{};
      cut[0] = up[0] != up[1];
      cut[1] = up[1] != up[2];
      cut[2] = up[3] != up[2];
      cut[3] = up[0] != up[3];
      if (cut[0]) key[0] = crossing(detail::EdgeKey::horizontal(i, j, g.nx), i, j, i + 1, j);
      if (cut[1]) key[1] = crossing(detail::EdgeKey::vertical(i + 1, j, g.nx), i + 1, j, i + 1, j + 1);
      if (cut[2]) key[2] = crossing(detail::EdgeKey::horizontal(i, j + 1, g.nx), i, j + 1, i + 1, j + 1);
      if (cut[3]) key[3] = crossing(detail::EdgeKey::vertical(i, j, g.nx), i, j, i, j + 1);
      const int ncut = cut[0] + cut[1] + cut[2] + cut[3];
      if (ncut == 2) {
        std::array<long, 2> e{};
        int m = 0;
        for (int c = 0; c < 4; ++c)
          if (cut[c]) e[m++] = key[c];
        segs.push_back({e[0], e[1]});
      } else if (ncut == 4) {
        // saddle cell: the centre value decides which corners are cut off
        const bool centre_up = 0.25 * (f[0] + f[1] + f[2] + f[3]) >= level;
        static constexpr int before[4] = {3, 0, 1, 2};  // edges adjacent to corner c
        for (int c = 0; c < 4; ++c)
          if (up[c] != centre_up) segs.push_back({key[before[c]], key[c]});
      }
    }
  cl.polylines = detail::join_segments(segs, pts, chart);
  return cl;
}

/// 12 (by default) equispaced levels above the grid minimum of H up to
/// the given quantile of the finite grid values.
inline std::vector<double> auto_levels(const Grid& g, int count = 12, double quantile = 0.5) {
  require(count >= 1, "auto levels: count must be positive");
  require(quantile > 0.0 && quantile <= 1.0, "auto levels: quantile must be in (0, 1]");
  std::vector<double> v;
  for (double x : g.values)
    if (std::isfinite(x)) v.push_back(x);
  if (v.empty()) return {};
  std::sort(v.begin(), v.end());
  const double lo = v.front();
  const double hi = v[static_cast<std::size_t>(std::round(quantile * (v.size() - 1)))];
  if (!(hi > lo)) return {lo};
  std::vector<double> out;
  for (int i = 1; i <= count; ++i) out.push_back(lo + (hi - lo) * i / count);
  return out;
}

// ---------------------------------------------------------------------------
// Equilibria

namespace detail {

inline Matrix embed_jacobian(const LeafChart& chart, const Point2& p) {
  Matrix D(3, 2);
  for (int c = 0; c < 2; ++c) {
    const double h = 1e-6 * (1.0 + std::abs(p[c]));
    Point2 a = p, b = p;
    a[c] += h;
    b[c] -= h;
    D.col(c) = (chart.embed(a) - chart.embed(b)) / (2.0 * h);
  }
  return D;
}

inline Vec3 ambient_field(const LeafChart& chart, const SmoothFunction& H, const Vec3& w) {
  return Vec3(chart.ambient_tensor(w) * H.grad(Vector(w)));
}

/// The Hamiltonian field pulled back to chart coordinates.
inline Point2 chart_field(const LeafChart& chart, const SmoothFunction& H, const Point2& p) {
  const Matrix D = embed_jacobian(chart, p);
  const Vec3 v = ambient_field(chart, H, chart.embed(p));
  return (D.transpose() * D).ldlt().solve(D.transpose() * v);
}

inline Eigen::Matrix2d chart_field_jacobian(const LeafChart& chart, const SmoothFunction& H, const Point2& p) {
  Eigen::Matrix2d J;
  for (int c = 0; c < 2; ++c) {
    const double h = 1e-6 * (1.0 + std::abs(p[c]));
    Point2 a = p, b = p;
    a[c] += h;
    b[c] -= h;
    J.col(c) = (chart_field(chart, H, a) - chart_field(chart, H, b)) / (2.0 * h);
  }
  return J;
}

inline bool inside(const Rect& r, const Point2& p) {
  return p[0] >= r.x0 && p[0] <= r.x1 && p[1] >= r.y0 && p[1] <= r.y1;
}

}  // namespace detail

struct EquilibriumOptions {
  int coarse = 64;
  int max_seeds = 32;
  int max_iter = 50;
  double tol = 1e-13;
  double accept = 1e-9;  // |K grad H| at the accepted point
};

/// Newton on the chart-pulled-back field, seeded from coarse-grid local
/// minima of |K grad H|. Tags come from the 2 x 2 linearisation.
inline std::vector<Marker> locate_equilibria(const LeafChart& chart, const SmoothFunction& H,
                                             const EquilibriumOptions& opt = {}) {
  const int n = std::max(3, opt.coarse);
  const auto xs = linspace(chart.domain.x0, chart.domain.x1, n);
  const auto ys = linspace(chart.domain.y0, chart.domain.y1, n);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> norm(static_cast<std::size_t>(n) * n, inf);
  std::vector<Point2> cf(static_cast<std::size_t>(n) * n, Point2::Constant(std::numeric_limits<double>::quiet_NaN()));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!chart.visible(xs[i], ys[j])) continue;
      try {
        const Point2 p(xs[i], ys[j]);
        const double v = detail::ambient_field(chart, H, chart.embed(p)).norm();
        if (std::isfinite(v)) norm[static_cast<std::size_t>(j) * n + i] = v;
        cf[static_cast<std::size_t>(j) * n + i] = detail::chart_field(chart, H, p);
      } catch (const std::exception&) {
      }
    }
  std::vector<std::pair<double, Point2>> seeds;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double v = norm[static_cast<std::size_t>(j) * n + i];
      if (!std::isfinite(v)) continue;
      bool minimum = true;
      for (int dj = -1; dj <= 1 && minimum; ++dj)
        for (int di = -1; di <= 1; ++di) {
          const int a = i + di, b = j + dj;
          if ((di || dj) && a >= 0 && a < n && b >= 0 && b < n &&
              norm[static_cast<std::size_t>(b) * n + a] < v) {
            minimum = false;
            break;
          }
        }
      if (minimum) seeds.push_back({v, Point2(xs[i], ys[j])});
    }
  std::stable_sort(seeds.begin(), seeds.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  if (static_cast<int>(seeds.size()) > opt.max_seeds) seeds.resize(opt.max_seeds);
  // the norm is anisotropic, so also seed cells where both chart components change sign
  for (int j = 0; j + 1 < n; ++j)
    for (int i = 0; i + 1 < n; ++i) {
      std::array<Point2, 4> c{cf[static_cast<std::size_t>(j) * n + i], cf[static_cast<std::size_t>(j) * n + i + 1],
                              cf[static_cast<std::size_t>(j + 1) * n + i], cf[static_cast<std::size_t>(j + 1) * n + i + 1]};
      bool ok = true, change[2] = {false, false};
      for (const auto& v : c) ok = ok && v.allFinite();
      if (!ok) continue;
      for (int d = 0; d < 2; ++d)
        for (int a = 1; a < 4; ++a) change[d] = change[d] || (c[a][d] >= 0.0) != (c[0][d] >= 0.0);
      if (change[0] && change[1]) seeds.push_back({0.0, Point2(0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]))});
    }

  std::vector<Marker> out;
  for (const auto& [v0, seed] : seeds) {
    Point2 p = seed;
    bool ok = false;
    try {
      for (int it = 0; it < opt.max_iter; ++it) {
        const Point2 f = detail::chart_field(chart, H, p);
        const Eigen::Matrix2d J = detail::chart_field_jacobian(chart, H, p);
        const Point2 dp = J.fullPivLu().solve(-f);
        if (!dp.allFinite()) break;
        p += dp;
        if (!detail::inside(chart.domain, p)) break;
        if (dp.norm() <= opt.tol * (1.0 + p.norm())) {
          ok = true;
          break;
        }
      }
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok || !chart.visible(p[0], p[1])) continue;
    const Vec3 w = chart.embed(p);
    if (detail::ambient_field(chart, H, w).norm() > opt.accept) continue;
    bool dup = false;
    for (const auto& m : out) dup = dup || (m.uv - p).norm() <= 1e-6 * (1.0 + p.norm());
    if (dup) continue;
    const double det = detail::chart_field_jacobian(chart, H, p).determinant();
    const double scale = std::max(1e-300, detail::chart_field_jacobian(chart, H, p).squaredNorm());
    Marker m;
    m.uv = p;
    m.w = w;
    m.H = H(Vector(w));
    m.tag = det < -1e-9 * scale ? "saddle" : det > 1e-9 * scale ? "center" : "degenerate";
    out.push_back(m);
  }
  std::stable_sort(out.begin(), out.end(), [](const Marker& a, const Marker& b) {
    return a.uv[0] != b.uv[0] ? a.uv[0] < b.uv[0] : a.uv[1] < b.uv[1];
  });
  return out;
}

struct ContourOptions {
  int nx = 512, ny = 512;
  bool equilibria = true;
  std::optional<double> emphasize;  // level drawn in bold
};

inline ContourSet extract_contours(const LeafChart& chart, const SmoothFunction& H, std::vector<double> levels,
                                   const ContourOptions& opt = {}) {
  const Grid g = sample(chart, H, opt.nx, opt.ny);
  if (opt.emphasize && std::find(levels.begin(), levels.end(), *opt.emphasize) == levels.end())
    levels.push_back(*opt.emphasize);
  std::sort(levels.begin(), levels.end());
  ContourSet cs;
  cs.chart = chart;
  cs.hamiltonian = H.name;
  cs.nx = g.nx;
  cs.ny = g.ny;
  cs.cell_diameter = g.cell_diameter();
  for (double level : levels) {
    require(std::isfinite(level), "contour levels must be finite");
    auto cl = contour_level(chart, g, level);
    cl.emphasized = opt.emphasize && level == *opt.emphasize;
    cs.levels.push_back(std::move(cl));
  }
  if (opt.equilibria) cs.markers = locate_equilibria(chart, H);
  if (chart.kind == ChartKind::cone) cs.markers.push_back({Point2(0.0, 0.0), Vec3::Zero(), "apex", H(Vector(Vec3::Zero()))});
  return cs;
}

/// Auto-levelled variant.
inline ContourSet extract_contours_auto(const LeafChart& chart, const SmoothFunction& H, const ContourOptions& opt = {},
                                        int count = 12, double quantile = 0.5) {
  return extract_contours(chart, H, auto_levels(sample(chart, H, opt.nx, opt.ny), count, quantile), opt);
}

// ---------------------------------------------------------------------------
// Audits

inline double max_leaf_error(const ContourSet& cs) {
  double worst = 0.0;
  for (const auto& l : cs.levels)
    for (const auto& p : l.polylines)
      for (const auto& w : p.w) worst = std::max(worst, cs.chart.leaf_defect(w));
  return worst;
}

inline double max_level_error(const ContourSet& cs, const SmoothFunction& H) {
  double worst = 0.0;
  for (const auto& l : cs.levels)
    for (const auto& p : l.polylines)
      for (const auto& w : p.w) worst = std::max(worst, std::abs(H(Vector(w)) - l.value));
  return worst;
}

/// Largest ratio |H(vertex) - level| / (cell diameter * |grad (H o embed)|);
/// at most 1 means every vertex meets the first-order cell tolerance.
inline double level_error_ratio(const ContourSet& cs, const SmoothFunction& H) {
  double worst = 0.0;
  for (const auto& l : cs.levels)
    for (const auto& p : l.polylines)
      for (const auto& uv : p.uv) {
        const auto f = [&](const Vector& x) { return H(Vector(cs.chart.embed(x[0], x[1]))); };
        const double gnorm = finite_difference_gradient(f, Vector(uv)).norm();
        const double err = std::abs(f(Vector(uv)) - l.value);
        const double bound = cs.cell_diameter * gnorm;
        worst = std::max(worst, bound > 0.0 ? err / bound : (err > 0.0 ? std::numeric_limits<double>::infinity() : 0.0));
      }
  return worst;
}

}  // namespace hamred::portrait
