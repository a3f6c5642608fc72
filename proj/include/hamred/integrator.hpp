#pragma once

// Fixed-step time integration of Poisson systems.

#include "hamred/poisson.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hamred {

enum class Method { rk4, implicit_midpoint };

inline std::string_view to_string(Method m) {
  return m == Method::rk4 ? "rk4" : "implicit_midpoint";
}

inline Method parse_method(std::string_view s) {
  if (s == "rk4") return Method::rk4;
  if (s == "implicit_midpoint" || s == "midpoint") return Method::implicit_midpoint;
  throw UnknownName("unknown integration method '" + std::string(s) + "'");
}

struct IntegratorConfig {
  Method method = Method::implicit_midpoint;
  double step = 1e-2;
  double newton_tol = 1e-12;
  int newton_max_iter = 50;

  void validate() const {
    require(std::isfinite(step) && step > 0.0, "integrator step must be positive");
    require(std::isfinite(newton_tol) && newton_tol > 0.0, "newton_tol must be positive");
    require(newton_max_iter >= 1, "newton_max_iter must be at least 1");
  }
};

namespace detail {

// Forward-difference Jacobian of a vector field.
template <class Field>
Matrix field_jacobian(Field& f, const Vector& x, const Vector& fx) {
  const Eigen::Index d = x.size();
  Matrix Jf(d, d);
  Vector xp = x;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double h = 1.5e-8 * (1.0 + std::abs(x[j]));
    xp[j] = x[j] + h;
    Jf.col(j) = (f(xp) - fx) / h;
    xp[j] = x[j];
  }
  return Jf;
}

}  // namespace detail

/// One step of size h of  x' = f(x).  Implicit midpoint solves
///   x+ = x + h f((x + x+)/2)
/// by Newton's method with a finite-difference Jacobian.
template <class Field>
Vector advance(Field&& f, const Vector& x, double h, const IntegratorConfig& cfg) {
  if (cfg.method == Method::rk4) {
    const Vector k1 = f(x);
    const Vector k2 = f((x + 0.5 * h * k1).eval());
    const Vector k3 = f((x + 0.5 * h * k2).eval());
    const Vector k4 = f((x + h * k3).eval());
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  const Eigen::Index d = x.size();
  Vector y = x + h * f(x);
  for (int it = 1; it <= cfg.newton_max_iter; ++it) {
    const Vector mid = 0.5 * (x + y);
    const Vector fm = f(mid);
    const Vector residual = y - x - h * fm;
    const Matrix Jm = Matrix::Identity(d, d) - 0.5 * h * detail::field_jacobian(f, mid, fm);
    const Vector delta = Jm.partialPivLu().solve(-residual);
    y += delta;
    if (!y.allFinite()) break;
    if (delta.cwiseAbs().maxCoeff() <= cfg.newton_tol * (1.0 + y.cwiseAbs().maxCoeff()))
      return y;
  }
  throw SolverDivergence("implicit midpoint: Newton iteration did not converge", cfg.newton_max_iter);
}

inline Vector step(const PoissonStructure& P, const SmoothFunction& H, const Vector& w,
                   const IntegratorConfig& cfg) {
  cfg.validate();
  detail::check_dims(P, w);
  detail::check_dims(P, H);
  auto field = [&](const Vector& x) -> Vector { return P(x) * H.grad(x); };
  return advance(field, w, cfg.step, cfg);
}

struct AuditSeries {
  std::string name;
  std::vector<double> values;
};

/// Time-stamped states with conserved-quantity audit columns.
struct Trajectory {
  std::vector<std::string> state_names;
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<AuditSeries> audits;
  std::vector<std::string> warnings;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  const Vector& back() const { return states.back(); }

  const AuditSeries* find_audit(std::string_view name) const {
    for (const auto& a : audits)
      if (a.name == name) return &a;
    return nullptr;
  }

  const AuditSeries& audit(std::string_view name) const {
    if (const auto* a = find_audit(name)) return *a;
    throw UnknownName("trajectory has no audit column '" + std::string(name) + "'");
  }

  /// max_t |a(t) - a(t0)| for an audit column.
  double max_drift(std::string_view name) const {
    const auto& v = audit(name).values;
    double worst = 0.0;
    for (double x : v) worst = std::max(worst, std::abs(x - v.front()));
    return worst;
  }

  void validate() const {
    require(times.size() == states.size(), "trajectory times/states length mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
      require(times[i] > times[i - 1], "trajectory times must be strictly increasing");
    for (const auto& s : states)
      require(s.size() == states.front().size(), "trajectory states have unequal dimension");
    for (const auto& a : audits)
      require(a.values.size() == times.size(), "audit column '" + a.name + "' has wrong length");
  }
};

struct IntegrateOptions {
  std::size_t record_every = 1;
  /// Optional early stop, checked after each step: stop(t, state).
  std::function<bool(double, const Vector&)> stop;
};

/// Number of uniform steps used to cover [0, t_end]; the last step is
/// shortened when t_end is not a multiple of the step.
inline std::int64_t step_count(double t_end, double h) {
  const double n = t_end / h;
  const double r = std::round(n);
  if (std::abs(n - r) <= 1e-9 * std::max(1.0, n)) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::ceil(n));
}

/// Uniform-step driver for an arbitrary field. `record(t, x)` is invoked
/// at t = 0 and after every `record_every`-th step (and the last step).
template <class Field, class Record>
Vector drive(Field&& f, const Vector& x0, double t_end, const IntegratorConfig& cfg,
             Record&& record, const IntegrateOptions& opt = {}) {
  cfg.validate();
  require(std::isfinite(t_end) && t_end > 0.0, "t_end must be positive");
  require(opt.record_every >= 1, "record_every must be at least 1");
  const std::int64_t n = step_count(t_end, cfg.step);
  Vector x = x0;
  record(0.0, x);
  for (std::int64_t i = 1; i <= n; ++i) {
    const double t0 = static_cast<double>(i - 1) * cfg.step;
    const double t1 = i == n ? t_end : static_cast<double>(i) * cfg.step;
    try {
      x = advance(f, x, t1 - t0, cfg);
    } catch (const SolverDivergence& e) {
      throw SolverDivergence(std::string(e.what()) + " at t=" + std::to_string(t0), e.iterations(),
                             t0);
    }
    const bool last = i == n;
    const bool stop = opt.stop && opt.stop(t1, x);
    if (last || stop || i % static_cast<std::int64_t>(opt.record_every) == 0) record(t1, x);
    if (stop) break;
  }
  return x;
}

/// Integrates a Poisson system; audits H and every registered Casimir.
inline Trajectory integrate(const PoissonStructure& P, const SmoothFunction& H, const Vector& w0,
                            double t_end, const IntegratorConfig& cfg,
                            const IntegrateOptions& opt = {}) {
  detail::check_dims(P, w0);
  detail::check_dims(P, H);
  Trajectory tr;
  for (int i = 0; i < P.dim; ++i) tr.state_names.push_back(P.coord_name(i));
  tr.audits.push_back({"H", {}});
  for (std::size_t c = 0; c < P.casimirs.size(); ++c) {
    const auto& C = P.casimirs[c];
    tr.audits.push_back({C.name.empty() ? "C" + std::to_string(c + 1) : C.name, {}});
  }
  if (!H.has_analytic_gradient())
    tr.warnings.push_back("Hamiltonian '" + H.name +
                          "' has no analytic gradient; finite differences used");

  auto field = [&](const Vector& x) -> Vector { return P(x) * H.grad(x); };
  drive(
      field, w0, t_end, cfg,
      [&](double t, const Vector& x) {
        tr.times.push_back(t);
        tr.states.push_back(x);
        tr.audits[0].values.push_back(H(x));
        for (std::size_t c = 0; c < P.casimirs.size(); ++c)
          tr.audits[c + 1].values.push_back(P.casimirs[c](x));
      },
      opt);
  return tr;
}

/// Empirical order from final-time errors at h, h/2, h/4 against an
/// h/64 reference.
struct ConvergenceEstimate {
  std::array<double, 3> steps{};
  std::array<double, 3> errors{};
  std::optional<double> order;         // log2(e(h/2) / e(h/4))
  std::optional<double> coarse_order;  // log2(e(h) / e(h/2))
  bool degenerate = false;             // errors vanish: order undefined
};

inline ConvergenceEstimate convergence_order(const PoissonStructure& P, const SmoothFunction& H,
                                             const Vector& w0, double t_end, Method method,
                                             double base_step = -1.0) {
  require(t_end > 0.0, "t_end must be positive");
  const double h = base_step > 0.0 ? base_step : t_end / 10.0;
  IntegratorConfig cfg;
  cfg.method = method;
  auto final_state = [&](double step) {
    cfg.step = step;
    return integrate(P, H, w0, t_end, cfg, {.record_every = 1u << 30}).back();
  };
  const Vector ref = final_state(h / 64.0);
  ConvergenceEstimate est;
  for (int i = 0; i < 3; ++i) {
    est.steps[i] = h / static_cast<double>(1 << i);
    est.errors[i] = (final_state(est.steps[i]) - ref).cwiseAbs().maxCoeff();
  }
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + ref.cwiseAbs().maxCoeff());
  if (est.errors[0] <= floor && est.errors[1] <= floor && est.errors[2] <= floor) {
    est.degenerate = true;
    return est;
  }
  if (est.errors[1] > 0.0 && est.errors[2] > 0.0) est.order = std::log2(est.errors[1] / est.errors[2]);
  if (est.errors[0] > 0.0 && est.errors[1] > 0.0)
    est.coarse_order = std::log2(est.errors[0] / est.errors[1]);
  return est;
}

}  // namespace hamred
