#pragma once

// Built-in numerical verifiers. Every structural claim the library relies
// on has a named check here; `run_suite` groups them.

#include "hamred/dual_pair.hpp"
#include "hamred/portrait.hpp"
#include "hamred/reconstruction.hpp"
#include "hamred/rigid_body.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace hamred::verify {

struct CheckResult {
  std::string name;
  std::string suite;
  bool passed = false;
  double value = 0.0;      // measured quantity
  double tolerance = 0.0;  // bound it was compared against
  std::string comparison;  // "<=", ">=", "=="
  std::string detail;
  double seconds = 0.0;
};

struct Report {
  std::vector<CheckResult> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& c : checks) n += !c.passed;
    return n;
  }
};

inline CheckResult at_most(std::string name, double value, double tol, std::string detail = {}) {
  return {std::move(name), {}, std::isfinite(value) && value <= tol, value, tol, "<=", std::move(detail)};
}

inline CheckResult at_least(std::string name, double value, double tol, std::string detail = {}) {
  return {std::move(name), {}, std::isfinite(value) && value >= tol, value, tol, ">=", std::move(detail)};
}

inline CheckResult equals(std::string name, double value, double expected, std::string detail = {}) {
  return {std::move(name), {}, value == expected, value, expected, "==", std::move(detail)};
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"structure", "dynamics", "reduction", "portrait", "all"};
  return names;
}

namespace detail {

inline Vector uniform(std::mt19937_64& rng, int d, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(d);
  for (int i = 0; i < d; ++i) v[i] = u(rng);
  return v;
}

/// Random point inside the orbit-space cone.
inline Vector cone_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.2, 2.0), s(-1.0, 1.0);
  const double w1 = u(rng), w3 = u(rng);
  Vector w(3);
  w << w1, 0.95 * s(rng) * std::sqrt(w1 * w3), w3;
  return w;
}

/// Random quadratic F(x) = x^T A x / 2 + b^T x.
inline SmoothFunction random_quadratic(std::mt19937_64& rng, int d, const std::string& name) {
  Matrix A = Matrix::Zero(d, d);
  std::normal_distribution<double> g;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = g(rng);
  A = 0.5 * (A + A.transpose()).eval();
  Vector b(d);
  for (int i = 0; i < d; ++i) b[i] = g(rng);
  return make_function(
      name, d, [A, b](const Vector& x) { return 0.5 * x.dot(A * x) + b.dot(x); },
      [A, b](const Vector& x) { return Vector(A * x + b); });
}

inline PoissonStructure corrupted_central_tensor() {
  auto P = central::reduced_structure().structure;
  P.name = "corrupted_central_force";
  P.tensor = [](const Vector& w) {
    Matrix K = central::reduced_tensor(w);
    K(0, 1) = w[0] * w[0];
    K(1, 0) = -w[0] * w[0];
    return K;
  };
  return P;
}

inline Vector canonical_flow(const SmoothFunction& H, const Vector& z0, double t_end, double h) {
  const auto P = canonical_structure(static_cast<int>(z0.size() / 2));
  IntegratorConfig cfg;
  cfg.method = Method::rk4;
  cfg.step = h;
  auto f = [&](const Vector& z) -> Vector { return P(z) * H.grad(z); };
  return drive(f, z0, t_end, cfg, [](double, const Vector&) {});
}

}  // namespace detail

// ---------------------------------------------------------------------------
// structure

inline std::vector<CheckResult> structure_checks(std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);
  const auto rb = rigid::rigid_body_structure(rigid::make_inertia(3, 2, 1));
  const auto cf = central::reduced_structure();

  {
    const auto b = sp2k::sp2_basis();
    using sp2k::commutator;
    const bool ok = commutator(b.W1, b.W2) == 2 * b.W1 && commutator(b.W1, b.W3) == 4 * b.W2 &&
                    commutator(b.W2, b.W3) == 2 * b.W3;
    out.push_back(equals("sp2_structure_constants", ok ? 1.0 : 0.0, 1.0, "[W1,W2]=2W1, [W1,W3]=4W2, [W2,W3]=2W3"));
  }

  double jr = 0.0, jc = 0.0, anti = 0.0;
  for (int s = 0; s < 100; ++s) {
    const Vector m = detail::uniform(rng, 3, -2.0, 2.0);
    const Vector w = detail::cone_point(rng);
    jr = std::max(jr, jacobi_residual(rb.structure, m));
    jc = std::max(jc, jacobi_residual(cf.structure, w));
    anti = std::max({anti, antisymmetry_defect(rb.structure, m), antisymmetry_defect(cf.structure, w)});
  }
  out.push_back(at_most("jacobi_rigid_body", jr, 1e-8, "100 random states"));
  out.push_back(at_most("jacobi_central_force", jc, 1e-8, "100 random states"));
  out.push_back(at_most("tensor_antisymmetry", anti, 0.0));
  {
    const auto sp4 = sp2k::sp2k_structure(2);
    double js = 0.0;
    for (int s = 0; s < 5; ++s)
      js = std::max(js, jacobi_residual(sp4.structure,
                                        sp2k::momentum_map_phi(sp2k::random_state(3, 2, seed + s)).coordinates()));
    out.push_back(at_most("jacobi_sp4", js, 1e-8, "5 random phi-images, n=3 k=2"));
  }
  {
    Vector w(3);
    w << 2.0, 1.0, 1.0;
    out.push_back(at_least("jacobi_negative_control", jacobi_residual(detail::corrupted_central_tensor(), w), 0.1,
                           "K12 replaced by w1^2 at w=(2,1,1)"));
  }

  double asym = 0.0, leib = 0.0, cas = 0.0;
  for (int s = 0; s < 20; ++s) {
    const auto F = detail::random_quadratic(rng, 3, "F");
    const auto G = detail::random_quadratic(rng, 3, "G");
    const auto K = detail::random_quadratic(rng, 3, "K");
    const auto GK = make_function("GK", 3, [G, K](const Vector& x) { return G(x) * K(x); },
                                  [G, K](const Vector& x) { return Vector(G.grad(x) * K(x) + K.grad(x) * G(x)); });
    for (const auto* P : {&rb.structure, &cf.structure}) {
      const Vector w = detail::cone_point(rng);
      asym = std::max(asym, std::abs(bracket(*P, F, G, w) + bracket(*P, G, F, w)));
      const double lhs = bracket(*P, F, GK, w);
      const double rhs = bracket(*P, F, G, w) * K(w) + bracket(*P, F, K, w) * G(w);
      leib = std::max(leib, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
      cas = std::max(cas, casimir_defect(*P, w));
    }
  }
  out.push_back(at_most("bracket_antisymmetry", asym, 1e-12));
  out.push_back(at_most("bracket_leibniz", leib, 1e-12));
  out.push_back(at_most("casimir_kernel", cas, 1e-12, "K grad C = 0"));

  {
    double worst = 0.0;
    for (const auto& name : central::builtin_hamiltonian_names()) {
      const auto H = central::builtin_hamiltonian(name);
      for (int s = 0; s < 10; ++s) {
        const Vector w = detail::cone_point(rng);
        worst = std::max(worst, gradient_check(H, w) / (1.0 + H.grad(w).norm()));
      }
    }
    out.push_back(at_most("catalog_gradients", worst, 1e-8, "analytic vs central differences"));
  }

  for (int k : {1, 2}) {
    const int n = 3, d = sp2k::coordinate_count(k);
    const auto P = canonical_structure(n * k);
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
      const auto F = detail::random_quadratic(rng, d, "F");
      const auto G = detail::random_quadratic(rng, d, "G");
      const auto st = sp2k::random_state(n, k, seed + 1000 * k + s);
      const double lhs = bracket(P, sp2k::collective_lift(F, n, k), sp2k::collective_lift(G, n, k), st.packed());
      const double rhs = sp2k::lp_bracket(F, G, sp2k::momentum_map_phi(st));
      worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
    }
    out.push_back(at_most("poisson_map_k" + std::to_string(k), worst, 1e-10, "100 random quadratic pairs"));
  }

  {
    const auto dp = sp2k::dual_pair_centralizer_check();
    out.push_back(equals("centralizer_of_so3_dim", dp.of_so3.dimension, 3));
    out.push_back(equals("centralizer_of_sp2_dim", dp.of_sp2.dimension, 3));
    out.push_back(at_most("centralizer_spans", std::max(dp.of_so3.span_residual, dp.of_sp2.span_residual), 1e-8));
  }
  {
    double worst = 0.0;
    std::normal_distribution<double> g;
    for (int s = 0; s < 20; ++s) {
      const Vec3 q = detail::uniform(rng, 3, -1, 1), p = detail::uniform(rng, 3, -1, 1);
      Eigen::Matrix2d A;
      A << g(rng), g(rng), g(rng), g(rng);
      A.row(1) /= A.determinant();  // det = 1
      const auto [q2, p2] = sp2k::sp2_action(A, q, p);
      worst = std::max(worst, (q2.cross(p2) - q.cross(p)).norm());
    }
    out.push_back(at_most("sp2_action_preserves_qxp", worst, 1e-12));
  }
  {
    double worst = 0.0;
    for (int s = 0; s < 10; ++s) {
      auto st = sp2k::random_state(3, 3, seed + 77 + s);
      Matrix G = sp2k::random_state(3, 3, seed + 177 + s).q;
      const Matrix A = Eigen::HouseholderQR<Matrix>(G).householderQ();
      const auto X0 = sp2k::momentum_map_phi(st).assemble();
      st.q = A * st.q;
      st.p = A * st.p;
      worst = std::max(worst, (sp2k::momentum_map_phi(st).assemble() - X0).norm() / (1.0 + X0.norm()));
    }
    out.push_back(at_most("phi_orthogonal_invariance", worst, 1e-13));
  }
  {
    const auto r = sp2k::phi_rank_audit(3, 2, seed);
    out.push_back(equals("phi_rank_n3_k2", r.jacobian_rank, 9));
    out.push_back(equals("leaf_dimension_n3_k2", r.leaf_dimension, 8));
    out.push_back(equals("numeric_leaf_dimension_n3_k2", r.numeric_leaf_dimension, 8));
    int mismatches = 0;
    for (int n = 1; n <= 6; ++n)
      for (int k = 1; k <= 3; ++k) {
        const auto a = sp2k::phi_rank_audit(n, k, seed + 17 * n + k);
        mismatches += a.jacobian_rank != a.image_dimension || a.numeric_leaf_dimension != a.leaf_dimension;
      }
    out.push_back(equals("rank_closed_forms_n1to6_k1to3", mismatches, 0));
    double worst = 0.0;
    for (int s = 0; s < 10; ++s) {
      const auto st = sp2k::random_state(3, 5, seed + 300 + s);
      worst = std::max(worst, static_cast<double>(numerical_rank(sp2k::momentum_map_phi(st).gram())));
    }
    out.push_back(at_most("gram_rank_le_n", worst, 3.0, "n=3, k=5"));
  }
  {
    double worst = 0.0;
    for (int s = 0; s < 20; ++s) {
      const Vector w = detail::cone_point(rng);
      const double t2 = sp2k::casimirs(sp2k::Sp2kDualPoint::from_coordinates(w, 1), 3)[0];
      worst = std::max(worst, std::abs(t2 + 2.0 * central::cone_casimir(Vec3(w))));
    }
    out.push_back(at_most("trace_square_is_minus_2C", worst, 1e-12));
  }
  return out;
}

// ---------------------------------------------------------------------------
// dynamics

inline std::vector<CheckResult> dynamics_checks(std::uint64_t seed) {
  std::vector<CheckResult> out;
  const auto I = rigid::make_inertia(3, 2, 1);
  const auto rb = rigid::rigid_body_structure(I);
  const auto cf = central::reduced_structure();
  IntegratorConfig mid;
  mid.step = 1e-2;
  {
    const Vector m0 = Vec3(0.2, 1.0, 0.3);
    const auto tr = integrate(rb.structure, rb.H, m0, 100.0, mid, {.record_every = 100});
    out.push_back(at_most("casimir_rigid_body_midpoint", tr.max_drift("C"), 1e-9, "h=1e-2, 1e4 steps"));
  }
  {
    const Vector w0 = Vec3(1.0, std::sqrt(0.4), 1.0);
    const auto tr = integrate(cf.structure, central::kepler_hamiltonian(), w0, 100.0, mid, {.record_every = 100});
    out.push_back(at_most("casimir_kepler_midpoint", tr.max_drift("C"), 1e-9, "h=1e-2, 1e4 steps"));
  }
  {
    const Vector m0 = Vec3(0.2, 1.0, 0.3);
    const auto r4 = convergence_order(rb.structure, rb.H, m0, 1.0, Method::rk4);
    const auto r2 = convergence_order(rb.structure, rb.H, m0, 1.0, Method::implicit_midpoint);
    out.push_back(at_most("order_rk4", std::abs(r4.order.value_or(0.0) - 4.0), 0.3, "|order - 4|"));
    out.push_back(at_most("order_midpoint", std::abs(r2.order.value_or(0.0) - 2.0), 0.3, "|order - 2|"));
    // rigid-body H is quadratic and kept exactly by the midpoint rule, so
    // the energy-error order is measured on Kepler
    double e[2];
    for (int i = 0; i < 2; ++i) {
      IntegratorConfig c;
      c.step = 0.1 / (1 << i);
      e[i] = integrate(cf.structure, central::kepler_hamiltonian(), Vector(Vec3(1.0, std::sqrt(0.4), 1.0)), 10.0, c)
                 .max_drift("H");
    }
    out.push_back(at_most("energy_error_ratio", std::abs(std::log2(e[0] / e[1]) - 2.0), 0.3,
                          "|log2(dH(h)/dH(h/2)) - 2|"));
  }
  {
    const auto eq = rigid::classify_equilibria(I);
    int unstable = 0, stable = 0;
    for (const auto& e : eq) {
      unstable += e.stability == rigid::Stability::unstable && e.axis == 1;
      stable += e.stability == rigid::Stability::stable && e.axis != 1;
    }
    out.push_back(equals("rigid_equilibria_classification", unstable == 2 && stable == 4 ? 1.0 : 0.0, 1.0,
                         "axis 2 unstable, axes 1 and 3 stable"));
  }
  {
    IntegratorConfig c;
    c.step = 1e-3;
    rigid::FullRigidState s0;
    s0.m = Vec3(1e-3, 1.0, 1e-3);
    const auto r = rigid::hammer_throw(I, s0, 100.0, c);
    out.push_back(equals("hammer_transit", r.transit ? 1.0 : 0.0, 1.0));
    out.push_back(at_most("hammer_twist", std::abs(r.twist_angle.value_or(0.0) - std::numbers::pi), 0.3, "|twist - pi|"));
    out.push_back(at_most("hammer_stable_axes",
                          std::max(r.axes[0].max_relative_deviation, r.axes[2].max_relative_deviation), 0.1));
    rigid::FullRigidState s1;
    s1.m = Vec3(0.01, 1.0, 0.01);
    const auto tr = rigid::integrate_full(I, s1, 50.0, c);
    out.push_back(at_most("spatial_momentum_conservation", tr.max_spatial_momentum_drift(), 1e-6));
    out.push_back(at_most("attitude_orthogonality", tr.max_orthogonality_defect(), 1e-10));
  }
  {
    // trace-power Casimirs along a Lie-Poisson flow on sp(4)*
    const auto sys = sp2k::sp2k_structure(2);
    const auto H = sp2k::collective_pairwise_hamiltonian({1.0, 2.0}, sp2k::harmonic_potential());
    const Vector c0 = sp2k::momentum_map_phi(sp2k::random_state(3, 2, seed)).coordinates();
    IntegratorConfig c;
    c.step = 1e-2;
    const auto tr = integrate(sys.structure, H, c0, 1.0, c);
    out.push_back(at_most("sp4_trace_casimir_midpoint", tr.max_drift("trX2"), 10.0 * c.newton_tol * 100.0,
                          "100 steps, 10 newton_tol per step"));
  }
  return out;
}

// ---------------------------------------------------------------------------
// reduction

inline std::vector<CheckResult> reduction_checks(std::uint64_t seed) {
  std::vector<CheckResult> out;
  const auto cf = central::reduced_structure();
  IntegratorConfig rk;
  rk.method = Method::rk4;
  rk.step = 1e-3;
  {
    double worst = 0.0;
    const std::vector<std::pair<central::CanonicalState, std::string>> cases{
        {{Vec3(1, 0, 0), Vec3(std::sqrt(0.4), std::sqrt(0.6), 0)}, "kepler"},
        {{Vec3(1, 0.2, 0), Vec3(0.3, 0.8, 0.1)}, "homoclinic"}};
    for (const auto& [s, name] : cases) {
      const auto H = central::builtin_hamiltonian(name);
      const auto tr = integrate(cf.structure, H, Vector(central::invariants_map(s)), 10.0, rk, {.record_every = 1u << 30});
      const Vector z = detail::canonical_flow(central::lifted_hamiltonian(H), s.packed(), 10.0, rk.step);
      worst = std::max(worst, (tr.back() - Vector(central::invariants_map(central::CanonicalState::unpack(z)))).norm());
    }
    out.push_back(at_most("reduce_integrate_commute", worst, 1e-6, "kepler and homoclinic, rk4 h=1e-3, t=10"));
  }
  {
    const auto H = central::kepler_hamiltonian();
    const auto sys = sp2k::sp2k_structure(1);
    const Vector w0 = Vec3(1.0, std::sqrt(0.4), 1.0);
    IntegratorConfig c;
    c.step = 1e-2;
    const auto a = integrate(cf.structure, H, w0, 5.0, c);
    const auto b = integrate(sys.structure, H, w0, 5.0, c);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, (a.states[i] - b.states[i]).norm());
    out.push_back(at_most("sp2_matches_central_force", worst, 1e-9, "k=1 Lie-Poisson flow vs reduced flow"));
  }
  {
    // push-forward: d/dt phi(z(t)) equals the Lie-Poisson field
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int s = 0; s < 10; ++s) {
      const int n = 3, k = 2;
      const auto H = detail::random_quadratic(rng, sp2k::coordinate_count(k), "H");
      const auto st = sp2k::random_state(n, k, seed + 500 + s);
      const auto lift = sp2k::collective_lift(H, n, k);
      const auto minus = make_function("-H", lift.dim, [lift](const Vector& z) { return -lift(z); },
                                       [lift](const Vector& z) { return Vector(-lift.grad(z)); });
      auto phi_at = [&](const SmoothFunction& f, double t) {
        return sp2k::momentum_map_phi(sp2k::ManyBodyState::unpack(detail::canonical_flow(f, st.packed(), t, t / 8), n, k))
            .assemble();
      };
      auto central_diff = [&](double t) { return Matrix((phi_at(lift, t) - phi_at(minus, t)) / (2.0 * t)); };
      const double dt = 1e-3;
      const Matrix fd = (4.0 * central_diff(dt / 2) - central_diff(dt)) / 3.0;
      const Matrix field = sp2k::lie_poisson_vector_field(H, sp2k::momentum_map_phi(st));
      worst = std::max(worst, (fd - field).norm() / (1.0 + field.norm()));
    }
    out.push_back(at_most("phi_push_forward", worst, 1e-6, "n=3, k=2, random quadratic H"));
  }
  {
    const auto H = central::kepler_hamiltonian();
    const Vec3 w0(1.0, std::sqrt(0.4), 1.0);
    const auto frame = central::align_initial_frame(w0);
    const auto tr = integrate(cf.structure, H, Vector(w0), 10.0, rk);
    const auto rec = central::reconstruct_orbit(H, tr, frame.mu.norm());
    const Vector z = detail::canonical_flow(central::lifted_hamiltonian(H), frame.state.packed(), 10.0, 1e-4);
    double mu = 0.0;
    for (const auto& s : rec.full_states) mu = std::max(mu, (s.angular_momentum() - frame.mu).norm());
    out.push_back(at_most("reconstruction_fidelity", (rec.full_states.back().packed() - z).norm(), 1e-5, "t=10"));
    out.push_back(at_most("reconstruction_mu", mu, 1e-6));
    const auto rp = central::detect_relative_periodic(H, tr, frame.mu.norm());
    out.push_back(at_most("kepler_closure", std::abs(rp.phase.value_or(0.0) - 2.0 * std::numbers::pi), 1e-4,
                          "|theta(T) - 2 pi|"));
  }
  {
    const auto H = central::kepler_hamiltonian();
    const Vec3 w(0.36, 0.0, 5.0 / 3.0);
    const double mu = std::sqrt(0.6);
    out.push_back(at_most("circular_rate", std::abs(central::reconstruction_rate(H, w, mu) - std::pow(0.6, -1.5)), 1e-6));
    out.push_back(at_most("circular_period",
                          std::abs(central::relative_equilibrium_period(H, w, mu) - 2.0 * std::numbers::pi * std::pow(0.6, 1.5)),
                          1e-6));
  }
  {
    const auto H = central::kepler_hamiltonian();
    IntegratorConfig c;
    c.step = 1e-2;
    double bounded = 0.0, escaped = std::numeric_limits<double>::infinity();
    for (double E : {-0.6, -0.3, -0.1, 0.1, 0.5}) {
      const double w3 = 2.0 * (E + 1.0);
      const Vector w0 = Vec3(1.0, std::sqrt(w3 - 0.6), w3);
      IntegrateOptions o;
      o.record_every = 10;
      o.stop = [](double, const Vector& x) { return x[0] > 1e4; };
      const auto tr = integrate(cf.structure, H, w0, 1000.0, c, o);
      double mx = 0.0;
      for (const auto& x : tr.states) mx = std::max(mx, x[0]);
      if (E < 0) bounded = std::max(bounded, mx);
      else escaped = std::min(escaped, mx);
    }
    out.push_back(at_most("escape_bounded", bounded, 1e3, "max w1 for H<0"));
    out.push_back(at_least("escape_unbounded", escaped, 1e4, "min of max w1 for H>0"));
  }
  return out;
}

// ---------------------------------------------------------------------------
// portrait

inline std::vector<CheckResult> portrait_checks(std::uint64_t) {
  std::vector<CheckResult> out;
  const auto Hh = central::homoclinic_hamiltonian();
  const auto chart = portrait::make_chart(portrait::ChartKind::hyperboloid, 1.0, portrait::homoclinic_region());
  {
    const auto cs = portrait::extract_contours(chart, Hh, {1.5, 2.0, 2.5, 3.0}, {.nx = 129, .ny = 129});
    out.push_back(at_most("contour_on_leaf", portrait::max_leaf_error(cs), 1e-9));
    out.push_back(at_most("contour_level_first_order", portrait::level_error_ratio(cs, Hh), 1.0,
                          "|H - level| / (cell diameter |grad|)"));
    const auto fine = portrait::extract_contours(chart, Hh, {1.5, 2.0, 2.5, 3.0}, {.nx = 257, .ny = 257, .equilibria = false});
    out.push_back(at_least("contour_refinement_ratio",
                           portrait::max_level_error(cs, Hh) / portrait::max_level_error(fine, Hh), 2.0));
    bool saddle = false;
    for (const auto& m : cs.markers)
      saddle = saddle || (m.tag == "saddle" && (m.w - Vec3(1, 0, 1)).norm() <= 1e-8 && std::abs(m.H - 2.0) <= 1e-8);
    out.push_back(equals("homoclinic_saddle_marker", saddle ? 1.0 : 0.0, 1.0, "saddle (1,0,1) at H=2 on C=1"));
    double near = std::numeric_limits<double>::infinity();
    for (const auto& l : cs.levels)
      if (l.value == 2.0)
        for (const auto& p : l.polylines)
          for (const auto& w : p.w) near = std::min(near, (w - Vec3(std::sqrt(3.0), std::sqrt(2.0), std::sqrt(3.0))).norm());
    out.push_back(at_most("homoclinic_level_through_turning_point", near, cs.cell_diameter * 4.0));
  }
  {
    const auto Hk = central::kepler_hamiltonian();
    const auto ck = portrait::make_chart(portrait::ChartKind::hyperboloid, 0.6);
    const auto cs = portrait::extract_contours(ck, Hk, {0.0}, {.nx = 257, .ny = 257});
    out.push_back(equals("kepler_escape_contour_count", static_cast<double>(cs.levels[0].polylines.size()), 1.0));
    out.push_back(equals("kepler_escape_contour_open", cs.levels[0].polylines.empty() || cs.levels[0].polylines[0].closed ? 0.0 : 1.0, 1.0));
  }
  {
    const auto c = constant_function(3, 1.0);
    const auto cs = portrait::extract_contours(chart, c, {0.5, 1.0}, {.nx = 16, .ny = 16, .equilibria = false});
    out.push_back(equals("constant_H_degenerate",
                         cs.levels[0].polylines.empty() && !cs.levels[0].degenerate && cs.levels[1].degenerate ? 1.0 : 0.0, 1.0));
  }
  {
    // trajectories stay within a cell of their own contour
    const auto ck = portrait::make_chart(portrait::ChartKind::hyperboloid, 0.6);
    const auto Hk = central::kepler_hamiltonian();
    const double cell = portrait::sample(ck, Hk, 512, 512).cell_diameter();
    IntegratorConfig c;
    c.step = 1e-2;
    const auto tr = integrate(central::reduced_structure().structure, Hk, Vector(Vec3(1.0, std::sqrt(0.4), 1.0)), 20.0, c);
    double worst = 0.0;
    for (const auto& w : tr.states) {
      const Vec3 v(w[0], w[1], w[2]);
      const auto uv = ck.chart_of(v);
      const auto f = [&](const Vector& x) { return Hk(Vector(ck.embed(x[0], x[1]))); };
      const double g = finite_difference_gradient(f, Vector(uv)).norm();
      worst = std::max(worst, std::abs(Hk(w) - tr.audits[0].values.front()) / (cell * g));
      worst = std::max(worst, ck.leaf_defect(v) / cell);
    }
    out.push_back(at_most("trajectory_within_cell", worst, 1.0));
  }
  {
    const auto rb = rigid::rigid_body_structure(rigid::make_inertia(3, 2, 1));
    const auto sphere = portrait::make_chart(portrait::ChartKind::sphere, 1.0);
    const auto cs = portrait::extract_contours(sphere, rb.H, {0.2, 0.25, 0.3, 0.4}, {.nx = 129, .ny = 129});
    out.push_back(at_most("sphere_contours_on_leaf", portrait::max_leaf_error(cs), 1e-12));
  }
  return out;
}

using SuiteFn = std::function<std::vector<CheckResult>(std::uint64_t)>;

inline Report run_suite(std::string_view suite, std::uint64_t seed = 12345) {
  const std::vector<std::pair<std::string, SuiteFn>> all{{"structure", structure_checks},
                                                         {"dynamics", dynamics_checks},
                                                         {"reduction", reduction_checks},
                                                         {"portrait", portrait_checks}};
  bool known = suite == "all";
  for (const auto& [name, fn] : all) known = known || suite == name;
  if (!known) throw UnknownName("unknown verification suite '" + std::string(suite) + "'");
  Report rep;
  for (const auto& [name, fn] : all) {
    if (suite != "all" && suite != name) continue;
    const auto t0 = std::chrono::steady_clock::now();
    auto checks = fn(seed);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (auto& c : checks) {
      c.suite = name;
      c.seconds = secs / static_cast<double>(checks.size());
      rep.checks.push_back(std::move(c));
    }
  }
  return rep;
}

}  // namespace hamred::verify
