// Acceptance run: one PASS/FAIL line per criterion. Tolerances are fixed
// here; the exit code is the number of failed criteria.

#include "hamred/hamred.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <limits>
#include <random>
#include <string>

using namespace hamred;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
};

int failures = 0;

template <class F>
void criterion(int id, const char* name, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s  %2d %-34s %s  [%.2fs]\n", o.pass ? "PASS" : "FAIL", id, name, o.summary.c_str(), s);
  std::fflush(stdout);
  failures += !o.pass;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Vector to_vec(const oracle::Vec6& z) {
  Vector v(6);
  for (int i = 0; i < 6; ++i) v[i] = z[i];
  return v;
}

oracle::Vec6 to_arr(const Vector& v) {
  oracle::Vec6 z;
  for (int i = 0; i < 6; ++i) z[i] = v[i];
  return z;
}

IntegratorConfig rk4(double h) {
  IntegratorConfig c;
  c.method = Method::rk4;
  c.step = h;
  return c;
}

IntegratorConfig midpoint(double h) {
  IntegratorConfig c;
  c.step = h;
  return c;
}

// Kepler state on the leaf C = 0.6 with energy E.
Vec3 kepler_leaf_point(double E) {
  const double w3 = 2.0 * (E + 1.0);
  return {1.0, std::sqrt(w3 - 0.6), w3};
}

}  // namespace

int main() {
  const auto I = rigid::make_inertia(3, 2, 1);
  const auto rb = rigid::rigid_body_structure(I);
  const auto cf = central::reduced_structure();
  const auto kepler = central::kepler_hamiltonian();
  const auto homoclinic = central::homoclinic_hamiltonian();

  criterion(1, "sp2 structure constants", [] {
    using oracle::ibracket, oracle::iscale, oracle::W1, oracle::W2, oracle::W3;
    const bool by_hand = ibracket(W1, W2) == iscale(2, W1) && ibracket(W1, W3) == iscale(4, W2) &&
                         ibracket(W2, W3) == iscale(2, W3);
    const auto b = sp2k::sp2_basis();
    bool same = true;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        same = same && b.W1(i, j) == W1[i][j] && b.W2(i, j) == W2[i][j] && b.W3(i, j) == W3[i][j];
    using sp2k::commutator;
    const bool lib = commutator(b.W1, b.W2) == 2 * b.W1 && commutator(b.W1, b.W3) == 4 * b.W2 &&
                     commutator(b.W2, b.W3) == 2 * b.W3;
    return Outcome{by_hand && same && lib, std::string("integer identities ") + (by_hand ? "hold" : "broken") +
                                               ", library basis " + (same ? "matches" : "differs") +
                                               ", library commutators " + (lib ? "exact" : "wrong")};
  });

  criterion(2, "Jacobi residual", [&] {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-2, 2), pos(0.2, 2.0), s(-0.95, 0.95);
    double jr = 0, jc = 0, neg = 0;
    for (int i = 0; i < 100; ++i) {
      const Vector m = Vec3(u(rng), u(rng), u(rng));
      const double w1 = pos(rng), w3 = pos(rng);
      const Vector w = Vec3(w1, s(rng) * std::sqrt(w1 * w3), w3);
      jr = std::max(jr, jacobi_residual(rb.structure, m));
      jc = std::max(jc, jacobi_residual(cf.structure, w));
    }
    auto bad = cf.structure;
    bad.tensor = [](const Vector& w) {
      Matrix K = central::reduced_tensor(w);
      K(0, 1) = w[0] * w[0];
      K(1, 0) = -w[0] * w[0];
      return K;
    };
    neg = jacobi_residual(bad, Vector(Vec3(2, 1, 1)));
    return Outcome{jr <= 1e-8 && jc <= 1e-8 && neg > 0.1,
                   fmt("rigid %.2e, central %.2e (<= 1e-8); corrupted control at (2,1,1) %.3g (> 0.1)", jr, jc, neg)};
  });

  criterion(3, "Casimir conservation (midpoint)", [&] {
    const auto a = integrate(rb.structure, rb.H, Vector(Vec3(0.2, 1, 0.3)), 100.0, midpoint(1e-2));
    const auto b = integrate(cf.structure, kepler, Vector(kepler_leaf_point(-0.5)), 100.0, midpoint(1e-2));
    // recompute the Casimirs by hand from the states
    double da = 0, db = 0;
    const double ca = a.states[0].squaredNorm();
    const auto& w0 = b.states[0];
    const double cb = w0[0] * w0[2] - w0[1] * w0[1];
    for (const auto& m : a.states) da = std::max(da, std::abs(m.squaredNorm() - ca));
    for (const auto& w : b.states) db = std::max(db, std::abs(w[0] * w[2] - w[1] * w[1] - cb));
    return Outcome{da <= 1e-9 && db <= 1e-9 && a.size() == 10001,
                   fmt("rigid |dC| %.2e, Kepler |dC| %.2e over 1e4 steps (<= 1e-9)", da, db)};
  });

  criterion(4, "convergence orders", [&] {
    const Vector m0 = Vec3(0.2, 1, 0.3);
    const auto r4 = convergence_order(rb.structure, rb.H, m0, 1.0, Method::rk4);
    const auto r2 = convergence_order(rb.structure, rb.H, m0, 1.0, Method::implicit_midpoint);
    const double o4 = r4.order.value_or(NAN), o2 = r2.order.value_or(NAN);
    return Outcome{std::abs(o4 - 4) <= 0.3 && std::abs(o2 - 2) <= 0.3,
                   fmt("rk4 %.3f (4 +- 0.3), midpoint %.3f (2 +- 0.3), steps 0.05/0.025 vs 1/640 reference", o4, o2)};
  });

  criterion(5, "reduce/integrate commutation", [&] {
    struct Case {
      oracle::Vec6 z;
      const SmoothFunction* H;
      oracle::Vec6 (*rhs)(const oracle::Vec6&);
    };
    const Case cases[] = {{{1, 0, 0, std::sqrt(0.4), std::sqrt(0.6), 0}, &kepler, oracle::kepler_rhs},
                          {{1, 0.2, 0, 0.3, 0.8, 0.1}, &homoclinic, oracle::homoclinic_rhs}};
    double err[2];
    for (int c = 0; c < 2; ++c) {
      const auto w0 = oracle::invariants(cases[c].z);
      const auto tr = integrate(cf.structure, *cases[c].H, Vector(Vec3(w0[0], w0[1], w0[2])), 10.0, rk4(1e-3),
                                {.record_every = 1u << 30});
      const auto zT = oracle::rk4(cases[c].rhs, cases[c].z, 10.0, 1e-3);
      const auto wT = oracle::invariants(zT);
      err[c] = (tr.back() - Vector(Vec3(wT[0], wT[1], wT[2]))).norm();
    }
    return Outcome{err[0] <= 1e-6 && err[1] <= 1e-6,
                   fmt("Kepler %.2e, homoclinic %.2e at t=10, rk4 h=1e-3 both sides (<= 1e-6)", err[0], err[1])};
  });

  criterion(6, "reconstruction fidelity", [&] {
    const Vec3 w0 = kepler_leaf_point(-0.5);
    const auto frame = central::align_initial_frame(w0);
    const auto tr = integrate(cf.structure, kepler, Vector(w0), 10.0, rk4(1e-3));
    const auto rec = central::reconstruct_orbit(kepler, tr, frame.mu.norm());
    // direct Cartesian integration, compared every 0.1 time units
    double worst = 0, mu = 0;
    oracle::Vec6 z = to_arr(frame.state.packed());
    double t = 0;
    for (std::size_t i = 0; i < rec.size(); i += 100) {
      if (rec.times[i] > t) {
        z = oracle::rk4(oracle::kepler_rhs, z, rec.times[i] - t, 1e-4);
        t = rec.times[i];
      }
      worst = std::max(worst, (rec.full_states[i].packed() - to_vec(z)).norm());
      const auto L = oracle::cross3(rec.full_states[i].q.data(), rec.full_states[i].p.data());
      mu = std::max(mu, (Vec3(L[0], L[1], L[2]) - frame.mu).norm());
    }
    return Outcome{worst <= 1e-5 && mu <= 1e-6,
                   fmt("max |z_rec - z_direct| %.2e over t in [0,10] (<= 1e-5); mu drift %.2e (<= 1e-6)", worst, mu)};
  });

  criterion(7, "circular-orbit phase rate", [&] {
    const Vec3 w(0.36, 0.0, 5.0 / 3.0);
    const double C = central::cone_casimir(w), mu = std::sqrt(C);
    const double rate = central::reconstruction_rate(kepler, w, mu);
    const double T = central::relative_equilibrium_period(kepler, w, mu);
    const double T_exact = 2 * std::numbers::pi * std::pow(C, 1.5);
    const double T_direct = oracle::circular_revolution_time(to_arr(central::align_initial_frame(w).state.packed()), 1e-3);
    const double e1 = std::abs(rate - std::pow(C, -1.5)), e2 = std::abs(T - T_exact), e3 = std::abs(T_direct - T_exact);
    return Outcome{e1 <= 1e-6 && e2 <= 1e-6 && e3 <= 1e-6,
                   fmt("rate %.9f (|err| %.1e), period |err| %.1e, direct revolution |err| %.1e (all <= 1e-6)", rate, e1,
                       e2, e3)};
  });

  criterion(8, "Kepler closure", [&] {
    const Vec3 w0 = kepler_leaf_point(-0.5);
    const auto frame = central::align_initial_frame(w0);
    const auto tr = integrate(cf.structure, kepler, Vector(w0), 10.0, rk4(1e-3));
    const auto rp = central::detect_relative_periodic(kepler, tr, frame.mu.norm());
    const double theta = rp.phase.value_or(NAN), T = rp.period.value_or(NAN);
    // direct planar integration: angle swept between periapses, and period from the energy
    // periapsis of the same orbit: a = 1, |L|^2 = 0.6, r_p = a (1 - e)
    const double rp_ = 1.0 - std::sqrt(0.4);
    const oracle::Vec6 peri{rp_, 0, 0, 0, std::sqrt(0.6) / rp_, 0};
    const auto sw = oracle::kepler_sweep_between_periapses(peri, 1e-4, 20.0);
    const double T_oracle = oracle::kepler_period(-0.5);
    const double e = std::abs(theta - 2 * std::numbers::pi);
    const bool ok = rp.kind == central::ReturnKind::periodic && e <= 1e-4 && std::abs(T - T_oracle) <= 1e-4 &&
                    std::abs(sw.angle - 2 * std::numbers::pi) <= 1e-4;
    return Outcome{ok, fmt("theta(T) - 2pi = %.2e (<= 1e-4), T - 2pi a^1.5 = %.2e, direct sweep - 2pi = %.2e", theta - 2 * std::numbers::pi,
                           T - T_oracle, sw.angle - 2 * std::numbers::pi)};
  });

  criterion(9, "Poisson-map property", [&] {
    std::mt19937_64 rng(909);
    std::normal_distribution<double> g;
    double worst = 0;
    for (int k : {1, 2}) {
      const int n = 3, d = sp2k::coordinate_count(k);
      for (int s = 0; s < 100; ++s) {
        auto quad = [&] {
          Matrix A(d, d);
          for (int i = 0; i < d * d; ++i) A.data()[i] = g(rng);
          A = (0.5 * (A + A.transpose())).eval();
          Vector b(d);
          for (int i = 0; i < d; ++i) b[i] = g(rng);
          return std::pair{A, b};
        };
        const auto [A, a] = quad();
        const auto [B, b] = quad();
        const auto F = make_function("F", d, [A, a](const Vector& x) { return 0.5 * x.dot(A * x) + a.dot(x); },
                                     [A, a](const Vector& x) { return Vector(A * x + a); });
        const auto G = make_function("G", d, [B, b](const Vector& x) { return 0.5 * x.dot(B * x) + b.dot(x); },
                                     [B, b](const Vector& x) { return Vector(B * x + b); });
        const auto st = sp2k::random_state(n, k, 7000 + 100 * k + s);
        const Vector zp = st.packed();
        const std::vector<double> z(zp.data(), zp.data() + zp.size());
        auto lift = [n, k](const SmoothFunction& f) {
          return [f, n, k](const std::vector<double>& x) {
            const auto c = oracle::gram_coordinates(x, n, k);
            return f(Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size())));
          };
        };
        const double lhs = oracle::canonical_bracket(oracle::gradient5(lift(F), z, 0.05), oracle::gradient5(lift(G), z, 0.05));
        const double rhs = sp2k::lp_bracket(F, G, sp2k::momentum_map_phi(st));
        worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
      }
    }
    return Outcome{worst <= 1e-10, fmt("max relative residual %.2e over 200 samples, n=3 k=1,2 (<= 1e-10)", worst)};
  });

  criterion(10, "dual-pair centralizers in sp(6)", [] {
    const auto dp = sp2k::dual_pair_centralizer_check();
    // recovered directions must commute with the other factor
    double comm = 0;
    for (const auto& x : dp.of_so3.basis)
      for (const auto& y : sp2k::embedded_so3()) comm = std::max(comm, (x * y - y * x).norm());
    const double span = std::max(dp.of_so3.span_residual, dp.of_sp2.span_residual);
    return Outcome{dp.of_so3.dimension == 3 && dp.of_sp2.dimension == 3 && span <= 1e-8 && comm <= 1e-10,
                   fmt("dims %.0f and %.0f (3, 3); span residual %.1e (<= 1e-8); commutator %.1e", dp.of_so3.dimension,
                       dp.of_sp2.dimension, span, comm)};
  });

  criterion(11, "rank/dimension audit n=3 k=2", [] {
    const auto r = sp2k::phi_rank_audit(3, 2);
    // independent Jacobian of the Gram coordinates by five-point differences
    const auto st = sp2k::random_state(3, 2, 31337);
    const Vector zp = st.packed();
    const std::vector<double> z(zp.data(), zp.data() + zp.size());
    Matrix D(10, 12);
    for (int row = 0; row < 10; ++row) {
      const auto g = oracle::gradient5([row](const std::vector<double>& x) { return oracle::gram_coordinates(x, 3, 2)[row]; },
                                       z, 0.05);
      for (int c = 0; c < 12; ++c) D(row, c) = g[c];
    }
    const Vector sv = Eigen::JacobiSVD<Matrix>(D).singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv[i] > 1e-8 * sv[0];
    return Outcome{r.jacobian_rank == 9 && r.leaf_dimension == 8 && rank == 9,
                   fmt("library rank %.0f, oracle rank %.0f (9); leaf dimension %.0f, numeric %.0f (8)", r.jacobian_rank,
                       rank, r.leaf_dimension, r.numeric_leaf_dimension)};
  });

  criterion(12, "hammer throw", [&] {
    rigid::FullRigidState s0;
    s0.m = Vec3(1e-3, 1, 1e-3);
    const auto r = rigid::hammer_throw(I, s0, 100.0, midpoint(1e-3));
    const double twist = r.twist_angle.value_or(NAN);
    const double reversed = r.m_end.dot(r.m_start) / r.m_start.squaredNorm();
    const double dev = std::max(r.axes[0].max_relative_deviation, r.axes[2].max_relative_deviation);
    const bool ok = r.transit && reversed <= -0.99 && std::abs(twist - std::numbers::pi) <= 0.3 && dev <= 0.1;
    return Outcome{ok, fmt("first m2 sign change t=%.2f; m_end.m0/|m0|^2 = %.4f; twist %.4f (pi +- 0.3); axes 1,3 dev %.4f (<= 0.1)",
                           r.first_sign_change.value_or(NAN), reversed, twist, dev)};
  });

  criterion(13, "escape-energy dichotomy", [&] {
    double bounded = 0, escaped = std::numeric_limits<double>::infinity(), worst_energy = 0;
    for (int i = 0; i < 20; ++i) {
      const double E = i < 10 ? -0.65 + 0.6 * i / 9.0 : 0.05 + 0.95 * (i - 10) / 9.0;
      const Vec3 w0 = kepler_leaf_point(E);
      worst_energy = std::max(worst_energy, std::abs(w0[2] / 2 - 1 / std::sqrt(w0[0]) - E));
      IntegrateOptions o;
      o.record_every = 10;
      o.stop = [](double, const Vector& x) { return x[0] > 1e4; };
      const auto tr = integrate(cf.structure, kepler, Vector(w0), 1000.0, midpoint(1e-2), o);
      double mx = 0;
      for (const auto& x : tr.states) mx = std::max(mx, x[0]);
      if (E < 0) bounded = std::max(bounded, mx);
      else escaped = std::min(escaped, mx);
    }
    return Outcome{bounded <= 1e3 && escaped > 1e4 && worst_energy < 1e-12,
                   fmt("10 orbits H<0: max w1 %.1f (<= 1e3); 10 orbits H>0: min peak w1 %.1f (> 1e4)", bounded, escaped)};
  });

  criterion(14, "homoclinic saddle location", [&] {
    const auto chart = portrait::make_chart(portrait::ChartKind::hyperboloid, 1.0, portrait::homoclinic_region());
    const auto eq = portrait::locate_equilibria(chart, homoclinic);
    const Vec3 target(std::sqrt(3.0), std::sqrt(2.0), std::sqrt(3.0));
    double nearest = std::numeric_limits<double>::infinity();
    const portrait::Marker* best = nullptr;
    for (const auto& m : eq)
      if ((m.w - target).norm() < nearest) nearest = (m.w - target).norm(), best = &m;
    const Vector field = cf.structure(Vector(target)) * homoclinic.grad(Vector(target));
    const bool found = nearest <= 1e-8;
    std::string diag = fmt("nearest equilibrium to (sqrt3,sqrt2,sqrt3) is %.3g away; |K grad H| there = %.3g, H = %.3g",
                           nearest, field.norm(), oracle::homoclinic_energy(target[0], target[1], target[2]));
    if (best) diag += fmt("; closest found (%.6f,%.6f,%.6f)", best->w[0], best->w[1], best->w[2]);
    diag += " " + (best ? best->tag : std::string("none"));
    return Outcome{found, diag};
  });
  {
    // diagnostic, not a criterion: the saddle that does sit on H = 2
    const auto chart = portrait::make_chart(portrait::ChartKind::hyperboloid, 1.0, portrait::homoclinic_region());
    for (const auto& m : portrait::locate_equilibria(chart, homoclinic))
      std::printf("INFO     homoclinic equilibrium %-7s w=(%.10f, %.10f, %.10f) H=%.10f\n", m.tag.c_str(), m.w[0], m.w[1],
                  m.w[2], oracle::homoclinic_energy(m.w[0], m.w[1], m.w[2]));
  }

  criterion(15, "portrait integrity", [&] {
    const auto chart = portrait::make_chart(portrait::ChartKind::hyperboloid, 1.0, portrait::homoclinic_region());
    const std::vector<double> levels{1.5, 2.0, 2.5, 3.0};
    double leaf = 0, level[2] = {0, 0}, ratio = 0;
    std::size_t vertices = 0;
    for (int r = 0; r < 2; ++r) {
      const int n = r == 0 ? 129 : 257;
      const auto cs = portrait::extract_contours(chart, homoclinic, levels, {.nx = n, .ny = n, .equilibria = false});
      if (r == 0) ratio = portrait::level_error_ratio(cs, homoclinic);
      // re-read the emitted CSV and audit every vertex by hand
      std::istringstream in(portrait::emit_csv(cs));
      for (const auto& v : portrait::read_contour_csv(in)) {
        leaf = std::max(leaf, std::abs(v.w[0] * v.w[2] - v.w[1] * v.w[1] - 1.0));
        level[r] = std::max(level[r], std::abs(oracle::homoclinic_energy(v.w[0], v.w[1], v.w[2]) - v.level));
        ++vertices;
      }
    }
    const double halving = level[0] / level[1];
    return Outcome{leaf <= 1e-9 && ratio <= 1.0 && halving >= 2.0,
                   fmt("leaf error %.1e (<= 1e-9); level error / (cell x grad) %.3f (<= 1); grid 128->256 error ratio %.2f (>= 2); %.0f vertices",
                       leaf, ratio, halving, static_cast<double>(vertices))};
  });

  std::printf("%d of 15 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
