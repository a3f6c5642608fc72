#include "hamred/reconstruction.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace hamred;
using namespace hamred::central;

namespace {

IntegratorConfig rk4(double h) {
  IntegratorConfig c;
  c.method = Method::rk4;
  c.step = h;
  return c;
}

const auto sys = reduced_structure();

}  // namespace

TEST(Frame, DocumentedExample) {
  const auto f = align_initial_frame(Vec3(0.36, 0, 5.0 / 3.0));
  EXPECT_NEAR((f.state.q - Vec3(0.6, 0, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((f.state.p - Vec3(0, std::sqrt(5.0 / 3.0), 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((f.mu - Vec3(0, 0, std::sqrt(0.6))).norm(), 0.0, 1e-15);
}

TEST(Frame, RoundTripsThroughInvariants) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 3.0), s(-0.99, 0.99);
  for (int i = 0; i < 200; ++i) {
    const double w1 = u(rng), w3 = u(rng);
    const Vec3 w(w1, s(rng) * std::sqrt(w1 * w3), w3);
    const auto f = align_initial_frame(w);
    EXPECT_LE((invariants_map(f.state) - w).norm(), 1e-13);
    EXPECT_NEAR(f.mu.squaredNorm(), cone_casimir(w), 1e-13);
  }
}

TEST(Frame, DegenerateInputsThrow) {
  EXPECT_THROW(align_initial_frame(Vec3(0, 0, 1)), DegenerateData);
  EXPECT_THROW(align_initial_frame(Vec3(1, 1, 1)), DegenerateData);
  EXPECT_THROW(reconstruction_rate(kepler_hamiltonian(), Vec3(0, 0, 1), 1.0), SingularChart);
}

TEST(Rate, CircularOrbit) {
  const Vec3 w(0.36, 0, 5.0 / 3.0);
  const double C = 0.6;
  EXPECT_NEAR(reconstruction_rate(kepler_hamiltonian(), w, std::sqrt(C)), std::pow(C, -1.5), 1e-12);
  EXPECT_NEAR(relative_equilibrium_period(kepler_hamiltonian(), w, std::sqrt(C)), 2 * std::numbers::pi * std::pow(C, 1.5),
              1e-12);
  const auto f = align_initial_frame(w);
  oracle::Vec6 z{};
  for (int i = 0; i < 3; ++i) z[i] = f.state.q[i], z[3 + i] = f.state.p[i];
  EXPECT_NEAR(oracle::circular_revolution_time(z, 1e-3), 2 * std::numbers::pi * std::pow(C, 1.5), 1e-6);
}

TEST(Ansatz, CollinearBranchForZeroMomentum) {
  const auto s = ansatz_state(Vec3(4, 2, 1), 0.3, 0.0);
  EXPECT_LE(s.q.cross(s.p).norm(), 1e-15);
  EXPECT_LE((invariants_map(s) - Vec3(4, 2, 1)).norm(), 1e-14);
  EXPECT_GT(s.q.x(), 0.0);
}

TEST(Ansatz, PlanarRotationIsRotation) {
  const Mat3 R = planar_rotation(0.7);
  EXPECT_LE((R.transpose() * R - Mat3::Identity()).norm(), 1e-15);
  EXPECT_NEAR(R(2, 2), 1.0, 0.0);
}

TEST(Reconstruct, ReproducesReducedTrajectoryAndMomentum) {
  for (const auto& name : builtin_hamiltonian_names()) {
    const auto H = builtin_hamiltonian(name);
    const Vec3 w0(1.0, 0.3, 0.9);
    const auto f = align_initial_frame(w0);
    const auto tr = integrate(sys.structure, H, Vector(w0), 3.0, rk4(1e-3));
    const auto rec = reconstruct_orbit(H, tr, f.mu.norm());
    ASSERT_EQ(rec.size(), tr.size());
    for (std::size_t i = 0; i < rec.size(); i += 50) {
      EXPECT_LE((Vector(invariants_map(rec.full_states[i])) - tr.states[i]).norm(), 1e-9) << name;
      EXPECT_LE((rec.full_states[i].angular_momentum() - f.mu).norm(), 1e-6) << name;
    }
    EXPECT_EQ(rec.flatten().state_names.back(), "theta");
  }
}

TEST(Reconstruct, MatchesDirectCartesianKepler) {
  const auto H = kepler_hamiltonian();
  const Vec3 w0(1.0, std::sqrt(0.4), 1.0);
  const auto f = align_initial_frame(w0);
  const auto rec = reconstruct_orbit(H, integrate(sys.structure, H, Vector(w0), 10.0, rk4(1e-3)), f.mu.norm());
  oracle::Vec6 z{};
  for (int i = 0; i < 3; ++i) z[i] = f.state.q[i], z[3 + i] = f.state.p[i];
  const auto zT = oracle::rk4(oracle::kepler_rhs, z, 10.0, 1e-4);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(rec.full_states.back().q[i], zT[i], 1e-5);
    EXPECT_NEAR(rec.full_states.back().p[i], zT[3 + i], 1e-5);
  }
}

TEST(Periodic, KeplerClosesAfterOneReducedPeriod) {
  const auto H = kepler_hamiltonian();
  const Vec3 w0(1.0, std::sqrt(0.4), 1.0);  // E = -1/2, a = 1
  const auto f = align_initial_frame(w0);
  const auto rp = detect_relative_periodic(H, integrate(sys.structure, H, Vector(w0), 10.0, rk4(1e-3)), f.mu.norm());
  ASSERT_EQ(rp.kind, ReturnKind::periodic);
  EXPECT_NEAR(*rp.period, oracle::kepler_period(-0.5), 1e-6);
  EXPECT_NEAR(*rp.phase, 2 * std::numbers::pi, 1e-4);
}

TEST(Periodic, OraclePlanarSweepIsTwoPi) {
  const double rp = 1 - std::sqrt(0.4);
  const auto sw = oracle::kepler_sweep_between_periapses({rp, 0, 0, 0, std::sqrt(0.6) / rp, 0}, 1e-4, 20);
  ASSERT_TRUE(sw.returned);
  EXPECT_NEAR(sw.angle, 2 * std::numbers::pi, 1e-6);
  EXPECT_NEAR(sw.time, 2 * std::numbers::pi, 1e-6);
}

TEST(Periodic, RelativeEquilibriumIsFixedPoint) {
  const auto H = kepler_hamiltonian();
  const Vec3 w0(0.36, 0, 5.0 / 3.0);
  const auto rp = detect_relative_periodic(H, integrate(sys.structure, H, Vector(w0), 5.0, rk4(1e-2)), std::sqrt(0.6));
  EXPECT_EQ(rp.kind, ReturnKind::fixed_point);
  EXPECT_FALSE(rp.period.has_value());
}

TEST(Periodic, HomoclinicOrbitDoesNotReturn) {
  const auto H = homoclinic_hamiltonian();
  const Vec3 w0(std::sqrt(3.0), std::sqrt(2.0), std::sqrt(3.0));
  // on the separatrix; roundoff alone moves the numerical orbit off it within
  // a few time units, so the detector must reject the spurious return
  for (double h : {1e-3, 1e-4}) {
    const auto rp = detect_relative_periodic(H, integrate(sys.structure, H, Vector(w0), 5.0, rk4(h)), 1.0);
    EXPECT_EQ(rp.kind, ReturnKind::none) << h;
    EXPECT_TRUE(rp.stalled) << h;
  }
}

TEST(Periodic, KeplerLoopDoesNotStall) {
  const auto H = kepler_hamiltonian();
  const auto rp = detect_relative_periodic(H, integrate(sys.structure, H, Vector(Vec3(1.0, std::sqrt(0.4), 1.0)), 10.0, rk4(1e-3)),
                                           std::sqrt(0.6));
  EXPECT_FALSE(rp.stalled);
  EXPECT_EQ(rp.kind, ReturnKind::periodic);
}
