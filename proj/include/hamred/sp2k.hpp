#pragma once

// k bodies in R^n reduced by the diagonal O(n) action. The Gram-matrix
// map phi sends (q_1..q_k, p_1..p_k) to a point X of sp(2k)*, which is
// identified with sp(2k) through <X, x> = tr(X^T x) / 2.
//
// Conventions. With Z = [q_1..q_k p_1..p_k] (n x 2k) and S = Z^T Z,
//   X = S J = [[-M^T, L], [-Kmat, M]],   J = [[0, I], [-I, 0]],
// so that tr X^2 = -2 (w1 w3 - w2^2) for k = 1. The Lie-Poisson field is
//   X' = [X, Y^T],  Y = 2 P(dH/dX),
// where P is the pairing-orthogonal projector onto sp(2k). For k = 1 and
// coordinates (L, M, Kmat) = (w1, w2, w3) this is exactly the reduced
// central-force system.

#include "hamred/integrator.hpp"
#include "hamred/linalg.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace hamred::sp2k {

template <class Mat>
Mat commutator(const Mat& A, const Mat& B) {
  return A * B - B * A;
}

using Mat2i = Eigen::Matrix<long long, 2, 2>;

struct Sp2Basis {
  Mat2i W1, W2, W3;
};

/// W1 = [[0,2],[0,0]], W2 = [[-1,0],[0,1]], W3 = [[0,0],[-2,0]].
inline Sp2Basis sp2_basis() {
  Sp2Basis b;
  b.W1 << 0, 2, 0, 0;
  b.W2 << -1, 0, 0, 1;
  b.W3 << 0, 0, -2, 0;
  return b;
}

inline Matrix to_real(const Mat2i& W) { return W.cast<double>(); }

/// J = [[0, I_m], [-I_m, 0]].
inline Matrix symplectic_form(int m) {
  Matrix J = Matrix::Zero(2 * m, 2 * m);
  J.topRightCorner(m, m).setIdentity();
  J.bottomLeftCorner(m, m) = -Matrix::Identity(m, m);
  return J;
}

/// Pairing-orthogonal projection of an arbitrary 2k x 2k matrix onto sp(2k).
inline Matrix project_sp(const Matrix& A) {
  require(A.rows() == A.cols() && A.rows() % 2 == 0, "project_sp: need an even square matrix");
  const Matrix J = symplectic_form(static_cast<int>(A.rows() / 2));
  const Matrix JA = J * A;
  return -J * (0.5 * (JA + JA.transpose()));
}

/// |J x + (J x)^T| relative to |x|; zero iff x is in sp(2k).
inline double sp_defect(const Matrix& x) {
  require(x.rows() == x.cols() && x.rows() % 2 == 0, "sp_defect: need an even square matrix");
  const Matrix J = symplectic_form(static_cast<int>(x.rows() / 2));
  const Matrix Jx = J * x;
  return (Jx - Jx.transpose()).norm() / std::max(1.0, x.norm());
}

/// x = [[-alpha^T, beta], [gamma, alpha]] with beta, gamma symmetric.
struct Sp2kElement {
  Matrix alpha, beta, gamma;

  int k() const { return static_cast<int>(alpha.rows()); }

  void validate(double tol = 1e-12) const {
    const auto k_ = alpha.rows();
    require(alpha.cols() == k_ && beta.rows() == k_ && beta.cols() == k_ && gamma.rows() == k_ &&
                gamma.cols() == k_,
            "Sp2kElement: blocks must all be k x k");
    require(alpha.allFinite() && beta.allFinite() && gamma.allFinite(), "Sp2kElement: non-finite entry");
    require((beta - beta.transpose()).norm() <= tol * std::max(1.0, beta.norm()),
            "Sp2kElement: beta must be symmetric");
    require((gamma - gamma.transpose()).norm() <= tol * std::max(1.0, gamma.norm()),
            "Sp2kElement: gamma must be symmetric");
  }

  Matrix assemble() const {
    validate();
    const auto k_ = alpha.rows();
    Matrix x(2 * k_, 2 * k_);
    x << -alpha.transpose(), beta, gamma, alpha;
    return x;
  }

  static Sp2kElement from_matrix(const Matrix& x) {
    require(x.rows() == x.cols() && x.rows() % 2 == 0, "Sp2kElement: need an even square matrix");
    const auto k_ = x.rows() / 2;
    Sp2kElement e{x.bottomRightCorner(k_, k_), x.topRightCorner(k_, k_), x.bottomLeftCorner(k_, k_)};
    e.validate(1e-10);
    return e;
  }
};

/// q and p stored as n x k column blocks.
struct ManyBodyState {
  Matrix q, p;

  int n() const { return static_cast<int>(q.rows()); }
  int k() const { return static_cast<int>(q.cols()); }

  void validate() const {
    require(q.rows() >= 1 && q.cols() >= 1, "ManyBodyState: need n >= 1 and k >= 1");
    require(p.rows() == q.rows() && p.cols() == q.cols(), "ManyBodyState: q and p shapes differ");
    require(q.allFinite() && p.allFinite(), "ManyBodyState: non-finite coordinate");
  }

  /// (q_1, .., q_k, p_1, .., p_k) flattened.
  Vector packed() const {
    Vector z(2 * q.size());
    z << q.reshaped(), p.reshaped();
    return z;
  }

  static ManyBodyState unpack(const Vector& z, int n, int k) {
    require(n >= 1 && k >= 1 && z.size() == 2 * n * k, "ManyBodyState: packed size must be 2nk");
    return {z.head(n * k).reshaped(n, k), z.tail(n * k).reshaped(n, k)};
  }
};

/// Standard normal state from a fixed seed.
inline ManyBodyState random_state(int n, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ManyBodyState s{Matrix(n, k), Matrix(n, k)};
  for (Eigen::Index i = 0; i < s.q.size(); ++i) s.q.data()[i] = g(rng);
  for (Eigen::Index i = 0; i < s.p.size(); ++i) s.p.data()[i] = g(rng);
  return s;
}

/// Number of independent coordinates on sp(2k)*, k(2k+1).
inline int coordinate_count(int k) { return k * (2 * k + 1); }

struct Sp2kDualPoint {
  Matrix M, L, Kmat;  // M_ij = q_j.p_i, L_ij = q_i.q_j, K_ij = p_i.p_j

  int k() const { return static_cast<int>(L.rows()); }

  Matrix gram() const {
    const auto k_ = L.rows();
    Matrix S(2 * k_, 2 * k_);
    S << L, M.transpose(), M, Kmat;
    return S;
  }

  Matrix assemble() const {
    const auto k_ = L.rows();
    Matrix X(2 * k_, 2 * k_);
    X << -M.transpose(), L, -Kmat, M;
    return X;
  }

  static Sp2kDualPoint from_matrix(const Matrix& X) {
    require(X.rows() == X.cols() && X.rows() % 2 == 0, "Sp2kDualPoint: need an even square matrix");
    const auto k_ = X.rows() / 2;
    return {X.bottomRightCorner(k_, k_), X.topRightCorner(k_, k_), -X.bottomLeftCorner(k_, k_)};
  }

  /// (L upper triangle, M row-major, Kmat upper triangle); for k = 1 this
  /// is (w1, w2, w3).
  Vector coordinates() const {
    const int k_ = k();
    Vector c(coordinate_count(k_));
    int a = 0;
    for (int i = 0; i < k_; ++i)
      for (int j = i; j < k_; ++j) c[a++] = L(i, j);
    for (int i = 0; i < k_; ++i)
      for (int j = 0; j < k_; ++j) c[a++] = M(i, j);
    for (int i = 0; i < k_; ++i)
      for (int j = i; j < k_; ++j) c[a++] = Kmat(i, j);
    return c;
  }

  static Sp2kDualPoint from_coordinates(const Vector& c, int k_) {
    require(k_ >= 1 && c.size() == coordinate_count(k_), "Sp2kDualPoint: need k(2k+1) coordinates");
    Sp2kDualPoint X{Matrix(k_, k_), Matrix(k_, k_), Matrix(k_, k_)};
    int a = 0;
    for (int i = 0; i < k_; ++i)
      for (int j = i; j < k_; ++j) X.L(i, j) = X.L(j, i) = c[a++];
    for (int i = 0; i < k_; ++i)
      for (int j = 0; j < k_; ++j) X.M(i, j) = c[a++];
    for (int i = 0; i < k_; ++i)
      for (int j = i; j < k_; ++j) X.Kmat(i, j) = X.Kmat(j, i) = c[a++];
    return X;
  }
};

inline int infer_k_from_dim(int dim) {
  for (int k = 1; coordinate_count(k) <= dim; ++k)
    if (coordinate_count(k) == dim) return k;
  throw ContractViolation("dimension " + std::to_string(dim) + " is not of the form k(2k+1)");
}

inline std::vector<std::string> coordinate_names(int k) {
  if (k == 1) return {"w1", "w2", "w3"};
  std::vector<std::string> out;
  auto idx = [](int i, int j) { return std::to_string(i + 1) + "_" + std::to_string(j + 1); };
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) out.push_back("L" + idx(i, j));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) out.push_back("M" + idx(i, j));
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) out.push_back("K" + idx(i, j));
  return out;
}

/// Ambient partials dH/dX for a function given on the coordinates:
/// L_ij is read from X(i, k+j), Kmat_ij from -X(k+i, j), M_ij from X(k+i, k+j).
inline Matrix ambient_gradient(const Vector& grad_c, int k) {
  require(grad_c.size() == coordinate_count(k), "ambient_gradient: need k(2k+1) partials");
  Matrix A = Matrix::Zero(2 * k, 2 * k);
  int a = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) A(i, k + j) = grad_c[a++];
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) A(k + i, k + j) = grad_c[a++];
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) A(k + i, j) = -grad_c[a++];
  return A;
}

// ---------------------------------------------------------------------------
// The map phi

inline Sp2kDualPoint momentum_map_phi(const ManyBodyState& s) {
  s.validate();
  return {s.p.transpose() * s.q, s.q.transpose() * s.q, s.p.transpose() * s.p};
}

/// d(coordinates of phi)/dz, rows ordered as Sp2kDualPoint::coordinates,
/// columns as ManyBodyState::packed.
inline Matrix phi_jacobian(const ManyBodyState& s) {
  s.validate();
  const int n = s.n(), k = s.k();
  Matrix D = Matrix::Zero(coordinate_count(k), 2 * n * k);
  auto qcol = [&](int i) { return n * i; };
  auto pcol = [&](int i) { return n * k + n * i; };
  int a = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j, ++a) {
      D.block(a, qcol(i), 1, n) += s.q.col(j).transpose();
      D.block(a, qcol(j), 1, n) += s.q.col(i).transpose();
    }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j, ++a) {  // M_ij = q_j . p_i
      D.block(a, qcol(j), 1, n) += s.p.col(i).transpose();
      D.block(a, pcol(i), 1, n) += s.q.col(j).transpose();
    }
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j, ++a) {
      D.block(a, pcol(i), 1, n) += s.p.col(j).transpose();
      D.block(a, pcol(j), 1, n) += s.p.col(i).transpose();
    }
  return D;
}

/// H o phi on R^{2nk} with chain-rule gradient.
inline SmoothFunction collective_lift(const SmoothFunction& H, int n, int k) {
  require(H.dim == coordinate_count(k), "collective_lift: H must be a function of k(2k+1) coordinates");
  return make_function(
      H.name + "_collective", 2 * n * k,
      [H, n, k](const Vector& z) {
        return H(momentum_map_phi(ManyBodyState::unpack(z, n, k)).coordinates());
      },
      [H, n, k](const Vector& z) {
        const auto s = ManyBodyState::unpack(z, n, k);
        return Vector(phi_jacobian(s).transpose() * H.grad(momentum_map_phi(s).coordinates()));
      });
}

// ---------------------------------------------------------------------------
// Lie-Poisson dynamics

inline double pairing(const Matrix& X, const Matrix& x) {
  require(X.rows() == x.rows() && X.cols() == x.cols(), "pairing: shape mismatch");
  return 0.5 * (X.transpose() * x).trace();
}

inline double pairing(const Sp2kDualPoint& X, const Sp2kElement& x) {
  return pairing(X.assemble(), x.assemble());
}

/// Rate X' for ambient partials A = dH/dX.
inline Matrix lie_poisson_rate(const Matrix& X, const Matrix& A, double tol = 1e-9) {
  require(X.rows() == X.cols() && X.rows() % 2 == 0 && A.rows() == X.rows() && A.cols() == X.cols(),
          "lie_poisson_rate: X and dH/dX must be matching even square matrices");
  require(X.allFinite() && A.allFinite(), "lie_poisson_rate: non-finite input");
  require(sp_defect(X) <= tol, "lie_poisson_rate: X is not in sp(2k)");
  const Matrix Y = 2.0 * project_sp(A);
  require(sp_defect(Y) <= tol, "lie_poisson_rate: projected gradient is not in sp(2k)");
  return commutator(X, Matrix(Y.transpose()));
}

/// Rate X' for H given on the coordinates of sp(2k)*.
inline Matrix lie_poisson_vector_field(const SmoothFunction& H, const Sp2kDualPoint& X) {
  const int k = X.k();
  require(H.dim == coordinate_count(k), "lie_poisson_vector_field: H must be a function of k(2k+1) coordinates");
  return lie_poisson_rate(X.assemble(), ambient_gradient(H.grad(X.coordinates()), k));
}

/// {F, G}(X) = <[X, Y_G^T], Y_F> for ambient partials A_F, A_G.
inline double lp_bracket_ambient(const Matrix& X, const Matrix& AF, const Matrix& AG) {
  return pairing(lie_poisson_rate(X, AG), 2.0 * project_sp(AF));
}

inline double lp_bracket(const SmoothFunction& F, const SmoothFunction& G, const Sp2kDualPoint& X) {
  const int k = X.k();
  const Vector c = X.coordinates();
  return lp_bracket_ambient(X.assemble(), ambient_gradient(F.grad(c), k), ambient_gradient(G.grad(c), k));
}

/// Poisson tensor on the k(2k+1) coordinates: entries {c_a, c_b}.
inline Matrix coordinate_tensor(const Vector& c, int k) {
  const int d = coordinate_count(k);
  const Matrix X = Sp2kDualPoint::from_coordinates(c, k).assemble();
  std::vector<Matrix> A;
  for (int a = 0; a < d; ++a) A.push_back(ambient_gradient(Vector::Unit(d, a), k));
  Matrix P = Matrix::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      P(a, b) = lp_bracket_ambient(X, A[a], A[b]);
      P(b, a) = -P(a, b);
    }
  return P;
}

/// tr X^{2j}, j = 1 .. floor(n/2).
inline std::vector<double> casimirs(const Matrix& X, int n) {
  require(n >= 1, "casimirs: n must be positive");
  std::vector<double> out;
  const Matrix X2 = X * X;
  Matrix P = X2;
  for (int j = 1; j <= n / 2; ++j) {
    out.push_back(P.trace());
    P = P * X2;
  }
  return out;
}

inline std::vector<double> casimirs(const Sp2kDualPoint& X, int n) { return casimirs(X.assemble(), n); }

/// tr X^{2j} as a function of the coordinates, with analytic gradient
/// d tr X^{2j} / dX = 2j (X^{2j-1})^T pulled back to coordinates.
inline SmoothFunction trace_power_casimir(int k, int j) {
  require(k >= 1 && j >= 1, "trace_power_casimir: k, j must be positive");
  auto power = [k, j](const Vector& c, int extra) {
    const Matrix X = Sp2kDualPoint::from_coordinates(c, k).assemble();
    Matrix P = Matrix::Identity(2 * k, 2 * k);
    for (int i = 0; i < 2 * j - extra; ++i) P = P * X;
    return P;
  };
  return make_function(
      "trX" + std::to_string(2 * j), coordinate_count(k),
      [power](const Vector& c) { return power(c, 0).trace(); },
      [power, k, j](const Vector& c) {
        const Matrix G = 2.0 * j * power(c, 1).transpose();
        Vector g(coordinate_count(k));
        int a = 0;
        for (int r = 0; r < k; ++r)
          for (int s = r; s < k; ++s) g[a++] = r == s ? G(r, k + s) : G(r, k + s) + G(s, k + r);
        for (int r = 0; r < k; ++r)
          for (int s = 0; s < k; ++s) g[a++] = G(k + r, k + s) - G(s, r);  // M and -M^T
        for (int r = 0; r < k; ++r)
          for (int s = r; s < k; ++s) g[a++] = r == s ? -G(k + r, s) : -G(k + r, s) - G(k + s, r);
        return g;
      });
}

struct Sp2kSystem {
  int k = 1;
  PoissonStructure structure;
};

/// sp(2k)* in coordinates, with tr X^2 .. tr X^{2 floor(n/2)} registered.
inline Sp2kSystem sp2k_structure(int k, int n = 3) {
  require(k >= 1, "sp2k_structure: k must be positive");
  Sp2kSystem sys;
  sys.k = k;
  sys.structure.name = "sp" + std::to_string(2 * k);
  sys.structure.dim = coordinate_count(k);
  sys.structure.tensor = [k](const Vector& c) { return coordinate_tensor(c, k); };
  sys.structure.coord_names = coordinate_names(k);
  for (int j = 1; j <= n / 2; ++j) sys.structure.casimirs.push_back(trace_power_casimir(k, j));
  return sys;
}

// ---------------------------------------------------------------------------
// Collective pairwise Hamiltonians

struct PairPotential {
  std::string name;
  std::function<double(double)> V;   // of the squared distance
  std::function<double(double)> dV;
};

inline PairPotential linear_potential() {
  return {"linear", [](double u) { return u; }, [](double) { return 1.0; }};
}

inline PairPotential harmonic_potential(double stiffness = 1.0) {
  return {"harmonic", [stiffness](double u) { return 0.5 * stiffness * u; },
          [stiffness](double) { return 0.5 * stiffness; }};
}

/// Softened gravity -1/sqrt(u + eps^2).
inline PairPotential gravity_potential(double softening = 0.0) {
  const double e2 = softening * softening;
  return {"gravity", [e2](double u) { return -1.0 / std::sqrt(u + e2); },
          [e2](double u) { return 0.5 * std::pow(u + e2, -1.5); }};
}

inline PairPotential pair_potential(const std::string& name) {
  if (name == "linear") return linear_potential();
  if (name == "harmonic") return harmonic_potential();
  if (name == "gravity") return gravity_potential();
  throw UnknownName("unknown pair potential '" + name + "'");
}

/// H = sum_i Kmat_ii / (2 m_i) + sum_{i<j} V(L_ii - 2 L_ij + L_jj).
inline SmoothFunction collective_pairwise_hamiltonian(const std::vector<double>& masses, const PairPotential& V) {
  const int k = static_cast<int>(masses.size());
  require(k >= 1, "collective_pairwise_hamiltonian: need at least one mass");
  for (double m : masses)
    require(std::isfinite(m) && m > 0.0, "collective_pairwise_hamiltonian: masses must be positive");
  require(static_cast<bool>(V.V) && static_cast<bool>(V.dV), "collective_pairwise_hamiltonian: empty potential");
  const int d = coordinate_count(k);
  // index of L_ij (i <= j) and Kmat_ii in the coordinate vector
  auto lidx = [k](int i, int j) {
    int a = 0;
    for (int r = 0; r < i; ++r) a += k - r;
    return a + (j - i);
  };
  const int koff = k * (k + 1) / 2 + k * k;
  auto kidx = [k, koff, lidx](int i) { return koff + lidx(i, i); };
  return make_function(
      "pairwise_" + V.name, d,
      [=](const Vector& c) {
        double h = 0.0;
        for (int i = 0; i < k; ++i) h += c[kidx(i)] / (2.0 * masses[i]);
        for (int i = 0; i < k; ++i)
          for (int j = i + 1; j < k; ++j) h += V.V(c[lidx(i, i)] - 2.0 * c[lidx(i, j)] + c[lidx(j, j)]);
        return h;
      },
      [=](const Vector& c) {
        Vector g = Vector::Zero(d);
        for (int i = 0; i < k; ++i) g[kidx(i)] = 1.0 / (2.0 * masses[i]);
        for (int i = 0; i < k; ++i)
          for (int j = i + 1; j < k; ++j) {
            const double dv = V.dV(c[lidx(i, i)] - 2.0 * c[lidx(i, j)] + c[lidx(j, j)]);
            g[lidx(i, i)] += dv;
            g[lidx(j, j)] += dv;
            g[lidx(i, j)] -= 2.0 * dv;
          }
        return g;
      });
}

/// Translate to the mass-weighted centre and remove total momentum.
inline ManyBodyState remove_center_of_mass(const ManyBodyState& s, const std::vector<double>& masses) {
  s.validate();
  require(static_cast<int>(masses.size()) == s.k(), "remove_center_of_mass: one mass per body");
  double total = 0.0;
  Vector qc = Vector::Zero(s.n()), ptot = Vector::Zero(s.n());
  for (int i = 0; i < s.k(); ++i) {
    require(std::isfinite(masses[i]) && masses[i] > 0.0, "remove_center_of_mass: masses must be positive");
    total += masses[i];
    qc += masses[i] * s.q.col(i);
    ptot += s.p.col(i);
  }
  qc /= total;
  ManyBodyState out = s;
  for (int i = 0; i < s.k(); ++i) {
    out.q.col(i) -= qc;
    out.p.col(i) -= (masses[i] / total) * ptot;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dimension audit

struct RankAudit {
  int n = 0, k = 0;
  int jacobian_rank = 0;
  int image_dimension = 0;       // closed form
  int leaf_dimension = 0;        // closed form
  int numeric_leaf_dimension = 0;  // rank of the Poisson tensor at phi(z)
  int lie_poisson_dimension = 0;   // k(2k+1)
};

/// Closed-form dimension of phi(R^{2nk}): with r = min(n, 2k) it is
/// 2kr - r(r-1)/2, which equals 2nk - n(n-1)/2 whenever n <= 2k.
inline int phi_image_dimension(int n, int k) {
  const int r = std::min(n, 2 * k);
  return 2 * k * r - r * (r - 1) / 2;
}

// one Casimir per symplectic eigenvalue pair of the rank-r Gram form
inline int top_leaf_dimension(int n, int k) { return phi_image_dimension(n, k) - std::min(n, 2 * k) / 2; }

inline RankAudit phi_rank_audit(int n, int k, std::uint64_t seed = 20240101) {
  require(n >= 1 && k >= 1, "phi_rank_audit: n and k must be positive");
  const auto s = random_state(n, k, seed);
  RankAudit r;
  r.n = n;
  r.k = k;
  r.jacobian_rank = numerical_rank(phi_jacobian(s));
  r.image_dimension = phi_image_dimension(n, k);
  r.leaf_dimension = top_leaf_dimension(n, k);
  r.numeric_leaf_dimension = numerical_rank(coordinate_tensor(momentum_map_phi(s).coordinates(), k));
  r.lie_poisson_dimension = coordinate_count(k);
  return r;
}

}  // namespace hamred::sp2k
