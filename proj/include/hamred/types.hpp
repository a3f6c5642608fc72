#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hamred {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Raised when a caller violates a documented precondition (dimension
/// mismatch, invalid parameters, out-of-domain state).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Nonlinear solve inside an implicit step did not reach tolerance.
class SolverDivergence : public std::runtime_error {
 public:
  SolverDivergence(const std::string& what, int iterations, double time = 0.0)
      : std::runtime_error(what), iterations_(iterations), time_(time) {}

  int iterations() const noexcept { return iterations_; }
  /// Simulation time of the failing step (0 when raised by a bare step).
  double time() const noexcept { return time_; }

 private:
  int iterations_;
  double time_;
};

/// Data lies on a degenerate stratum where the requested construction
/// has no unique answer (zero angular momentum, apex of the cone, ...).
class DegenerateData : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A chart or coordinate formula was evaluated at its singular set.
class SingularChart : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UnknownName : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline bool all_finite(const Eigen::Ref<const Matrix>& m) { return m.allFinite(); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ContractViolation(msg);
}

}  // namespace hamred
