#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "qchannel/linalg.hpp"

namespace qchannel {

/// Unit vector in C^dim.  Register indices follow the binary expansion
/// |i_1 ... i_n> <-> i_1 * 2^(n-1) + ... + i_n (qubit 1 is most significant).
class StateVector {
 public:
  explicit StateVector(Vector amplitudes, double tol = 1e-10);

  static StateVector basis(Eigen::Index dim, Eigen::Index index);
  /// Computational basis ket of an n-qubit register, e.g. fromBits("101").
  static StateVector fromBits(std::string_view bits);

  Eigen::Index dim() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }
  Matrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  Vector amplitudes_;
};

class DensityOperator {
 public:
  explicit DensityOperator(Matrix rho, double tol = 1e-10);
  static DensityOperator pure(const StateVector& psi) { return DensityOperator(psi.projector()); }

  Eigen::Index dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }

 private:
  Matrix matrix_;
};

/// General measurement {M_k} with sum_k M_k^dagger M_k = I.
class Measurement {
 public:
  explicit Measurement(std::vector<Matrix> operators, double tol = 1e-10);
  /// Projective measurement in the computational basis of C^dim.
  static Measurement computational(Eigen::Index dim);

  Eigen::Index dim() const { return operators_.front().rows(); }
  const std::vector<Matrix>& operators() const { return operators_; }
  /// Every M_k is an orthogonal projection.
  bool isProjective(double tol = kDefaultTol) const;

 private:
  std::vector<Matrix> operators_;
};

struct MeasurementOutcome {
  double probability;
  std::optional<StateVector> postState;  // absent when probability <= tol
};

enum class Gate { I2, X, Y, Z, H, CNOT };

Matrix gate(Gate g);
Matrix gate(std::string_view name);

/// 2^n x 2^n operator acting as g on tensor slot k (1-based, slot 1 leftmost).
Matrix embedSingle(const Matrix& g, int k, int n);
Matrix cnotEmbed(int control, int target, int n);

DensityOperator evolve(const DensityOperator& rho, const Matrix& u, double tol = kDefaultTol);

std::vector<MeasurementOutcome> measureState(const StateVector& psi, const Measurement& m,
                                             double tol = 1e-12);

/// Seeded outcome sampler layered over measureState.  Single owner; not for
/// sharing between threads.
class MeasurementSampler {
 public:
  explicit MeasurementSampler(std::uint64_t seed = 0) : rng_(seed) {}
  std::size_t sample(const StateVector& psi, const Measurement& m);

 private:
  std::mt19937_64 rng_;
};

// Seeded random objects for tests and verification sets.
Matrix randomUnitary(Eigen::Index dim, std::mt19937_64& rng);
Matrix randomDensity(Eigen::Index dim, std::mt19937_64& rng);
StateVector randomState(Eigen::Index dim, std::mt19937_64& rng);
Matrix randomHermitian(Eigen::Index dim, std::mt19937_64& rng);
Matrix randomComplex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);

}  // namespace qchannel
