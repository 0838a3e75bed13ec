#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "qchannel/channels.hpp"
#include "qchannel/qcore.hpp"

namespace qchannel {

/// Code subspace C of C^N carried as an isometry V (N x K) and P_C = V V^dagger.
class QuantumCode {
 public:
  /// Columns of `isometry` must be orthonormal.
  explicit QuantumCode(Matrix isometry, double tol = 1e-10);

  Eigen::Index ambientDim() const { return isometry_.rows(); }
  Eigen::Index codeDim() const { return isometry_.cols(); }
  const Matrix& isometry() const { return isometry_; }
  Matrix projection() const { return isometry_ * isometry_.adjoint(); }

 private:
  Matrix isometry_;
};

/// Modified Gram-Schmidt over the kets in input order.
QuantumCode makeCode(const std::vector<StateVector>& kets, double tol = kDefaultTol);
/// "repetition3" or "shor9".
QuantumCode builtinCode(std::string_view name);

struct DetectionResult {
  bool detectable = false;
  std::optional<Complex> lambda;
  double residual = 0.0;  // |P E P - lambda P|_F with lambda = Tr(P E P) / K
};

DetectionResult detect(const QuantumCode& code, const Matrix& e, double tol = kDefaultTol);

/// Operators whose compression to the code is scalar: in the basis `basis`
/// (code vectors first) they look like [[lambda I_K, *], [*, *]].
struct DetectableSpaceForm {
  Matrix basis;           // N x N unitary, first K columns span the code
  Eigen::Index codeDim = 0;
  Eigen::Index dimension = 0;  // N^2 - K^2 + 1

  bool contains(const Matrix& e, double tol = kDefaultTol) const;
};

DetectableSpaceForm detectableSpaceForm(const QuantumCode& code);

struct CorrectabilityResult {
  bool correctable = false;
  std::optional<Matrix> lambdaMatrix;  // Lambda(i, j) = lambda for E_i^dagger E_j
  std::optional<std::pair<std::size_t, std::size_t>> offendingPair;  // 0-based (i, j)
};

CorrectabilityResult correctability(const QuantumCode& code, const std::vector<Matrix>& errors,
                                    double tol = kDefaultTol);

struct RecoveryChannel {
  KrausChannel channel;                 // {U_k^dagger P_k}, then the completion term if any
  std::vector<Matrix> projections;      // syndrome projections P_k = U_k P_C U_k^dagger
  std::vector<Matrix> unitaries;        // U_k from the polar decomposition of F_k P_C
  std::vector<double> weights;          // d_kk of the retained F_k
  std::vector<Matrix> combinedErrors;   // F_k = sum_i u_ik E_i
  bool completed = false;               // whether P_perp = I - sum P_k was appended
};

/// Builds the correction channel from a verified Lambda matrix: diagonalize
/// Lambda, mix the errors into F_k, polar-decompose F_k P_C, and collect the
/// syndrome projections.  F_k with d_kk <= tol are dropped.
RecoveryChannel buildRecovery(const QuantumCode& code, const std::vector<Matrix>& errors,
                              const Matrix& lambda, double tol = kDefaultTol);

struct RecoveryVerification {
  double maxDeviation = 0.0;
  bool success = false;
};

/// max |R(E(rho)) - rho|_F over the code matrix units V e_ij V^dagger and
/// `randomSamples` seeded random code densities.
RecoveryVerification verifyRecovery(const KrausChannel& channel, const RecoveryChannel& recovery,
                                    const QuantumCode& code, double tol = kDefaultTol,
                                    std::uint64_t seed = 0, int randomSamples = 20);

/// {I, X_k, Y_k, Z_k} on an n-qubit register.
std::vector<Matrix> singleQubitPaulis(int k, int n);

}  // namespace qchannel
