#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "qchannel/linalg.hpp"

namespace qchannel {

/// Completely positive map rho -> sum_i E_i rho E_i^dagger given by its noise
/// operators.  Trace preservation is evaluated once at construction.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<Matrix> operators);

  Eigen::Index dim() const { return operators_.front().rows(); }
  const std::vector<Matrix>& operators() const { return operators_; }
  std::size_t size() const { return operators_.size(); }
  /// |sum E_i^dagger E_i - I|_F <= 1e-9 N.
  bool isTracePreserving() const { return tracePreserving_; }

 private:
  std::vector<Matrix> operators_;
  bool tracePreserving_ = false;
};

/// Block matrix whose (i, j) block of size N is E(|i><j|).  Entry
/// (i N + a, j N + b) is <a|E(|i><j|)|b>.
struct ChoiMatrix {
  Eigen::Index blockDim = 0;
  Matrix matrix;

  Matrix block(Eigen::Index i, Eigen::Index j) const {
    return matrix.block(i * blockDim, j * blockDim, blockDim, blockDim);
  }
};

struct ChannelClass {
  bool completelyPositive = false;
  bool tracePreserving = false;
  bool unital = false;
};

Matrix applyChannel(const KrausChannel& ch, const Matrix& rho);
ChoiMatrix choiOf(const KrausChannel& ch);
/// Choi matrix of an arbitrary linear map given as a callable on N x N inputs.
ChoiMatrix choiOfMap(Eigen::Index n, const std::function<Matrix(const Matrix&)>& map);

/// N^2 x N^2 matrix of the channel on row-major vectorized operators:
/// vec(E(rho)) = superoperator(ch) * vec(rho).
Matrix superoperator(const KrausChannel& ch);

ChannelClass classify(const KrausChannel& ch, double tol = kDefaultTol);
ChannelClass classify(const ChoiMatrix& choi, double tol = kDefaultTol);

/// Noise operators read off the scaled eigenvectors of a PSD Choi matrix.
KrausChannel krausFromChoi(const ChoiMatrix& choi, double tol = kDefaultTol);

/// Frobenius distance between Choi matrices.
double choiDistance(const KrausChannel& a, const KrausChannel& b);
bool channelsEqual(const KrausChannel& a, const KrausChannel& b, double tol = kDefaultTol);

/// Scalar unitary U with E_i = sum_j U(i, j) E'_j, the shorter list padded with
/// zero operators.  Absent when the channels differ or verification fails.
std::optional<Matrix> krausIntertwiner(const KrausChannel& a, const KrausChannel& b,
                                       double tol = kDefaultTol);
/// max_i |E_i - sum_j U(i, j) E'_j|_F after padding both lists to U's size.
double intertwinerResidual(const KrausChannel& a, const KrausChannel& b, const Matrix& u);
/// Kraus list {sum_j U(i, j) E_j}; the list is zero-padded to U's size.
KrausChannel remix(const KrausChannel& ch, const Matrix& u);

// Catalogue of example channels.

KrausChannel identityChannel(Eigen::Index dim);
KrausChannel bitFlip(double p);
KrausChannel phaseFlip(double p);
/// I/2 together with the spin-1/2 operators X/2, Y/2, Z/2; maps every density to I/2.
KrausChannel constantHalf();
KrausChannel amplitudeDamping(double r);
/// rho -> sum_i w_i U_i rho U_i^dagger.
KrausChannel randomUnitaryChannel(const std::vector<double>& weights, const std::vector<Matrix>& unitaries);
/// rho -> sum_k |psi_k><psi_k| <phi_k|rho|phi_k> with unit psi_k; trace
/// preserving iff sum_k |phi_k><phi_k| = I.
KrausChannel entanglementBreaking(const std::vector<Vector>& psis, const std::vector<Vector>& phis);
/// sqrt(1-p) I_4 and sqrt(p) Z (x) Z.
KrausChannel zzDephasing(double p);

/// J_k = sum_m sigma_k^(m) over n qubits, sigma_k = K / 2.
Matrix collectiveSpin(int n, char axis);

struct CollectiveRotationParams {
  int qubits = 3;
  std::array<double, 3> angles{0.3, 0.7, 1.1};           // theta_x, theta_y, theta_z
  std::array<double, 3> weights{1.0 / 3, 1.0 / 3, 1.0 / 3};
};
/// Random-unitary channel over U_k = exp(i theta_k J_k), k = x, y, z.
KrausChannel collectiveRotation(const CollectiveRotationParams& params);

/// pi(sigma)(h_1 (x) ... (x) h_n) = h_sigma(1) (x) ... (x) h_sigma(n); sigma
/// holds the 0-based images sigma(1..n) - 1.
Matrix permutationOperator(int d, const std::vector<int>& sigma);
/// All permutations of n letters in lexicographic order.
std::vector<std::vector<int>> permutations(int n);
/// Random-unitary channel over pi(sigma) for sigma in S_n; weights follow the
/// lexicographic order of permutations() and default to uniform.
KrausChannel permutationChannel(int d, int n, std::vector<double> weights = {});

/// A_i = |0><i| for i = 0..d-1; E(I) = d |0><0|.
KrausChannel deadRow(int d);

}  // namespace qchannel
