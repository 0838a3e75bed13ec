#include "qchannel/qec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

namespace qchannel {

QuantumCode::QuantumCode(Matrix isometry, double tol) : isometry_(std::move(isometry)) {
  const auto k = isometry_.cols();
  if (k == 0 || isometry_.rows() < k) throw Error(ErrorKind::ShapeMismatch, "code isometry must be N x K with 0 < K <= N");
  if (!allFinite(isometry_)) throw Error(ErrorKind::InvalidParameter, "code isometry has non-finite entries");
  if ((isometry_.adjoint() * isometry_ - Matrix::Identity(k, k)).norm() > tol * static_cast<double>(k))
    throw Error(ErrorKind::InvalidParameter, "code isometry columns are not orthonormal");
}

QuantumCode makeCode(const std::vector<StateVector>& kets, double tol) {
  if (kets.empty()) throw Error(ErrorKind::InvalidParameter, "a code needs at least one basis ket");
  const auto n = kets.front().dim();
  Matrix v(n, static_cast<Eigen::Index>(kets.size()));
  Eigen::Index count = 0;
  for (const auto& ket : kets) {
    if (ket.dim() != n) throw Error(ErrorKind::DimMismatch, "code kets must share one dimension");
    Vector w = ket.amplitudes();
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index j = 0; j < count; ++j) w -= v.col(j).dot(w) * v.col(j);
    const double norm = w.norm();
    if (norm <= tol) throw Error(ErrorKind::DependentInput, "code kets are linearly dependent");
    v.col(count++) = w / norm;
  }
  return QuantumCode(std::move(v));
}

QuantumCode builtinCode(std::string_view name) {
  if (name == "repetition3") return makeCode({StateVector::fromBits("000"), StateVector::fromBits("111")});
  if (name == "shor9") {
    Vector plus = Vector::Zero(8);
    plus(0) = plus(7) = 1.0;
    Vector minus = plus;
    minus(7) = -1.0;
    const double norm = 1.0 / (2.0 * std::numbers::sqrt2);
    const Vector zero = kron(kron(plus, plus), plus) * norm;
    const Vector one = kron(kron(minus, minus), minus) * norm;
    return makeCode({StateVector(zero), StateVector(one)});
  }
  throw Error(ErrorKind::UnknownCode, "unknown code '" + std::string(name) + "'");
}

DetectionResult detect(const QuantumCode& code, const Matrix& e, double tol) {
  if (e.rows() != code.ambientDim() || e.cols() != code.ambientDim())
    throw Error(ErrorKind::DimMismatch, "error operator does not match the code's ambient dimension");
  // V is an isometry, so |P E P - lambda P|_F = |V^dagger E V - lambda I_K|_F.
  const Matrix& v = code.isometry();
  const Matrix compressed = v.adjoint() * (e * v);
  const auto k = code.codeDim();
  const Complex lambda = compressed.trace() / static_cast<double>(k);
  DetectionResult result;
  result.residual = (compressed - lambda * Matrix::Identity(k, k)).norm();
  result.detectable = result.residual <= tol * (1.0 + e.norm());
  if (result.detectable) result.lambda = lambda;
  return result;
}

bool DetectableSpaceForm::contains(const Matrix& e, double tol) const {
  if (e.rows() != basis.rows() || e.cols() != basis.rows())
    throw Error(ErrorKind::DimMismatch, "operator does not match the code's ambient dimension");
  const Matrix top = (basis.adjoint() * e * basis).topLeftCorner(codeDim, codeDim);
  const Complex lambda = top.trace() / static_cast<double>(codeDim);
  return (top - lambda * Matrix::Identity(codeDim, codeDim)).norm() <= tol * (1.0 + e.norm());
}

DetectableSpaceForm detectableSpaceForm(const QuantumCode& code) {
  const auto n = code.ambientDim();
  const auto k = code.codeDim();
  DetectableSpaceForm form;
  form.basis.resize(n, n);
  form.basis.leftCols(k) = code.isometry();
  form.basis.rightCols(n - k) = orthonormalCompletion(code.isometry());
  form.codeDim = k;
  form.dimension = n * n - k * k + 1;
  return form;
}

namespace {

// Products E_i V, shared by the pairwise Knill-Laflamme tests.
std::vector<Matrix> imagesOfCode(const QuantumCode& code, const std::vector<Matrix>& errors) {
  std::vector<Matrix> images;
  images.reserve(errors.size());
  for (const auto& e : errors) {
    if (e.rows() != code.ambientDim() || e.cols() != code.ambientDim())
      throw Error(ErrorKind::DimMismatch, "error operator does not match the code's ambient dimension");
    images.push_back(e * code.isometry());
  }
  return images;
}

// |E_i^dagger E_j|_F is bounded by |E_i|_F |E_j|_F; the bound avoids forming
// N x N products for large registers.
double pairScale(const std::vector<double>& norms, std::size_t i, std::size_t j) {
  return 1.0 + norms[i] * norms[j];
}

bool lexicographicallyGreater(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a(i).real() - b(i).real()) > 1e-12) return a(i).real() > b(i).real();
    if (std::abs(a(i).imag() - b(i).imag()) > 1e-12) return a(i).imag() > b(i).imag();
  }
  return false;
}

// Eigenvectors of Lambda in ascending eigenvalue order; within a cluster of
// equal eigenvalues the lexicographically largest vector (after fixing each
// vector's phase) comes first, so the identity keeps its natural order.
EigenDecomposition<double> orderedEigen(const Matrix& lambda, double tol) {
  auto eig = hermitianEigen(lambda, tol);
  const auto r = lambda.rows();
  for (Eigen::Index k = 0; k < r; ++k) {
    auto col = eig.eigenvectors.col(k);
    Eigen::Index pivot = 0;
    for (Eigen::Index i = 0; i < r; ++i)
      if (std::abs(col(i)) > 1e-12) {
        pivot = i;
        break;
      }
    const Complex phase = col(pivot) / std::abs(col(pivot));
    col /= phase;
  }
  const double scale = tol * std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(r));
  std::iota(order.begin(), order.end(), 0);
  std::size_t begin = 0;
  while (begin < order.size()) {
    std::size_t end = begin + 1;
    while (end < order.size() &&
           eig.eigenvalues(order[end]) - eig.eigenvalues(order[end - 1]) <= scale)
      ++end;
    std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(begin),
                     order.begin() + static_cast<std::ptrdiff_t>(end), [&](Eigen::Index a, Eigen::Index b) {
                       return lexicographicallyGreater(eig.eigenvectors.col(a), eig.eigenvectors.col(b));
                     });
    begin = end;
  }
  EigenDecomposition<double> out{RealVector(r), Matrix(r, r)};
  for (Eigen::Index k = 0; k < r; ++k) {
    out.eigenvalues(k) = eig.eigenvalues(order[static_cast<std::size_t>(k)]);
    out.eigenvectors.col(k) = eig.eigenvectors.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

}  // namespace

CorrectabilityResult correctability(const QuantumCode& code, const std::vector<Matrix>& errors, double tol) {
  if (errors.empty()) throw Error(ErrorKind::InvalidParameter, "error list is empty");
  const auto images = imagesOfCode(code, errors);
  std::vector<double> norms;
  for (const auto& e : errors) norms.push_back(e.norm());

  const auto r = static_cast<Eigen::Index>(errors.size());
  const auto k = code.codeDim();
  Matrix lambda(r, r);
  CorrectabilityResult result;
  for (std::size_t i = 0; i < errors.size(); ++i)
    for (std::size_t j = 0; j < errors.size(); ++j) {
      const Matrix compressed = images[i].adjoint() * images[j];
      const Complex value = compressed.trace() / static_cast<double>(k);
      const double residual = (compressed - value * Matrix::Identity(k, k)).norm();
      if (residual > tol * pairScale(norms, i, j)) {
        result.offendingPair = {i, j};
        return result;
      }
      lambda(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
    }

  if (!isHermitian(lambda, tol)) return result;
  const auto eig = hermitianEigen(lambda, tol);
  if (eig.eigenvalues.minCoeff() < -tol * std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff())) return result;
  result.correctable = true;
  result.lambdaMatrix = std::move(lambda);
  return result;
}

RecoveryChannel buildRecovery(const QuantumCode& code, const std::vector<Matrix>& errors, const Matrix& lambda,
                              double tol) {
  const auto r = static_cast<Eigen::Index>(errors.size());
  if (r == 0) throw Error(ErrorKind::InvalidParameter, "error list is empty");
  if (lambda.rows() != r || lambda.cols() != r)
    throw Error(ErrorKind::DimMismatch, "Lambda must be r x r for r errors");
  if (!isHermitian(lambda, tol)) throw Error(ErrorKind::NotPSD, "Lambda is not Hermitian");

  const auto images = imagesOfCode(code, errors);
  std::vector<double> norms;
  for (const auto& e : errors) norms.push_back(e.norm());
  const auto n = code.ambientDim();
  const auto k = code.codeDim();
  const Matrix& v = code.isometry();
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j) {
      const Matrix compressed = images[static_cast<std::size_t>(i)].adjoint() * images[static_cast<std::size_t>(j)];
      if ((compressed - lambda(i, j) * Matrix::Identity(k, k)).norm() >
          tol * pairScale(norms, static_cast<std::size_t>(i), static_cast<std::size_t>(j)))
        throw Error(ErrorKind::ConditionViolated, "P E_i^dagger E_j P != lambda_ij P for some pair");
    }

  const auto eig = orderedEigen(lambda, tol);
  const double top = std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
  if (eig.eigenvalues.minCoeff() < -tol * top) throw Error(ErrorKind::NotPSD, "Lambda has a negative eigenvalue");

  const Matrix codeComplement = orthonormalCompletion(v);
  std::vector<Matrix> ranges;  // U_k V, orthonormal N x K
  RecoveryChannel out{KrausChannel({Matrix::Identity(1, 1)}), {}, {}, {}, {}, false};
  std::vector<Matrix> kraus;
  for (Eigen::Index col = 0; col < r; ++col) {
    const double d = eig.eigenvalues(col);
    if (d <= tol * top) continue;  // F_k annihilates the code
    Matrix f = Matrix::Zero(n, n);
    Matrix image = Matrix::Zero(n, k);
    for (Eigen::Index i = 0; i < r; ++i) {
      const Complex u = eig.eigenvectors(i, col);
      if (u == Complex(0.0)) continue;
      f += u * errors[static_cast<std::size_t>(i)];
      image += u * images[static_cast<std::size_t>(i)];
    }
    // F_k P_C = sqrt(d) Y V^dagger with Y = F_k V / sqrt(d) an isometry; its
    // polar unitary is Y V^dagger plus a map between the two complements.
    const Matrix y = image / std::sqrt(d);
    for (const auto& other : ranges)
      if ((other.adjoint() * y).norm() > tol * static_cast<double>(n))
        throw Error(ErrorKind::ConditionViolated, "syndrome subspaces are not mutually orthogonal");
    Matrix unitary = y * v.adjoint();
    unitary.noalias() += orthonormalCompletion(y) * codeComplement.adjoint();

    kraus.push_back(v * y.adjoint());  // U_k^dagger P_k = P_C U_k^dagger
    out.projections.push_back(y * y.adjoint());
    out.unitaries.push_back(std::move(unitary));
    out.weights.push_back(d);
    out.combinedErrors.push_back(std::move(f));
    ranges.push_back(y);
  }
  if (kraus.empty()) throw Error(ErrorKind::ConditionViolated, "every combined error annihilates the code");

  Matrix remainder = Matrix::Identity(n, n);
  for (const auto& p : out.projections) remainder -= p;
  if (remainder.norm() > tol * static_cast<double>(n)) {
    kraus.push_back(remainder);
    out.completed = true;
  }
  out.channel = KrausChannel(std::move(kraus));
  return out;
}

RecoveryVerification verifyRecovery(const KrausChannel& channel, const RecoveryChannel& recovery,
                                    const QuantumCode& code, double tol, std::uint64_t seed, int randomSamples) {
  if (!channel.isTracePreserving()) throw Error(ErrorKind::NotTracePreserving, "noise channel is not trace preserving");
  if (channel.dim() != code.ambientDim() || recovery.channel.dim() != code.ambientDim())
    throw Error(ErrorKind::DimMismatch, "channel, recovery and code dimensions differ");

  // For rho = V s V^dagger, R(E(rho)) = sum (R_k E_i V) s (R_k E_i V)^dagger.
  const Matrix& v = code.isometry();
  const auto k = code.codeDim();
  std::vector<Matrix> composite;
  for (const auto& e : channel.operators()) {
    const Matrix ev = e * v;
    for (const auto& rk : recovery.channel.operators()) composite.push_back(rk * ev);
  }
  auto deviation = [&](const Matrix& s) {
    Matrix out = -(v * s * v.adjoint());
    for (const auto& b : composite) out.noalias() += b * s * b.adjoint();
    return out.norm();
  };

  double worst = 0.0;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      Matrix unit = Matrix::Zero(k, k);
      unit(i, j) = 1.0;
      worst = std::max(worst, deviation(unit));
    }
  std::mt19937_64 rng(seed);
  for (int s = 0; s < randomSamples; ++s) worst = std::max(worst, deviation(randomDensity(k, rng)));
  return {worst, worst <= tol};
}

std::vector<Matrix> singleQubitPaulis(int k, int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  return {Matrix::Identity(dim, dim), embedSingle(gate(Gate::X), k, n), embedSingle(gate(Gate::Y), k, n),
          embedSingle(gate(Gate::Z), k, n)};
}

}  // namespace qchannel
