#include "qchannel/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qchannel/qcore.hpp"

namespace qchannel {

namespace {

void requireProbability(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0))
    throw Error(ErrorKind::InvalidParameter, std::string(what) + " must lie strictly between 0 and 1");
}

void requireWeights(const std::vector<double>& weights) {
  if (weights.empty()) throw Error(ErrorKind::InvalidParameter, "weights must be nonempty");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorKind::InvalidParameter, "weights must be positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kDefaultTol) throw Error(ErrorKind::InvalidParameter, "weights must sum to 1");
}

// Column-stacked operator; its outer products assemble the Choi matrix.
Vector columnStack(const Matrix& e) { return e.reshaped(); }

Matrix stackedColumns(const std::vector<Matrix>& ops, Eigen::Index count) {
  const Eigen::Index n = ops.front().rows();
  Matrix out = Matrix::Zero(n * n, count);
  for (std::size_t i = 0; i < ops.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = columnStack(ops[i]);
  return out;
}

Matrix pseudoInverse(const Matrix& a, double tol) {
  const auto svd = detail::svd<Matrix>(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.sigma;
  const double top = sigma.size() > 0 ? sigma(0) : 0.0;
  RealVector inv = RealVector::Zero(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > tol * top) inv(i) = 1.0 / sigma(i);
  return svd.v * inv.cast<Complex>().asDiagonal() * svd.u.adjoint();
}

}  // namespace

KrausChannel::KrausChannel(std::vector<Matrix> operators) : operators_(std::move(operators)) {
  if (operators_.empty()) throw Error(ErrorKind::InvalidParameter, "a channel needs at least one operator");
  const auto n = operators_.front().rows();
  if (n == 0) throw Error(ErrorKind::ShapeMismatch, "noise operators must be nonempty");
  Matrix total = Matrix::Zero(n, n);
  for (const auto& e : operators_) {
    if (e.rows() != n || e.cols() != n)
      throw Error(ErrorKind::DimMismatch, "noise operators must share one square shape");
    if (!allFinite(e)) throw Error(ErrorKind::InvalidParameter, "noise operator has non-finite entries");
    total.noalias() += e.adjoint() * e;
  }
  tracePreserving_ = (total - Matrix::Identity(n, n)).norm() <= kDefaultTol * static_cast<double>(n);
}

Matrix applyChannel(const KrausChannel& ch, const Matrix& rho) {
  if (rho.rows() != ch.dim() || rho.cols() != ch.dim())
    throw Error(ErrorKind::DimMismatch, "input operator does not match the channel dimension");
  Matrix out = Matrix::Zero(ch.dim(), ch.dim());
  for (const auto& e : ch.operators()) out.noalias() += e * rho * e.adjoint();
  return out;
}

ChoiMatrix choiOf(const KrausChannel& ch) {
  const auto n = ch.dim();
  Matrix r = Matrix::Zero(n * n, n * n);
  for (const auto& e : ch.operators()) {
    const Vector a = columnStack(e);
    r.noalias() += a * a.adjoint();
  }
  return {n, std::move(r)};
}

ChoiMatrix choiOfMap(Eigen::Index n, const std::function<Matrix(const Matrix&)>& map) {
  Matrix r(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      Matrix unit = Matrix::Zero(n, n);
      unit(i, j) = 1.0;
      const Matrix image = map(unit);
      if (image.rows() != n || image.cols() != n)
        throw Error(ErrorKind::DimMismatch, "map must send N x N operators to N x N operators");
      r.block(i * n, j * n, n, n) = image;
    }
  return {n, std::move(r)};
}

Matrix superoperator(const KrausChannel& ch) {
  const auto n = ch.dim();
  Matrix phi = Matrix::Zero(n * n, n * n);
  for (const auto& e : ch.operators()) phi += kron(e, e.conjugate());
  return phi;
}

ChannelClass classify(const KrausChannel& ch, double tol) {
  // Operator-sum maps are completely positive by construction; computing the
  // Choi matrix would cost N^4 memory for no information.
  const auto n = ch.dim();
  Matrix dual = Matrix::Zero(n, n);
  Matrix image = Matrix::Zero(n, n);
  for (const auto& e : ch.operators()) {
    dual.noalias() += e.adjoint() * e;
    image.noalias() += e * e.adjoint();
  }
  const Matrix id = Matrix::Identity(n, n);
  const double scale = tol * static_cast<double>(n);
  return {true, (dual - id).norm() <= scale, (image - id).norm() <= scale};
}

ChannelClass classify(const ChoiMatrix& choi, double tol) {
  const auto n = choi.blockDim;
  ChannelClass out;
  if (isHermitian(choi.matrix, tol)) {
    const auto eig = hermitianEigen(choi.matrix, tol);
    const double top = std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
    out.completelyPositive = eig.eigenvalues.minCoeff() >= -tol * top;
  }
  // TP: Tr E(|i><j|) = delta_ij.  Unital: sum_i E(|i><i|) = I.
  Matrix traces(n, n);
  Matrix unitImage = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) traces(i, j) = choi.block(i, j).trace();
    unitImage += choi.block(i, i);
  }
  const Matrix id = Matrix::Identity(n, n);
  const double scale = tol * static_cast<double>(n);
  out.tracePreserving = (traces - id).norm() <= scale;
  out.unital = (unitImage - id).norm() <= scale;
  return out;
}

KrausChannel krausFromChoi(const ChoiMatrix& choi, double tol) {
  const auto n = choi.blockDim;
  if (choi.matrix.rows() != n * n || choi.matrix.cols() != n * n)
    throw Error(ErrorKind::ShapeMismatch, "Choi matrix must be N^2 x N^2");
  if (!isHermitian(choi.matrix, tol)) throw Error(ErrorKind::NotPSD, "Choi matrix is not Hermitian");
  const auto eig = hermitianEigen(choi.matrix, tol);
  const double top = eig.eigenvalues.cwiseAbs().maxCoeff();
  if (eig.eigenvalues.minCoeff() < -tol * std::max(1.0, top))
    throw Error(ErrorKind::NotPSD, "Choi matrix has a negative eigenvalue");

  std::vector<Matrix> ops;
  // Largest eigenvalues first; column i of E_k is block i of sqrt(lambda_k) a_k.
  for (Eigen::Index k = eig.eigenvalues.size() - 1; k >= 0; --k) {
    const double lambda = eig.eigenvalues(k);
    if (lambda <= tol * top) break;
    const Vector a = std::sqrt(lambda) * eig.eigenvectors.col(k);
    ops.push_back(a.reshaped(n, n));
  }
  if (ops.empty()) ops.push_back(Matrix::Zero(n, n));
  return KrausChannel(std::move(ops));
}

double choiDistance(const KrausChannel& a, const KrausChannel& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimMismatch, "channels act on different dimensions");
  return (choiOf(a).matrix - choiOf(b).matrix).norm();
}

bool channelsEqual(const KrausChannel& a, const KrausChannel& b, double tol) {
  return choiDistance(a, b) <= tol * static_cast<double>(a.dim());
}

KrausChannel remix(const KrausChannel& ch, const Matrix& u) {
  const auto r = u.rows();
  if (u.cols() != r || r < static_cast<Eigen::Index>(ch.size()))
    throw Error(ErrorKind::DimMismatch, "remix matrix must be square and cover the Kraus list");
  std::vector<Matrix> ops;
  ops.reserve(static_cast<std::size_t>(r));
  for (Eigen::Index i = 0; i < r; ++i) {
    Matrix e = Matrix::Zero(ch.dim(), ch.dim());
    for (std::size_t j = 0; j < ch.size(); ++j) e += u(i, static_cast<Eigen::Index>(j)) * ch.operators()[j];
    ops.push_back(std::move(e));
  }
  return KrausChannel(std::move(ops));
}

double intertwinerResidual(const KrausChannel& a, const KrausChannel& b, const Matrix& u) {
  const auto r = u.rows();
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimMismatch, "channels act on different dimensions");
  if (r < static_cast<Eigen::Index>(std::max(a.size(), b.size())))
    throw Error(ErrorKind::DimMismatch, "intertwiner is smaller than the Kraus lists");
  const Matrix lhs = stackedColumns(a.operators(), r);
  const Matrix rhs = stackedColumns(b.operators(), r);
  // Column i of rhs * U^T is sum_j U(i, j) E'_j.
  const Matrix diff = lhs - rhs * u.transpose();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < r; ++i) worst = std::max(worst, diff.col(i).norm());
  return worst;
}

std::optional<Matrix> krausIntertwiner(const KrausChannel& a, const KrausChannel& b, double tol) {
  if (a.dim() != b.dim()) return std::nullopt;
  if (!channelsEqual(a, b, tol)) return std::nullopt;
  const auto r = static_cast<Eigen::Index>(std::max(a.size(), b.size()));
  const Matrix lhs = stackedColumns(a.operators(), r);
  const Matrix rhs = stackedColumns(b.operators(), r);

  // lhs lhs^dagger = rhs rhs^dagger, so M0 = rhs^+ lhs is a partial isometry
  // between the co-ranges; the kernels of both sides complete it to a unitary
  // M with lhs = rhs M, i.e. U = M^T.
  const Matrix partial = pseudoInverse(rhs, tol) * lhs;
  const Matrix kernelA = nullSpace(lhs, tol);
  const Matrix kernelB = nullSpace(rhs, tol);
  if (kernelA.cols() != kernelB.cols()) return std::nullopt;
  const Matrix m = partial + kernelB * kernelA.adjoint();
  Matrix u = m.transpose();

  const double scale = tol * static_cast<double>(a.dim());
  if ((u.adjoint() * u - Matrix::Identity(r, r)).norm() > scale) return std::nullopt;
  if (intertwinerResidual(a, b, u) > scale) return std::nullopt;
  return u;
}

KrausChannel identityChannel(Eigen::Index dim) {
  if (dim < 1) throw Error(ErrorKind::InvalidParameter, "dimension must be positive");
  return KrausChannel({Matrix::Identity(dim, dim)});
}

KrausChannel bitFlip(double p) {
  requireProbability(p, "p");
  return KrausChannel({std::sqrt(1 - p) * gate(Gate::I2), std::sqrt(p) * gate(Gate::X)});
}

KrausChannel phaseFlip(double p) {
  requireProbability(p, "p");
  return KrausChannel({std::sqrt(1 - p) * gate(Gate::I2), std::sqrt(p) * gate(Gate::Z)});
}

KrausChannel constantHalf() {
  return KrausChannel(
      {0.5 * gate(Gate::I2), 0.5 * gate(Gate::X), 0.5 * gate(Gate::Y), 0.5 * gate(Gate::Z)});
}

KrausChannel amplitudeDamping(double r) {
  requireProbability(r, "r");
  Matrix e1 = Matrix::Identity(2, 2);
  e1(1, 1) = std::sqrt(1 - r);
  Matrix e2 = Matrix::Zero(2, 2);
  e2(0, 1) = std::sqrt(r);
  return KrausChannel({e1, e2});
}

KrausChannel randomUnitaryChannel(const std::vector<double>& weights, const std::vector<Matrix>& unitaries) {
  requireWeights(weights);
  if (weights.size() != unitaries.size())
    throw Error(ErrorKind::InvalidParameter, "need one weight per unitary");
  std::vector<Matrix> ops;
  for (std::size_t i = 0; i < unitaries.size(); ++i) {
    if (!isUnitary(unitaries[i])) throw Error(ErrorKind::InvalidParameter, "operator is not unitary");
    ops.push_back(std::sqrt(weights[i]) * unitaries[i]);
  }
  return KrausChannel(std::move(ops));
}

KrausChannel entanglementBreaking(const std::vector<Vector>& psis, const std::vector<Vector>& phis) {
  if (psis.empty() || psis.size() != phis.size())
    throw Error(ErrorKind::InvalidParameter, "need matching nonempty lists of psi and phi vectors");
  const auto n = psis.front().size();
  std::vector<Matrix> ops;
  for (std::size_t k = 0; k < psis.size(); ++k) {
    if (psis[k].size() != n || phis[k].size() != n)
      throw Error(ErrorKind::DimMismatch, "all vectors must share one dimension");
    if (std::abs(psis[k].norm() - 1.0) > kDefaultTol)
      throw Error(ErrorKind::InvalidParameter, "psi vectors must be unit vectors");
    ops.push_back(outer(psis[k], phis[k]));
  }
  return KrausChannel(std::move(ops));
}

KrausChannel zzDephasing(double p) {
  requireProbability(p, "p");
  const Matrix z = gate(Gate::Z);
  return KrausChannel({std::sqrt(1 - p) * Matrix::Identity(4, 4), std::sqrt(p) * kron(z, z)});
}

Matrix collectiveSpin(int n, char axis) {
  if (n < 1 || n > 10) throw Error(ErrorKind::InvalidParameter, "qubit count out of range");
  Matrix sigma;
  switch (axis) {
    case 'x': sigma = gate(Gate::X); break;
    case 'y': sigma = gate(Gate::Y); break;
    case 'z': sigma = gate(Gate::Z); break;
    default: throw Error(ErrorKind::InvalidParameter, "axis must be x, y or z");
  }
  sigma *= 0.5;
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix j = Matrix::Zero(dim, dim);
  for (int m = 1; m <= n; ++m) j += embedSingle(sigma, m, n);
  return j;
}

KrausChannel collectiveRotation(const CollectiveRotationParams& params) {
  const std::vector<double> weights(params.weights.begin(), params.weights.end());
  requireWeights(weights);
  if (params.qubits < 1 || params.qubits > 8)
    throw Error(ErrorKind::InvalidParameter, "collective rotation supports 1 to 8 qubits");
  const char axes[3] = {'x', 'y', 'z'};
  std::vector<Matrix> unitaries;
  for (int k = 0; k < 3; ++k) unitaries.push_back(expiHermitian(collectiveSpin(params.qubits, axes[k]), params.angles[static_cast<std::size_t>(k)]));
  return randomUnitaryChannel(weights, unitaries);
}

Matrix permutationOperator(int d, const std::vector<int>& sigma) {
  const int n = static_cast<int>(sigma.size());
  std::vector<int> check(sigma);
  std::sort(check.begin(), check.end());
  for (int i = 0; i < n; ++i)
    if (check[static_cast<std::size_t>(i)] != i) throw Error(ErrorKind::InvalidParameter, "not a permutation");
  if (d < 2 || n < 1 || std::pow(double(d), n) > 4096.0)
    throw Error(ErrorKind::InvalidParameter, "permutation representation too large");

  Eigen::Index dim = 1;
  for (int i = 0; i < n; ++i) dim *= d;
  Matrix p = Matrix::Zero(dim, dim);
  std::vector<int> digits(static_cast<std::size_t>(n));
  for (Eigen::Index in = 0; in < dim; ++in) {
    Eigen::Index rest = in;
    for (int m = n - 1; m >= 0; --m) {
      digits[static_cast<std::size_t>(m)] = static_cast<int>(rest % d);
      rest /= d;
    }
    // Output slot m carries input slot sigma(m).
    Eigen::Index out = 0;
    for (int m = 0; m < n; ++m) out = out * d + digits[static_cast<std::size_t>(sigma[static_cast<std::size_t>(m)])];
    p(out, in) = 1.0;
  }
  return p;
}

std::vector<std::vector<int>> permutations(int n) {
  std::vector<int> sigma(static_cast<std::size_t>(n));
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<std::vector<int>> all;
  do {
    all.push_back(sigma);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return all;
}

KrausChannel permutationChannel(int d, int n, std::vector<double> weights) {
  if (n < 2 || n > 6 || d < 2) throw Error(ErrorKind::InvalidParameter, "need d >= 2 and 2 <= n <= 6");
  const auto perms = permutations(n);
  if (weights.empty()) weights.assign(perms.size(), 1.0 / static_cast<double>(perms.size()));
  if (weights.size() != perms.size())
    throw Error(ErrorKind::InvalidParameter, "need one weight per permutation of n letters");
  std::vector<Matrix> unitaries;
  unitaries.reserve(perms.size());
  for (const auto& sigma : perms) unitaries.push_back(permutationOperator(d, sigma));
  return randomUnitaryChannel(weights, unitaries);
}

KrausChannel deadRow(int d) {
  if (d < 2 || d > 4096) throw Error(ErrorKind::InvalidParameter, "dimension must be at least 2");
  std::vector<Matrix> ops;
  for (int i = 0; i < d; ++i) {
    Matrix a = Matrix::Zero(d, d);
    a(0, i) = 1.0;
    ops.push_back(std::move(a));
  }
  return KrausChannel(std::move(ops));
}

}  // namespace qchannel
