#include "qchannel/qcore.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qchannel {

StateVector::StateVector(Vector amplitudes, double tol) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw Error(ErrorKind::InvalidParameter, "state vector is empty");
  if (!allFinite(amplitudes_)) throw Error(ErrorKind::InvalidParameter, "state has non-finite amplitudes");
  if (std::abs(amplitudes_.norm() - 1.0) > tol)
    throw Error(ErrorKind::InvalidParameter, "state vector is not normalized");
}

StateVector StateVector::basis(Eigen::Index dim, Eigen::Index index) {
  if (index < 0 || index >= dim) throw Error(ErrorKind::IndexOutOfRange, "basis index out of range");
  return StateVector(Vector::Unit(dim, index));
}

StateVector StateVector::fromBits(std::string_view bits) {
  if (bits.empty() || bits.size() > 20) throw Error(ErrorKind::InvalidParameter, "bad bit string");
  Eigen::Index index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw Error(ErrorKind::InvalidParameter, "bit string must be 0/1");
    index = 2 * index + (c - '0');
  }
  return basis(Eigen::Index{1} << bits.size(), index);
}

DensityOperator::DensityOperator(Matrix rho, double tol) : matrix_(std::move(rho)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols())
    throw Error(ErrorKind::ShapeMismatch, "density operator must be square");
  if (!allFinite(matrix_)) throw Error(ErrorKind::InvalidParameter, "density has non-finite entries");
  if (!isHermitian(matrix_, tol)) throw Error(ErrorKind::NotHermitian, "density operator is not Hermitian");
  if (std::abs(matrix_.trace() - Complex(1.0)) > tol)
    throw Error(ErrorKind::InvalidParameter, "density operator must have unit trace");
  const auto eig = hermitianEigen(matrix_, tol);
  if (eig.eigenvalues.minCoeff() < -tol) throw Error(ErrorKind::NotPSD, "density operator is not positive");
}

Measurement::Measurement(std::vector<Matrix> operators, double tol) : operators_(std::move(operators)) {
  if (operators_.empty()) throw Error(ErrorKind::InvalidMeasurement, "measurement has no operators");
  const auto n = operators_.front().rows();
  Matrix total = Matrix::Zero(n, n);
  for (const auto& m : operators_) {
    if (m.rows() != n || m.cols() != n)
      throw Error(ErrorKind::DimMismatch, "measurement operators must share one square shape");
    total += m.adjoint() * m;
  }
  if ((total - Matrix::Identity(n, n)).norm() > tol * static_cast<double>(n))
    throw Error(ErrorKind::InvalidMeasurement, "sum of M_k^dagger M_k is not the identity");
}

Measurement Measurement::computational(Eigen::Index dim) {
  std::vector<Matrix> ops;
  ops.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    Matrix p = Matrix::Zero(dim, dim);
    p(i, i) = 1.0;
    ops.push_back(std::move(p));
  }
  return Measurement(std::move(ops));
}

bool Measurement::isProjective(double tol) const {
  for (const auto& m : operators_) {
    if ((m - m.adjoint()).norm() > tol || (m * m - m).norm() > tol) return false;
  }
  return true;
}

Matrix gate(Gate g) {
  const Complex i{0.0, 1.0};
  Matrix m;
  switch (g) {
    case Gate::I2:
      return Matrix::Identity(2, 2);
    case Gate::X:
      m = Matrix::Zero(2, 2);
      m(0, 1) = m(1, 0) = 1.0;
      return m;
    case Gate::Y:
      m = Matrix::Zero(2, 2);
      m(0, 1) = -i;
      m(1, 0) = i;
      return m;
    case Gate::Z:
      m = Matrix::Identity(2, 2);
      m(1, 1) = -1.0;
      return m;
    case Gate::H:
      m.resize(2, 2);
      m << 1.0, 1.0, 1.0, -1.0;
      return m * (1.0 / std::numbers::sqrt2);
    case Gate::CNOT:
      m = Matrix::Zero(4, 4);
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
      return m;
  }
  throw Error(ErrorKind::UnknownGate, "unhandled gate");
}

Matrix gate(std::string_view name) {
  if (name == "I2" || name == "I") return gate(Gate::I2);
  if (name == "X") return gate(Gate::X);
  if (name == "Y") return gate(Gate::Y);
  if (name == "Z") return gate(Gate::Z);
  if (name == "H") return gate(Gate::H);
  if (name == "CNOT") return gate(Gate::CNOT);
  throw Error(ErrorKind::UnknownGate, "unknown gate '" + std::string(name) + "'");
}

Matrix embedSingle(const Matrix& g, int k, int n) {
  if (g.rows() != 2 || g.cols() != 2) throw Error(ErrorKind::ShapeMismatch, "single-qubit gate must be 2x2");
  if (n < 1 || n > 12 || k < 1 || k > n) throw Error(ErrorKind::IndexOutOfRange, "qubit index out of range");
  const Eigen::Index left = Eigen::Index{1} << (k - 1);
  const Eigen::Index right = Eigen::Index{1} << (n - k);
  return kron(kron(Matrix::Identity(left, left), g), Matrix::Identity(right, right));
}

Matrix cnotEmbed(int control, int target, int n) {
  if (n < 2 || n > 12 || control < 1 || control > n || target < 1 || target > n)
    throw Error(ErrorKind::IndexOutOfRange, "qubit index out of range");
  if (control == target) throw Error(ErrorKind::ControlEqualsTarget, "control and target coincide");
  const Eigen::Index dim = Eigen::Index{1} << n;
  const Eigen::Index controlBit = Eigen::Index{1} << (n - control);
  const Eigen::Index targetBit = Eigen::Index{1} << (n - target);
  Matrix u = Matrix::Zero(dim, dim);
  for (Eigen::Index in = 0; in < dim; ++in) {
    const Eigen::Index out = (in & controlBit) ? (in ^ targetBit) : in;
    u(out, in) = 1.0;
  }
  return u;
}

DensityOperator evolve(const DensityOperator& rho, const Matrix& u, double tol) {
  if (u.rows() != rho.dim() || u.cols() != rho.dim())
    throw Error(ErrorKind::DimMismatch, "unitary and density dimensions differ");
  if (!isUnitary(u, tol)) throw Error(ErrorKind::NotUnitary, "evolution operator is not unitary");
  Matrix out = u * rho.matrix() * u.adjoint();
  out = (out + out.adjoint()).eval() / 2.0;
  return DensityOperator(std::move(out));
}

std::vector<MeasurementOutcome> measureState(const StateVector& psi, const Measurement& m, double tol) {
  if (psi.dim() != m.dim()) throw Error(ErrorKind::DimMismatch, "state and measurement dimensions differ");
  std::vector<MeasurementOutcome> outcomes;
  outcomes.reserve(m.operators().size());
  for (const auto& op : m.operators()) {
    const Vector image = op * psi.amplitudes();
    const double p = image.squaredNorm();
    if (p > tol)
      outcomes.push_back({p, StateVector(image / std::sqrt(p), 1e-8)});
    else
      outcomes.push_back({p, std::nullopt});
  }
  return outcomes;
}

std::size_t MeasurementSampler::sample(const StateVector& psi, const Measurement& m) {
  const auto outcomes = measureState(psi, m);
  std::vector<double> weights;
  weights.reserve(outcomes.size());
  for (const auto& o : outcomes) weights.push_back(o.probability);
  std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
  return dist(rng_);
}

Matrix randomComplex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

Matrix randomUnitary(Eigen::Index dim, std::mt19937_64& rng) {
  // QR of a Ginibre matrix with the phases of R's diagonal divided out.
  const Matrix g = randomComplex(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Complex d = r(i, i);
    q.col(i) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0);
  }
  return q;
}

Matrix randomDensity(Eigen::Index dim, std::mt19937_64& rng) {
  const Matrix g = randomComplex(dim, dim, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  return (rho + rho.adjoint()) / 2.0;
}

StateVector randomState(Eigen::Index dim, std::mt19937_64& rng) {
  const Matrix g = randomComplex(dim, 1, rng);
  return StateVector(g.col(0) / g.norm());
}

Matrix randomHermitian(Eigen::Index dim, std::mt19937_64& rng) {
  const Matrix g = randomComplex(dim, dim, rng);
  return (g + g.adjoint()) / 2.0;
}

}  // namespace qchannel
