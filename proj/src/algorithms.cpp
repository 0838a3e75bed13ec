#include "qchannel/algorithms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace qchannel {

BooleanOracle::BooleanOracle(int inputBits, int outputBits, std::vector<std::uint32_t> table)
    : m_(inputBits), k_(outputBits), table_(std::move(table)) {
  if (m_ < 1 || m_ > 10) throw Error(ErrorKind::InvalidParameter, "input bits must lie in 1..10");
  if (k_ < 1 || m_ + k_ > 11) throw Error(ErrorKind::InvalidParameter, "output bits must be >= 1 with m + k <= 11");
  if (table_.size() != (std::size_t{1} << m_))
    throw Error(ErrorKind::InvalidParameter, "truth table must have 2^m entries");
  for (auto value : table_)
    if (value >= (std::uint32_t{1} << k_)) throw Error(ErrorKind::InvalidParameter, "table entry exceeds 2^k - 1");
}

bool BooleanOracle::isConstant() const {
  return std::all_of(table_.begin(), table_.end(), [&](auto v) { return v == table_.front(); });
}

bool BooleanOracle::isBalanced() const {
  if (k_ != 1) return false;
  const auto ones = std::count(table_.begin(), table_.end(), std::uint32_t{1});
  return static_cast<std::size_t>(ones) * 2 == table_.size();
}

Matrix oracleUnitary(const BooleanOracle& f) {
  const Eigen::Index targets = Eigen::Index{1} << f.outputBits();
  const Eigen::Index dim = (Eigen::Index{1} << f.inputBits()) * targets;
  Matrix u = Matrix::Zero(dim, dim);
  for (Eigen::Index x = 0; x < (Eigen::Index{1} << f.inputBits()); ++x)
    for (Eigen::Index y = 0; y < targets; ++y) {
      const Eigen::Index out = x * targets + (y ^ static_cast<Eigen::Index>(f(static_cast<std::uint32_t>(x))));
      u(out, x * targets + y) = 1.0;
    }
  return u;
}

Matrix hadamardLayer(int n) {
  Matrix h = Matrix::Identity(1, 1);
  for (int i = 0; i < n; ++i) h = kron(h, gate(Gate::H));
  return h;
}

StateVector quantumParallelism(const BooleanOracle& f) {
  const Eigen::Index targets = Eigen::Index{1} << f.outputBits();
  const Eigen::Index dim = (Eigen::Index{1} << f.inputBits()) * targets;
  const Matrix prepare = kron(hadamardLayer(f.inputBits()), Matrix::Identity(targets, targets));
  const Vector out = oracleUnitary(f) * (prepare * Vector::Unit(dim, 0));
  return StateVector(out);
}

namespace {

// H^(x)n without the 2^(-n/2) factor: entries (-1)^popcount(i & j).
Matrix hadamardSigns(int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix s(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) s(i, j) = (std::popcount(static_cast<std::uint64_t>(i & j)) % 2) ? -1.0 : 1.0;
  return s;
}

// Probability of each input-register outcome after (H^m (x) I) U_f (H^m (x) H) |0>^m |1>.
// The circuit runs on integer amplitudes and the 2^(-(2m+1)) normalization is
// applied to the squared moduli, which keeps the result exact.
std::vector<double> phaseKickbackDistribution(const BooleanOracle& f) {
  const int m = f.inputBits();
  const Eigen::Index inputs = Eigen::Index{1} << m;
  const Matrix signs = hadamardSigns(m);
  const Vector start = Vector::Unit(2 * inputs, 1);  // |0...0>|1>
  const Vector prepared = kron(signs, hadamardSigns(1)) * start;
  const Vector queried = oracleUnitary(f) * prepared;
  const Vector out = kron(signs, Matrix::Identity(2, 2)) * queried;
  const double scale = std::ldexp(1.0, -(2 * m + 1));
  std::vector<double> probabilities(static_cast<std::size_t>(inputs));
  for (Eigen::Index x = 0; x < inputs; ++x)
    probabilities[static_cast<std::size_t>(x)] = (std::norm(out(2 * x)) + std::norm(out(2 * x + 1))) * scale;
  return probabilities;
}

}  // namespace

AlgorithmVerdict deutsch(const BooleanOracle& f) {
  if (f.inputBits() != 1 || f.outputBits() != 1)
    throw Error(ErrorKind::WrongArity, "Deutsch's algorithm needs f: Z_2 -> Z_2");
  const auto p = phaseKickbackDistribution(f);
  AlgorithmVerdict v;
  v.zeroOutcomeProbability = p[0];
  v.verdict = p[0] >= p[1] ? Verdict::Constant : Verdict::Balanced;
  v.outcomeProbability = v.verdict == Verdict::Constant ? p[0] : p[1];
  return v;
}

AlgorithmVerdict deutschJozsa(const BooleanOracle& f) {
  if (f.outputBits() != 1) throw Error(ErrorKind::WrongArity, "Deutsch-Jozsa needs a single output bit");
  if (!f.isConstant() && !f.isBalanced())
    throw Error(ErrorKind::PromiseViolated, "oracle is neither constant nor balanced");
  const auto p = phaseKickbackDistribution(f);
  AlgorithmVerdict v;
  v.zeroOutcomeProbability = p[0];
  v.verdict = p[0] >= 0.5 ? Verdict::Constant : Verdict::Balanced;
  v.outcomeProbability = v.verdict == Verdict::Constant ? p[0] : 1.0 - p[0];
  return v;
}

Matrix modularAdder(int n) {
  if (n < 1 || n > 5) throw Error(ErrorKind::InvalidParameter, "register size must lie in 1..5");
  const Eigen::Index size = Eigen::Index{1} << n;
  Matrix u = Matrix::Zero(size * size, size * size);
  for (Eigen::Index x = 0; x < size; ++x)
    for (Eigen::Index y = 0; y < size; ++y) u(x * size + (x + y) % size, x * size + y) = 1.0;
  return u;
}

}  // namespace qchannel
