#include "qchannel/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace qchannel {

namespace {

// Orthonormal columns in C^{N^2} with an append-if-new operation; used for
// closure iterations where the basis grows one element at a time.
class VecBasis {
 public:
  VecBasis(Eigen::Index ambientDim, double dropTol)
      : n_(ambientDim), dropTol_(dropTol), columns_(ambientDim * ambientDim, 0) {}

  bool add(const Matrix& m) {
    const double norm = m.norm();
    if (norm == 0.0 || size() == n_ * n_) return false;
    Vector v = vec(m);
    for (int pass = 0; pass < 2; ++pass) {
      if (size() == 0) break;
      const Vector coeffs = columns_.adjoint() * v;
      v -= columns_ * coeffs;
    }
    const double residual = v.norm();
    if (residual <= dropTol_ * norm) return false;
    columns_.conservativeResize(Eigen::NoChange, size() + 1);
    columns_.col(size() - 1) = v / residual;
    return true;
  }

  Eigen::Index size() const { return columns_.cols(); }
  Matrix element(Eigen::Index j) const { return unvec(columns_.col(j), n_, n_); }
  std::vector<Matrix> elements() const {
    std::vector<Matrix> out;
    for (Eigen::Index j = 0; j < size(); ++j) out.push_back(element(j));
    return out;
  }

 private:
  Eigen::Index n_;
  double dropTol_;
  Matrix columns_;
};

OperatorSpace fromNullVectors(Eigen::Index n, const Matrix& kernel) {
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(kernel.cols()));
  for (Eigen::Index j = 0; j < kernel.cols(); ++j) basis.push_back(unvec(kernel.col(j), n, n));
  return OperatorSpace(n, std::move(basis));
}

Matrix stackedVec(const std::vector<Matrix>& ops) {
  const Eigen::Index n = ops.empty() ? 0 : ops.front().rows();
  Matrix cols(n * n, static_cast<Eigen::Index>(ops.size()));
  for (std::size_t j = 0; j < ops.size(); ++j) cols.col(static_cast<Eigen::Index>(j)) = vec(ops[j]);
  return cols;
}

Eigen::Index numericalRank(const Matrix& a, double tol) {
  if (a.size() == 0) return 0;
  const RealVector sigma = singularValues(a);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > tol * sigma(0)) ++rank;
  return rank;
}

// Groups sorted eigenvalues; a new cluster starts where the gap exceeds
// 1e-6 of the spread.  Returns the start index of each cluster plus the end.
std::vector<Eigen::Index> clusterBoundaries(const RealVector& values, double tol) {
  std::vector<Eigen::Index> bounds{0};
  const Eigen::Index count = values.size();
  if (count == 0) return bounds;
  const double spread = values(count - 1) - values(0);
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  if (spread > tol * scale) {
    const double gap = 1e-6 * spread;
    for (Eigen::Index i = 1; i < count; ++i)
      if (values(i) - values(i - 1) > gap) bounds.push_back(i);
  }
  bounds.push_back(count);
  return bounds;
}

Matrix randomElement(const OperatorSpace& space, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = space.ambientDim();
  Matrix a = Matrix::Zero(n, n);
  for (const auto& b : space.basis()) {
    const double re = normal(rng);
    const double im = normal(rng);
    a += Complex(re, im) * b;
  }
  return a;
}

// Complex coefficients reach every Hermitian element; real multiples of the
// Hermitian parts of the basis can miss some and leave forced degeneracies.
Matrix randomHermitianElement(const OperatorSpace& space, std::mt19937_64& rng) {
  const Matrix a = randomElement(space, rng);
  return (a + a.adjoint()) / 2.0;
}

void verifyAlgebra(const OperatorSpace& space, double tol) {
  const auto n = space.ambientDim();
  if (space.dim() == 0) throw Error(ErrorKind::NotAnAlgebra, "space is empty");
  if (!space.contains(Matrix::Identity(n, n), tol)) throw Error(ErrorKind::NotAnAlgebra, "space does not contain the identity");
  for (const auto& b : space.basis())
    if (!space.contains(b.adjoint(), tol)) throw Error(ErrorKind::NotAnAlgebra, "space is not closed under adjoints");
  for (const auto& a : space.basis())
    for (const auto& b : space.basis())
      if (!space.contains(a * b, tol)) throw Error(ErrorKind::NotAnAlgebra, "space is not closed under products");
}

struct ResolvedBlock {
  Eigen::Index multiplicity;
  Eigen::Index size;
  Eigen::Index order;  // position of the central projection in the spectrum
  Matrix columns;      // N x (m n), column r n + s spans the (r, s) slot
};

[[noreturn]] void resolutionFailed(const char* what) {
  throw Error(ErrorKind::StructureResolutionFailed, what);
}

AlgebraStructure resolveStructure(const OperatorSpace& algebra, double tol, std::uint64_t seed) {
  const auto n = algebra.ambientDim();
  const auto& basis = algebra.basis();
  const auto d = static_cast<Eigen::Index>(basis.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  // Center: coefficients c with [sum_j c_j B_j, B_l] = 0 for every l.
  Matrix constraints(d * n * n, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index l = 0; l < d; ++l) {
      const auto& bj = basis[static_cast<std::size_t>(j)];
      const auto& bl = basis[static_cast<std::size_t>(l)];
      constraints.block(l * n * n, j, n * n, 1) = vec(Matrix(bj * bl - bl * bj));
    }
  const Matrix centerCoeffs = nullSpace(constraints, tol);
  const Eigen::Index centerDim = centerCoeffs.cols();
  if (centerDim == 0) resolutionFailed("center is trivial; the space is not a unital algebra");

  Matrix central = Matrix::Zero(n, n);
  for (Eigen::Index t = 0; t < centerDim; ++t) {
    Matrix z = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < d; ++j) z += centerCoeffs(j, t) * basis[static_cast<std::size_t>(j)];
    const Complex c(normal(rng), normal(rng));
    central += (c * z + std::conj(c) * z.adjoint()) / 2.0;
  }
  const auto centralEig = hermitianEigen(central);
  const auto centralBounds = clusterBoundaries(centralEig.eigenvalues, tol);
  if (static_cast<Eigen::Index>(centralBounds.size()) - 1 != centerDim)
    resolutionFailed("central element does not separate the minimal central projections");

  const Matrix probe = randomHermitianElement(algebra, rng);
  const Matrix mixer = randomElement(algebra, rng);

  std::vector<ResolvedBlock> blocks;
  Eigen::Index squares = 0;
  for (std::size_t c = 0; c + 1 < centralBounds.size(); ++c) {
    const Eigen::Index start = centralBounds[c];
    const Eigen::Index spatial = centralBounds[c + 1] - start;
    const Matrix v = centralEig.eigenvectors.middleCols(start, spatial);

    std::vector<Matrix> compressed;
    compressed.reserve(basis.size());
    for (const auto& b : basis) compressed.push_back(v.adjoint() * b * v);
    const Eigen::Index blockAlgebraDim = numericalRank(stackedVec(compressed), tol);
    const auto size = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(blockAlgebraDim))));
    if (size < 1 || size * size != blockAlgebraDim || spatial % size != 0)
      resolutionFailed("compressed algebra is not a full matrix algebra");
    const Eigen::Index mult = spatial / size;
    squares += blockAlgebraDim;

    ResolvedBlock block{mult, size, static_cast<Eigen::Index>(c), Matrix(n, spatial)};
    if (size == 1) {
      block.columns = v;
      blocks.push_back(std::move(block));
      continue;
    }

    // Eigenspaces of a generic Hermitian element are C^m (x) f_s; a generic
    // element carries eigenspace 0 onto eigenspace s as a scaled unitary,
    // which aligns the multiplicity index across the eigenspaces.
    const Matrix localProbe = v.adjoint() * probe * v;
    const auto localEig = hermitianEigen(localProbe);
    const auto localBounds = clusterBoundaries(localEig.eigenvalues, tol);
    if (static_cast<Eigen::Index>(localBounds.size()) - 1 != size)
      resolutionFailed("probe element does not split the block into n eigenspaces");
    for (std::size_t s = 0; s + 1 < localBounds.size(); ++s)
      if (localBounds[s + 1] - localBounds[s] != mult) resolutionFailed("eigenspace multiplicities are unequal");

    const Matrix localMixer = v.adjoint() * mixer * v;
    const Matrix w0 = localEig.eigenvectors.middleCols(0, mult);
    Matrix local(spatial, spatial);
    for (Eigen::Index s = 0; s < size; ++s) {
      Matrix ws = localEig.eigenvectors.middleCols(localBounds[static_cast<std::size_t>(s)], mult);
      if (s > 0) {
        const Matrix transfer = ws.adjoint() * localMixer * w0;
        const RealVector sigma = singularValues(transfer);
        if (sigma(0) <= 1e-8 * std::max(1.0, localMixer.norm()) ||
            sigma(sigma.size() - 1) < (1.0 - 1e-6) * sigma(0))
          resolutionFailed("transfer between eigenspaces is not a scaled unitary");
        ws = ws * polar(transfer).unitary;
      }
      for (Eigen::Index r = 0; r < mult; ++r) local.col(r * size + s) = ws.col(r);
    }
    block.columns = v * local;
    blocks.push_back(std::move(block));
  }
  if (squares != d) resolutionFailed("block dimensions do not add up to the algebra dimension");

  std::stable_sort(blocks.begin(), blocks.end(), [](const ResolvedBlock& a, const ResolvedBlock& b) {
    if (a.size != b.size) return a.size > b.size;
    return a.multiplicity > b.multiplicity;
  });

  AlgebraStructure structure;
  structure.basisChange.resize(n, n);
  Eigen::Index offset = 0;
  for (const auto& block : blocks) {
    const Eigen::Index width = block.multiplicity * block.size;
    structure.basisChange.middleCols(offset, width) = block.columns;
    structure.blocks.push_back({block.multiplicity, block.size, offset});
    offset += width;
  }
  if (offset != n) resolutionFailed("blocks do not cover the space");
  if (structureResidual(algebra, structure) > 1e-7) resolutionFailed("conjugated algebra misses the block pattern");
  return structure;
}

}  // namespace

OperatorSpace::OperatorSpace(Eigen::Index ambientDim, std::vector<Matrix> orthonormalBasis)
    : ambientDim_(ambientDim), basis_(std::move(orthonormalBasis)) {
  if (ambientDim_ < 1) throw Error(ErrorKind::InvalidParameter, "ambient dimension must be positive");
  if (static_cast<Eigen::Index>(basis_.size()) > ambientDim_ * ambientDim_)
    throw Error(ErrorKind::InvalidParameter, "more basis elements than N^2");
  for (const auto& b : basis_)
    if (b.rows() != ambientDim_ || b.cols() != ambientDim_)
      throw Error(ErrorKind::DimMismatch, "basis element has the wrong shape");
  if (!basis_.empty()) {
    const Matrix cols = stackedVec(basis_);
    const auto d = cols.cols();
    if ((cols.adjoint() * cols - Matrix::Identity(d, d)).norm() > 1e-9 * static_cast<double>(d))
      throw Error(ErrorKind::InvalidParameter, "basis is not Hilbert-Schmidt orthonormal");
  }
}

OperatorSpace OperatorSpace::span(Eigen::Index ambientDim, const std::vector<Matrix>& spanning, double dropTol) {
  VecBasis acc(ambientDim, dropTol);
  for (const auto& m : spanning) {
    if (m.rows() != ambientDim || m.cols() != ambientDim)
      throw Error(ErrorKind::DimMismatch, "spanning element has the wrong shape");
    acc.add(m);
  }
  return OperatorSpace(ambientDim, acc.elements());
}

OperatorSpace OperatorSpace::full(Eigen::Index ambientDim) {
  std::vector<Matrix> units;
  for (Eigen::Index i = 0; i < ambientDim; ++i)
    for (Eigen::Index j = 0; j < ambientDim; ++j) {
      Matrix e = Matrix::Zero(ambientDim, ambientDim);
      e(i, j) = 1.0;
      units.push_back(std::move(e));
    }
  return OperatorSpace(ambientDim, std::move(units));
}

Matrix OperatorSpace::project(const Matrix& m) const {
  if (m.rows() != ambientDim_ || m.cols() != ambientDim_)
    throw Error(ErrorKind::DimMismatch, "operator has the wrong shape for this space");
  Matrix out = Matrix::Zero(ambientDim_, ambientDim_);
  for (const auto& b : basis_) out += hsInner(b, m) * b;
  return out;
}

bool sameSubspace(const OperatorSpace& a, const OperatorSpace& b, double tol) {
  if (a.ambientDim() != b.ambientDim()) return false;
  for (const auto& x : a.basis())
    if (!b.contains(x, tol)) return false;
  for (const auto& y : b.basis())
    if (!a.contains(y, tol)) return false;
  return true;
}

OperatorSpace generatedAlgebra(const std::vector<Matrix>& generators, double dropTol) {
  if (generators.empty()) throw Error(ErrorKind::InvalidParameter, "need at least one generator");
  const auto n = generators.front().rows();
  VecBasis acc(n, dropTol);
  acc.add(Matrix::Identity(n, n));
  for (const auto& g : generators) {
    if (g.rows() != n || g.cols() != n) throw Error(ErrorKind::DimMismatch, "generators must share one shape");
    acc.add(g);
  }
  // Each round multiplies the newest elements against everything found so far;
  // older pairs were handled in earlier rounds.  Terminates since dim <= N^2.
  Eigen::Index frontierBegin = 0;
  while (frontierBegin < acc.size()) {
    const Eigen::Index frontierEnd = acc.size();
    const auto current = acc.elements();
    for (Eigen::Index f = frontierBegin; f < frontierEnd; ++f)
      for (Eigen::Index j = 0; j < frontierEnd; ++j) {
        const auto& a = current[static_cast<std::size_t>(f)];
        const auto& b = current[static_cast<std::size_t>(j)];
        acc.add(a * b);
        acc.add(b * a);
      }
    frontierBegin = frontierEnd;
  }
  return OperatorSpace(n, acc.elements());
}

OperatorSpace interactionAlgebra(const KrausChannel& ch) {
  std::vector<Matrix> generators;
  for (const auto& e : ch.operators()) {
    generators.push_back(e);
    generators.push_back(e.adjoint());
  }
  return generatedAlgebra(generators);
}

OperatorSpace commutant(const std::vector<Matrix>& generators, double tol) {
  if (generators.empty()) throw Error(ErrorKind::InvalidParameter, "need at least one generator");
  const auto n = generators.front().rows();
  const Matrix id = Matrix::Identity(n, n);
  std::vector<Matrix> blocks;
  for (const auto& g : generators) {
    if (g.rows() != n || g.cols() != n) throw Error(ErrorKind::DimMismatch, "generators must share one shape");
    // vec(G rho - rho G) = (G (x) I - I (x) G^T) vec(rho)
    blocks.push_back(kron(g, id) - kron(id, g.transpose()));
    if (!isHermitian(g, 1e-14)) blocks.push_back(kron(g.adjoint(), id) - kron(id, g.conjugate()));
  }
  Matrix stacked(static_cast<Eigen::Index>(blocks.size()) * n * n, n * n);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    stacked.middleRows(static_cast<Eigen::Index>(i) * n * n, n * n) = blocks[i];
  return fromNullVectors(n, nullSpace(stacked, tol));
}

OperatorSpace commutant(const OperatorSpace& space, double tol) {
  if (space.dim() == 0) return OperatorSpace::full(space.ambientDim());
  return commutant(space.basis(), tol);
}

OperatorSpace fixedPointSet(const KrausChannel& ch, double tol) {
  const auto n = ch.dim();
  const Matrix phi = superoperator(ch) - Matrix::Identity(n * n, n * n);
  return fromNullVectors(n, nullSpace(phi, tol));
}

FixVsCommutant fixEqualsCommutant(const KrausChannel& ch, double tol) {
  if (!ch.isTracePreserving()) throw Error(ErrorKind::NotTracePreserving, "channel is not trace preserving");
  const auto fix = fixedPointSet(ch, tol);
  const auto comm = commutant(ch.operators(), tol);
  return {sameSubspace(fix, comm, tol), classify(ch, tol).unital, fix.dim(), comm.dim()};
}

bool adjointsInAlgebra(const KrausChannel& ch, double tol) {
  if (!classify(ch, tol).unital) throw Error(ErrorKind::NotUnital, "channel is not unital");
  const auto algebra = generatedAlgebra(ch.operators());
  for (const auto& e : ch.operators())
    if (!algebra.contains(e.adjoint(), tol)) return false;
  return true;
}

double structureResidual(const OperatorSpace& algebra, const AlgebraStructure& structure) {
  const Matrix& u = structure.basisChange;
  double worst = 0.0;
  for (const auto& b : algebra.basis()) {
    const Matrix c = u.adjoint() * b * u;
    Matrix pattern = Matrix::Zero(c.rows(), c.cols());
    for (const auto& block : structure.blocks) {
      const Eigen::Index m = block.multiplicity;
      const Eigen::Index s = block.size;
      Matrix average = Matrix::Zero(s, s);
      for (Eigen::Index r = 0; r < m; ++r) average += c.block(block.offset + r * s, block.offset + r * s, s, s);
      average /= static_cast<double>(m);
      for (Eigen::Index r = 0; r < m; ++r) pattern.block(block.offset + r * s, block.offset + r * s, s, s) = average;
    }
    const double mass = c.norm();
    if (mass > 0) worst = std::max(worst, (c - pattern).norm() / mass);
  }
  return worst;
}

AlgebraStructure wedderburnStructure(const OperatorSpace& algebra, double tol, std::uint64_t seed) {
  verifyAlgebra(algebra, tol);
  constexpr int kRetries = 5;
  for (int attempt = 0;; ++attempt) {
    try {
      return resolveStructure(algebra, tol, seed + static_cast<std::uint64_t>(attempt));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::StructureResolutionFailed || attempt == kRetries) throw;
    }
  }
}

Matrix NoiselessSubsystem::encode(const Matrix& sigma) const {
  if (sigma.rows() != size || sigma.cols() != size)
    throw Error(ErrorKind::DimMismatch, "encoded operator must be n x n for this block");
  const auto n = basisChange.rows();
  Matrix embedded = Matrix::Zero(n, n);
  const Matrix ampliation = Matrix::Identity(multiplicity, multiplicity) / static_cast<double>(multiplicity);
  embedded.block(offset, offset, multiplicity * size, multiplicity * size) = kron(ampliation, sigma);
  return basisChange * embedded * basisChange.adjoint();
}

NoiselessReport noiselessSubsystems(const KrausChannel& ch, double tol, std::uint64_t seed) {
  if (!ch.isTracePreserving()) throw Error(ErrorKind::NotTracePreserving, "channel is not trace preserving");
  if (!classify(ch, tol).unital) throw Error(ErrorKind::NotUnital, "channel is not unital");
  NoiselessReport report;
  report.structure = wedderburnStructure(commutant(ch.operators(), tol), tol, seed);
  for (const auto& block : report.structure.blocks) {
    if (block.size < 2) continue;
    report.subsystems.push_back(
        {block.multiplicity, block.size, block.offset, block.multiplicity == 1, report.structure.basisChange});
  }
  return report;
}

std::optional<DeadSubspace> deadSubspace(const KrausChannel& ch, double tol) {
  const auto n = ch.dim();
  Matrix image = Matrix::Zero(n, n);
  for (const auto& e : ch.operators()) image.noalias() += e * e.adjoint();
  const auto eig = hermitianEigen(image, tol);
  const double top = eig.eigenvalues.cwiseAbs().maxCoeff();
  Eigen::Index deadCount = 0;
  while (deadCount < n && eig.eigenvalues(deadCount) <= tol * top) ++deadCount;
  if (deadCount == 0) return std::nullopt;

  const Matrix deadBasis = eig.eigenvectors.leftCols(deadCount);
  const Matrix dead = deadBasis * deadBasis.adjoint();
  const Matrix live = Matrix::Identity(n, n) - dead;
  DeadSubspace out{dead, true, 0.0};
  for (const auto& e : ch.operators())
    if ((e - live * e * live).norm() > tol * (1.0 + e.norm())) out.hypothesisHolds = false;
  for (Eigen::Index a = 0; a < deadCount; ++a)
    for (Eigen::Index b = 0; b < deadCount; ++b)
      out.deadOutputNorm = std::max(out.deadOutputNorm, applyChannel(ch, outer(deadBasis.col(a), deadBasis.col(b))).norm());
  return out;
}

}  // namespace qchannel
