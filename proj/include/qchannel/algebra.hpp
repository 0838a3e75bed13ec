#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qchannel/channels.hpp"

namespace qchannel {

/// Subspace of N x N operators with a Hilbert-Schmidt orthonormal basis.
class OperatorSpace {
 public:
  OperatorSpace(Eigen::Index ambientDim, std::vector<Matrix> orthonormalBasis);

  /// Orthonormalizes `spanning` (modified Gram-Schmidt, elements whose residual
  /// is below dropTol times their norm are discarded).
  static OperatorSpace span(Eigen::Index ambientDim, const std::vector<Matrix>& spanning, double dropTol = 1e-10);
  static OperatorSpace full(Eigen::Index ambientDim);

  Eigen::Index ambientDim() const { return ambientDim_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<Matrix>& basis() const { return basis_; }

  /// Orthogonal projection of m onto the space.
  Matrix project(const Matrix& m) const;
  /// |m - project(m)|_F.
  double residual(const Matrix& m) const { return (m - project(m)).norm(); }
  bool contains(const Matrix& m, double tol = kDefaultTol) const { return residual(m) <= tol * (1.0 + m.norm()); }

 private:
  Eigen::Index ambientDim_;
  std::vector<Matrix> basis_;
};

/// Mutual projection: every basis element of each space lies in the other.
bool sameSubspace(const OperatorSpace& a, const OperatorSpace& b, double tol = kDefaultTol);

/// Unital algebra generated by `generators` (products only; adjoints are not added).
OperatorSpace generatedAlgebra(const std::vector<Matrix>& generators, double dropTol = 1e-10);
/// Alg{E_i, E_i^dagger}.
OperatorSpace interactionAlgebra(const KrausChannel& ch);
/// {rho : [rho, G] = 0 = [rho, G^dagger] for every generator G}.
OperatorSpace commutant(const std::vector<Matrix>& generators, double tol = kDefaultTol);
OperatorSpace commutant(const OperatorSpace& space, double tol = kDefaultTol);
/// {rho : E(rho) = rho}.
OperatorSpace fixedPointSet(const KrausChannel& ch, double tol = kDefaultTol);

struct FixVsCommutant {
  bool equal = false;
  bool unital = false;
  std::size_t fixedDim = 0;
  std::size_t commutantDim = 0;
};
FixVsCommutant fixEqualsCommutant(const KrausChannel& ch, double tol = kDefaultTol);

/// Whether every E_i^dagger lies in the unital algebra generated by the E_i.
bool adjointsInAlgebra(const KrausChannel& ch, double tol = kDefaultTol);

struct AlgebraBlock {
  Eigen::Index multiplicity = 0;  // m_k
  Eigen::Index size = 0;          // n_k
  Eigen::Index offset = 0;        // first column of the block in basisChange
};

/// basisChange^dagger A basisChange = direct sum of 1_{m_k} (x) M_{n_k}, with
/// the (r, s) index of block k at offset + r n_k + s.
struct AlgebraStructure {
  std::vector<AlgebraBlock> blocks;
  Matrix basisChange;
};

/// Block decomposition of a unital finite-dimensional *-algebra.  Randomized
/// steps use `seed`; up to five further seeds are tried before failing.
AlgebraStructure wedderburnStructure(const OperatorSpace& algebra, double tol = kDefaultTol, std::uint64_t seed = 0);

/// Largest off-pattern mass fraction over the algebra basis after conjugating
/// by the structure's basis change.
double structureResidual(const OperatorSpace& algebra, const AlgebraStructure& structure);

struct NoiselessSubsystem {
  Eigen::Index multiplicity = 0;
  Eigen::Index size = 0;
  Eigen::Index offset = 0;
  bool decoherenceFree = false;  // m = 1
  Matrix basisChange;

  /// basisChange (0 (+) (1_m / m) (x) sigma (+) 0) basisChange^dagger.
  Matrix encode(const Matrix& sigma) const;
};

struct NoiselessReport {
  AlgebraStructure structure;
  std::vector<NoiselessSubsystem> subsystems;  // blocks with n_k >= 2
};

NoiselessReport noiselessSubsystems(const KrausChannel& ch, double tol = kDefaultTol, std::uint64_t seed = 0);

struct DeadSubspace {
  Matrix deadProjector;        // projection onto the kernel of E(I)
  bool hypothesisHolds = false;  // E_i = P E_i P for the range projection P of E(I)
  double deadOutputNorm = 0.0;   // max |E(rho)|_F over matrix units of the dead space
};

std::optional<DeadSubspace> deadSubspace(const KrausChannel& ch, double tol = kDefaultTol);

}  // namespace qchannel
