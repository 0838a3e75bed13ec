#pragma once

// Dense complex linear algebra used throughout qchannel.  Everything here is a
// free function template over Eigen expressions; the rest of the library works
// with the double-precision aliases at the bottom of the file.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "qchannel/error.hpp"

namespace qchannel {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using Matrix = CMatrix<double>;
using Vector = CVector<double>;
using RealVector = RVector<double>;

/// Relative, Frobenius-scaled tolerance used by every rank, positivity and
/// equality decision unless the caller overrides it.
inline constexpr double kDefaultTol = 1e-9;

template <typename Real>
struct EigenDecomposition {
  RVector<Real> eigenvalues;   // ascending
  CMatrix<Real> eigenvectors;  // orthonormal columns, same order
};

template <typename Real>
struct PolarDecomposition {
  CMatrix<Real> unitary;
  CMatrix<Real> positive;
};

template <typename Derived>
bool allFinite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const auto z = m(i, j);
      if (!std::isfinite(std::real(z)) || !std::isfinite(std::imag(z))) return false;
    }
  return true;
}

template <typename DA, typename DB>
auto kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using Scalar = typename DA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                           a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Tr(a^dagger b).
template <typename DA, typename DB>
auto hsInner(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::ShapeMismatch, "hsInner requires operands of equal shape");
  return a.conjugate().cwiseProduct(b).sum();
}

template <typename Derived>
bool isHermitian(const Eigen::MatrixBase<Derived>& h, typename Derived::RealScalar tol = kDefaultTol) {
  if (h.rows() != h.cols()) return false;
  return (h - h.adjoint()).norm() <= tol * (1 + h.norm());
}

template <typename Derived>
bool isUnitary(const Eigen::MatrixBase<Derived>& u, typename Derived::RealScalar tol = kDefaultTol) {
  if (u.rows() != u.cols()) return false;
  const auto n = u.rows();
  using Plain = typename Derived::PlainObject;
  return (u.adjoint() * u - Plain::Identity(n, n)).norm() <= tol * static_cast<double>(n);
}

template <typename Derived>
EigenDecomposition<typename Derived::RealScalar> hermitianEigen(
    const Eigen::MatrixBase<Derived>& h, typename Derived::RealScalar tol = kDefaultTol) {
  if (!isHermitian(h, tol))
    throw Error(ErrorKind::NotHermitian, "matrix is not Hermitian within tolerance");
  using Plain = typename Derived::PlainObject;
  // Symmetrize so the solver sees an exactly Hermitian input.
  const Plain sym = (h + h.adjoint()) / 2;
  Eigen::SelfAdjointEigenSolver<Plain> solver(sym);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace detail {

template <typename Plain>
struct SvdParts {
  Eigen::Matrix<typename Plain::RealScalar, Eigen::Dynamic, 1> sigma;
  Plain u;
  Plain v;
};

// JacobiSVD for small inputs.  BDCSVD for large ones, with a JacobiSVD retry
// when it returns non-finite values (seen on exactly structured inputs).
template <typename Plain>
SvdParts<Plain> svd(const Plain& a, unsigned options) {
  constexpr Eigen::Index kJacobiLimit = 96;
  const bool wantU = options & (Eigen::ComputeFullU | Eigen::ComputeThinU);
  const bool wantV = options & (Eigen::ComputeFullV | Eigen::ComputeThinV);
  auto collect = [&](const auto& solver) {
    return SvdParts<Plain>{solver.singularValues(), wantU ? Plain(solver.matrixU()) : Plain(),
                           wantV ? Plain(solver.matrixV()) : Plain()};
  };
  if (std::max(a.rows(), a.cols()) > kJacobiLimit) {
    auto parts = collect(Eigen::BDCSVD<Plain>(a, options));
    if (allFinite(parts.sigma) && allFinite(parts.u) && allFinite(parts.v)) return parts;
  }
  return collect(Eigen::JacobiSVD<Plain>(a, options));
}

}  // namespace detail

/// Singular values of a, computed through an R factor when a is tall so the
/// SVD stays square.
template <typename Derived>
auto singularValues(const Eigen::MatrixBase<Derived>& a) {
  using Plain = typename Derived::PlainObject;
  if (a.rows() > a.cols()) {
    Eigen::HouseholderQR<Plain> qr(a);
    const Plain r = qr.matrixQR().topRows(a.cols()).template triangularView<Eigen::Upper>();
    return detail::svd<Plain>(r, 0).sigma;
  }
  return detail::svd<Plain>(Plain(a), 0).sigma;
}

/// Columns form an orthonormal basis of {v : |a v| <= tol |a| |v|}.  The rank
/// cut is sigma <= tol * sigma_max.
template <typename Derived>
typename Derived::PlainObject nullSpace(const Eigen::MatrixBase<Derived>& a,
                                        typename Derived::RealScalar tol = kDefaultTol) {
  using Plain = typename Derived::PlainObject;
  const Eigen::Index n = a.cols();
  if (a.rows() == 0 || n == 0) return Plain::Identity(n, n);

  Plain reduced;
  if (a.rows() > n) {
    Eigen::HouseholderQR<Plain> qr(a);
    reduced = qr.matrixQR().topRows(n).template triangularView<Eigen::Upper>();
  } else {
    reduced = a;
  }
  const auto parts = detail::svd<Plain>(reduced, Eigen::ComputeFullV);
  const auto& sigma = parts.sigma;
  const auto sigmaMax = sigma.size() > 0 ? sigma(0) : 0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > tol * sigmaMax) ++rank;
  return parts.v.rightCols(n - rank);
}

template <typename Derived>
std::vector<typename Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>> nullSpaceBasis(
    const Eigen::MatrixBase<Derived>& a, typename Derived::RealScalar tol = kDefaultTol) {
  const auto basis = nullSpace(a, tol);
  std::vector<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>> out;
  out.reserve(basis.cols());
  for (Eigen::Index j = 0; j < basis.cols(); ++j) out.emplace_back(basis.col(j));
  return out;
}

/// Extends the orthonormal columns of q to an orthonormal basis of the whole
/// space and returns only the added columns: the trailing columns of the full
/// Householder Q factor of q.  Deterministic in q.
template <typename Derived>
typename Derived::PlainObject orthonormalCompletion(const Eigen::MatrixBase<Derived>& q) {
  using Plain = typename Derived::PlainObject;
  const Eigen::Index n = q.rows();
  const Eigen::Index r = q.cols();
  if (r == 0) return Plain::Identity(n, n);
  if (r >= n) return Plain(n, 0);
  Eigen::HouseholderQR<Plain> qr(q);
  Plain tail = Plain::Zero(n, n - r);
  tail.bottomRows(n - r).setIdentity();
  return qr.householderQ() * tail;
}

/// a = u p with u unitary and p = sqrt(a^dagger a).  For singular a the unitary
/// maps the orthogonal complement of the support of p onto the complement of
/// the range of a using orthonormalCompletion on both sides.
template <typename Derived>
PolarDecomposition<typename Derived::RealScalar> polar(const Eigen::MatrixBase<Derived>& a) {
  using Plain = typename Derived::PlainObject;
  using Real = typename Derived::RealScalar;
  if (a.rows() != a.cols()) throw Error(ErrorKind::ShapeMismatch, "polar requires a square matrix");
  const Eigen::Index n = a.rows();
  const auto svd = detail::svd<Plain>(Plain(a), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sigma = svd.sigma;
  const Real sigmaMax = n > 0 ? sigma(0) : Real(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (sigma(i) > Real(kDefaultTol) * sigmaMax) ++rank;

  const Plain& left = svd.u;
  const Plain& right = svd.v;
  Plain p = right * sigma.template cast<typename Derived::Scalar>().asDiagonal() * right.adjoint();
  p = (p + p.adjoint()).eval() / Real(2);

  Plain u;
  if (rank == n) {
    u = left * right.adjoint();
  } else {
    const Plain rangeBasis = left.leftCols(rank);
    const Plain supportBasis = right.leftCols(rank);
    u = rangeBasis * supportBasis.adjoint() +
        orthonormalCompletion(rangeBasis) * orthonormalCompletion(supportBasis).adjoint();
  }
  return {std::move(u), std::move(p)};
}

/// Exact-match overload so that unqualified calls on Matrix do not resolve to
/// std::polar through argument-dependent lookup.
inline PolarDecomposition<double> polar(const Matrix& a) { return qchannel::polar<Matrix>(a); }

/// Square root of a PSD matrix; eigenvalues in [-tol*lambda_max, 0) are
/// clamped to zero, anything more negative is rejected.
template <typename Derived>
typename Derived::PlainObject psdSqrt(const Eigen::MatrixBase<Derived>& h,
                                      typename Derived::RealScalar tol = kDefaultTol) {
  const auto eig = hermitianEigen(h, tol);
  const auto scale = std::max<typename Derived::RealScalar>(1, eig.eigenvalues.cwiseAbs().maxCoeff());
  auto values = eig.eigenvalues;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) < -tol * scale) throw Error(ErrorKind::NotPSD, "matrix has a negative eigenvalue");
    values(i) = std::sqrt(std::max<typename Derived::RealScalar>(values(i), 0));
  }
  return eig.eigenvectors * values.template cast<typename Derived::Scalar>().asDiagonal() *
         eig.eigenvectors.adjoint();
}

/// exp(i theta h) for Hermitian h.
template <typename Derived>
typename Derived::PlainObject expiHermitian(const Eigen::MatrixBase<Derived>& h,
                                            typename Derived::RealScalar theta) {
  using Scalar = typename Derived::Scalar;
  const auto eig = hermitianEigen(h);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> phases(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases(i) = std::polar<typename Derived::RealScalar>(1, theta * eig.eigenvalues(i));
  return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

/// Orthogonal projection onto the span of eigenvectors of a PSD matrix whose
/// eigenvalues exceed tol * lambda_max.
template <typename Derived>
typename Derived::PlainObject rangeProjector(const Eigen::MatrixBase<Derived>& h,
                                             typename Derived::RealScalar tol = kDefaultTol) {
  using Plain = typename Derived::PlainObject;
  const auto eig = hermitianEigen(h, tol);
  const auto n = h.rows();
  const auto top = n > 0 ? eig.eigenvalues.cwiseAbs().maxCoeff() : 0;
  Plain proj = Plain::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (eig.eigenvalues(i) > tol * top) proj += eig.eigenvectors.col(i) * eig.eigenvectors.col(i).adjoint();
  return proj;
}

/// Row-major vectorization: vec(m)[i * cols + j] = m(i, j).  With this
/// convention vec(a x b) = kron(a, b^T) vec(x).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> vec(const Eigen::MatrixBase<Derived>& m) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> v(m.rows() * m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> unvec(
    const Eigen::MatrixBase<Derived>& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw Error(ErrorKind::ShapeMismatch, "unvec size mismatch");
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
  return m;
}

/// Rank-one operator |ket><bra|.
template <typename DA, typename DB>
auto outer(const Eigen::MatrixBase<DA>& ket, const Eigen::MatrixBase<DB>& bra) {
  return (ket * bra.adjoint()).eval();
}

}  // namespace qchannel
