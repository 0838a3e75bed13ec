#pragma once

#include <random>

#include "qchannel/linalg.hpp"

namespace qchannel::test {

inline double dist(const Matrix& a, const Matrix& b) { return (a - b).norm(); }

inline Matrix diag(std::initializer_list<Complex> entries) {
  Vector v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (auto e : entries) v(i++) = e;
  return v.asDiagonal();
}

inline Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline Matrix unit(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  Matrix m = Matrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

}  // namespace qchannel::test
