#pragma once

#include <cmath>
#include <string>

#include "qmeter/core.hpp"

namespace qmeter {

inline Real max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& a, Real tolerance = tol::hermiticity) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a - a.adjoint()) <= tolerance;
}

inline Matrix identity(int d) { return Matrix::Identity(d, d); }

inline Vector basis_vector(int d, int k) {
  Vector v = Vector::Zero(d);
  v(k) = 1.0;
  return v;
}

// Kronecker product, row-major block convention:
// (A (x) B)(i1*rb + i2, j1*cb + j2) = A(i1,j1) B(i2,j2).
inline Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vector tensor(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (int i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

// (K (x) I_{d2}) psi without forming the Kronecker matrix.
inline Vector extend_apply(const Matrix& k, const Vector& psi, int d2) {
  const int din = static_cast<int>(k.cols());
  const int dout = static_cast<int>(k.rows());
  if (psi.size() != static_cast<Eigen::Index>(din) * d2)
    throw shape_error("extend_apply: vector length " + std::to_string(psi.size()) +
                      " does not match " + std::to_string(din) + "*" + std::to_string(d2));
  Vector out = Vector::Zero(static_cast<Eigen::Index>(dout) * d2);
  for (int m = 0; m < dout; ++m)
    for (int j = 0; j < din; ++j) {
      const Complex c = k(m, j);
      if (c == Complex(0, 0)) continue;
      out.segment(m * d2, d2) += c * psi.segment(j * d2, d2);
    }
  return out;
}

enum class Keep { first, second };

// Partial trace of an operator on C^{d1} (x) C^{d2}.
inline Matrix partial_trace(const Matrix& m, int dim_first, int dim_second, Keep keep) {
  if (dim_first < 1 || dim_second < 1)
    throw shape_error("partial_trace: dimensions must be positive");
  const Eigen::Index d = static_cast<Eigen::Index>(dim_first) * dim_second;
  if (m.rows() != d || m.cols() != d)
    throw shape_error("partial_trace: matrix is " + std::to_string(m.rows()) + "x" +
                      std::to_string(m.cols()) + ", expected " + std::to_string(d) +
                      " square");
  if (keep == Keep::first) {
    Matrix out = Matrix::Zero(dim_first, dim_first);
    for (int i = 0; i < dim_first; ++i)
      for (int j = 0; j < dim_first; ++j)
        for (int k = 0; k < dim_second; ++k)
          out(i, j) += m(i * dim_second + k, j * dim_second + k);
    return out;
  }
  Matrix out = Matrix::Zero(dim_second, dim_second);
  for (int i = 0; i < dim_second; ++i)
    for (int j = 0; j < dim_second; ++j)
      for (int k = 0; k < dim_first; ++k)
        out(i, j) += m(k * dim_second + i, k * dim_second + j);
  return out;
}

struct HermitianSpectrum {
  RealVector eigenvalues;  // descending
  Matrix eigenvectors;     // columns, unitary
};

// Fix the phase of each eigenvector so its largest-magnitude component is real
// and nonnegative; makes repeated runs reproduce the same decomposition.
inline void fix_column_phases(Matrix& u) {
  for (int j = 0; j < u.cols(); ++j) {
    int arg = 0;
    Real best = -1.0;
    for (int i = 0; i < u.rows(); ++i) {
      const Real m = std::abs(u(i, j));
      if (m > best) {
        best = m;
        arg = i;
      }
    }
    if (best > 0) u.col(j) *= std::conj(u(arg, j)) / best;
  }
}

inline HermitianSpectrum eig_hermitian(const Matrix& a) {
  if (a.rows() != a.cols())
    throw shape_error("eig_hermitian: matrix is not square");
  const Real herm = max_abs(a - a.adjoint());
  if (herm > tol::hermiticity)
    throw precondition_error("eig_hermitian: input not Hermitian, ||A - A'||_max = " +
                             std::to_string(herm));
  Eigen::SelfAdjointEigenSolver<Matrix> solver((a + a.adjoint()) / 2.0);
  if (solver.info() != Eigen::Success)
    throw precondition_error("eig_hermitian: eigensolver failed to converge");
  const int d = static_cast<int>(a.rows());
  HermitianSpectrum s;
  s.eigenvalues.resize(d);
  s.eigenvectors.resize(d, d);
  for (int j = 0; j < d; ++j) {  // Eigen returns ascending order; flip
    s.eigenvalues(j) = solver.eigenvalues()(d - 1 - j);
    s.eigenvectors.col(j) = solver.eigenvectors().col(d - 1 - j);
  }
  fix_column_phases(s.eigenvectors);
  return s;
}

// -x ln x extended by 0 at x <= 0.
inline Real eta(Real x) { return x > 0 ? -x * std::log(x) : 0.0; }

// Sine of the angle between two nonzero vectors; scale and phase invariant.
// Computed as the residual of projecting b onto span(a): the textbook
// sqrt(1 - cos^2) loses everything below sqrt(eps) to cancellation, which is
// too coarse for collinearity thresholds near 1e-8.
inline Real sine_distance(const Vector& a, const Vector& b) {
  const Real na = a.norm(), nb = b.norm();
  if (na == 0 || nb == 0) return 0.0;
  const Vector r = b - a * (a.dot(b) / (na * na));  // Eigen's dot conjugates a
  return std::min(1.0, r.norm() / nb);
}

inline Vector vectorize(const Matrix& a) {
  Vector v(a.size());
  Eigen::Index n = 0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) v(n++) = a(i, j);
  return v;
}

inline Real operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

}  // namespace qmeter
