#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qmeter/linalg.hpp"

namespace qmeter {

// Hermitian positive-semidefinite operator. Validates on construction and
// keeps the clamped spectrum (descending) so entropy evaluations reuse it.
class PositiveOperator {
 public:
  explicit PositiveOperator(Matrix m) : matrix_(std::move(m)) {
    if (matrix_.rows() != matrix_.cols())
      throw shape_error("PositiveOperator: matrix is not square");
    const Real herm = max_abs(matrix_ - matrix_.adjoint());
    if (herm > tol::hermiticity)
      throw precondition_error("PositiveOperator: not Hermitian, ||A - A'||_max = " +
                               std::to_string(herm));
    Eigen::SelfAdjointEigenSolver<Matrix> solver((matrix_ + matrix_.adjoint()) / 2.0,
                                                 Eigen::EigenvaluesOnly);
    const int d = dim();
    spectrum_.resize(d);
    for (int j = 0; j < d; ++j) {
      Real lam = solver.eigenvalues()(d - 1 - j);
      if (lam < -tol::psd_drift)
        throw precondition_error("PositiveOperator: negative eigenvalue " +
                                 std::to_string(lam));
      spectrum_(j) = lam < 0 ? 0.0 : lam;
    }
  }

  const Matrix& matrix() const { return matrix_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }
  // Descending, clamped to [0, inf).
  const RealVector& spectrum() const { return spectrum_; }
  Real trace() const { return spectrum_.sum(); }

 private:
  Matrix matrix_;
  RealVector spectrum_;
};

// Positive operator with unit trace: a state.
class DensityOperator : public PositiveOperator {
 public:
  explicit DensityOperator(Matrix m) : PositiveOperator(std::move(m)) {
    const Real t = matrix().trace().real();
    if (std::abs(t - 1.0) > tol::trace_one)
      throw precondition_error("DensityOperator: trace deviates from 1 by " +
                               std::to_string(std::abs(t - 1.0)));
  }
};

inline Real purity(const PositiveOperator& a) {
  const Real t = a.trace();
  if (t <= 0) return 0.0;
  return (a.matrix() * a.matrix()).trace().real() / (t * t);
}

inline Matrix support_projector(const PositiveOperator& a, Real cut = tol::support_eig) {
  HermitianSpectrum s = eig_hermitian(a.matrix());
  Matrix p = Matrix::Zero(a.dim(), a.dim());
  for (int j = 0; j < a.dim(); ++j)
    if (s.eigenvalues(j) > cut)
      p += s.eigenvectors.col(j) * s.eigenvectors.col(j).adjoint();
  return p;
}

inline RealVector sorted_spectrum(const PositiveOperator& a) { return a.spectrum(); }

inline bool isospectral(const PositiveOperator& a, const PositiveOperator& b,
                        Real tolerance = tol::spectrum_match) {
  if (a.dim() != b.dim()) return false;
  return (a.spectrum() - b.spectrum()).cwiseAbs().maxCoeff() <= tolerance;
}

// Spectral purification vector: psi = sum_j sqrt(lambda_j) e_j (x) e_j, so that
// the second-factor marginal of psi psi' is built from the same eigenbasis and
// is isospectral to rho by construction.
inline Vector purification_vector(const DensityOperator& rho) {
  HermitianSpectrum s = eig_hermitian(rho.matrix());
  const int d = rho.dim();
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int j = 0; j < d; ++j) {
    // Eigenvalues at rounding scale are spurious: including them would plant
    // sqrt(eps)-sized amplitudes outside the support of rho and every
    // divergence against a marginal of psi would see a phantom support leak.
    const Real lam = s.eigenvalues(j);
    if (lam <= tol::support_eig) continue;
    psi += std::sqrt(lam) * tensor(Vector(s.eigenvectors.col(j)),
                                   Vector(s.eigenvectors.col(j)));
  }
  psi /= psi.norm();
  return psi;
}

// Rank-one density matrix of the purification on H (x) K, K ~ H.
inline Matrix purify(const DensityOperator& rho) {
  const Vector psi = purification_vector(rho);
  return psi * psi.adjoint();
}

// Finite family of positive operators indexed by outcome; total trace one when
// representing the output of an instrument channel. Zero-trace components stay
// in place (the index matters) but are flagged undefined.
class HybridState {
 public:
  explicit HybridState(std::vector<Matrix> components)
      : components_(std::move(components)) {
    if (components_.empty())
      throw shape_error("HybridState: no components");
    const Eigen::Index d = components_.front().rows();
    Real total = 0.0;
    for (const Matrix& c : components_) {
      if (c.rows() != d || c.cols() != d)
        throw shape_error("HybridState: components have mixed dimensions");
      const Real herm = max_abs(c - c.adjoint());
      if (herm > tol::hermiticity)
        throw precondition_error("HybridState: component not Hermitian, residual = " +
                                 std::to_string(herm));
      Eigen::SelfAdjointEigenSolver<Matrix> solver((c + c.adjoint()) / 2.0,
                                                   Eigen::EigenvaluesOnly);
      const Real lmin = solver.eigenvalues().minCoeff();
      if (lmin < -tol::psd_drift)
        throw precondition_error("HybridState: component has negative eigenvalue " +
                                 std::to_string(lmin));
      total += c.trace().real();
    }
    if (std::abs(total - 1.0) > tol::trace_one)
      throw precondition_error("HybridState: total trace deviates from 1 by " +
                               std::to_string(std::abs(total - 1.0)));
  }

  int outcomes() const { return static_cast<int>(components_.size()); }
  int dim() const { return static_cast<int>(components_.front().rows()); }
  const Matrix& component(int i) const { return components_.at(i); }
  const std::vector<Matrix>& components() const { return components_; }
  Real component_trace(int i) const { return components_.at(i).trace().real(); }
  bool component_defined(int i) const { return component_trace(i) > tol::zero_prob; }

 private:
  std::vector<Matrix> components_;
};

}  // namespace qmeter
