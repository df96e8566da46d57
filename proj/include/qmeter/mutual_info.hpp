#pragma once

#include <cmath>
#include <vector>

#include "qmeter/channel.hpp"
#include "qmeter/structure.hpp"

namespace qmeter {

// I(rho, Phi) through the entropy-exchange form
//   H(rho) + H(Phi(rho)) - H(complementary Phi (rho)).
inline Real mutual_info_entropic(const DensityOperator& rho, const QuantumChannel& phi) {
  const QuantumChannel comp = complementary(phi);
  return von_neumann(rho) + von_neumann(apply(phi, rho.matrix())) -
         von_neumann(apply(comp, rho.matrix()));
}

// I(rho, Phi) through the relative-entropy form
//   H((Phi (x) Id)(purification) || Phi(rho) (x) second marginal),
// which stays meaningful for any state and channel.
inline ExtendedReal mutual_info_relative(const DensityOperator& rho,
                                         const QuantumChannel& phi) {
  if (phi.d_in() != rho.dim())
    throw shape_error("mutual_info_relative: dimension mismatch");
  const int d = rho.dim();
  const Matrix rho_hat = purify(rho);
  const Matrix varrho = partial_trace(rho_hat, d, d, Keep::second);
  const Matrix lhs = apply_first(phi, rho_hat, d);
  const Matrix rhs = tensor(apply(phi, rho.matrix()), varrho);
  return relative_entropy(PositiveOperator(lhs), PositiveOperator(rhs));
}

// Same quantity for a hybrid channel: each operation is extended with an
// identity factor on the purifying space and the divergence is taken
// componentwise against (Lambda rho)_i (x) second marginal. The component
// divergences factor: tracing the extended output over either tensor slot
// lands on the operation output W_i or on a diagonal matrix in the eigenbasis
// of rho, so
//   D(ext_i || W_i (x) varrho) = H(W_i) - H(ext_i) - sum_j lambda_j ln lambda_j q_ij
// with q_ij = <e_j| sum_k A_k' A_k |e_j>. Only extended entropies of positive
// operators remain. A generic divergence in the product space would instead
// have to resolve the support of W_i, whose smallest eigenvalues can sit
// arbitrarily close to the rounding floor.
inline ExtendedReal mutual_info_relative(const DensityOperator& rho,
                                         const HybridChannel& lambda) {
  if (lambda.d_in() != rho.dim())
    throw shape_error("mutual_info_relative: dimension mismatch");
  const int d = rho.dim();
  const Matrix rho_hat = purify(rho);
  const HermitianSpectrum s = eig_hermitian(rho.matrix());
  const Matrix eye = identity(d);
  Real total = 0.0;
  for (int i = 0; i < lambda.outcomes(); ++i) {
    Matrix ext = Matrix::Zero(static_cast<Eigen::Index>(lambda.d_out()) * d,
                              static_cast<Eigen::Index>(lambda.d_out()) * d);
    Matrix povm = Matrix::Zero(d, d);
    for (const Matrix& a : lambda.instrument().operation(i)) {
      const Matrix x = tensor(a, eye);
      ext += x * rho_hat * x.adjoint();
      povm += a.adjoint() * a;
    }
    const Matrix w = lambda.instrument().apply_operation(i, rho.matrix());
    Real cross = 0.0;
    for (int j = 0; j < d; ++j) {
      const Real lam = s.eigenvalues(j);
      if (lam <= tol::support_eig) continue;
      const Vector e = s.eigenvectors.col(j);
      cross += lam * std::log(lam) * e.dot(povm * e).real();
    }
    total += von_neumann(PositiveOperator(w)) - von_neumann(PositiveOperator(ext)) - cross;
  }
  return ExtendedReal::finite(detail::snap_nonneg(total));
}

enum class Route { entropic, relative };

struct MutualInfoReport {
  ExtendedReal value = ExtendedReal::finite(0.0);
  Route route = Route::relative;
  Real residual_cross_check = 0.0;
};

// Computes both routes; the relative-entropy value is reported as canonical
// and the entropic value only enters the cross-check residual.
inline MutualInfoReport mutual_info_report(const DensityOperator& rho,
                                           const QuantumChannel& phi) {
  MutualInfoReport r;
  r.value = mutual_info_relative(rho, phi);
  r.route = Route::relative;
  const Real entropic = mutual_info_entropic(rho, phi);
  r.residual_cross_check =
      r.value.is_finite() ? std::abs(r.value.value() - entropic)
                          : std::numeric_limits<Real>::infinity();
  return r;
}

// I(rho, Pi_M) evaluated blockwise. The instrument's q-c channel output is
// diagonal, so both arguments of the divergence are block diagonal in the
// outcome index and the value splits as
//   sum_i pi_i H(sigma_i / pi_i || varrho),
// with sigma_i the i-th block of (Pi (x) Id)(purification). Working in the
// eigenbasis of rho makes varrho = diag(spectrum) and keeps each block
// normalized, which is much better conditioned than one big divergence.
inline ExtendedReal qc_mutual_info(const DensityOperator& rho, const Instrument& m) {
  if (m.d_in() != rho.dim())
    throw shape_error("qc_mutual_info: dimension mismatch");
  const HermitianSpectrum s = eig_hermitian(rho.matrix());
  const int d = rho.dim();
  Matrix root = s.eigenvectors;
  Matrix varrho = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    // Rounding-scale eigenvalues are zeroed outright, not just clamped at
    // zero: a sqrt(eps) column in the root would couple the blocks into
    // directions that varrho treats as unsupported.
    const Real lam = s.eigenvalues(j) > tol::support_eig ? s.eigenvalues(j) : 0.0;
    root.col(j) *= std::sqrt(lam);
    varrho(j, j) = lam;
  }
  const PositiveOperator varrho_op(varrho);

  ExtendedReal total = ExtendedReal::finite(0.0);
  for (int i = 0; i < m.outcomes(); ++i) {
    Matrix sigma = Matrix::Zero(d, d);
    for (const Matrix& a : m.operation(i)) {
      const Matrix g = a * root;
      sigma += g.transpose() * g.conjugate();
    }
    const Real pi = sigma.trace().real();
    if (pi <= tol::zero_prob) continue;
    const ExtendedReal block = relative_entropy(PositiveOperator(sigma / pi), varrho_op);
    if (!block.is_finite()) return block;
    total += ExtendedReal::finite(pi * block.value());
  }
  return ExtendedReal::finite(detail::snap_nonneg(total.value()));
}

// Truncation variant: the second argument keeps the outcome
// distribution mu0 of the untruncated state, which adds exactly the classical
// divergence of the two outcome distributions on top of I(rho, Pi).
inline ExtendedReal qc_mutual_info_with_reference(const DensityOperator& rho,
                                                  const Instrument& m,
                                                  const RealVector& mu0) {
  if (mu0.size() != m.outcomes())
    throw shape_error("qc_mutual_info_with_reference: distribution length mismatch");
  ExtendedReal base = qc_mutual_info(rho, m);
  base += classical_relative_entropy(outcome_distribution(m, rho), mu0);
  return base;
}

// ER(rho, M) as the mutual information of the q-c channel. For efficient
// measurements this agrees with the direct posteriori-entropy definition.
inline Real entropy_reduction(const DensityOperator& rho, const KrausMeasurement& m) {
  return qc_mutual_info(rho, m).value();
}

// Instrument entry point: only efficient instruments have ER defined through
// the q-c route; anything else is redirected to entropy_reduction_direct.
inline Real entropy_reduction(const DensityOperator& rho, const Instrument& m) {
  return entropy_reduction(rho, efficient_measurement(m));
}

// I(rho, Lambda_M) through the hybrid relative-entropy route; equals
// mean_posteriori_entropy + H(rho) for efficient measurements.
inline Real lambda_mutual_info(const DensityOperator& rho, const KrausMeasurement& m) {
  return mutual_info_relative(rho, HybridChannel(Instrument(m))).value();
}

// Residual of the identity I(rho, Pi_M) + I(rho, Lambda_M) = 2 H(rho).
inline Real identity_check(const DensityOperator& rho, const KrausMeasurement& m) {
  const Real i_pi = entropy_reduction(rho, m);
  const Real i_lambda = lambda_mutual_info(rho, m);
  return std::abs(i_pi + i_lambda - 2.0 * von_neumann(rho));
}

}  // namespace qmeter
