#pragma once

#include <cmath>

#include "qmeter/operators.hpp"

namespace qmeter {

// Entropy of a positive operator, extended beyond unit trace so that
// H(c A) = c H(A) + eta-correction folds in automatically:
//   H(A) = sum_i eta(lambda_i) - eta(Tr A).
// For a state this is the usual von Neumann entropy in nats.
inline Real von_neumann(const PositiveOperator& a) {
  Real h = 0.0;
  for (int j = 0; j < a.dim(); ++j) h += eta(a.spectrum()(j));
  return h - eta(a.trace());
}

inline Real von_neumann(const Matrix& m) { return von_neumann(PositiveOperator(m)); }

// Same extension for nonnegative vectors; coincides with the Shannon entropy
// on probability distributions.
inline Real shannon(const RealVector& p) {
  Real h = 0.0;
  Real total = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    h += eta(p(i));
    total += std::max(0.0, p(i));
  }
  return h - eta(total);
}

namespace detail {
inline Real snap_nonneg(Real v) { return (v < 0 && v > -1e-9) ? 0.0 : v; }
}  // namespace detail

// Divergence of nonnegative vectors:
//   sum_i a_i ln(a_i / b_i) + sum b - sum a,
// infinite when some a_i is supported where b_i vanishes. Nonnegative for any
// pair of nonnegative vectors; tiny negative round-off is snapped to zero.
inline ExtendedReal classical_relative_entropy(const RealVector& a, const RealVector& b) {
  if (a.size() != b.size())
    throw shape_error("classical_relative_entropy: length mismatch");
  Real sum = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const Real ai = std::max(0.0, a(i));
    const Real bi = std::max(0.0, b(i));
    if (ai <= tol::zero_prob) {
      sum += bi;
      continue;
    }
    if (bi <= tol::zero_prob)
      return ExtendedReal::infinite(InfinityReason::classical_divergence);
    sum += ai * (std::log(ai) - std::log(bi)) + bi - ai;
  }
  return ExtendedReal::finite(detail::snap_nonneg(sum));
}

// Relative entropy of positive operators, evaluated in the eigenbasis of the
// first argument:
//   H(A||B) = sum_i lambda_i ln lambda_i
//           - sum_{i,j} lambda_i |<f_j|u_i>|^2 ln mu_j + Tr B - Tr A,
// and +infinity when the support of A leaks out of the support of B. The leak
// test is per eigenvector of A: ||(1 - P_B) u_i|| must stay below a fixed
// threshold for every eigenvalue above the spectral cutoff.
inline ExtendedReal relative_entropy(const PositiveOperator& a, const PositiveOperator& b) {
  if (a.dim() != b.dim())
    throw shape_error("relative_entropy: dimension mismatch");
  const HermitianSpectrum sa = eig_hermitian(a.matrix());
  const HermitianSpectrum sb = eig_hermitian(b.matrix());
  const int d = a.dim();

  Real sum = 0.0;
  for (int i = 0; i < d; ++i) {
    const Real lam = sa.eigenvalues(i);
    if (lam <= tol::support_eig) continue;
    sum += lam * std::log(lam);
    Real leak_sq = 0.0;
    for (int j = 0; j < d; ++j) {
      const Real mu = sb.eigenvalues(j);
      const Real overlap = std::norm(sb.eigenvectors.col(j).dot(sa.eigenvectors.col(i)));
      if (mu > tol::support_eig)
        sum -= lam * overlap * std::log(mu);
      else
        leak_sq += overlap;
    }
    if (std::sqrt(std::max(0.0, leak_sq)) > tol::support_leak)
      return ExtendedReal::infinite(InfinityReason::support_violation);
  }
  sum += b.trace() - a.trace();
  return ExtendedReal::finite(detail::snap_nonneg(sum));
}

inline ExtendedReal relative_entropy(const Matrix& a, const Matrix& b) {
  return relative_entropy(PositiveOperator(a), PositiveOperator(b));
}

// Componentwise divergence of hybrid (classical-quantum) families:
//   H({A_i} || {B_i}) = sum_i H(A_i || B_i),
// with the positive-operator extension handling unequal component traces.
inline ExtendedReal hybrid_relative_entropy(const HybridState& a, const HybridState& b) {
  if (a.outcomes() != b.outcomes())
    throw shape_error("hybrid_relative_entropy: outcome count mismatch");
  if (a.dim() != b.dim())
    throw shape_error("hybrid_relative_entropy: dimension mismatch");
  ExtendedReal total = ExtendedReal::finite(0.0);
  for (int i = 0; i < a.outcomes(); ++i) {
    total += relative_entropy(PositiveOperator(a.component(i)),
                              PositiveOperator(b.component(i)));
    if (!total.is_finite()) return total;
  }
  if (total.is_finite())
    return ExtendedReal::finite(detail::snap_nonneg(total.value()));
  return total;
}

}  // namespace qmeter
