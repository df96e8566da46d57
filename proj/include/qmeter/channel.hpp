#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qmeter/measurement.hpp"

namespace qmeter {

// Completely positive trace-preserving map in Kraus form. Kraus operators may
// be rectangular; negligible ones (operator norm below the drop threshold) are
// removed at construction so they cannot seed spurious zero-probability
// outcomes downstream.
class QuantumChannel {
 public:
  explicit QuantumChannel(std::vector<Matrix> kraus) {
    if (kraus.empty()) throw shape_error("QuantumChannel: no Kraus operators");
    const Eigen::Index rows = kraus.front().rows();
    const Eigen::Index cols = kraus.front().cols();
    for (Matrix& k : kraus) {
      if (k.rows() != rows || k.cols() != cols)
        throw shape_error("QuantumChannel: mixed Kraus shapes");
      if (operator_norm(k) > tol::kraus_drop) kraus_.push_back(std::move(k));
    }
    if (kraus_.empty())
      throw precondition_error("QuantumChannel: all Kraus operators negligible");
    Matrix gram = Matrix::Zero(cols, cols);
    for (const Matrix& k : kraus_) gram += k.adjoint() * k;
    const Real residual = max_abs(gram - identity(static_cast<int>(cols)));
    if (residual > tol::completeness)
      throw precondition_error("QuantumChannel: completeness residual " +
                               std::to_string(residual));
  }

  int d_in() const { return static_cast<int>(kraus_.front().cols()); }
  int d_out() const { return static_cast<int>(kraus_.front().rows()); }
  int kraus_count() const { return static_cast<int>(kraus_.size()); }
  const Matrix& kraus(int k) const { return kraus_.at(k); }
  const std::vector<Matrix>& kraus_list() const { return kraus_; }

 private:
  std::vector<Matrix> kraus_;
};

inline Matrix apply(const QuantumChannel& phi, const Matrix& a) {
  if (a.rows() != phi.d_in() || a.cols() != phi.d_in())
    throw shape_error("apply: operator dimension mismatch");
  Matrix out = Matrix::Zero(phi.d_out(), phi.d_out());
  for (const Matrix& k : phi.kraus_list()) out += k * a * k.adjoint();
  return out;
}

inline DensityOperator apply(const QuantumChannel& phi, const DensityOperator& rho) {
  return DensityOperator(apply(phi, rho.matrix()));
}

// Action of phi (x) Id on an operator over H_in (x) K with dim K = dim_second.
inline Matrix apply_first(const QuantumChannel& phi, const Matrix& a, int dim_second) {
  const Eigen::Index expected = static_cast<Eigen::Index>(phi.d_in()) * dim_second;
  if (a.rows() != expected || a.cols() != expected)
    throw shape_error("apply_first: bipartite dimension mismatch");
  const Matrix eye = identity(dim_second);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(phi.d_out()) * dim_second,
                            static_cast<Eigen::Index>(phi.d_out()) * dim_second);
  for (const Matrix& k : phi.kraus_list()) {
    const Matrix ext = tensor(k, eye);
    out += ext * a * ext.adjoint();
  }
  return out;
}

// Stinespring isometry V: H_in -> H_out (x) H_env with V|phi> =
// sum_k (K_k|phi>) (x) |k>; the environment basis follows Kraus-list order.
inline Matrix stinespring_isometry(const QuantumChannel& phi) {
  const int m = phi.kraus_count();
  Matrix v = Matrix::Zero(static_cast<Eigen::Index>(phi.d_out()) * m, phi.d_in());
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < phi.d_out(); ++j)
      for (int i = 0; i < phi.d_in(); ++i)
        v(static_cast<Eigen::Index>(j) * m + k, i) = phi.kraus(k)(j, i);
  return v;
}

// Complementary channel: traces out the original output of the dilation,
// leaving the environment. Kraus operators W_j (one per output-basis index)
// have entries W_j(k, i) = K_k(j, i); completeness is inherited.
inline QuantumChannel complementary(const QuantumChannel& phi) {
  std::vector<Matrix> w(phi.d_out(), Matrix::Zero(phi.kraus_count(), phi.d_in()));
  for (int j = 0; j < phi.d_out(); ++j)
    for (int k = 0; k < phi.kraus_count(); ++k)
      for (int i = 0; i < phi.d_in(); ++i)
        w[j](k, i) = phi.kraus(k)(j, i);
  return QuantumChannel(std::move(w));
}

// Quantum incarnation of the outcome statistics: maps rho to the diagonal
// state diag(pi_1(rho), ..., pi_n(rho)) on an n-dim space. One Kraus operator
// |i><row j of A_{i,k}| per (outcome, Kraus, row) triple, enumerated
// outcome-major so that for an efficient measurement the complementary
// channel output is block diagonal with blocks V_i rho V_i'.
inline QuantumChannel qc_channel(const Instrument& m) {
  std::vector<Matrix> kraus;
  for (int i = 0; i < m.outcomes(); ++i)
    for (const Matrix& a : m.operation(i))
      for (int j = 0; j < m.d_out(); ++j) {
        Matrix b = Matrix::Zero(m.outcomes(), m.d_in());
        b.row(i) = a.row(j);
        kraus.push_back(std::move(b));
      }
  return QuantumChannel(std::move(kraus));
}

// Instrument viewed as one channel into the hybrid (classical-quantum) space:
// outcome i keeps its own Kraus family.
class HybridChannel {
 public:
  explicit HybridChannel(std::vector<std::vector<Matrix>> operations,
                         std::vector<std::string> labels = {})
      : instrument_(std::move(operations), std::move(labels)) {}
  explicit HybridChannel(Instrument m) : instrument_(std::move(m)) {}

  int outcomes() const { return instrument_.outcomes(); }
  int d_in() const { return instrument_.d_in(); }
  int d_out() const { return instrument_.d_out(); }
  const Instrument& instrument() const { return instrument_; }

 private:
  Instrument instrument_;
};

inline HybridChannel instrument_channel(const Instrument& m) { return HybridChannel(m); }

inline HybridState apply_hybrid(const HybridChannel& l, const DensityOperator& rho) {
  require_dimension_match(l.instrument(), rho);
  std::vector<Matrix> components;
  components.reserve(l.outcomes());
  for (int i = 0; i < l.outcomes(); ++i)
    components.push_back(l.instrument().apply_operation(i, rho.matrix()));
  return HybridState(std::move(components));
}

// Choi matrix of a Kraus-listed operation (trace non-increasing allowed):
// (Phi (x) Id)|Omega><Omega| with the unnormalized |Omega> = sum_j |j>|j>.
// Equals sum_k vec(K_k) vec(K_k)' for row-major vectorization.
inline Matrix choi_operation(const std::vector<Matrix>& kraus) {
  if (kraus.empty()) throw shape_error("choi_operation: no Kraus operators");
  const Eigen::Index n = kraus.front().rows() * kraus.front().cols();
  Matrix c = Matrix::Zero(n, n);
  for (const Matrix& k : kraus) {
    if (k.rows() != kraus.front().rows() || k.cols() != kraus.front().cols())
      throw shape_error("choi_operation: mixed Kraus shapes");
    const Vector v = vectorize(k);
    c += v * v.adjoint();
  }
  return c;
}

inline Matrix choi(const QuantumChannel& phi) { return choi_operation(phi.kraus_list()); }

}  // namespace qmeter
