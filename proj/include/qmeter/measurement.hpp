#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qmeter/entropy.hpp"

namespace qmeter {

namespace detail {

inline std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
  return labels;
}

inline Real frobenius(const Matrix& a) { return a.norm(); }

}  // namespace detail

// Efficient discrete measurement: one Kraus operator V_i per outcome with
// sum_i V_i' V_i = I. Operators may be rectangular (d_out x d_in). Operators
// of negligible norm are dropped together with their outcome.
class KrausMeasurement {
 public:
  explicit KrausMeasurement(std::vector<Matrix> kraus, std::vector<std::string> labels = {}) {
    if (kraus.empty()) throw shape_error("KrausMeasurement: no Kraus operators");
    if (labels.empty()) labels = detail::default_labels(kraus.size());
    if (labels.size() != kraus.size())
      throw shape_error("KrausMeasurement: label count mismatch");
    const Eigen::Index rows = kraus.front().rows();
    const Eigen::Index cols = kraus.front().cols();
    for (std::size_t i = 0; i < kraus.size(); ++i) {
      if (kraus[i].rows() != rows || kraus[i].cols() != cols)
        throw shape_error("KrausMeasurement: mixed Kraus shapes");
      if (detail::frobenius(kraus[i]) <= tol::kraus_drop) continue;
      kraus_.push_back(std::move(kraus[i]));
      labels_.push_back(std::move(labels[i]));
    }
    if (kraus_.empty())
      throw precondition_error("KrausMeasurement: all Kraus operators negligible");
    Matrix gram = Matrix::Zero(cols, cols);
    for (const Matrix& v : kraus_) gram += v.adjoint() * v;
    const Real residual = max_abs(gram - identity(static_cast<int>(cols)));
    if (residual > tol::completeness)
      throw precondition_error("KrausMeasurement: completeness residual " +
                               std::to_string(residual));
  }

  int outcomes() const { return static_cast<int>(kraus_.size()); }
  int d_in() const { return static_cast<int>(kraus_.front().cols()); }
  int d_out() const { return static_cast<int>(kraus_.front().rows()); }
  const Matrix& kraus(int i) const { return kraus_.at(i); }
  const std::vector<Matrix>& kraus_list() const { return kraus_; }
  const std::string& label(int i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<Matrix> kraus_;
  std::vector<std::string> labels_;
};

// General discrete instrument: operation i acts as rho -> sum_k A_{i,k} rho
// A_{i,k}', jointly trace preserving. A KrausMeasurement converts implicitly
// (each operator becomes a single-Kraus operation).
class Instrument {
 public:
  explicit Instrument(std::vector<std::vector<Matrix>> operations,
                      std::vector<std::string> labels = {}) {
    if (operations.empty()) throw shape_error("Instrument: no operations");
    if (labels.empty()) labels = detail::default_labels(operations.size());
    if (labels.size() != operations.size())
      throw shape_error("Instrument: label count mismatch");
    Eigen::Index rows = -1, cols = -1;
    for (std::size_t i = 0; i < operations.size(); ++i) {
      std::vector<Matrix> kept;
      for (Matrix& a : operations[i]) {
        if (rows < 0) { rows = a.rows(); cols = a.cols(); }
        if (a.rows() != rows || a.cols() != cols)
          throw shape_error("Instrument: mixed Kraus shapes");
        if (detail::frobenius(a) > tol::kraus_drop) kept.push_back(std::move(a));
      }
      if (kept.empty()) continue;
      operations_.push_back(std::move(kept));
      labels_.push_back(std::move(labels[i]));
    }
    if (operations_.empty())
      throw precondition_error("Instrument: all operations negligible");
    Matrix gram = Matrix::Zero(cols, cols);
    for (const auto& op : operations_)
      for (const Matrix& a : op) gram += a.adjoint() * a;
    const Real residual = max_abs(gram - identity(static_cast<int>(cols)));
    if (residual > tol::completeness)
      throw precondition_error("Instrument: completeness residual " +
                               std::to_string(residual));
  }

  Instrument(const KrausMeasurement& m)  // NOLINT: implicit by design
      : Instrument(wrap(m.kraus_list()), m.labels()) {}

  int outcomes() const { return static_cast<int>(operations_.size()); }
  int d_in() const { return static_cast<int>(operations_.front().front().cols()); }
  int d_out() const { return static_cast<int>(operations_.front().front().rows()); }
  const std::vector<Matrix>& operation(int i) const { return operations_.at(i); }
  const std::vector<std::vector<Matrix>>& operations() const { return operations_; }
  const std::string& label(int i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }

  // Unnormalized output of operation i.
  Matrix apply_operation(int i, const Matrix& rho) const {
    Matrix out = Matrix::Zero(d_out(), d_out());
    for (const Matrix& a : operations_.at(i)) out += a * rho * a.adjoint();
    return out;
  }

 private:
  static std::vector<std::vector<Matrix>> wrap(const std::vector<Matrix>& kraus) {
    std::vector<std::vector<Matrix>> ops;
    ops.reserve(kraus.size());
    for (const Matrix& v : kraus) ops.push_back({v});
    return ops;
  }

  std::vector<std::vector<Matrix>> operations_;
  std::vector<std::string> labels_;
};

// Posteriori family {pi_i, rho_i}; rho_i is undefined at outcomes whose
// probability is numerically zero.
struct PosterioriEnsemble {
  RealVector probabilities;
  std::vector<std::optional<DensityOperator>> states;
  std::vector<std::string> labels;

  int outcomes() const { return static_cast<int>(states.size()); }
  bool defined(int i) const { return states.at(i).has_value(); }
};

inline void require_dimension_match(const Instrument& m, const DensityOperator& rho) {
  if (m.d_in() != rho.dim())
    throw shape_error("instrument expects dimension " + std::to_string(m.d_in()) +
                      ", state has " + std::to_string(rho.dim()));
}

inline RealVector outcome_distribution(const Instrument& m, const DensityOperator& rho) {
  require_dimension_match(m, rho);
  RealVector pi(m.outcomes());
  for (int i = 0; i < m.outcomes(); ++i)
    pi(i) = std::max(0.0, m.apply_operation(i, rho.matrix()).trace().real());
  return pi;
}

inline PosterioriEnsemble posteriori(const Instrument& m, const DensityOperator& rho) {
  require_dimension_match(m, rho);
  PosterioriEnsemble e;
  e.probabilities.resize(m.outcomes());
  e.states.resize(m.outcomes());
  e.labels = m.labels();
  for (int i = 0; i < m.outcomes(); ++i) {
    const Matrix tau = m.apply_operation(i, rho.matrix());
    const Real pi = std::max(0.0, tau.trace().real());
    e.probabilities(i) = pi;
    if (pi > tol::zero_prob)
      e.states[i] = DensityOperator(tau / tau.trace().real());
  }
  return e;
}

// sum_i pi_i H(rho_i), computed as sum_i H(tau_i) for the unnormalized
// operation outputs tau_i: both agree exactly by H(c A) = c H(A), and the
// unnormalized form avoids amplifying round-off at tiny probabilities.
inline Real mean_posteriori_entropy(const Instrument& m, const DensityOperator& rho) {
  require_dimension_match(m, rho);
  Real total = 0.0;
  for (int i = 0; i < m.outcomes(); ++i) {
    const Matrix tau = m.apply_operation(i, rho.matrix());
    if (tau.trace().real() <= tol::zero_prob) continue;
    total += von_neumann(PositiveOperator(tau));
  }
  return total;
}

// ER(rho, M) = H(rho) - sum_i pi_i H(rho_i). May be negative for instruments
// outside the irreducible class.
inline Real entropy_reduction_direct(const Instrument& m, const DensityOperator& rho) {
  return von_neumann(rho) - mean_posteriori_entropy(m, rho);
}

// Sequential composition: run `first`, then `second`; Kraus family
// {U_j V_i} with pair labels "i×j" tracking both outcomes.
inline KrausMeasurement compose(const KrausMeasurement& second, const KrausMeasurement& first) {
  if (second.d_in() != first.d_out())
    throw shape_error("compose: inner dimensions disagree");
  std::vector<Matrix> kraus;
  std::vector<std::string> labels;
  for (int i = 0; i < first.outcomes(); ++i)
    for (int j = 0; j < second.outcomes(); ++j) {
      kraus.push_back(second.kraus(j) * first.kraus(i));
      labels.push_back(first.label(i) + "\u00d7" + second.label(j));
    }
  return KrausMeasurement(std::move(kraus), std::move(labels));
}

// Parallel composition on the tensor product space: family {V_i (x) U_j}.
inline KrausMeasurement tensor_measurement(const KrausMeasurement& m, const KrausMeasurement& n) {
  std::vector<Matrix> kraus;
  std::vector<std::string> labels;
  for (int i = 0; i < m.outcomes(); ++i)
    for (int j = 0; j < n.outcomes(); ++j) {
      kraus.push_back(tensor(m.kraus(i), n.kraus(j)));
      labels.push_back(m.label(i) + "\u00d7" + n.label(j));
    }
  return KrausMeasurement(std::move(kraus), std::move(labels));
}

}  // namespace qmeter
