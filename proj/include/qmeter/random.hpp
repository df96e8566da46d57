#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qmeter/channel.hpp"

namespace qmeter {

// SplitMix64 step; used to spread a master seed into independent per-trial
// seeds so trials stay reproducible regardless of evaluation order.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 1));
}

// Which a-priori states a random sweep draws.
enum class StateEnsemble { haar_pure, ginibre_mixed, rank_constrained };

// Sweep configuration shared by the verification harness and the CLI.
struct RandomModel {
  std::uint64_t seed = 0;
  int dim_min = 2;
  int dim_max = 6;
  int outcomes_min = 1;
  int outcomes_max = 6;
  StateEnsemble ensemble = StateEnsemble::ginibre_mixed;
  int trials = 200;
  Real tolerance_scale = 1.0;
};

// Deterministic generator for the random objects the sweeps need. All Haar
// sampling goes through QR of a complex Gaussian matrix with the R-diagonal
// phase fix, so sliced Kraus families are complete to orthonormalization
// accuracy.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  Real gauss() { return normal_(gen_); }
  Complex cgauss() { return Complex(gauss(), gauss()); }

  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen_);
  }

  Real uniform_real(Real lo = 0.0, Real hi = 1.0) {
    return std::uniform_real_distribution<Real>(lo, hi)(gen_);
  }

  Matrix ginibre(int rows, int cols) {
    Matrix g(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) g(i, j) = cgauss();
    return g;
  }

  Matrix haar_isometry(int rows, int cols) {
    if (rows < cols) throw shape_error("haar_isometry: rows < cols");
    const Matrix g = ginibre(rows, cols);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
    const Matrix r = qr.matrixQR().topRows(cols).template triangularView<Eigen::Upper>();
    for (int j = 0; j < cols; ++j) {
      const Complex rjj = r(j, j);
      const Real mag = std::abs(rjj);
      q.col(j) *= (mag > 0) ? (rjj / mag) : Complex(1, 0);
    }
    return q;
  }

  Matrix haar_unitary(int d) { return haar_isometry(d, d); }

  Vector pure_vector(int d) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = cgauss();
    return v / v.norm();
  }

  DensityOperator pure_state(int d) {
    const Vector v = pure_vector(d);
    return DensityOperator(v * v.adjoint());
  }

  DensityOperator ginibre_state(int d, int rank = 0) {
    if (rank <= 0) rank = d;
    const Matrix g = ginibre(d, rank);
    Matrix m = g * g.adjoint();
    return DensityOperator(m / m.trace().real());
  }

  RealVector simplex(int n) {
    RealVector p(n);
    for (int i = 0; i < n; ++i) p(i) = -std::log(uniform_real(1e-12, 1.0));
    return p / p.sum();
  }

  // Efficient measurement: one d x d Kraus block per outcome, sliced from a
  // single Haar isometry so completeness is exact up to QR accuracy.
  KrausMeasurement measurement(int d, int n) {
    const Matrix v = haar_isometry(n * d, d);
    std::vector<Matrix> kraus;
    kraus.reserve(n);
    for (int i = 0; i < n; ++i) kraus.push_back(v.middleRows(i * d, d));
    return KrausMeasurement(std::move(kraus));
  }

  KrausMeasurement unitary_mixture(int d, int n) {
    const RealVector p = simplex(n);
    std::vector<Matrix> kraus;
    kraus.reserve(n);
    for (int i = 0; i < n; ++i)
      kraus.push_back(std::sqrt(p(i)) * haar_unitary(d));
    return KrausMeasurement(std::move(kraus));
  }

  QuantumChannel channel(int d_in, int d_out, int kraus_count) {
    if (kraus_count * d_out < d_in)
      throw shape_error("channel: not enough rows for an isometry");
    const Matrix v = haar_isometry(kraus_count * d_out, d_in);
    std::vector<Matrix> kraus;
    kraus.reserve(kraus_count);
    for (int k = 0; k < kraus_count; ++k)
      kraus.push_back(v.middleRows(k * d_out, d_out));
    return QuantumChannel(std::move(kraus));
  }

  // Instrument with the requested Kraus count per operation.
  Instrument instrument(int d, const std::vector<int>& kraus_counts) {
    int total = 0;
    for (int k : kraus_counts) total += k;
    const Matrix v = haar_isometry(total * d, d);
    std::vector<std::vector<Matrix>> ops;
    ops.reserve(kraus_counts.size());
    int row = 0;
    for (int k : kraus_counts) {
      std::vector<Matrix> op;
      for (int j = 0; j < k; ++j, row += d) op.push_back(v.middleRows(row, d));
      ops.push_back(std::move(op));
    }
    return Instrument(std::move(ops));
  }

  // Random instrument with 1..max_kraus operators per operation; force_multi
  // guarantees at least one genuinely multi-Kraus operation, which makes the
  // result non-efficient with probability one (Haar slices are never
  // collinear).
  Instrument instrument(int d, int n, int max_kraus, bool force_multi = false) {
    std::vector<int> counts(n);
    for (int i = 0; i < n; ++i) counts[i] = uniform_int(1, max_kraus);
    if (force_multi && max_kraus >= 2) {
      bool multi = false;
      for (int c : counts) multi = multi || c >= 2;
      if (!multi) counts[uniform_int(0, n - 1)] = 2;
    }
    return instrument(d, counts);
  }

  DensityOperator sample_state(int d, StateEnsemble ensemble) {
    switch (ensemble) {
      case StateEnsemble::haar_pure: return pure_state(d);
      case StateEnsemble::rank_constrained: return ginibre_state(d, uniform_int(1, d));
      case StateEnsemble::ginibre_mixed: default: return ginibre_state(d);
    }
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<Real> normal_;
};

}  // namespace qmeter
