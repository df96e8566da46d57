#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qmeter/random.hpp"

namespace qmeter {

// Merge collinear Kraus operators: a group {lambda_k A} acts on states like
// the single operator sqrt(sum |lambda_k|^2) A, so each group collapses to a
// rescaled copy of its largest member. Collinearity is judged by the sine
// distance of unit-normalized vectorizations.
inline std::vector<Matrix> reduce_collinear(const std::vector<Matrix>& kraus) {
  struct Group {
    Vector direction;      // unit vectorization of the first member
    Real weight_sq = 0.0;  // sum of squared Frobenius norms
    Matrix largest;
    Real largest_norm = 0.0;
  };
  std::vector<Group> groups;
  for (const Matrix& a : kraus) {
    const Real norm = a.norm();
    if (norm <= tol::kraus_drop) continue;
    const Vector dir = vectorize(a) / norm;
    Group* home = nullptr;
    for (Group& g : groups)
      if (sine_distance(dir, g.direction) <= tol::collinear_sine) { home = &g; break; }
    if (!home) {
      groups.push_back(Group{dir, 0.0, a, 0.0});
      home = &groups.back();
    }
    home->weight_sq += norm * norm;
    if (norm > home->largest_norm) {
      home->largest = a;
      home->largest_norm = norm;
    }
  }
  std::vector<Matrix> out;
  out.reserve(groups.size());
  for (const Group& g : groups)
    out.push_back((std::sqrt(g.weight_sq) / g.largest_norm) * g.largest);
  return out;
}

struct EfficiencyResult {
  bool efficient = false;
  // Kraus count of each operation after collinearity reduction.
  std::vector<int> kraus_rank;
  std::vector<std::vector<Matrix>> reduced_operations;
};

// An instrument is efficient exactly when every operation collapses to a
// single Kraus operator once collinear duplicates are merged.
inline EfficiencyResult is_efficient(const Instrument& m) {
  EfficiencyResult r;
  r.efficient = true;
  for (int i = 0; i < m.outcomes(); ++i) {
    std::vector<Matrix> reduced = reduce_collinear(m.operation(i));
    r.kraus_rank.push_back(static_cast<int>(reduced.size()));
    r.efficient = r.efficient && reduced.size() == 1;
    r.reduced_operations.push_back(std::move(reduced));
  }
  return r;
}

// Builds the measurement {V_i} underlying an efficient instrument.
inline KrausMeasurement efficient_measurement(const Instrument& m) {
  EfficiencyResult eff = is_efficient(m);
  if (!eff.efficient)
    throw classification_error(
        "instrument is not efficient; use entropy_reduction_direct for the "
        "posteriori-entropy value");
  std::vector<Matrix> kraus;
  kraus.reserve(m.outcomes());
  for (auto& op : eff.reduced_operations) kraus.push_back(std::move(op.front()));
  return KrausMeasurement(std::move(kraus), m.labels());
}

// Operation whose nonzero Kraus operators share a one-dimensional range:
// A_k = |psi><omega_k|. psi is unit with a fixed phase; functionals are the
// omega_k (zero vectors standing in for dropped negligible operators).
struct CommonRange {
  Vector psi;
  std::vector<Vector> functionals;
};

namespace detail {
inline Vector fix_phase(Vector v) {
  int arg = 0;
  Real best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > best) { best = std::abs(v(i)); arg = static_cast<int>(i); }
  if (best > 0) {
    const Complex z = v(arg) / best;
    v *= std::conj(z);
  }
  return v;
}
}  // namespace detail

inline std::optional<CommonRange> common_range_decomposition(
    const std::vector<Matrix>& op_kraus) {
  std::optional<Vector> psi;
  std::vector<Vector> functionals;
  bool any = false;
  for (const Matrix& a : op_kraus) {
    if (a.norm() <= tol::kraus_drop) {
      functionals.push_back(Vector::Zero(a.cols()));
      continue;
    }
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
    if (svd.singularValues().size() > 1 && svd.singularValues()(1) > tol::rank_cut)
      return std::nullopt;
    const Vector u = svd.matrixU().col(0);
    if (!psi) {
      psi = detail::fix_phase(u);
      any = true;
    } else if (sine_distance(u, *psi) > tol::collinear_sine) {
      return std::nullopt;
    }
    functionals.push_back(a.adjoint() * *psi);
  }
  if (!any) return std::nullopt;
  return CommonRange{*psi, std::move(functionals)};
}

struct ClassificationReport {
  bool efficient = false;
  bool irreducible = false;
  std::vector<int> kraus_rank;
  // Common-range evidence per operation, when one exists.
  std::vector<std::optional<CommonRange>> ranges;
  // Worst posteriori purity seen over the Monte Carlo pure-state sweep.
  Real monte_carlo_purity = 1.0;
  int monte_carlo_trials = 0;
};

// Structural irreducibility verdict: every operation must either be a single
// Kraus operator (after collinearity reduction) or admit a common-range
// decomposition. The verdict is cross-validated against posteriori purity on
// Haar-random pure inputs; a disagreement is raised as a consistency error
// because it would mean the two characterizations diverged numerically.
inline ClassificationReport is_irreducible(const Instrument& m, int trials = 64,
                                           std::uint64_t seed = 0x5eedc1a55ULL) {
  ClassificationReport report;
  EfficiencyResult eff = is_efficient(m);
  report.efficient = eff.efficient;
  report.kraus_rank = eff.kraus_rank;
  report.irreducible = true;
  for (int i = 0; i < m.outcomes(); ++i) {
    report.ranges.push_back(common_range_decomposition(m.operation(i)));
    const bool ok = eff.kraus_rank[i] == 1 || report.ranges.back().has_value();
    report.irreducible = report.irreducible && ok;
  }

  if (trials > 0) {
    Rng rng(seed);
    Real worst = 1.0;
    for (int t = 0; t < trials; ++t) {
      const PosterioriEnsemble e = posteriori(m, rng.pure_state(m.d_in()));
      for (int i = 0; i < e.outcomes(); ++i)
        if (e.defined(i)) worst = std::min(worst, purity(*e.states[i]));
    }
    report.monte_carlo_purity = worst;
    report.monte_carlo_trials = trials;
    const bool mc_verdict = worst >= 1.0 - 1e-8;
    if (mc_verdict != report.irreducible)
      throw consistency_error(
          "irreducibility: structural verdict " +
          std::string(report.irreducible ? "true" : "false") +
          " contradicts Monte Carlo purity " + std::to_string(worst));
  }
  return report;
}

struct CertificateResult {
  bool zero_er = false;
  Real max_residual = 0.0;
};

// Zero-entropy-reduction certificate: with P the support projector of rho,
// ER(rho, M) vanishes exactly when P V_i' V_i P = pi_i(rho) P for every
// outcome with nonzero probability.
inline CertificateResult zero_er_certificate(const KrausMeasurement& m,
                                             const DensityOperator& rho) {
  if (m.d_in() != rho.dim())
    throw shape_error("zero_er_certificate: dimension mismatch");
  const Matrix p = support_projector(rho);
  CertificateResult r;
  for (int i = 0; i < m.outcomes(); ++i) {
    const Matrix v = m.kraus(i);
    const Real pi = std::max(0.0, (v * rho.matrix() * v.adjoint()).trace().real());
    if (pi <= tol::zero_prob) continue;
    const Matrix lhs = p * v.adjoint() * v * p;
    r.max_residual = std::max(r.max_residual, max_abs(lhs - pi * p));
  }
  r.zero_er = r.max_residual <= tol::certificate;
  return r;
}

inline CertificateResult zero_er_certificate(const Instrument& m,
                                             const DensityOperator& rho) {
  return zero_er_certificate(efficient_measurement(m), rho);
}

// Rigidity of an ensemble: if every member is isospectral to the average, the
// members cannot actually differ (strict convexity of Tr rho^2). Returns the
// isospectrality verdict; callers may then assert entrywise equality.
inline bool ensemble_rigidity(const std::vector<std::pair<Real, DensityOperator>>& ensemble) {
  if (ensemble.empty()) throw shape_error("ensemble_rigidity: empty ensemble");
  Real total = 0.0;
  const int d = ensemble.front().second.dim();
  Matrix avg = Matrix::Zero(d, d);
  for (const auto& [w, state] : ensemble) {
    if (w < 0) throw precondition_error("ensemble_rigidity: negative weight");
    if (state.dim() != d) throw shape_error("ensemble_rigidity: mixed dimensions");
    total += w;
    avg += w * state.matrix();
  }
  if (std::abs(total - 1.0) > tol::trace_one)
    throw precondition_error("ensemble_rigidity: weights sum to " + std::to_string(total));
  const PositiveOperator mean(avg);
  for (const auto& [w, state] : ensemble) {
    if (w <= tol::zero_prob) continue;
    if (!isospectral(state, mean)) return false;
  }
  return true;
}

}  // namespace qmeter
