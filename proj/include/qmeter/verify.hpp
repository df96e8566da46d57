#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "qmeter/fixtures.hpp"
#include "qmeter/mutual_info.hpp"

namespace qmeter {

// Result of one randomized property sweep. A property passes exactly when its
// worst observed violation stays within tolerance; the witness string pins
// the worst trial so it can be regenerated from the seed alone.
struct PropertyReport {
  std::string property;
  int trials = 0;
  Real max_violation = 0.0;
  Real tolerance = 0.0;
  bool pass = false;
  std::string witness;
};

namespace detail {

// Per-property seed streams: decorrelated from each other by a fixed salt,
// per-trial by SplitMix64, so any single trial is reproducible in isolation.
inline std::uint64_t trial_seed(const RandomModel& model, std::uint64_t salt,
                                int trial) {
  return derive_seed(splitmix64(model.seed ^ salt), static_cast<std::uint64_t>(trial));
}

inline void track(PropertyReport& report, Real violation, const std::string& witness) {
  if (violation > report.max_violation) {
    report.max_violation = violation;
    report.witness = witness;
  }
}

inline void finish(PropertyReport& report, Real base_tolerance, const RandomModel& model) {
  report.tolerance = base_tolerance * model.tolerance_scale;
  report.pass = report.max_violation <= report.tolerance;
}

inline std::string trial_tag(std::uint64_t seed, int trial, int dim, int outcomes) {
  return "trial=" + std::to_string(trial) + " seed=" + std::to_string(seed) +
         " dim=" + std::to_string(dim) + " outcomes=" + std::to_string(outcomes);
}

inline Matrix inverse_sqrt(const Matrix& s) {
  const HermitianSpectrum es = eig_hermitian(s);
  Matrix out = Matrix::Zero(s.rows(), s.cols());
  for (Eigen::Index j = 0; j < s.rows(); ++j) {
    const Real lam = es.eigenvalues(j);
    if (lam > tol::support_eig)
      out += (1.0 / std::sqrt(lam)) * es.eigenvectors.col(j) *
             es.eigenvectors.col(j).adjoint();
  }
  return out;
}

// Entrywise perturbation of every Kraus operator, pushed back onto the
// completeness manifold by the inverse square root of the perturbed gram sum.
inline KrausMeasurement perturb_measurement(const KrausMeasurement& m,
                                            const std::vector<Matrix>& directions,
                                            Real eps) {
  std::vector<Matrix> kraus;
  kraus.reserve(m.outcomes());
  for (int i = 0; i < m.outcomes(); ++i)
    kraus.push_back(m.kraus(i) + eps * directions.at(i));
  Matrix gram = Matrix::Zero(m.d_in(), m.d_in());
  for (const Matrix& w : kraus) gram += w.adjoint() * w;
  const Matrix fix = inverse_sqrt(gram);
  for (Matrix& w : kraus) w = w * fix;
  return KrausMeasurement(std::move(kraus), m.labels());
}

inline DensityOperator spectral_truncation(const HermitianSpectrum& s, int keep,
                                           Real* weight_kept) {
  const int d = static_cast<int>(s.eigenvalues.size());
  Real c = 0.0;
  for (int j = 0; j < keep; ++j) c += std::max(0.0, s.eigenvalues(j));
  Matrix m = Matrix::Zero(d, d);
  for (int j = 0; j < keep; ++j)
    m += (std::max(0.0, s.eigenvalues(j)) / c) * s.eigenvectors.col(j) *
         s.eigenvectors.col(j).adjoint();
  if (weight_kept) *weight_kept = c;
  return DensityOperator(m);
}

}  // namespace detail

// ER(rho, M) >= 0 for efficient measurements, via the direct
// posteriori-entropy route (the route that can actually go negative).
inline PropertyReport check_nonnegativity(const RandomModel& model) {
  PropertyReport report{"nonnegativity"};
  report.trials = model.trials;
  for (int t = 0; t < model.trials; ++t) {
    const std::uint64_t seed = detail::trial_seed(model, 0x4e4e, t);
    Rng rng(seed);
    const int d = rng.uniform_int(model.dim_min, model.dim_max);
    const int n = rng.uniform_int(model.outcomes_min, model.outcomes_max);
    const KrausMeasurement m = rng.measurement(d, n);
    const DensityOperator rho = rng.sample_state(d, model.ensemble);
    const Real er = entropy_reduction_direct(m, rho);
    detail::track(report, -er, detail::trial_tag(seed, t, d, n));
  }
  detail::finish(report, 1e-9, model);
  return report;
}

// Sensitivity control: the same sweep against the reducible fixture, which
// sends pure states to the maximally mixed state. Its ER on pure inputs is
// -ln 2, so this report is expected to FAIL; a pass would mean the harness
// lost its ability to see violations.
inline PropertyReport check_nonnegativity_reducible(const RandomModel& model) {
  PropertyReport report{"nonnegativity[reducible-fixture]"};
  report.trials = model.trials;
  const Instrument fixture = fixtures::reducible_instrument();
  for (int t = 0; t < model.trials; ++t) {
    const std::uint64_t seed = detail::trial_seed(model, 0xdead, t);
    Rng rng(seed);
    const DensityOperator rho = rng.pure_state(2);
    const Real er = entropy_reduction_direct(fixture, rho);
    detail::track(report, -er, detail::trial_tag(seed, t, 2, 1));
  }
  detail::finish(report, 1e-9, model);
  return report;
}

inline PropertyReport check_concavity(const RandomModel& model) {
  PropertyReport report{"concavity"};
  report.trials = model.trials;
  for (int t = 0; t < model.trials; ++t) {
    const std::uint64_t seed = detail::trial_seed(model, 0xc0c4, t);
    Rng rng(seed);
    const int d = rng.uniform_int(model.dim_min, model.dim_max);
    const int n = rng.uniform_int(model.outcomes_min, model.outcomes_max);
    const KrausMeasurement m = rng.measurement(d, n);
    const DensityOperator rho1 = rng.sample_state(d, model.ensemble);
    const DensityOperator rho2 = rng.sample_state(d, model.ensemble);
    const Real er1 = entropy_reduction_direct(m, rho1);
    const Real er2 = entropy_reduction_direct(m, rho2);
    for (int k = 1; k <= 9; ++k) {
      const Real lam = 0.1 * k;
      const DensityOperator mix(lam * rho1.matrix() + (1.0 - lam) * rho2.matrix());
      const Real er_mix = entropy_reduction_direct(m, mix);
      detail::track(report, lam * er1 + (1.0 - lam) * er2 - er_mix,
                    detail::trial_tag(seed, t, d, n) + " lambda=" + format_real(lam, 3));
    }
  }
  detail::finish(report, 1e-8, model);
  return report;
}

// ER(rho, N after M) >= ER(rho, M): refining an efficient measurement by a
// second one can only extract more.
inline PropertyReport check_monotonicity(const RandomModel& model) {
  PropertyReport report{"monotonicity"};
  report.trials = model.trials;
  for (int t = 0; t < model.trials; ++t) {
    const std::uint64_t seed = detail::trial_seed(model, 0x303, t);
    Rng rng(seed);
    const int d = rng.uniform_int(model.dim_min, model.dim_max);
    const int n1 = rng.uniform_int(std::max(1, model.outcomes_min), model.outcomes_max);
    const int n2 = rng.uniform_int(std::max(1, model.outcomes_min), model.outcomes_max);
    const KrausMeasurement m = rng.measurement(d, n1);
    const KrausMeasurement refine = rng.measurement(d, n2);
    const DensityOperator rho = rng.sample_state(d, model.ensemble);
    const Real er_m = entropy_reduction_direct(m, rho);
    const Real er_composed = entropy_reduction_direct(compose(refine, m), rho);
    detail::track(report, er_m - er_composed,
                  detail::trial_tag(seed, t, d, n1 * n2));
  }
  detail::finish(report, 1e-8, model);
  return report;
}

// ER(omega, M (x) N) <= ER(omega_H, M) + ER(omega_K, N) for joint states,
// cycling product, separable-mixture and entangled inputs.
inline PropertyReport check_subadditivity(const RandomModel& model) {
  PropertyReport report{"subadditivity"};
  report.trials = model.trials;
  for (int t = 0; t < model.trials; ++t) {
    const std::uint64_t seed = detail::trial_seed(model, 0x5abd, t);
    Rng rng(seed);
    const int d1 = rng.uniform_int(2, std::max(2, std::min(3, model.dim_max)));
    const int d2 = 2;
    const int n1 = rng.uniform_int(1, std::min(3, std::max(1, model.outcomes_max)));
    const int n2 = rng.uniform_int(1, std::min(3, std::max(1, model.outcomes_max)));
    const KrausMeasurement m1 = rng.measurement(d1, n1);
    const KrausMeasurement m2 = rng.measurement(d2, n2);

    Matrix joint;
    const char* kind;
    switch (t % 3) {
      case 0: {
        kind = "product";
        joint = tensor(rng.sample_state(d1, model.ensemble).matrix(),
                       rng.sample_state(d2, model.ensemble).matrix());
        break;
      }
      case 1: {
        kind = "separable";
        const RealVector p = rng.simplex(3);
        joint = Matrix::Zero(d1 * d2, d1 * d2);
        for (int j = 0; j < 3; ++j)
          joint += p(j) * tensor(rng.sample_state(d1, model.ensemble).matrix(),
                                 rng.sample_state(d2, model.ensemble).matrix());
        break;
      }
      default: {
        kind = "entangled";
        joint = rng.sample_state(d1 * d2, model.ensemble).matrix();
        break;
      }
    }
    const DensityOperator omega(joint);
    const DensityOperator omega1(partial_trace(joint, d1, d2, Keep::first));
    const DensityOperator omega2(partial_trace(joint, d1, d2, Keep::second));
    const Real lhs = entropy_reduction_direct(tensor_measurement(m1, m2), omega);
    const Real rhs = entropy_reduction_direct(m1, omega1) +
                     entropy_reduction_direct(m2, omega2);
    detail::track(report, lhs - rhs,
                  detail::trial_tag(seed, t, d1 * d2, n1 * n2) + " kind=" + kind);
  }
  detail::finish(report, 1e-8, model);
  return report;
}

// Joint continuity of ER and the mean posteriori entropy: perturb the state
// along a convex path and the measurement entrywise (re-normalized), and
// require the residuals to fall by at least 5x per perturbation decade from
// 1e-2 down to 1e-4. Several independent perturbation directions guard
// against accidental first-order cancellation at a probe point.
inline PropertyReport check_continuity(const RandomModel& model) {
  PropertyReport report{"continuity"};
  const int fixtures_count = std::min(model.trials, 20);
  report.trials = fixtures_count;
  constexpr int kDirections = 3;
  constexpr Real eps[3] = {1e-2, 1e-3, 1e-4};
  for (int t = 0; t < fixtures_count; ++t) {
    const std::uint64_t seed = detail::trial_seed(model, 0xc027, t);
    Rng rng(seed);
    const int d = rng.uniform_int(model.dim_min, model.dim_max);
    const int n = rng.uniform_int(2, std::max(2, model.outcomes_max));
    // Blend with the maximally mixed state so the fixture sits far from rank
    // deficiency, where ER is smooth.
    const DensityOperator rho(0.5 * rng.ginibre_state(d).matrix() +
                              0.5 * Matrix::Identity(d, d) / d);
    const KrausMeasurement m = rng.measurement(d, n);
    const Real er0 = entropy_reduction_direct(m, rho);
    const Real mh0 = mean_posteriori_entropy(m, rho);

    Real er_res[3] = {0, 0, 0};
    Real mh_res[3] = {0, 0, 0};
    for (int dir = 0; dir < kDirections; ++dir) {
      const DensityOperator target = rng.ginibre_state(d);
      std::vector<Matrix> kraus_dir;
      kraus_dir.reserve(n);
      for (int i = 0; i < n; ++i) kraus_dir.push_back(rng.ginibre(d, d));
      for (int e = 0; e < 3; ++e) {
        const DensityOperator rho_eps((1.0 - eps[e]) * rho.matrix() +
                                      eps[e] * target.matrix());
        const KrausMeasurement m_eps = detail::perturb_measurement(m, kraus_dir, eps[e]);
        er_res[e] = std::max(er_res[e],
                             std::abs(entropy_reduction_direct(m_eps, rho_eps) - er0));
        mh_res[e] = std::max(mh_res[e],
                             std::abs(mean_posteriori_entropy(m_eps, rho_eps) - mh0));
      }
    }
    for (int e = 0; e + 1 < 3; ++e) {
      detail::track(report, er_res[e + 1] - std::max(er_res[e] / 5.0, 1e-12),
                    detail::trial_tag(seed, t, d, n) + " quantity=ER step=" +
                        format_real(eps[e], 3));
      detail::track(report, mh_res[e + 1] - std::max(mh_res[e] / 5.0, 1e-12),
                    detail::trial_tag(seed, t, d, n) + " quantity=meanH step=" +
                        format_real(eps[e], 3));
    }
  }
  detail::finish(report, 0.0, model);
  return report;
}

// Spectral truncation: rho_n keeps the n largest eigenvalues of rho_0
// renormalized by c_n. The mixed-purification divergence I_n (second argument
// built from the untruncated outcome distribution) must satisfy
// 0 <= I_n - ER(rho_n) <= -ln c_n, and ER(rho_n) must return to ER(rho_0) at
// n = d. The n = d equality carries a 10x stricter tolerance and is folded
// into the same report by scaling its residual.
inline PropertyReport check_truncation(const RandomModel& model) {
  PropertyReport report{"truncation"};
  const int fixtures_count = std::min(model.trials, 20);
  report.trials = fixtures_count;
  const int d = std::max(4, model.dim_max);
  for (int t = 0; t < fixtures_count; ++t) {
    const std::uint64_t seed = detail::trial_seed(model, 0x7255, t);
    Rng rng(seed);
    const int n_out = rng.uniform_int(2, std::max(2, model.outcomes_max));
    const DensityOperator rho0 = rng.ginibre_state(d);
    const KrausMeasurement m = rng.measurement(d, n_out);
    const RealVector mu0 = outcome_distribution(m, rho0);
    const Real er0 = entropy_reduction_direct(m, rho0);
    const HermitianSpectrum s = eig_hermitian(rho0.matrix());
    for (int keep = 1; keep <= d; ++keep) {
      Real c = 0.0;
      const DensityOperator rho_n = detail::spectral_truncation(s, keep, &c);
      const Real er_n = entropy_reduction_direct(m, rho_n);
      const ExtendedReal i_n = qc_mutual_info_with_reference(rho_n, m, mu0);
      const std::string tag =
          detail::trial_tag(seed, t, d, n_out) + " n=" + std::to_string(keep);
      if (!i_n.is_finite()) {
        detail::track(report, std::numeric_limits<Real>::infinity(), tag);
        continue;
      }
      const Real gap = i_n.value() - er_n;
      detail::track(report, -gap, tag + " side=lower");
      detail::track(report, gap - (-std::log(c)), tag + " side=upper");
      if (keep == d)
        detail::track(report, 10.0 * std::abs(er_n - er0), tag + " side=restore");
    }
  }
  detail::finish(report, 1e-9, model);
  return report;
}

// |ER_direct - I(rho, Pi)| <= sum_i pi_i H of the posteriori states of
// M (x) Id on the purification. Every third trial uses an efficient
// instrument, where the right side degenerates to zero and the bound becomes
// the exact-equality statement.
inline PropertyReport check_er_bound_general(const RandomModel& model) {
  PropertyReport report{"er_bound_general"};
  report.trials = model.trials;
  for (int t = 0; t < model.trials; ++t) {
    const std::uint64_t seed = detail::trial_seed(model, 0xe2b0, t);
    Rng rng(seed);
    const int d = rng.uniform_int(model.dim_min, model.dim_max);
    const int n = rng.uniform_int(1, std::min(3, std::max(1, model.outcomes_max)));
    const bool efficient_trial = t % 3 == 2;
    const Instrument inst = efficient_trial
                                ? Instrument(rng.measurement(d, n))
                                : rng.instrument(d, n, 3, /*force_multi=*/true);
    const DensityOperator rho = rng.sample_state(d, model.ensemble);

    const Real er = entropy_reduction_direct(inst, rho);
    const Real i_pi = qc_mutual_info(rho, inst).value();

    const Matrix rho_hat = purify(rho);
    const Matrix eye = identity(d);
    Real bound = 0.0;
    for (int i = 0; i < inst.outcomes(); ++i) {
      Matrix tau = Matrix::Zero(static_cast<Eigen::Index>(inst.d_out()) * d,
                                static_cast<Eigen::Index>(inst.d_out()) * d);
      for (const Matrix& a : inst.operation(i)) {
        const Matrix ext = tensor(a, eye);
        tau += ext * rho_hat * ext.adjoint();
      }
      if (tau.trace().real() <= tol::zero_prob) continue;
      bound += von_neumann(PositiveOperator(tau));
    }
    detail::track(report, std::abs(er - i_pi) - bound,
                  detail::trial_tag(seed, t, d, n) +
                      (efficient_trial ? " class=efficient" : " class=general"));
  }
  detail::finish(report, 1e-8, model);
  return report;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "nonnegativity", "concavity",  "monotonicity",     "subadditivity",
      "continuity",    "truncation", "er_bound_general"};
  return names;
}

// Runs one named suite or all of them; unknown names raise shape_error so the
// CLI can map them to a usage error.
inline std::vector<PropertyReport> run_suite(const std::string& name,
                                             const RandomModel& model) {
  std::vector<PropertyReport> out;
  const auto want = [&](const char* n) { return name == "all" || name == n; };
  if (want("nonnegativity")) out.push_back(check_nonnegativity(model));
  if (want("concavity")) out.push_back(check_concavity(model));
  if (want("monotonicity")) out.push_back(check_monotonicity(model));
  if (want("subadditivity")) out.push_back(check_subadditivity(model));
  if (want("continuity")) out.push_back(check_continuity(model));
  if (want("truncation")) out.push_back(check_truncation(model));
  if (want("er_bound_general")) out.push_back(check_er_bound_general(model));
  if (out.empty()) throw shape_error("unknown verification suite: " + name);
  return out;
}

}  // namespace qmeter
