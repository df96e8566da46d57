#pragma once

#include <complex>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qmeter {

using Real = double;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Tolerances used by the library contracts. Algebraic identities are expected
// to hold to ~1e-11 at d <= 32 with double-precision eigensolves; the cutoffs
// below leave margin between genuine structure and round-off.
namespace tol {
inline constexpr Real hermiticity = 1e-8;     // ||A - A'||_max precondition
inline constexpr Real eig_residual = 1e-10;   // ||A - U L U'||_max
inline constexpr Real psd_drift = 1e-10;      // eigenvalues in [-psd_drift, 0) clamp to 0
inline constexpr Real trace_one = 1e-10;      // |Tr rho - 1|
inline constexpr Real completeness = 1e-10;   // ||sum K'K - I||_max
inline constexpr Real support_eig = 1e-10;    // eigenvalue cutoff for support membership
inline constexpr Real support_leak = 1e-8;    // norm of eigenvector component outside support
inline constexpr Real zero_prob = 1e-12;      // outcome treated as impossible below this
inline constexpr Real kraus_drop = 1e-12;     // operator norm below which a Kraus op is dropped
inline constexpr Real collinear_sine = 1e-8;  // sine distance for collinearity / parallelism
inline constexpr Real rank_cut = 1e-10;       // singular value cutoff for numerical rank
inline constexpr Real spectrum_match = 1e-8;  // sorted-spectrum distance for isospectrality
inline constexpr Real certificate = 1e-8;     // ||P V'V P - pi P||_max for the zero-ER certificate
inline constexpr Real zero_er = 1e-7;         // |ER| below this counts as zero
}  // namespace tol

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dimension / index-set mismatch between operands.
struct shape_error : error {
  using error::error;
};

// Input violates a documented precondition (non-Hermitian, non-PSD, bad trace, ...).
struct precondition_error : error {
  using error::error;
};

// Operation requires an efficient measurement but was given something else.
struct classification_error : error {
  using error::error;
};

// Two internal routes that must agree did not; indicates a bug, not bad input.
struct consistency_error : error {
  using error::error;
};

// Document parsing / validation failure (CLI exit code 3).
struct schema_error : error {
  using error::error;
};

// 12 significant digits: enough to audit every tolerance in this library,
// and stable across runs for report diffing.
inline std::string format_real(Real v, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

enum class InfinityReason { none, support_violation, classical_divergence };

inline const char* to_string(InfinityReason r) {
  switch (r) {
    case InfinityReason::support_violation: return "support-violation";
    case InfinityReason::classical_divergence: return "classical-divergence";
    default: return "none";
  }
}

// Value of a relative entropy: a finite nonnegative real or +infinity with a
// reason tag telling which support condition failed.
class ExtendedReal {
 public:
  ExtendedReal() = default;
  static ExtendedReal finite(Real v) {
    ExtendedReal e;
    e.value_ = v;
    return e;
  }
  static ExtendedReal infinite(InfinityReason r) {
    ExtendedReal e;
    e.finite_ = false;
    e.reason_ = r;
    e.value_ = std::numeric_limits<Real>::infinity();
    return e;
  }

  bool is_finite() const { return finite_; }
  // +infinity when not finite.
  Real value() const { return value_; }
  InfinityReason reason() const { return reason_; }

  ExtendedReal& operator+=(const ExtendedReal& o) {
    if (!finite_) return *this;
    if (!o.finite_) {
      *this = o;
      return *this;
    }
    value_ += o.value_;
    return *this;
  }
  friend ExtendedReal operator+(ExtendedReal a, const ExtendedReal& b) {
    a += b;
    return a;
  }

 private:
  Real value_ = 0.0;
  bool finite_ = true;
  InfinityReason reason_ = InfinityReason::none;
};

}  // namespace qmeter
