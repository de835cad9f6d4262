// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#pragma once

#include <cmath>
#include <limits>

namespace mosur {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct NormalValues {
  double pdf;
  double cdf;
};

/// Standard normal density and distribution function at a finite `u`.
/// Throws Error(invalid_argument) for NaN or infinite input.
NormalValues std_normal(double u);

/// Standard normal CDF; accepts +/-infinity.
inline double norm_cdf(double u) { return 0.5 * std::erfc(-u * M_SQRT1_2); }

inline double norm_pdf(double u) {
  constexpr double inv_sqrt_2pi = 0.398942280401432677939946059934;
  return inv_sqrt_2pi * std::exp(-0.5 * u * u);
}

/// Correlation coefficient in [-1, 1]. Values within 1e-12 of +/-1 are
/// snapped onto the boundary; anything further outside is rejected.
class Correlation {
 public:
  static constexpr double snap_tolerance = 1e-12;

  explicit Correlation(double value);

  /// Clamps `value` into [-1, 1] before snapping. For coefficients produced by
  /// floating-point arithmetic that may overshoot the boundary slightly.
  static Correlation clamped(double value);

  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// P[U <= h, V <= k] for a standard bivariate normal pair with correlation
/// `rho`. Infinite limits are accepted.
double bvn_cdf(double h, double k, Correlation rho);

}  // namespace mosur
