// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#include "mosur/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "mosur/error.hpp"

namespace mosur {

NormalValues std_normal(double u) {
  require(std::isfinite(u), "std_normal: argument must be finite");
  return {norm_pdf(u), norm_cdf(u)};
}

Correlation::Correlation(double value) {
  if (std::isnan(value) || std::abs(value) > 1.0 + snap_tolerance) {
    fail(ErrorCode::invalid_argument, "Correlation: value outside [-1, 1]: " + std::to_string(value));
  }
  if (value >= 1.0 - snap_tolerance) {
    value_ = 1.0;
  } else if (value <= -1.0 + snap_tolerance) {
    value_ = -1.0;
  } else {
    value_ = value;
  }
}

Correlation Correlation::clamped(double value) {
  require(!std::isnan(value), "Correlation: NaN");
  return Correlation(std::clamp(value, -1.0, 1.0));
}

namespace {

// Gauss-Legendre half-rules on [-1, 1] (nodes in (0, 1), mirrored below).
struct LegendreRule {
  int size;
  std::array<double, 10> node;
  std::array<double, 10> weight;
};

constexpr LegendreRule kRule6{
    3,
    {0.9324695142031522, 0.6612093864662647, 0.2386191860831970},
    {0.1713244923791705, 0.3607615730481384, 0.4679139345726904}};

constexpr LegendreRule kRule12{
    6,
    {0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
     0.5873179542866171, 0.3678314989981802, 0.1252334085114692},
    {0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
     0.2031674267230659, 0.2334925365383547, 0.2491470458134029}};

constexpr LegendreRule kRule20{
    10,
    {0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
     0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
     0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
     0.07652652113349733},
    {0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
     0.08327674157670475, 0.1019301198172404, 0.1181945319615184,
     0.1316886384491766, 0.1420961093183821, 0.1491729864726037,
     0.1527533871307259}};

// Upper orthant probability P[U > h, V > k] for finite h, k and |r| < 1,
// reduced to a one-dimensional integral over the correlation and evaluated
// by fixed-order Gauss-Legendre quadrature (Drezner-Wesolowsky, as refined
// by Genz). For |r| >= 0.925 the integrand is rewritten around r = +/-1 to
// remove the singularity.
double upper_orthant(double h, double k, double r) {
  constexpr double two_pi = 6.283185307179586476925286766559;
  const double abs_r = std::abs(r);
  const LegendreRule& rule =
      abs_r < 0.3 ? kRule6 : (abs_r < 0.75 ? kRule12 : kRule20);

  double hk = h * k;
  double bvn = 0.0;

  if (abs_r < 0.925) {
    const double hs = (h * h + k * k) / 2.0;
    const double asr = std::asin(r);
    for (int i = 0; i < rule.size; ++i) {
      for (double sign : {-1.0, 1.0}) {
        const double sn = std::sin(asr * (sign * rule.node[i] + 1.0) / 2.0);
        bvn += rule.weight[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      }
    }
    return bvn * asr / (2.0 * two_pi) + norm_cdf(-h) * norm_cdf(-k);
  }

  if (r < 0.0) {
    k = -k;
    hk = -hk;
  }
  if (abs_r < 1.0) {
    const double as = (1.0 - r) * (1.0 + r);
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    bvn = a * std::exp(-(bs / as + hk) / 2.0) *
          (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 +
           c * d * as * as / 5.0);
    if (hk > -160.0) {
      const double b = std::sqrt(bs);
      bvn -= std::exp(-hk / 2.0) * std::sqrt(two_pi) * norm_cdf(-b / a) * b *
             (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a /= 2.0;
    for (int i = 0; i < rule.size; ++i) {
      for (double sign : {-1.0, 1.0}) {
        const double t = a * (sign * rule.node[i] + 1.0);
        const double xs = t * t;
        const double rs = std::sqrt(1.0 - xs);
        bvn += a * rule.weight[i] * std::exp(-(bs / xs + hk) / 2.0) *
               (std::exp(-hk * xs / (2.0 * (1.0 + rs) * (1.0 + rs))) / rs -
                (1.0 + c * xs * (1.0 + d * xs)));
      }
    }
    bvn = -bvn / two_pi;
  }
  if (r > 0.0) return bvn + norm_cdf(-std::max(h, k));
  return -bvn + std::max(0.0, norm_cdf(-h) - norm_cdf(-k));
}

}  // namespace

double bvn_cdf(double h, double k, Correlation rho) {
  require(!std::isnan(h) && !std::isnan(k), "bvn_cdf: NaN limit");
  // beyond this the result is within 1e-17 of its limit
  constexpr double saturate = 8.5;
  if (std::abs(h) > saturate) h = std::copysign(kInf, h);
  if (std::abs(k) > saturate) k = std::copysign(kInf, k);
  if (h > k) std::swap(h, k);
  if (h == -kInf || k == -kInf) return 0.0;
  if (h == kInf) return norm_cdf(k);
  if (k == kInf) return norm_cdf(h);

  const double r = rho.value();
  const double ph = norm_cdf(h);
  const double pk = norm_cdf(k);
  const double upper = std::min(ph, pk);
  double p;
  if (r == 0.0) {
    p = ph * pk;
  } else if (r == 1.0) {
    p = upper;
  } else if (r == -1.0) {
    // P[U <= h, U >= -k]
    p = std::max(0.0, ph - norm_cdf(-k));
  } else {
    p = upper_orthant(-h, -k, r);
  }
  return std::clamp(p, 0.0, upper);
}

}  // namespace mosur
