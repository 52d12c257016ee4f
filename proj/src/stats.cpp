// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

#include "soundsmooth/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/beta.hpp>

#include "soundsmooth/common.hpp"

namespace soundsmooth::stats {
namespace {

constexpr long double kSqrtPi = 1.772453850905516027298167483341145183L;
constexpr long double kSqrt2 = 1.414213562373095048801688724209698079L;

// erf by its Maclaurin series; used for 0 <= z < 2.5.
long double erf_series(long double z) {
  const long double z2 = z * z;
  long double power = z;  // (-1)^n z^(2n+1) / n!
  long double sum = z;
  for (int n = 1; n < 200; ++n) {
    power *= -z2 / n;
    const long double term = power / (2 * n + 1);
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
  }
  return 2.0L / kSqrtPi * sum;
}

// erfc by Laplace's continued fraction (modified Lentz); used for z >= 2.5.
long double erfc_fraction(long double z) {
  constexpr long double tiny = 1e-300L;
  // erfc(z) = exp(-z^2)/sqrt(pi) * 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
  long double f = z;
  long double c = z;
  long double d = 0.0L;
  for (int n = 1; n < 500; ++n) {
    const long double a = n / 2.0L;
    d = z + a * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = z + a / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0L / d;
    const long double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0L) < 1e-21L) break;
  }
  return std::exp(-z * z) / kSqrtPi / f;
}

// erfc for z >= 0.
long double erfc_nonneg(long double z) {
  return z < 2.5L ? 1.0L - erf_series(z) : erfc_fraction(z);
}

long double normal_pdf(long double x) {
  return std::exp(-0.5L * x * x) / (kSqrt2 * kSqrtPi);
}

// Lower tail Phi(x) for x <= 0, with full relative accuracy.
long double lower_tail(long double x) { return 0.5L * erfc_nonneg(-x / kSqrt2); }

// Acklam's rational approximation to the normal quantile (relative error < 1.15e-9).
double acklam(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01, -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double low = 0.02425;
  if (p < low) {
    const double q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > 1 - low) {
    const double q = std::sqrt(-2 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

// Quantile for p <= 1/2 (result <= 0), refined by Halley steps on the lower tail.
double lower_quantile(double p) {
  long double x = acklam(p);
  for (int i = 0; i < 3; ++i) {
    const long double err = lower_tail(x) - p;
    const long double u = err / normal_pdf(x);
    x -= u / (1.0L + 0.5L * x * u);
  }
  return static_cast<double>(x);
}

}  // namespace

double normal_cdf(double x) {
  const long double lx = x;
  if (lx <= 0) return static_cast<double>(lower_tail(lx));
  return static_cast<double>(1.0L - lower_tail(-lx));
}

double phi_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::Domain, "phi_inv: p must lie in (0, 1)");
  if (p == 0.5) return 0.0;
  // 1 - p is exact for p >= 1/2, so the upper half reuses the lower tail.
  return p < 0.5 ? lower_quantile(p) : -lower_quantile(1.0 - p);
}

void ConfidenceSpec::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "sample count must be positive");
  if (successes > n) throw Error(ErrorKind::InvalidArgument, "successes exceed sample count");
}

double hoeffding_lower(const ConfidenceSpec& spec) {
  spec.validate();
  const double n = static_cast<double>(spec.n);
  const double p = static_cast<double>(spec.successes) / n - std::sqrt(-std::log(spec.alpha) / n / 2.0);
  return std::clamp(p, 0.0, 1.0);
}

double clopper_pearson_lower(const ConfidenceSpec& spec) {
  spec.validate();
  if (spec.successes == 0) return 0.0;
  const double a = static_cast<double>(spec.successes);
  const double b = static_cast<double>(spec.n - spec.successes + 1);
  // P[Bin(n, p) >= s] = I_p(s, n - s + 1), increasing in p.
  double lo = 0.0;
  double hi = a / static_cast<double>(spec.n);
  for (int i = 0; i < 1100; ++i) {
    const double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    if (boost::math::ibeta(a, b, mid) < spec.alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

std::optional<double> certified_radius(double p_lower, double sigma) {
  if (!(p_lower > 0.5)) return std::nullopt;
  if (p_lower >= 1.0) return std::numeric_limits<double>::infinity();
  return sigma * phi_inv(p_lower);
}

}  // namespace soundsmooth::stats
