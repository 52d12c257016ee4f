// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef SOUNDSMOOTH_STATS_HPP
#define SOUNDSMOOTH_STATS_HPP

#include <cstdint>
#include <optional>

namespace soundsmooth::stats {

/// Standard normal CDF. Evaluated in extended precision; absolute error well
/// below 1e-15 over the whole line.
double normal_cdf(double x);

/// Standard normal quantile. Throws Error(Domain) unless 0 < p < 1.
double phi_inv(double p);

struct ConfidenceSpec {
  double alpha = 0.001;          // failure probability, in (0, 1)
  std::uint64_t n = 0;           // sample count
  std::uint64_t successes = 0;   // <= n

  void validate() const;
};

/// successes/n - sqrt(ln(1/alpha) / (2n)), clamped to [0, 1].
double hoeffding_lower(const ConfidenceSpec& spec);

/// One-sided Clopper-Pearson lower bound: the p with P[Bin(n, p) >= successes] = alpha,
/// located by bisection on the regularized incomplete beta function and rounded down.
double clopper_pearson_lower(const ConfidenceSpec& spec);

/// sigma * phi_inv(p_lower) when p_lower > 1/2; nullopt (abstain) otherwise.
std::optional<double> certified_radius(double p_lower, double sigma);

}  // namespace soundsmooth::stats

#endif  // SOUNDSMOOTH_STATS_HPP
