// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

// Small MPFR helpers used as an independent reference in tests.

#ifndef SOUNDSMOOTH_TESTS_MPFR_ORACLE_HPP
#define SOUNDSMOOTH_TESTS_MPFR_ORACLE_HPP

#include <gmp.h>
#include <mpfr.h>

#include <cstdint>
#include <string>

namespace oracle {

class Real {
 public:
  explicit Real(mpfr_prec_t prec = 256) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  Real(const Real&) = delete;
  Real& operator=(const Real&) = delete;
  ~Real() { mpfr_clear(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

/// Phi(num / den) at the given precision, rounded in direction rnd.
inline void normal_cdf_ratio(Real& out, const std::string& num, const std::string& den, mpfr_rnd_t rnd,
                             mpfr_prec_t prec = 256) {
  Real x(prec + 64), d(prec + 64), s(prec + 64);
  mpfr_set_str(x.get(), num.c_str(), 10, MPFR_RNDN);
  mpfr_set_str(d.get(), den.c_str(), 10, MPFR_RNDN);
  mpfr_div(x.get(), x.get(), d.get(), MPFR_RNDN);
  mpfr_sqrt_ui(s.get(), 2, MPFR_RNDN);
  mpfr_div(x.get(), x.get(), s.get(), MPFR_RNDN);
  mpfr_neg(x.get(), x.get(), MPFR_RNDN);
  mpfr_erfc(out.get(), x.get(), rnd);
  mpfr_div_2ui(out.get(), out.get(), 1, rnd);
}

/// Phi(x) for a double x, correctly rounded to double.
inline double normal_cdf(double x) {
  Real t(320), s(320), r(320);
  mpfr_set_d(t.get(), x, MPFR_RNDN);
  mpfr_sqrt_ui(s.get(), 2, MPFR_RNDN);
  mpfr_div(t.get(), t.get(), s.get(), MPFR_RNDN);
  mpfr_neg(t.get(), t.get(), MPFR_RNDN);
  mpfr_erfc(r.get(), t.get(), MPFR_RNDN);
  mpfr_div_2ui(r.get(), r.get(), 1, MPFR_RNDN);
  return r.to_double();
}

/// P[Bin(n, p) >= k], summed in 256-bit precision.
inline double binomial_upper_tail(std::uint64_t n, std::uint64_t k, double p) {
  Real sum, term, q, pp, c;
  mpfr_set_zero(sum.get(), 1);
  mpfr_set_d(pp.get(), p, MPFR_RNDN);
  mpfr_ui_sub(q.get(), 1, pp.get(), MPFR_RNDN);
  mpz_t binom;
  mpz_init(binom);
  for (std::uint64_t i = k; i <= n; ++i) {
    mpz_bin_uiui(binom, n, i);
    mpfr_set_z(c.get(), binom, MPFR_RNDN);
    mpfr_pow_ui(term.get(), pp.get(), i, MPFR_RNDN);
    mpfr_mul(c.get(), c.get(), term.get(), MPFR_RNDN);
    mpfr_pow_ui(term.get(), q.get(), n - i, MPFR_RNDN);
    mpfr_mul(c.get(), c.get(), term.get(), MPFR_RNDN);
    mpfr_add(sum.get(), sum.get(), c.get(), MPFR_RNDN);
  }
  mpz_clear(binom);
  return sum.to_double();
}

}  // namespace oracle

#endif  // SOUNDSMOOTH_TESTS_MPFR_ORACLE_HPP
