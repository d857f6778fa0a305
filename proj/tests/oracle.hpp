#pragma once

#include <gmp.h>
#include <mpfr.h>

#include <string>
#include <vector>

// Direct high-precision orbit oracle, independent of the library engine:
// iterates x -> beta x + alpha mod 1 for the pair (x, y) and reports the first
// n with |x_n - y_n| < 2^-(prec/2). Returns -1 past max_n.
// beta is the dominant root of x^N - x^{N-1} - ... - 1, found by bisection.
// alpha = sum c_i beta^i with rational coefficient strings ("p/q").
// With digits set, the pair starts at (p - eps, p - eps - sum_{d_i = 1} beta^-i),
// p = (1 - alpha)/(beta - 1); otherwise at (0, 1).
struct OracleStart {
  std::string eps;     // rational string
  std::string digits;  // empty: start from 0 and 1
};

inline long oracle_matching_poly(int N, const std::vector<std::string>& alpha_coeffs, long max_n, mpfr_prec_t prec,
                                 const OracleStart& start = {}) {
  mpfr_t b, lo, hi, t, s, a, x, y, d, pw;
  for (mpfr_ptr v : {b, lo, hi, t, s, a, x, y, d, pw}) mpfr_init2(v, prec + 32);
  mpq_t q;
  mpq_init(q);
  mpfr_set_ui(lo, 1, MPFR_RNDN);
  mpfr_set_ui(hi, 2, MPFR_RNDN);
  for (long it = 0; it < prec + 40; ++it) {
    mpfr_add(b, lo, hi, MPFR_RNDN);
    mpfr_div_2ui(b, b, 1, MPFR_RNDN);
    // P(b) = b^N - sum b^i, Horner
    mpfr_set_ui(s, 1, MPFR_RNDN);
    for (int i = N - 1; i >= 0; --i) {
      mpfr_mul(s, s, b, MPFR_RNDN);
      mpfr_sub_ui(s, s, 1, MPFR_RNDN);
    }
    if (mpfr_sgn(s) > 0)
      mpfr_set(hi, b, MPFR_RNDN);
    else
      mpfr_set(lo, b, MPFR_RNDN);
  }
  mpfr_set(b, lo, MPFR_RNDN);
  mpfr_set_ui(a, 0, MPFR_RNDN);
  mpfr_set_ui(pw, 1, MPFR_RNDN);
  for (const auto& c : alpha_coeffs) {
    mpq_set_str(q, c.c_str(), 10);
    mpq_canonicalize(q);
    mpfr_mul_q(t, pw, q, MPFR_RNDN);
    mpfr_add(a, a, t, MPFR_RNDN);
    mpfr_mul(pw, pw, b, MPFR_RNDN);
  }
  if (start.digits.empty()) {
    mpfr_set_ui(x, 0, MPFR_RNDN);
    mpfr_set_ui(y, 1, MPFR_RNDN);
  } else {
    mpfr_ui_sub(x, 1, a, MPFR_RNDN);
    mpfr_sub_ui(t, b, 1, MPFR_RNDN);
    mpfr_div(x, x, t, MPFR_RNDN);
    mpq_set_str(q, start.eps.c_str(), 10);
    mpq_canonicalize(q);
    mpfr_sub_q(x, x, q, MPFR_RNDN);
    mpfr_set(y, x, MPFR_RNDN);
    mpfr_ui_div(pw, 1, b, MPFR_RNDN);
    mpfr_set(t, pw, MPFR_RNDN);
    for (char c : start.digits) {
      if (c == '1') mpfr_sub(y, y, t, MPFR_RNDN);
      mpfr_mul(t, t, pw, MPFR_RNDN);
    }
  }
  for (mpfr_ptr v : {b, a, x, y}) mpfr_prec_round(v, prec, MPFR_RNDN);
  for (mpfr_ptr v : {t, d}) mpfr_set_prec(v, prec);
  long result = -1;
  for (long n = 1; n <= max_n; ++n) {
    // values within 2^-(prec/2) of an integer are taken as exact breakpoint
    // hits: orbit of 0 is right-continuous (-> 0), orbit of 1 left-continuous (-> 1)
    for (mpfr_ptr v : {x, y}) {
      mpfr_mul(v, v, b, MPFR_RNDN);
      mpfr_add(v, v, a, MPFR_RNDN);
      mpfr_rint(t, v, MPFR_RNDN);
      mpfr_sub(d, v, t, MPFR_RNDN);
      mpfr_abs(d, d, MPFR_RNDN);
      bool hit = mpfr_cmp_ui_2exp(d, 1, -static_cast<long>(prec / 2)) < 0;
      if (hit) {
        mpfr_set_ui(v, v == x ? 0 : 1, MPFR_RNDN);
      } else {
        mpfr_floor(t, v);
        mpfr_sub(v, v, t, MPFR_RNDN);
      }
    }
    mpfr_sub(d, x, y, MPFR_RNDN);
    mpfr_abs(d, d, MPFR_RNDN);
    if (mpfr_cmp_ui_2exp(d, 1, -static_cast<long>(prec / 2)) < 0) {
      result = n;
      break;
    }
  }
  mpq_clear(q);
  for (mpfr_ptr v : {b, lo, hi, t, s, a, x, y, d, pw}) mpfr_clear(v);
  return result;
}

inline long oracle_matching(int N, const std::string& alpha_num, const std::string& alpha_den, long max_n,
                            mpfr_prec_t prec) {
  return oracle_matching_poly(N, {alpha_num + "/" + alpha_den}, max_n, prec);
}
