#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace betamatch {

// mpfr_t with its own precision. Binary ops round to the larger of the two
// operand precisions, so no global default is touched (thread safe).
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = 53) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  BigFloat(double x, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  BigFloat(long x, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, x, MPFR_RNDN);
  }
  BigFloat(const mpq_class& q, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
  }
  BigFloat(const BigFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  std::string str(int digits = 20) const;
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  BigFloat& operator+=(const BigFloat& o);
  BigFloat& operator-=(const BigFloat& o);
  BigFloat& operator*=(const BigFloat& o);
  BigFloat& operator/=(const BigFloat& o);
  BigFloat& operator+=(long k) {
    mpfr_add_si(v_, v_, k, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator-=(long k) {
    mpfr_sub_si(v_, v_, k, MPFR_RNDN);
    return *this;
  }

  friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
  friend BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }
  friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
  friend BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }
  friend BigFloat operator+(BigFloat a, long k) { return a += k; }
  friend BigFloat operator-(BigFloat a, long k) { return a -= k; }
  friend BigFloat operator-(long k, const BigFloat& b) {
    BigFloat r(b.precision());
    mpfr_si_sub(r.v_, k, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator*(BigFloat a, long k) {
    mpfr_mul_si(a.v_, a.v_, k, MPFR_RNDN);
    return a;
  }
  BigFloat operator-() const {
    BigFloat r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
  }

  friend int cmp(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_); }
  friend int cmp(const BigFloat& a, long k) { return mpfr_cmp_si(a.v_, k); }
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return cmp(a, b) < 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return cmp(a, b) > 0; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return cmp(a, b) <= 0; }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return cmp(a, b) >= 0; }
  friend bool operator==(const BigFloat& a, const BigFloat& b) { return cmp(a, b) == 0; }
  friend bool operator<(const BigFloat& a, long k) { return cmp(a, k) < 0; }
  friend bool operator>(const BigFloat& a, long k) { return cmp(a, k) > 0; }
  friend bool operator<=(const BigFloat& a, long k) { return cmp(a, k) <= 0; }
  friend bool operator>=(const BigFloat& a, long k) { return cmp(a, k) >= 0; }
  friend bool operator==(const BigFloat& a, long k) { return cmp(a, k) == 0; }

  // largest integer <= x, exact
  long floor_long() const;
  BigFloat abs() const {
    BigFloat r(*this);
    mpfr_abs(r.v_, r.v_, MPFR_RNDN);
    return r;
  }

 private:
  mpfr_t v_;
};

}  // namespace betamatch
