#pragma once

#include <gmpxx.h>

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "betamatch/bigfloat.hpp"
#include "betamatch/error.hpp"

namespace betamatch {

inline constexpr unsigned kPrecisionCapBits = 4096;

// Q(beta), beta the dominant real root of P(x) = x^N - sum a_i x^i.
// The root enclosure is the only mutable state; it is guarded by a mutex.
class BetaField {
 public:
  struct Enclosure {
    mpq_class lo, hi;
    unsigned bits;  // hi - lo <= 2^-bits
  };

  // a = (a_0..a_{N-1})
  explicit BetaField(std::vector<mpz_class> a);

  int degree() const { return static_cast<int>(a_.size()); }
  const std::vector<mpz_class>& coeffs() const { return a_; }
  bool pisot_verified() const { return pisot_; }
  bool is_multinacci() const { return multinacci_; }
  bool is_rational() const { return degree() == 1; }
  double approx() const { return approx_; }
  const std::vector<double>& power_approx() const { return pow_d_; }
  // largest |conjugate| other than beta, from the certified disks
  double max_conjugate_modulus() const { return max_conj_; }

  Enclosure enclosure() const;
  // shrink until hi - lo <= 2^-bits; throws PrecisionExhausted past the cap
  Enclosure refine(unsigned bits) const;
  BigFloat value(mpfr_prec_t prec) const;

  // P evaluated at a rational
  mpq_class eval_poly(const mpq_class& t) const;
  std::string describe() const;

  bool same_as(const BetaField& o) const { return this == &o || a_ == o.a_; }

 private:
  std::vector<mpz_class> a_;
  bool multinacci_ = false;
  bool pisot_ = false;
  double approx_ = 0;
  double max_conj_ = 0;
  std::vector<double> pow_d_;
  mutable std::mutex mu_;
  mutable Enclosure enc_;
  unsigned cap_ = kPrecisionCapBits;

  void isolate();
  void verify_pisot();
  void bisect_to(unsigned bits) const;  // mu_ held
};

using FieldPtr = std::shared_ptr<const BetaField>;

FieldPtr make_multinacci(int n);
// coefficients of the monic polynomial, low to high: c_0..c_{N-1}, 1
// (so x^2 - 3x + 1 is {1, -3, 1})
FieldPtr make_pisot(const std::vector<long>& monic_coeffs);
FieldPtr make_pisot(const std::vector<mpz_class>& monic_coeffs);
// degree-1 carrier so that rational parameters share the exact machinery
FieldPtr rational_field();

class FieldElement {
 public:
  FieldElement() = default;
  explicit FieldElement(FieldPtr f);
  FieldElement(FieldPtr f, std::vector<mpq_class> c);
  FieldElement(FieldPtr f, const mpq_class& q);
  FieldElement(FieldPtr f, long k) : FieldElement(f, mpq_class(k)) {}

  static FieldElement generator(FieldPtr f);
  // beta^k for any integer k
  static FieldElement beta_power(FieldPtr f, int k);

  const FieldPtr& field() const { return f_; }
  const std::vector<mpq_class>& coeffs() const { return c_; }
  bool is_zero() const;
  bool is_rational() const;  // only c_0 nonzero

  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement& operator/=(const FieldElement& o) { return *this *= o.inverse(); }
  FieldElement& operator+=(long k);
  FieldElement& operator-=(long k);

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }
  friend FieldElement operator+(FieldElement a, long k) { return a += k; }
  friend FieldElement operator-(FieldElement a, long k) { return a -= k; }
  friend FieldElement operator-(long k, const FieldElement& b) { return -b + k; }
  friend FieldElement operator+(long k, FieldElement b) { return b += k; }
  friend FieldElement operator*(long k, const FieldElement& b) { return b * k; }
  friend FieldElement operator*(FieldElement a, long k);
  FieldElement operator-() const;

  FieldElement times_generator() const;
  FieldElement inverse() const;

  // certified sign of the real number
  int sign() const;
  double to_double() const;
  BigFloat to_bigfloat(mpfr_prec_t prec) const;

  friend bool operator==(const FieldElement& a, const FieldElement& b);
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }
  friend bool operator==(const FieldElement& a, long k) { return (a - k).is_zero(); }
  friend int cmp(const FieldElement& a, const FieldElement& b) { return (a - b).sign(); }
  friend int cmp(const FieldElement& a, long k) { return (a - k).sign(); }
  friend bool operator<(const FieldElement& a, const FieldElement& b) { return cmp(a, b) < 0; }
  friend bool operator>(const FieldElement& a, const FieldElement& b) { return cmp(a, b) > 0; }
  friend bool operator<=(const FieldElement& a, const FieldElement& b) { return cmp(a, b) <= 0; }
  friend bool operator>=(const FieldElement& a, const FieldElement& b) { return cmp(a, b) >= 0; }
  friend bool operator<(const FieldElement& a, long k) { return cmp(a, k) < 0; }
  friend bool operator>(const FieldElement& a, long k) { return cmp(a, k) > 0; }
  friend bool operator<=(const FieldElement& a, long k) { return cmp(a, k) <= 0; }
  friend bool operator>=(const FieldElement& a, long k) { return cmp(a, k) >= 0; }

  long floor_long() const;
  FieldElement abs() const { return sign() < 0 ? -*this : *this; }

  // "c0 + c1*beta + ..." with rationals
  std::string str() const;

 private:
  FieldPtr f_;
  std::vector<mpq_class> c_;

  void check_same(const FieldElement& o) const;
};

inline int sign(const FieldElement& a) { return a.sign(); }
inline double to_float(const FieldElement& a) { return a.to_double(); }
inline FieldElement inverse(const FieldElement& a) { return a.inverse(); }

// embed an element of Q (degree-1 field) into f
FieldElement embed(const FieldElement& a, const FieldPtr& f);

}  // namespace betamatch
