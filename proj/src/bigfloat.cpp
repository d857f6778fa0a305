#include "betamatch/bigfloat.hpp"
#include "betamatch/error.hpp"

#include <algorithm>
#include <vector>

namespace betamatch {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidArgument: return "invalid argument";
    case Errc::Parse: return "parse error";
    case Errc::NoDominantRoot: return "no dominant root";
    case Errc::NotPisot: return "not Pisot";
    case Errc::PrecisionExhausted: return "precision exhausted";
    case Errc::OutOfDomain: return "out of domain";
    case Errc::WindowUnderflow: return "window underflow";
    case Errc::Fragmentation: return "fragmentation";
    case Errc::Inconsistent: return "inconsistent";
    case Errc::Io: return "io error";
  }
  return "error";
}

namespace {
// keep the wider precision when combining
void widen(mpfr_ptr a, mpfr_srcptr b) {
  if (mpfr_get_prec(b) > mpfr_get_prec(a)) mpfr_prec_round(a, mpfr_get_prec(b), MPFR_RNDN);
}
}  // namespace

BigFloat& BigFloat::operator+=(const BigFloat& o) {
  widen(v_, o.v_);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator-=(const BigFloat& o) {
  widen(v_, o.v_);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator*=(const BigFloat& o) {
  widen(v_, o.v_);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator/=(const BigFloat& o) {
  widen(v_, o.v_);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

long BigFloat::floor_long() const {
  mpfr_t t;
  mpfr_init2(t, std::max<mpfr_prec_t>(precision(), 64));
  mpfr_floor(t, v_);
  long r = mpfr_get_si(t, MPFR_RNDN);
  mpfr_clear(t);
  return r;
}

std::string BigFloat::str(int digits) const {
  std::vector<char> buf(digits + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  return buf.data();
}

}  // namespace betamatch
