#include "betamatch/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace betamatch {

namespace {

using QPoly = std::vector<mpq_class>;  // low to high

void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int deg(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

mpq_class eval_q(const QPoly& p, const mpq_class& t) {
  mpq_class r = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * t + *it;
  return r;
}

// remainder and quotient of a / b, b nonzero
void divmod(QPoly a, const QPoly& b, QPoly& q, QPoly& r) {
  trim(a);
  int db = deg(b);
  q.assign(std::max(0, deg(a) - db + 1), 0);
  const mpq_class& lead = b.back();
  while (deg(a) >= db && !a.empty()) {
    int shift = deg(a) - db;
    mpq_class f = a.back() / lead;
    q[shift] = f;
    for (int i = 0; i <= db; ++i) a[i + shift] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  r = a;
}

QPoly derivative(const QPoly& p) {
  QPoly d;
  for (int i = 1; i <= deg(p); ++i) d.push_back(p[i] * i);
  trim(d);
  return d;
}

QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

QPoly sub(QPoly a, const QPoly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

std::vector<QPoly> sturm_chain(const QPoly& p) {
  std::vector<QPoly> s{p, derivative(p)};
  while (!s.back().empty() && deg(s.back()) > 0) {
    QPoly q, r;
    divmod(s[s.size() - 2], s.back(), q, r);
    for (auto& c : r) c = -c;
    if (r.empty()) break;
    s.push_back(r);
  }
  return s;
}

int variations(const std::vector<QPoly>& chain, const mpq_class& t) {
  int v = 0, last = 0;
  for (const auto& p : chain) {
    int s = sgn(eval_q(p, t));
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

mpq_class pow2neg(unsigned bits) {
  mpz_class d = 1;
  d <<= bits;
  return mpq_class(mpz_class(1), d);
}

}  // namespace

BetaField::BetaField(std::vector<mpz_class> a) : a_(std::move(a)) {
  if (a_.empty()) throw Error(Errc::InvalidArgument, "field degree must be at least 1");
  multinacci_ = a_.size() >= 2 &&
                std::all_of(a_.begin(), a_.end(), [](const mpz_class& c) { return c == 1; });
  isolate();
  {
    std::lock_guard lk(mu_);
    bisect_to(64);
    approx_ = mpq_class((enc_.lo + enc_.hi) / 2).get_d();
  }
  pow_d_.resize(a_.size());
  double p = 1;
  for (auto& x : pow_d_) {
    x = p;
    p *= approx_;
  }
  if (degree() >= 2) verify_pisot();
}

mpq_class BetaField::eval_poly(const mpq_class& t) const {
  mpq_class r = 1;
  for (int i = degree() - 1; i >= 0; --i) r = r * t - a_[i];
  return r;
}

void BetaField::isolate() {
  int n = degree();
  if (n == 1) {
    mpq_class r(a_[0]);
    if (r <= 1) throw Error(Errc::NoDominantRoot, "linear polynomial root is not > 1");
    enc_ = {r - pow2neg(80), r + pow2neg(80), 79};
    return;
  }
  QPoly p(n + 1);
  for (int i = 0; i < n; ++i) p[i] = -mpq_class(a_[i]);
  p[n] = 1;
  // Fujiwara bound: 2 max |a_{n-i}|^{1/i}, last term halved
  double b = 0;
  for (int i = 1; i <= n; ++i) {
    double c = std::abs(mpz_class(a_[n - i]).get_d());
    if (i == n) c /= 2;
    b = std::max(b, std::pow(c, 1.0 / i));
  }
  mpq_class hi(static_cast<long>(std::ceil(2 * b * 1.0001)) + 2);
  mpq_class lo(1);
  auto chain = sturm_chain(p);
  auto count = [&](const mpq_class& x, const mpq_class& y) {
    return variations(chain, x) - variations(chain, y);
  };
  if (count(lo, hi) < 1) throw Error(Errc::NoDominantRoot, "no real root greater than 1");
  // the largest root: keep the upper end, move lo up while some root stays above it
  while (count(lo, hi) > 1 || sgn(eval_q(p, lo)) == 0 ||
         sgn(eval_q(p, lo)) == sgn(eval_q(p, hi))) {
    mpq_class mid = (lo + hi) / 2;
    if (count(mid, hi) >= 1)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < pow2neg(200)) throw Error(Errc::NoDominantRoot, "dominant root is not simple");
  }
  if (sgn(eval_q(p, hi)) == 0) hi += (hi - lo) / 2;  // rational root at hi: widen, still isolated
  enc_ = {lo, hi, 0};
  if (count(enc_.lo, enc_.hi) != 1) throw Error(Errc::NoDominantRoot, "isolation failed");
}

void BetaField::bisect_to(unsigned bits) const {
  mpq_class target = pow2neg(bits);
  int slo = sgn(eval_poly(enc_.lo));
  while (enc_.hi - enc_.lo > target) {
    mpq_class mid = (enc_.lo + enc_.hi) / 2;
    int s = sgn(eval_poly(mid));
    if (s == 0) {
      // rational root, only possible for reducible P
      mpq_class w = (enc_.hi - enc_.lo) / 4;
      enc_.lo = mid - w;
      enc_.hi = mid + w;
      slo = sgn(eval_poly(enc_.lo));
    } else if (s == slo) {
      enc_.lo = mid;
    } else {
      enc_.hi = mid;
    }
  }
  enc_.bits = std::max(enc_.bits, bits);
}

BetaField::Enclosure BetaField::enclosure() const {
  std::lock_guard lk(mu_);
  return enc_;
}

BetaField::Enclosure BetaField::refine(unsigned bits) const {
  if (bits > cap_)
    throw Error(Errc::PrecisionExhausted,
                "enclosure refinement beyond " + std::to_string(cap_) + " bits");
  std::lock_guard lk(mu_);
  if (enc_.bits < bits) bisect_to(bits);
  return enc_;
}

BigFloat BetaField::value(mpfr_prec_t prec) const {
  auto e = refine(std::min<unsigned>(static_cast<unsigned>(prec) + 8, cap_));
  return BigFloat(mpq_class((e.lo + e.hi) / 2), prec);
}

std::string BetaField::describe() const {
  std::ostringstream os;
  os << "x^" << degree();
  for (int i = degree() - 1; i >= 0; --i) {
    if (a_[i] == 0) continue;
    os << (a_[i] > 0 ? " - " : " + ") << abs(a_[i]);
    if (i > 0) os << "x" << (i > 1 ? "^" + std::to_string(i) : "");
  }
  return os.str();
}

// Aberth iteration, then inclusion disks r_i = N |P(z_i)| / |prod (z_i - z_j)|:
// every root lies in the union and a component of k disks holds k roots.
void BetaField::verify_pisot() {
  using C = std::complex<long double>;
  int n = degree();
  std::vector<long double> p(n + 1);
  for (int i = 0; i < n; ++i) p[i] = -mpz_class(a_[i]).get_d();
  p[n] = 1;
  auto horner = [&](C z, C& dz, long double& abs_bound) {
    C v = 0;
    dz = 0;
    abs_bound = 0;
    long double az = std::abs(z);
    for (int i = n; i >= 0; --i) {
      dz = dz * z + v;
      v = v * z + p[i];
      abs_bound = abs_bound * az + std::abs(p[i]);
    }
    return v;
  };
  long double radius = 0;
  for (int i = 0; i < n; ++i) radius = std::max(radius, std::pow(std::abs(p[i]), 1.0L / (n - i)));
  radius = 2 * radius + 1;
  std::vector<C> z(n);
  for (int k = 0; k < n; ++k)
    z[k] = std::polar(radius * 0.9L, 2 * std::numbers::pi_v<long double> * k / n + 0.4L);
  for (int it = 0; it < 2000; ++it) {
    long double worst = 0;
    for (int k = 0; k < n; ++k) {
      C dz;
      long double ab;
      C v = horner(z[k], dz, ab);
      if (v == C(0)) continue;
      C w = v / dz;
      C s = 0;
      for (int j = 0; j < n; ++j)
        if (j != k) s += C(1) / (z[k] - z[j]);
      C corr = w / (C(1) - w * s);
      z[k] -= corr;
      worst = std::max(worst, std::abs(corr) / std::max(1.0L, std::abs(z[k])));
    }
    if (worst < 1e-18L) break;
  }
  const long double u = std::numeric_limits<long double>::epsilon();
  std::vector<long double> r(n);
  for (int i = 0; i < n; ++i) {
    C dz;
    long double ab;
    C v = horner(z[i], dz, ab);
    long double err = 4 * (n + 1) * u * ab;
    C prod = 1;
    for (int j = 0; j < n; ++j)
      if (j != i) prod *= z[i] - z[j];
    long double ap = std::abs(prod);
    r[i] = ap > 0 ? n * (std::abs(v) + err) / ap * (1 + 1e-9L) : INFINITY;
  }
  int m = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(z[i] - C(approx_)) < std::abs(z[m] - C(approx_))) m = i;
  bool ok = std::abs(z[m] - C(approx_)) <= r[m] + 1e-12L;
  max_conj_ = 0;
  for (int j = 0; j < n; ++j) {
    if (j == m) continue;
    long double outer = std::abs(z[j]) + r[j];
    max_conj_ = std::max<double>(max_conj_, static_cast<double>(outer));
    if (!(outer < 1)) ok = false;
    if (!(std::abs(z[m] - z[j]) > r[m] + r[j])) ok = false;
  }
  pisot_ = ok;
}

FieldPtr make_multinacci(int n) {
  if (n < 2) throw Error(Errc::InvalidArgument, "multinacci degree must be >= 2");
  return std::make_shared<const BetaField>(std::vector<mpz_class>(n, 1));
}

FieldPtr make_pisot(const std::vector<mpz_class>& c) {
  if (c.size() < 3) throw Error(Errc::InvalidArgument, "polynomial degree must be >= 2");
  if (c.back() != 1) throw Error(Errc::InvalidArgument, "polynomial must be monic");
  std::vector<mpz_class> a(c.begin(), c.end() - 1);
  for (auto& x : a) x = -x;
  return std::make_shared<const BetaField>(std::move(a));
}

FieldPtr make_pisot(const std::vector<long>& c) {
  std::vector<mpz_class> z(c.begin(), c.end());
  return make_pisot(z);
}

FieldPtr rational_field() {
  static const FieldPtr q = std::make_shared<const BetaField>(std::vector<mpz_class>{2});
  return q;
}

// ---------------------------------------------------------------------------

FieldElement::FieldElement(FieldPtr f) : f_(std::move(f)), c_(f_->degree(), 0) {}

FieldElement::FieldElement(FieldPtr f, std::vector<mpq_class> c) : f_(std::move(f)), c_(std::move(c)) {
  if (static_cast<int>(c_.size()) > f_->degree())
    throw Error(Errc::InvalidArgument, "too many coefficients for field degree");
  c_.resize(f_->degree(), 0);
  for (auto& q : c_) q.canonicalize();  // mpq_class(n, d) is not reduced
}

FieldElement::FieldElement(FieldPtr f, const mpq_class& q) : FieldElement(std::move(f)) {
  c_[0] = q;
  c_[0].canonicalize();
}

FieldElement FieldElement::generator(FieldPtr f) {
  FieldElement e(f);
  if (f->degree() == 1)
    e.c_[0] = f->coeffs()[0];
  else
    e.c_[1] = 1;
  return e;
}

FieldElement FieldElement::beta_power(FieldPtr f, int k) {
  FieldElement b = generator(f);
  if (k < 0) b = b.inverse();
  FieldElement r(f, 1L);
  for (int i = 0; i < std::abs(k); ++i) r *= b;
  return r;
}

void FieldElement::check_same(const FieldElement& o) const {
  if (!f_ || !o.f_) throw Error(Errc::InvalidArgument, "uninitialised field element");
  if (!f_->same_as(*o.f_)) throw Error(Errc::InvalidArgument, "field mismatch");
}

bool FieldElement::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const mpq_class& q) { return q == 0; });
}

bool FieldElement::is_rational() const {
  return std::all_of(c_.begin() + 1, c_.end(), [](const mpq_class& q) { return q == 0; });
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  check_same(o);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  check_same(o);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

FieldElement& FieldElement::operator+=(long k) {
  c_[0] += k;
  return *this;
}

FieldElement& FieldElement::operator-=(long k) {
  c_[0] -= k;
  return *this;
}

FieldElement operator*(FieldElement a, long k) {
  for (auto& c : a.c_) c *= k;
  return a;
}

FieldElement FieldElement::operator-() const {
  FieldElement r(*this);
  for (auto& c : r.c_) c = -c;
  return r;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  check_same(o);
  const int n = f_->degree();
  const auto& a = f_->coeffs();
  if (n == 1) {
    c_[0] *= o.c_[0];
    return *this;
  }
  std::vector<mpq_class> prod(2 * n - 1, 0);
  for (int i = 0; i < n; ++i) {
    if (c_[i] == 0) continue;
    for (int j = 0; j < n; ++j)
      if (o.c_[j] != 0) prod[i + j] += c_[i] * o.c_[j];
  }
  // beta^N = sum a_i beta^i
  for (int k = 2 * n - 2; k >= n; --k) {
    if (prod[k] == 0) continue;
    for (int i = 0; i < n; ++i)
      if (a[i] != 0) prod[k - n + i] += prod[k] * a[i];
  }
  for (int i = 0; i < n; ++i) c_[i] = prod[i];
  return *this;
}

FieldElement FieldElement::times_generator() const {
  const int n = f_->degree();
  FieldElement r(f_);
  if (n == 1) {
    r.c_[0] = c_[0] * f_->coeffs()[0];
    return r;
  }
  const mpq_class& top = c_[n - 1];
  for (int i = n - 1; i >= 1; --i) r.c_[i] = c_[i - 1];
  if (top != 0)
    for (int i = 0; i < n; ++i) r.c_[i] += top * f_->coeffs()[i];
  return r;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw Error(Errc::InvalidArgument, "division by zero in field");
  const int n = f_->degree();
  QPoly P(n + 1);
  for (int i = 0; i < n; ++i) P[i] = -mpq_class(f_->coeffs()[i]);
  P[n] = 1;
  QPoly a = c_;
  trim(a);
  QPoly r0 = P, r1 = a, s0{}, s1{mpq_class(1)};
  while (!r1.empty()) {
    QPoly q, r;
    divmod(r0, r1, q, r);
    QPoly s = sub(s0, mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (deg(r0) != 0)
    throw Error(Errc::Inconsistent, "element not invertible (defining polynomial reducible?)");
  FieldElement res(f_);
  QPoly u = s0;
  for (auto& c : u) c /= r0[0];
  // u has degree < deg P already, but reduce defensively
  if (deg(u) >= n) {
    QPoly q, rem;
    divmod(u, P, q, rem);
    u = rem;
  }
  for (size_t i = 0; i < u.size(); ++i) res.c_[i] = u[i];
  return res;
}

bool operator==(const FieldElement& a, const FieldElement& b) {
  a.check_same(b);
  return a.c_ == b.c_;
}

int FieldElement::sign() const {
  if (is_zero()) return 0;
  const int n = f_->degree();
  // double filter with a rigorous margin
  {
    const auto& pw = f_->power_approx();
    double s = 0, S = 0;
    bool usable = true;
    for (int i = 0; i < n; ++i) {
      if (c_[i] == 0) continue;
      double c = c_[i].get_d();
      if (!std::isfinite(c) || std::abs(c) < 1e-280 || std::abs(c) > 1e280) {
        usable = false;
        break;
      }
      s += c * pw[i];
      S += std::abs(c) * pw[i];
    }
    if (usable && std::abs(s) > S * 0x1p-40) return s > 0 ? 1 : -1;
  }
  // exact interval evaluation over the enclosure, doubling precision
  unsigned bits = std::max(f_->enclosure().bits, 64u);
  for (;;) {
    auto e = f_->refine(bits);
    mpq_class lo = 0, hi = 0, plo = 1, phi = 1;
    for (int i = 0; i < n; ++i) {
      const mpq_class& c = c_[i];
      if (c > 0) {
        lo += c * plo;
        hi += c * phi;
      } else if (c < 0) {
        lo += c * phi;
        hi += c * plo;
      }
      plo *= e.lo;
      phi *= e.hi;
    }
    if (lo > 0) return 1;
    if (hi < 0) return -1;
    if (bits >= kPrecisionCapBits)
      throw Error(Errc::PrecisionExhausted, "sign undecided at " + std::to_string(bits) + " bits");
    bits = std::min(2 * bits, kPrecisionCapBits);
  }
}

namespace {
// rough log2 of sum |c_i| beta^i
long magnitude_bits(const std::vector<mpq_class>& c, double beta) {
  long m = 0;
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    long b = static_cast<long>(mpz_sizeinbase(c[i].get_num_mpz_t(), 2)) -
             static_cast<long>(mpz_sizeinbase(c[i].get_den_mpz_t(), 2)) + 1 +
             static_cast<long>(std::ceil(i * std::log2(std::max(beta, 1.0))));
    m = std::max(m, b);
  }
  return m + static_cast<long>(c.size());
}
}  // namespace

BigFloat FieldElement::to_bigfloat(mpfr_prec_t prec) const {
  if (is_zero()) return BigFloat(prec);
  long extra = std::max(0L, magnitude_bits(c_, f_->approx()));
  mpfr_prec_t work = prec + 40 + extra;
  BigFloat b = f_->value(work);
  BigFloat acc(work), p(1L, work);
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] != 0) acc += BigFloat(c_[i], work) * p;
    if (i + 1 < c_.size()) p *= b;
  }
  BigFloat out(prec);
  mpfr_set(out.raw(), acc.raw(), MPFR_RNDN);
  return out;
}

double FieldElement::to_double() const {
  if (is_zero()) return 0.0;
  if (is_rational()) return c_[0].get_d();
  return to_bigfloat(64).to_double();
}

long FieldElement::floor_long() const {
  double d = to_double();
  if (!std::isfinite(d) || std::abs(d) > 1e15) throw Error(Errc::OutOfDomain, "floor out of range");
  long k = static_cast<long>(std::floor(d));
  while (cmp(*this, k) < 0) --k;
  while (cmp(*this, k + 1) >= 0) ++k;
  return k;
}

std::string FieldElement::str() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i].get_str();
  os << "]";
  return os.str();
}

FieldElement embed(const FieldElement& a, const FieldPtr& f) {
  if (a.field()->same_as(*f)) return a;
  if (!a.field()->is_rational())
    throw Error(Errc::InvalidArgument, "cannot embed element of a different field");
  return FieldElement(f, a.coeffs()[0]);
}

}  // namespace betamatch
