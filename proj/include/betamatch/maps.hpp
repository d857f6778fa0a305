#pragma once

#include <climits>
#include <optional>
#include <string>
#include <vector>

#include "betamatch/params.hpp"
#include "betamatch/scalar.hpp"

namespace betamatch {

namespace sym {
inline constexpr int L = 0;
inline constexpr int R = 1;
inline constexpr int C = 2;  // skew tent critical point
inline constexpr int None = INT_MIN;
}  // namespace sym

template <class Real>
struct Step {
  Real value;
  int symbol = sym::None;
  bool guard = false;
};

template <class Real>
class SkewTent {
 public:
  SkewTent(Real alpha, Real beta, double guard = kDefaultGuard)
      : a_(std::move(alpha)), b_(std::move(beta)), g_(guard) {
    if (!(a_ > 0L && a_ < 1L) || b_ > 1L || !(b_ > a_) || !(b_ > 1L - a_))
      throw Error(Errc::OutOfDomain, "skew tent needs 0<alpha<1 and max(alpha,1-alpha)<beta<=1");
    sl_ = b_ * inv(a_);
    sr_ = b_ * inv(1L - a_);
  }

  const Real& alpha() const { return a_; }
  const Real& beta() const { return b_; }
  const Real& left_slope() const { return sl_; }
  const Real& right_slope() const { return sr_; }
  double guard() const { return g_; }

  Step<Real> eval(const Real& x) const {
    if (x < 0L || x > 1L) throw Error(Errc::OutOfDomain, "point outside [0,1]");
    int c = cmp(x, a_);
    if (c == 0) return {b_, sym::C, false};
    bool guard = within_guard(x, a_, g_);
    if (c < 0) return {sl_ * x, sym::L, guard};
    return {sr_ * (1L - x), sym::R, guard};
  }

  // orientation reversing fixed point beta/(1-alpha+beta)
  Real fixed_point() const { return b_ * inv(1L - a_ + b_); }

  Real involution(const Real& x) const {
    int c = cmp(x, a_);
    if (c == 0) throw Error(Errc::InvalidArgument, "involution undefined at the critical point");
    // T(x) = T(xh) with xh on the other branch
    if (c < 0) return 1L - sl_ * x * inv(sr_);
    return sr_ * (1L - x) * inv(sl_);
  }

 private:
  Real a_, b_, sl_, sr_;
  double g_;
};

template <class Real>
class GenBeta {
 public:
  GenBeta(Real alpha, Real beta, double guard = kDefaultGuard)
      : a_(std::move(alpha)), b_(std::move(beta)), g_(guard) {
    if (a_ < 0L || !(a_ < 1L) || !(b_ > 1L))
      throw Error(Errc::OutOfDomain, "generalised beta map needs beta>1 and 0<=alpha<1");
  }

  const Real& alpha() const { return a_; }
  const Real& beta() const { return b_; }
  double guard() const { return g_; }

  // right-continuous: value in [0,1), symbol = k
  Step<Real> eval(const Real& x) const {
    if (x < 0L || x > 1L) throw Error(Errc::OutOfDomain, "point outside [0,1]");
    Real y = b_ * x + a_;
    long k = floor_long(y);
    bool guard = within_guard(y, k, g_) || within_guard(y, k + 1, g_);
    y -= k;
    return {std::move(y), static_cast<int>(k), guard};
  }

  // left-continuous: value in (0,1]; 0 is read as 1 (circle)
  Step<Real> eval_left(const Real& x) const {
    if (x < 0L || x > 1L) throw Error(Errc::OutOfDomain, "point outside [0,1]");
    Real y = (x == 0L) ? b_ + a_ : b_ * x + a_;
    long k = floor_long(y);
    if (y == k) --k;
    bool guard = within_guard(y, k, g_) || within_guard(y, k + 1, g_);
    y -= k;
    return {std::move(y), static_cast<int>(k), guard};
  }

  Step<Real> eval_right(const Real& x) const { return eval(x); }

  // c_k = (k - alpha)/beta inside (0,1)
  std::vector<Real> breakpoints() const {
    std::vector<Real> c;
    Real ib = inv(b_);
    for (long k = 1; like(a_, k) < a_ + b_; ++k) c.push_back((like(a_, k) - a_) * ib);
    return c;
  }

  bool has_fixed_point() const { return a_ + b_ > 1L; }

  // (1-alpha)/(beta-1)
  Real fixed_point() const {
    if (!has_fixed_point()) throw Error(Errc::OutOfDomain, "no fixed point branch (alpha+beta<=1)");
    return (1L - a_) * inv(b_ - 1L);
  }

  GenBeta symmetry_conjugate() const {
    Real s = a_ + b_;
    s -= floor_long(s);
    Real ap = 1L - s;
    if (ap == 1L) ap = like(a_, 0);
    return GenBeta(ap, b_, g_);
  }

 private:
  Real a_, b_;
  double g_;
};

struct Geometry {
  std::vector<double> breakpoints;
  double p = 0, p_hat = 0;
  std::optional<double> c1, c2;
  bool ordering_ok = true;  // p_hat < c1 < p < c2 < 1, or T^2(a) < p_hat < p < T(a)
  std::string ordering;     // human readable
};

struct EvalOptions {
  Mode mode = Mode::Float;
  double guard = kDefaultGuard;
  // 0: auto (53 + 24 + n log2 of the largest slope); 53 means plain double
  long float_bits = 0;
  bool left_continuous = false;  // GenBeta only
};

struct OrbitPoint {
  double x = 0;
  int symbol = sym::None;
  bool guard = false;
  std::string exact;  // exact coefficients in exact mode
};

Step<double> eval(const MapParams& m, double x, double guard = kDefaultGuard);
Step<FieldElement> eval_exact(const MapParams& m, const FieldElement& x);
Geometry geometry(const MapParams& m);
Param fixed_point(const MapParams& m);
Param involution(const MapParams& m, const Param& x);
MapParams symmetry_conjugate(const MapParams& m);
std::vector<OrbitPoint> orbit(const MapParams& m, const Param& x0, long n, const EvalOptions& opt = {});
long auto_float_bits(const MapParams& m, long n);

// multinacci beta, beta^{1-N} < alpha < beta^{-1}:
// 1/b^2 < p-c1 < (b-1)/b and 1/b^{N+1} < c2-p < 1/b - 1/b^2
bool multinacci_ordering_holds(const FieldPtr& f, const FieldElement& alpha);

template <class Map, class Real>
std::vector<Step<Real>> orbit_of(const Map& map, Real x0, long n, bool left = false) {
  std::vector<Step<Real>> out;
  out.reserve(n + 1);
  out.push_back({x0, sym::None, false});
  for (long i = 0; i < n; ++i) {
    if constexpr (requires { map.eval_left(x0); })
      out.push_back(left ? map.eval_left(out.back().value) : map.eval(out.back().value));
    else
      out.push_back(map.eval(out.back().value));
  }
  return out;
}

}  // namespace betamatch
