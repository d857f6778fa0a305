#pragma once

#include <cmath>
#include <type_traits>

#include "betamatch/algebra.hpp"
#include "betamatch/bigfloat.hpp"

// Small uniform vocabulary over double, BigFloat and FieldElement.
namespace betamatch {

inline constexpr double kDefaultGuard = 1e-12;

template <class R>
inline constexpr bool is_exact_v = std::is_same_v<R, FieldElement>;

inline double to_double(double x) { return x; }
inline double to_double(const BigFloat& x) { return x.to_double(); }
inline double to_double(const FieldElement& x) { return x.to_double(); }

inline double like(double, long k) { return static_cast<double>(k); }
inline BigFloat like(const BigFloat& p, long k) { return BigFloat(k, p.precision()); }
inline FieldElement like(const FieldElement& p, long k) { return FieldElement(p.field(), k); }

inline long floor_long(double x) { return static_cast<long>(std::floor(x)); }
inline long floor_long(const BigFloat& x) { return x.floor_long(); }
inline long floor_long(const FieldElement& x) { return x.floor_long(); }

inline int cmp(double a, double b) { return (a > b) - (a < b); }
inline int cmp(double a, long k) { return cmp(a, static_cast<double>(k)); }

inline double inv(double x) { return 1.0 / x; }
inline BigFloat inv(const BigFloat& x) { return like(x, 1) / x; }
inline FieldElement inv(const FieldElement& x) { return x.inverse(); }

// |a - b| < g, never true in exact arithmetic
template <class R>
bool within_guard(const R& a, const R& b, double g) {
  if constexpr (is_exact_v<R>)
    return false;
  else
    return std::abs(to_double(a - b)) < g;
}

template <class R>
bool within_guard(const R& a, long k, double g) {
  if constexpr (is_exact_v<R>)
    return false;
  else
    return std::abs(to_double(a - k)) < g;
}

}  // namespace betamatch
