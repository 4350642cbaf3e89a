#pragma once

// Quad-precision helpers. Basis construction and operator assembly are
// templated on the real type so the same code runs in double or in
// __float128 (about 33 significant digits).

#include <quadmath.h>

#include <cmath>
#include <string>
#include <type_traits>

namespace fcdg {

using Extended = __float128;

inline double rsin(double x) { return std::sin(x); }
inline double rcos(double x) { return std::cos(x); }
inline double rexp(double x) { return std::exp(x); }
inline double rsqrt(double x) { return std::sqrt(x); }
inline double rabs(double x) { return std::fabs(x); }
inline double racos(double x) { return std::acos(x); }
inline double rsinh(double x) { return std::sinh(x); }

inline Extended rsin(Extended x) { return sinq(x); }
inline Extended rcos(Extended x) { return cosq(x); }
inline Extended rexp(Extended x) { return expq(x); }
inline Extended rsqrt(Extended x) { return sqrtq(x); }
inline Extended rabs(Extended x) { return fabsq(x); }
inline Extended racos(Extended x) { return acosq(x); }
inline Extended rsinh(Extended x) { return sinhq(x); }

template <typename Real>
inline Real pi_v() {
  if constexpr (std::is_same_v<Real, Extended>) {
    return M_PIq;
  } else {
    return static_cast<Real>(M_PI);
  }
}

inline std::string to_string(Extended x) {
  char buf[64];
  quadmath_snprintf(buf, sizeof buf, "%.36Qg", x);
  return buf;
}

}  // namespace fcdg
