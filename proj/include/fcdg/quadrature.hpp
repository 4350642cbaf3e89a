#pragma once

// Equispaced quadrature on [-1, 1]: end-corrected trapezoid (Gregory) rules
// and band-limited refinement of periodic samples by FFT zero padding.

#include <span>
#include <vector>

#include "fcdg/extended.hpp"

namespace fcdg {

struct GregoryRule {
  int n = 0;
  int order = 0;
  std::vector<double> weights;  // includes the spacing 2/(n-1)
};

/// Number of corrected weights at each end for a given order.
int gregory_stencil_width(int order);

/// Gregory rule of the given order (2..16) on n equispaced nodes. Throws
/// ParameterError when the two end stencils would overlap.
GregoryRule gregory_weights(int n, int order);

/// Band-limited interpolant of one period of samples, evaluated on the grid
/// refined by factor. Output has length samples.size() * factor and agrees
/// with the input at every factor-th entry.
std::vector<double> fourier_interpolate(std::span<const double> samples, int factor);

double integrate_on_reference(std::span<const double> f_samples, const GregoryRule& rule);

namespace quad {

template <typename Real>
std::vector<Real> gregory_weights(int n, int order);

/// Refined samples of the interpolant (deriv = 0) or of its derivative
/// (deriv = 1) for a function with continuous period period_len.
template <typename Real>
std::vector<Real> fourier_interpolate(std::span<const Real> samples, int factor, int deriv = 0,
                                      Real period_len = Real(1));

}  // namespace quad

}  // namespace fcdg
