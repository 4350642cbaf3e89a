#pragma once

#include <complex>
#include <span>

#include "fcdg/extended.hpp"

namespace fcdg {

enum class DftSign : int { Forward = -1, Backward = +1 };

/// Unnormalized in-place complex DFT, backed by FFTW (fftw3 / fftw3q).
/// Instantiated for double and Extended.
template <typename Real>
void dft_inplace(std::span<std::complex<Real>> data, DftSign sign);

}  // namespace fcdg
