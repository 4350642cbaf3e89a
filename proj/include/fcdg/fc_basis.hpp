#pragma once

// Fourier-continuation nodal basis on the reference element [-1, 1].
//
// Samples f_l = f(z_l) on the uniform grid z_l = -1 + 2l/(N-1) are extended
// to M extra points on each side by polynomial extrapolation of the p
// outermost samples, multiplied by a smooth window, and folded with index
// period N+M. The folded sequence is one period of a smooth periodic function
// whose trigonometric interpolant reproduces f_l at the nodes. Applying this
// discrete periodic extension (DPE) to the unit vectors e_i yields the nodal
// basis phi_i, stored through its Fourier coefficients.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fcdg/extended.hpp"

namespace fcdg {

enum class Precision : std::uint8_t { Double, Extended };

struct FcParams {
  int n_points = 20;     // N, samples on [-1, 1]
  int poly_points = 10;  // p, extrapolation stencil (degree p - 1)
  int ext_points = 25;   // M, extension samples per side
  Precision precision = Precision::Extended;

  /// Throws ParameterError unless p >= 2, M >= 1 and N >= 2p.
  void validate() const;

  int period_points() const { return n_points + ext_points; }
  double spacing() const { return 2.0 / (n_points - 1); }
  double extended_half_width() const { return 1.0 + 2.0 * ext_points / (n_points - 1); }
  /// Continuous period T = (N + M) h of the extension.
  double period_len() const { return period_points() * spacing(); }

  friend bool operator==(const FcParams&, const FcParams&) = default;
};

/// The window is an integrated Kaiser-Bessel kernel: 1 on [-1, 1], a C-infinity
/// descent over the first kWindowSpan fraction of the (M + 1)-spacing gap,
/// and exactly 0 beyond. kWindowShape is the Kaiser parameter.
inline constexpr double kWindowShape = 25.0;
inline constexpr double kWindowSpan = 0.8;

struct PeriodicExtension {
  std::vector<double> samples;  // one index period, length N + M
  double period_len = 0.0;
};

struct FcBasis {
  FcParams params;
  double period_len = 0.0;
  /// Modes k = -max_mode .. max_mode, row r holds k = r - max_mode. For an
  /// even period the Nyquist coefficient is split evenly between +-max_mode.
  int max_mode = 0;
  Eigen::MatrixXcd coeffs;     // (2 max_mode + 1) x N, rounded to double
  /// Rounding residual of coeffs; coeffs + coeffs_lo is an unevaluated
  /// double-double sum.
  Eigen::MatrixXcd coeffs_lo;
  std::vector<double> window;  // window on the extended grid, length N + 2M

  int size() const { return params.n_points; }
};

std::vector<double> uniform_grid(const FcParams& params);

/// Samples (length N) extended by M extrapolated values on each side; the
/// result is indexed by l + M for grid index l = -M .. N+M-1.
std::vector<double> extrapolate_ends(std::span<const double> samples, const FcParams& params);

/// Window sampled on the extended grid, same indexing as extrapolate_ends.
std::vector<double> window_values(const FcParams& params);

/// Window at an arbitrary coordinate z.
double window_function(double z, const FcParams& params);

PeriodicExtension periodic_extension(std::span<const double> samples, const FcParams& params);

/// DFT coefficients a_k with f(z) = sum_k a_k exp(2 pi i k (z + 1) / T),
/// returned for k = -K .. K where K = floor(L / 2), L = samples.size().
std::vector<std::complex<double>> fc_coefficients(const PeriodicExtension& ext);

FcBasis build_basis(const FcParams& params);

/// Real matrix (points x N) of basis values, summed in Extended precision
/// from coeffs + coeffs_lo.
Eigen::MatrixXd evaluate_basis(const FcBasis& basis, std::span<const double> points);

/// Coefficients of d phi_i / dz, the exact derivative of the trigonometric
/// interpolant (split Nyquist terms contribute a sine that vanishes at nodes).
FcBasis differentiate_basis(const FcBasis& basis);

namespace fc {

// Precision-generic building blocks, instantiated for double and Extended.

/// Lagrange weights c[m-1][j] extrapolating from nodes 0..p-1 to index -m.
template <typename Real>
std::vector<std::vector<Real>> extrapolation_weights(int poly_points, int ext_points);

/// Window for distance m = 0..M (in grid spacings) beyond the end nodes.
template <typename Real>
std::vector<Real> window_profile(int ext_points);

template <typename Real>
std::vector<Real> extrapolate_ends(std::span<const Real> samples, const FcParams& params);

template <typename Real>
std::vector<Real> window_values(const FcParams& params);

template <typename Real>
std::vector<Real> periodic_extension(std::span<const Real> samples, const FcParams& params);

/// Direct O(L^2) DFT with the band and Nyquist conventions of fc_coefficients.
template <typename Real>
std::vector<std::complex<Real>> fc_coefficients(std::span<const Real> ext);

}  // namespace fc

}  // namespace fcdg
