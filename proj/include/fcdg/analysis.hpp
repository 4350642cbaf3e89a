#pragma once

// Bloch-wave dispersion and global spectra of the 1-D transport operator
// (unit speed, reference element of unit Jacobian).

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "fcdg/dg1d.hpp"

namespace fcdg {

/// Single-element operator with neighbors u_{k+-1} = exp(+-i theta) u_k.
Eigen::MatrixXcd bloch_matrix(const ElementOperators& ops, FluxKind flux, double theta);

enum class DispersionScale {
  NodeSpacing,  // dx = element width / (N - 1)
  PerDof        // dx = element width / N
};

struct DispersionResult {
  std::vector<double> K;
  std::vector<std::complex<double>> Omega;
  std::vector<double> projection;  // branch-selection overlap in [0, 1]
  std::vector<bool> ambiguous;     // overlap below 0.5
  BasisId basis;
  FluxKind flux = FluxKind::Upwind;
  DispersionScale scale = DispersionScale::NodeSpacing;
};

/// For each K the physical eigenvalue of the Bloch matrix at theta = K * w,
/// w the element width in units of dx, is the one whose eigenvector (sampled
/// at equispaced points) overlaps most with exp(i K l); Omega = i lambda dx.
DispersionResult dispersion_relation(const ElementBasis& basis, FluxKind flux,
                                     const std::vector<double>& K_samples,
                                     DispersionScale scale = DispersionScale::NodeSpacing);

/// Largest K such that |Re Omega - K| <= tol K on every sample up to K.
double accurate_wavenumber_limit(const DispersionResult& d, double tol);

struct SpectrumResult {
  std::vector<std::complex<double>> eigenvalues;  // scaled by node spacing
  double spectral_radius = 0.0;
  double max_imag = 0.0;
  double max_real = 0.0;
};

SpectrumResult spectrum_of(const Eigen::MatrixXd& a, double scale);

/// Dense spectrum of the periodic global operator, eigenvalues times dx
/// where dx is the mean node gap of an element.
SpectrumResult operator_spectrum(const ElementBasis& basis, const Mesh1D& mesh, FluxKind flux);

}  // namespace fcdg
