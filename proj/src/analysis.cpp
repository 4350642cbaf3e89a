#include "fcdg/analysis.hpp"

#include <cmath>

#include "fcdg/error.hpp"
#include "fcdg/legendre.hpp"

namespace fcdg {

Eigen::MatrixXcd bloch_matrix(const ElementOperators& ops, FluxKind flux, double theta) {
  const LineOperator line(ops);
  const FluxWeights w = flux_weights(flux, 1.0);
  const std::complex<double> ep = std::polar(1.0, theta), em = std::polar(1.0, -theta);
  const Eigen::RowVectorXcd flux_right =
      w.left * line.trace_right.cast<std::complex<double>>() +
      (w.right * ep) * line.trace_left.cast<std::complex<double>>();
  const Eigen::RowVectorXcd flux_left =
      (w.left * em) * line.trace_right.cast<std::complex<double>>() +
      w.right * line.trace_left.cast<std::complex<double>>();
  Eigen::MatrixXcd b = line.deriv.cast<std::complex<double>>();
  b -= line.lift_right.cast<std::complex<double>>() * flux_right;
  b += line.lift_left.cast<std::complex<double>>() * flux_left;
  return b;
}

namespace {

// Values at N equispaced points of the function with coefficients v.
Eigen::MatrixXcd equispaced_sampler(const ElementBasis& basis) {
  const int n = basis.size();
  if (!basis.modal()) return Eigen::MatrixXcd::Identity(n, n);
  std::vector<double> pts(n);
  for (int l = 0; l < n; ++l) pts[l] = -1.0 + 2.0 * l / (n - 1);
  return legendre_vandermonde(basis.spec().degree, pts).cast<std::complex<double>>();
}

}  // namespace

DispersionResult dispersion_relation(const ElementBasis& basis, FluxKind flux,
                                     const std::vector<double>& K_samples, DispersionScale scale) {
  const int n = basis.size();
  const double width = scale == DispersionScale::NodeSpacing ? n - 1 : n;  // in units of dx
  const double dx = 2.0 / width;
  const Eigen::MatrixXcd sampler = equispaced_sampler(basis);
  DispersionResult res;
  res.basis = basis.ops().basis_id;
  res.flux = flux;
  res.scale = scale;
  for (double K : K_samples) {
    const double theta = K * width;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(bloch_matrix(basis.ops(), flux, theta));
    if (es.info() != Eigen::Success) throw NumericError("Bloch eigen-solve failed");
    // Mode exp(i k x) sampled at the equispaced points x_l = -1 + l 2/(n-1).
    const double k = K / dx;
    Eigen::VectorXcd mode(n);
    for (int l = 0; l < n; ++l) mode(l) = std::polar(1.0, k * 2.0 * l / (n - 1));
    mode.normalize();
    int best = 0;
    double best_overlap = -1.0;
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXcd s = sampler * es.eigenvectors().col(j);
      const double nrm = s.norm();
      const double overlap = nrm > 0.0 ? std::abs(mode.dot(s)) / nrm : 0.0;
      if (overlap > best_overlap) {
        best_overlap = overlap;
        best = j;
      }
    }
    const std::complex<double> lambda = es.eigenvalues()(best);
    const std::complex<double> omega = std::complex<double>(0.0, 1.0) * lambda;
    res.K.push_back(K);
    res.Omega.push_back(omega * dx);
    res.projection.push_back(best_overlap);
    res.ambiguous.push_back(best_overlap < 0.5);
  }
  return res;
}

double accurate_wavenumber_limit(const DispersionResult& d, double tol) {
  double limit = 0.0;
  for (std::size_t i = 0; i < d.K.size(); ++i) {
    const double K = d.K[i];
    if (K == 0.0) continue;
    if (std::fabs(d.Omega[i].real() - K) > tol * K) break;
    limit = K;
  }
  return limit;
}

SpectrumResult spectrum_of(const Eigen::MatrixXd& a, double scale) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  if (es.info() != Eigen::Success) throw NumericError("global eigen-solve failed");
  SpectrumResult r;
  r.max_real = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const std::complex<double> l = es.eigenvalues()(i) * scale;
    r.eigenvalues.push_back(l);
    r.spectral_radius = std::max(r.spectral_radius, std::abs(l));
    r.max_imag = std::max(r.max_imag, std::fabs(l.imag()));
    r.max_real = std::max(r.max_real, l.real());
  }
  return r;
}

SpectrumResult operator_spectrum(const ElementBasis& basis, const Mesh1D& mesh, FluxKind flux) {
  const Transport1D op(basis.ops(), mesh, 1.0, flux);
  return spectrum_of(op.dense(), basis.mean_node_gap() * mesh.jacobians[0]);
}

}  // namespace fcdg
