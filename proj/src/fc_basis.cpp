#include "fcdg/fc_basis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fcdg/error.hpp"

namespace fcdg {

void FcParams::validate() const {
  if (poly_points < 2) {
    throw ParameterError("FC basis needs at least 2 extrapolation points, got p = " +
                         std::to_string(poly_points));
  }
  if (ext_points < 1) {
    throw ParameterError("FC basis needs M >= 1, got M = " + std::to_string(ext_points));
  }
  if (n_points < 2 * poly_points) {
    throw ParameterError("FC basis needs N >= 2p (N = " + std::to_string(n_points) +
                         ", p = " + std::to_string(poly_points) + ")");
  }
}

namespace {

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
template <typename Real>
void gauss_legendre(int n, std::vector<Real>& x, std::vector<Real>& w) {
  x.assign(n, Real(0));
  w.assign(n, Real(0));
  const Real pi = pi_v<Real>();
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Real z = rcos(pi * (Real(i) + Real(0.75)) / (Real(n) + Real(0.5)));
    Real dp = 0;
    for (int it = 0; it < 100; ++it) {
      Real p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const Real p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / Real(k);
        p0 = p1;
        p1 = p2;
      }
      dp = Real(n) * (z * p1 - p0) / (z * z - 1);
      const Real dz = p1 / dp;
      z -= dz;
      if (rabs(dz) < Real(1e-32)) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
  }
}

template <typename Real>
Real bessel_i0(Real x) {
  const Real q = x * x / 4;
  Real term = 1, sum = 1;
  for (int k = 1; k < 500; ++k) {
    term *= q / (Real(k) * Real(k));
    sum += term;
    if (term < sum * Real(1e-36)) break;
  }
  return sum;
}

// Integral of I0(beta sqrt(1 - (2s - 1)^2)) over s in [0, t], t <= 1.
// With s = (1 - cos(theta)) / 2 the integrand becomes smooth in theta.
template <typename Real>
Real kaiser_partial_integral(Real t, Real beta, const std::vector<Real>& gx,
                             const std::vector<Real>& gw) {
  if (t <= 0) return 0;
  const Real theta_t = racos(1 - 2 * t);
  Real sum = 0;
  for (std::size_t q = 0; q < gx.size(); ++q) {
    const Real theta = theta_t * (gx[q] + 1) / 2;
    const Real s = rsin(theta);
    sum += gw[q] * bessel_i0(beta * s) * s;
  }
  return sum * theta_t / 4;
}

// Smooth step on t in [0, 1]: 1 at t <= 0, 0 at t >= 1, w(t) + w(1 - t) = 1.
template <typename Real>
class KaiserStep {
 public:
  explicit KaiserStep(Real beta) : beta_(beta), total_(rsinh(beta) / beta) {
    gauss_legendre<Real>(64, gx_, gw_);
  }

  Real operator()(Real t) const {
    if (t <= 0) return 1;
    if (t >= 1) return 0;
    if (t > Real(0.5)) return kaiser_partial_integral(1 - t, beta_, gx_, gw_) / total_;
    return 1 - kaiser_partial_integral(t, beta_, gx_, gw_) / total_;
  }

 private:
  Real beta_;
  Real total_;
  std::vector<Real> gx_, gw_;
};

template <typename Real>
Real window_at_distance(const KaiserStep<Real>& step, Real m, int ext_points) {
  const Real span = Real(kWindowSpan) * Real(ext_points + 1);
  return step(m / span);
}

template <typename Real>
std::vector<Real> to_real(std::span<const double> v) {
  return std::vector<Real>(v.begin(), v.end());
}

template <typename Real>
std::vector<double> to_double(const std::vector<Real>& v) {
  return std::vector<double>(v.begin(), v.end());
}

}  // namespace

namespace fc {

template <typename Real>
std::vector<std::vector<Real>> extrapolation_weights(int poly_points, int ext_points) {
  std::vector<std::vector<Real>> c(ext_points, std::vector<Real>(poly_points));
  for (int m = 1; m <= ext_points; ++m) {
    const Real t = -Real(m);
    for (int j = 0; j < poly_points; ++j) {
      Real v = 1;
      for (int i = 0; i < poly_points; ++i) {
        if (i != j) v *= (t - Real(i)) / Real(j - i);
      }
      c[m - 1][j] = v;
    }
  }
  return c;
}

template <typename Real>
std::vector<Real> window_profile(int ext_points) {
  const KaiserStep<Real> step(static_cast<Real>(kWindowShape));
  std::vector<Real> w(ext_points + 1);
  for (int m = 0; m <= ext_points; ++m) {
    w[m] = window_at_distance(step, Real(m), ext_points);
  }
  return w;
}

template <typename Real>
std::vector<Real> extrapolate_ends(std::span<const Real> samples, const FcParams& params) {
  params.validate();
  const int n = params.n_points, p = params.poly_points, m_ext = params.ext_points;
  if (static_cast<int>(samples.size()) != n) {
    throw ShapeError("extrapolate_ends: expected " + std::to_string(n) + " samples, got " +
                     std::to_string(samples.size()));
  }
  const auto c = extrapolation_weights<Real>(p, m_ext);
  std::vector<Real> out(n + 2 * m_ext, Real(0));
  std::copy(samples.begin(), samples.end(), out.begin() + m_ext);
  for (int m = 1; m <= m_ext; ++m) {
    Real left = 0, right = 0;
    for (int j = 0; j < p; ++j) {
      left += c[m - 1][j] * samples[j];
      right += c[m - 1][j] * samples[n - 1 - j];
    }
    out[m_ext - m] = left;
    out[m_ext + n - 1 + m] = right;
  }
  return out;
}

template <typename Real>
std::vector<Real> window_values(const FcParams& params) {
  params.validate();
  const int n = params.n_points, m_ext = params.ext_points;
  const auto profile = window_profile<Real>(m_ext);
  std::vector<Real> w(n + 2 * m_ext, Real(1));
  for (int m = 1; m <= m_ext; ++m) {
    w[m_ext - m] = profile[m];
    w[m_ext + n - 1 + m] = profile[m];
  }
  return w;
}

template <typename Real>
std::vector<Real> periodic_extension(std::span<const Real> samples, const FcParams& params) {
  const int n = params.n_points, m_ext = params.ext_points;
  const int period = n + m_ext;
  auto ext = extrapolate_ends<Real>(samples, params);
  const auto w = window_values<Real>(params);
  for (std::size_t i = 0; i < ext.size(); ++i) ext[i] *= w[i];
  // Grid index l lives at ext[l + M]; fold l in [-M, N+M-1] onto [0, N+M).
  std::vector<Real> folded(period, Real(0));
  for (int l = -m_ext; l < n + m_ext; ++l) {
    const int r = ((l % period) + period) % period;
    folded[r] += ext[l + m_ext];
  }
  return folded;
}

template <typename Real>
std::vector<std::complex<Real>> fc_coefficients(std::span<const Real> ext) {
  const int period = static_cast<int>(ext.size());
  const int kmax = period / 2;
  const bool even = period % 2 == 0;
  const Real two_pi = 2 * pi_v<Real>();
  std::vector<Real> cs(period), sn(period);
  for (int j = 0; j < period; ++j) {
    cs[j] = rcos(two_pi * Real(j) / Real(period));
    sn[j] = rsin(two_pi * Real(j) / Real(period));
  }
  std::vector<std::complex<Real>> a(2 * kmax + 1);
  for (int k = -kmax; k <= kmax; ++k) {
    if (even && k == -kmax) continue;  // filled from +kmax below
    Real re = 0, im = 0;
    const int kk = ((k % period) + period) % period;
    for (int l = 0; l < period; ++l) {
      const int idx = static_cast<int>((static_cast<long long>(kk) * l) % period);
      re += ext[l] * cs[idx];
      im -= ext[l] * sn[idx];
    }
    a[k + kmax] = std::complex<Real>(re / Real(period), im / Real(period));
  }
  if (even) {
    const auto nyq = a[2 * kmax] / Real(2);
    a[2 * kmax] = nyq;
    a[0] = nyq;
  }
  return a;
}

template std::vector<std::vector<double>> extrapolation_weights<double>(int, int);
template std::vector<std::vector<Extended>> extrapolation_weights<Extended>(int, int);
template std::vector<double> window_profile<double>(int);
template std::vector<Extended> window_profile<Extended>(int);
template std::vector<double> extrapolate_ends<double>(std::span<const double>, const FcParams&);
template std::vector<Extended> extrapolate_ends<Extended>(std::span<const Extended>,
                                                          const FcParams&);
template std::vector<double> window_values<double>(const FcParams&);
template std::vector<Extended> window_values<Extended>(const FcParams&);
template std::vector<double> periodic_extension<double>(std::span<const double>,
                                                        const FcParams&);
template std::vector<Extended> periodic_extension<Extended>(std::span<const Extended>,
                                                            const FcParams&);
template std::vector<std::complex<double>> fc_coefficients<double>(std::span<const double>);
template std::vector<std::complex<Extended>> fc_coefficients<Extended>(
    std::span<const Extended>);

}  // namespace fc

std::vector<double> uniform_grid(const FcParams& params) {
  params.validate();
  const int n = params.n_points;
  std::vector<double> z(n);
  for (int l = 0; l < n; ++l) z[l] = -1.0 + 2.0 * l / (n - 1);
  z[n - 1] = 1.0;
  return z;
}

std::vector<double> extrapolate_ends(std::span<const double> samples, const FcParams& params) {
  if (params.precision == Precision::Extended) {
    const auto s = to_real<Extended>(samples);
    return to_double(fc::extrapolate_ends<Extended>(s, params));
  }
  return fc::extrapolate_ends<double>(samples, params);
}

std::vector<double> window_values(const FcParams& params) {
  if (params.precision == Precision::Extended) {
    return to_double(fc::window_values<Extended>(params));
  }
  return fc::window_values<double>(params);
}

double window_function(double z, const FcParams& params) {
  params.validate();
  const double d = (std::fabs(z) - 1.0) / params.spacing();
  if (d <= 0.0) return 1.0;
  const KaiserStep<double> step(kWindowShape);
  return window_at_distance(step, d, params.ext_points);
}

PeriodicExtension periodic_extension(std::span<const double> samples, const FcParams& params) {
  PeriodicExtension out;
  out.period_len = params.period_len();
  if (params.precision == Precision::Extended) {
    const auto s = to_real<Extended>(samples);
    out.samples = to_double(fc::periodic_extension<Extended>(s, params));
  } else {
    out.samples = fc::periodic_extension<double>(samples, params);
  }
  return out;
}

std::vector<std::complex<double>> fc_coefficients(const PeriodicExtension& ext) {
  return fc::fc_coefficients<double>(ext.samples);
}

namespace {

template <typename Real>
FcBasis build_basis_impl(const FcParams& params) {
  const int n = params.n_points;
  FcBasis basis;
  basis.params = params;
  basis.period_len = params.period_len();
  basis.max_mode = params.period_points() / 2;
  basis.coeffs.resize(2 * basis.max_mode + 1, n);
  basis.coeffs_lo.resize(2 * basis.max_mode + 1, n);
  basis.window = to_double(fc::window_values<Real>(params));
  std::vector<Real> unit(n, Real(0));
  for (int i = 0; i < n; ++i) {
    std::fill(unit.begin(), unit.end(), Real(0));
    unit[i] = 1;
    const auto ext = fc::periodic_extension<Real>(unit, params);
    const auto a = fc::fc_coefficients<Real>(ext);
    for (std::size_t r = 0; r < a.size(); ++r) {
      const auto row = static_cast<Eigen::Index>(r);
      const double re = static_cast<double>(a[r].real());
      const double im = static_cast<double>(a[r].imag());
      basis.coeffs(row, i) = {re, im};
      basis.coeffs_lo(row, i) = {static_cast<double>(a[r].real() - Real(re)),
                                 static_cast<double>(a[r].imag() - Real(im))};
    }
  }
  return basis;
}

}  // namespace

FcBasis build_basis(const FcParams& params) {
  params.validate();
  if (params.precision == Precision::Extended) return build_basis_impl<Extended>(params);
  return build_basis_impl<double>(params);
}

namespace {

using ComplexExt = std::complex<Extended>;

ComplexExt split_coeff(const FcBasis& basis, Eigen::Index r, Eigen::Index i) {
  const auto hi = basis.coeffs(r, i);
  const auto lo = basis.coeffs_lo(r, i);
  return {Extended(hi.real()) + Extended(lo.real()), Extended(hi.imag()) + Extended(lo.imag())};
}

Extended mode_scale(const FcBasis& basis) {
  const auto& p = basis.params;
  return 2 * pi_v<Extended>() * Extended(p.n_points - 1) /
         (2 * Extended(p.period_points()));
}

}  // namespace

Eigen::MatrixXd evaluate_basis(const FcBasis& basis, std::span<const double> points) {
  const int kmax = basis.max_mode;
  const int n = basis.size();
  const auto npts = static_cast<Eigen::Index>(points.size());
  const int nmodes = 2 * kmax + 1;
  std::vector<ComplexExt> a(static_cast<std::size_t>(nmodes) * n);
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < nmodes; ++r) a[static_cast<std::size_t>(i) * nmodes + r] = split_coeff(basis, r, i);
  }
  const Extended scale = mode_scale(basis);
  Eigen::MatrixXd out(npts, n);
  std::vector<ComplexExt> modes(nmodes);
  for (Eigen::Index m = 0; m < npts; ++m) {
    const Extended phase = scale * (Extended(points[m]) + 1);
    const ComplexExt step(rcos(phase), rsin(phase));
    modes[kmax] = ComplexExt(1, 0);
    for (int k = 1; k <= kmax; ++k) {
      modes[kmax + k] = k % 16 == 0 ? ComplexExt(rcos(phase * k), rsin(phase * k))
                                    : modes[kmax + k - 1] * step;
      modes[kmax - k] = std::conj(modes[kmax + k]);
    }
    for (int i = 0; i < n; ++i) {
      const ComplexExt* col = &a[static_cast<std::size_t>(i) * nmodes];
      Extended sum = 0;
      for (int r = 0; r < nmodes; ++r) {
        sum += col[r].real() * modes[r].real() - col[r].imag() * modes[r].imag();
      }
      out(m, i) = static_cast<double>(sum);
    }
  }
  return out;
}

FcBasis differentiate_basis(const FcBasis& basis) {
  FcBasis d = basis;
  const Extended scale = mode_scale(basis);
  for (Eigen::Index i = 0; i < basis.coeffs.cols(); ++i) {
    for (int k = -basis.max_mode; k <= basis.max_mode; ++k) {
      const Eigen::Index r = k + basis.max_mode;
      const ComplexExt v = split_coeff(basis, r, i) * ComplexExt(0, scale * k);
      const double re = static_cast<double>(v.real());
      const double im = static_cast<double>(v.imag());
      d.coeffs(r, i) = {re, im};
      d.coeffs_lo(r, i) = {static_cast<double>(v.real() - re), static_cast<double>(v.imag() - im)};
    }
  }
  return d;
}

}  // namespace fcdg
