#include "fcdg/quadrature.hpp"

#include <complex>
#include <string>

#include "fcdg/error.hpp"
#include "fcdg/fft.hpp"

namespace fcdg {

int gregory_stencil_width(int order) { return order % 2 == 0 ? order - 1 : order; }

namespace {

void check_order(int order) {
  if (order < 2 || order > 16) {
    throw ParameterError("Gregory order must be in 2..16, got " + std::to_string(order));
  }
}

// B_0 .. B_count-1 with B_1 = -1/2.
template <typename Real>
std::vector<Real> bernoulli_numbers(int count) {
  std::vector<Real> b(count, Real(0));
  b[0] = 1;
  for (int m = 1; m < count; ++m) {
    Real binom = 1;  // C(m + 1, k)
    Real sum = 0;
    for (int k = 0; k < m; ++k) {
      sum += binom * b[k];
      binom = binom * Real(m + 1 - k) / Real(k + 1);
    }
    b[m] = -sum / Real(m + 1);
  }
  return b;
}

template <typename Real>
std::vector<Real> solve_dense(std::vector<std::vector<Real>> a, std::vector<Real> rhs) {
  const int n = static_cast<int>(rhs.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r) {
      if (rabs(a[r][col]) > rabs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    std::swap(rhs[col], rhs[piv]);
    for (int r = col + 1; r < n; ++r) {
      const Real f = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<Real> x(n);
  for (int r = n - 1; r >= 0; --r) {
    Real s = rhs[r];
    for (int c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

}  // namespace

namespace quad {

template <typename Real>
std::vector<Real> gregory_weights(int n, int order) {
  check_order(order);
  const int r = gregory_stencil_width(order);
  if (n < 2 * r || n < 2) {
    throw ParameterError("Gregory rule of order " + std::to_string(order) + " needs at least " +
                         std::to_string(2 * r) + " nodes, got " + std::to_string(n));
  }
  // End corrections d_j satisfy sum_j d_j j^m = -1/2 (m = 0), B_{m+1}/(m+1)
  // (m odd), 0 (m even > 0), from the Euler-Maclaurin expansion.
  const auto bern = bernoulli_numbers<Real>(r + 2);
  std::vector<std::vector<Real>> a(r, std::vector<Real>(r));
  std::vector<Real> rhs(r, Real(0));
  for (int m = 0; m < r; ++m) {
    for (int j = 0; j < r; ++j) {
      Real p = 1;
      for (int e = 0; e < m; ++e) p *= Real(j);
      a[m][j] = p;
    }
    if (m == 0) {
      rhs[m] = Real(-0.5);
    } else if (m % 2 == 1) {
      rhs[m] = bern[m + 1] / Real(m + 1);
    }
  }
  const auto d = solve_dense<Real>(a, rhs);
  const Real h = Real(2) / Real(n - 1);
  std::vector<Real> w(n, Real(1));
  for (int j = 0; j < r; ++j) {
    w[j] += d[j];
    w[n - 1 - j] += d[j];
  }
  for (auto& v : w) v *= h;
  return w;
}

template <typename Real>
std::vector<Real> fourier_interpolate(std::span<const Real> samples, int factor, int deriv,
                                      Real period_len) {
  if (factor < 1) {
    throw ParameterError("fourier_interpolate: factor must be >= 1, got " +
                         std::to_string(factor));
  }
  using Cx = std::complex<Real>;
  const int len = static_cast<int>(samples.size());
  const int fine = len * factor;
  std::vector<Cx> spec(len);
  for (int l = 0; l < len; ++l) spec[l] = Cx(samples[l], Real(0));
  dft_inplace<Real>(spec, DftSign::Forward);
  std::vector<Cx> padded(fine, Cx(Real(0), Real(0)));
  const int kmax = len / 2;
  const bool even = len % 2 == 0;
  const Real w0 = 2 * pi_v<Real>() / period_len;
  auto scaled = [&](Cx a, int k) {
    if (deriv == 1) return a * Cx(Real(0), w0 * Real(k));
    return a;
  };
  for (int k = -kmax; k <= kmax; ++k) {
    Cx a = spec[((k % len) + len) % len] / Real(len);
    if (even && (k == kmax || k == -kmax)) a /= Real(2);
    padded[((k % fine) + fine) % fine] += scaled(a, k);
  }
  dft_inplace<Real>(padded, DftSign::Backward);
  std::vector<Real> out(fine);
  for (int m = 0; m < fine; ++m) out[m] = padded[m].real();
  return out;
}

template std::vector<double> gregory_weights<double>(int, int);
template std::vector<Extended> gregory_weights<Extended>(int, int);
template std::vector<double> fourier_interpolate<double>(std::span<const double>, int, int,
                                                         double);
template std::vector<Extended> fourier_interpolate<Extended>(std::span<const Extended>, int, int,
                                                             Extended);

}  // namespace quad

GregoryRule gregory_weights(int n, int order) {
  const auto w = quad::gregory_weights<Extended>(n, order);
  return {n, order, std::vector<double>(w.begin(), w.end())};
}

std::vector<double> fourier_interpolate(std::span<const double> samples, int factor) {
  return quad::fourier_interpolate<double>(samples, factor);
}

double integrate_on_reference(std::span<const double> f_samples, const GregoryRule& rule) {
  if (static_cast<int>(f_samples.size()) != rule.n) {
    throw ShapeError("integrate_on_reference: rule has " + std::to_string(rule.n) +
                     " nodes, got " + std::to_string(f_samples.size()) + " samples");
  }
  double sum = 0.0;
  for (int j = 0; j < rule.n; ++j) sum += rule.weights[j] * f_samples[j];
  return sum;
}

}  // namespace fcdg
