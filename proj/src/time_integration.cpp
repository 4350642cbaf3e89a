#include "fcdg/time_integration.hpp"

#include <cmath>

#include "fcdg/error.hpp"

namespace fcdg {

void check_finite(const Eigen::VectorXd& u, const std::string& where) {
  if (!u.allFinite()) throw DivergenceError("non-finite state " + where);
}

void taylor_step(Eigen::VectorXd& u, const LinearRhs& apply, const TaylorScheme& scheme) {
  if (scheme.order < 1) throw ParameterError("Taylor order must be >= 1");
  Eigen::VectorXd term = u, next(u.size());
  for (int k = 1; k <= scheme.order; ++k) {
    apply(term, next);
    term.swap(next);
    term *= scheme.dt / k;
    u += term;
  }
  check_finite(u, "after Taylor step");
}

std::complex<double> taylor_amplification(int order, std::complex<double> z) {
  std::complex<double> sum = 1.0, term = 1.0;
  for (int k = 1; k <= order; ++k) {
    term *= z / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

namespace {

// Lowest-degree nonzero coefficient of |R(i theta)|^2 - 1, scaled by (order!)^2.
__int128 leading_modulus_coefficient(int order) {
  std::vector<__int128> scaled(order + 1);  // order! / k!
  __int128 f = 1;
  for (int k = 1; k <= order; ++k) f *= k;
  for (int k = 0; k <= order; ++k) {
    __int128 d = 1;
    for (int j = 1; j <= k; ++j) d *= j;
    scaled[k] = f / d;
  }
  // (i theta)^j (-i theta)^k = i^{j-k} theta^{j+k}; only even j - k survive.
  for (int m = 1; m <= 2 * order; ++m) {
    __int128 c = 0;
    for (int j = std::max(0, m - order); j <= std::min(m, order); ++j) {
      const int k = m - j;
      const int e = ((j - k) % 4 + 4) % 4;
      if (e == 1 || e == 3) continue;
      c += (e == 0 ? 1 : -1) * scaled[j] * scaled[k];
    }
    if (c != 0) return c;
  }
  return 0;
}

}  // namespace

bool stability_includes_imaginary_axis(int order) {
  if (order < 1 || order > 20) throw ParameterError("Taylor order must be in 1..20");
  return leading_modulus_coefficient(order) < 0;
}

double imaginary_stability_limit(int order) {
  if (!stability_includes_imaginary_axis(order)) return 0.0;
  auto excess = [&](double th) {
    return std::abs(taylor_amplification(order, {0.0, th})) - 1.0 - 1e-12;
  };
  double lo = 1e-3, hi = lo;
  while (excess(hi) <= 0.0) {
    lo = hi;
    hi += 1e-3;
    if (hi > 20.0) return hi;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) <= 0.0 ? lo : hi) = mid;
  }
  return lo;
}

void check_taylor_order(int order, bool imaginary_spectrum) {
  if (order < 1 || order > 20) throw ConfigError("Taylor order must lie in 1..20");
  if (imaginary_spectrum && !stability_includes_imaginary_axis(order))
    throw ConfigError("Taylor order " + std::to_string(order) +
                      " is unstable on the imaginary axis; use 3, 4, 7, 8, 11, 12, ...");
}

void rk4_step(Eigen::VectorXd& u, const TimeRhs& rhs, double t, double dt) {
  thread_local Eigen::VectorXd k, acc, stage;
  const Eigen::Index n = u.size();
  k.resize(n);
  acc.resize(n);
  stage.resize(n);
  rhs(t, u, k);
  acc = k;
  stage = u + (0.5 * dt) * k;
  rhs(t + 0.5 * dt, stage, k);
  acc += 2.0 * k;
  stage = u + (0.5 * dt) * k;
  rhs(t + 0.5 * dt, stage, k);
  acc += 2.0 * k;
  stage = u + dt * k;
  rhs(t + dt, stage, k);
  acc += k;
  u += (dt / 6.0) * acc;
  check_finite(u, "after RK4 step");
}

StepPlan plan_steps(double t_final, double dt_max) {
  if (!(dt_max > 0.0)) throw ParameterError("time step must be positive");
  if (t_final < 0.0) throw ParameterError("final time must be non-negative");
  StepPlan p;
  if (t_final == 0.0) return p;
  p.steps = static_cast<long>(std::ceil(t_final / dt_max - 1e-12));
  p.dt = t_final / p.steps;
  return p;
}

double cfl_timestep(double cfl, double node_gap, double max_speed) {
  if (!(cfl > 0.0) || !(node_gap > 0.0) || !(max_speed > 0.0)) {
    throw ParameterError("cfl, node gap and wave speed must be positive");
  }
  return cfl * node_gap / max_speed;
}

}  // namespace fcdg
