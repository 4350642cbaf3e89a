#pragma once

// Explicit time stepping: truncated Taylor series for autonomous linear
// systems and classical RK4 for forced or nonlinear ones.

#include <complex>
#include <functional>
#include <string>

#include <Eigen/Dense>

namespace fcdg {

/// du = A u for a linear, time-independent A.
using LinearRhs = std::function<void(const Eigen::VectorXd& u, Eigen::VectorXd& du)>;
/// du = f(t, u).
using TimeRhs = std::function<void(double t, const Eigen::VectorXd& u, Eigen::VectorXd& du)>;

enum class IntegratorKind { Taylor, Rk4 };

struct TaylorScheme {
  int order = 8;  // N_t
  double dt = 0.0;
  double cfl = 0.2;
};

/// Throws DivergenceError if u holds a NaN or infinity.
void check_finite(const Eigen::VectorXd& u, const std::string& where);

/// u <- sum_{k<=order} dt^k / k! A^k u.
void taylor_step(Eigen::VectorXd& u, const LinearRhs& apply, const TaylorScheme& scheme);

/// R(z) = sum_{k<=order} z^k / k!.
std::complex<double> taylor_amplification(int order, std::complex<double> z);

/// True when |R(i theta)| <= 1 on some interval (0, theta*].
bool stability_includes_imaginary_axis(int order);

/// theta* for orders whose stability region contains a segment of the
/// imaginary axis, 0 otherwise.
double imaginary_stability_limit(int order);

/// Throws ConfigError when a Taylor order cannot integrate a purely
/// imaginary spectrum (imaginary_spectrum) or is outside 1..20.
void check_taylor_order(int order, bool imaginary_spectrum);

void rk4_step(Eigen::VectorXd& u, const TimeRhs& rhs, double t, double dt);

/// Number of equal steps of size at most dt_max that land on t_final.
struct StepPlan {
  long steps = 0;
  double dt = 0.0;
};
StepPlan plan_steps(double t_final, double dt_max);

/// dt = cfl * node_gap / max_speed.
double cfl_timestep(double cfl, double node_gap, double max_speed);

}  // namespace fcdg
