#pragma once

// TE-mode Maxwell equations on a rectangle with line DG:
//   mu0 Hz_t = -dEy/dx + dEx/dy
//   eps0 eps_inf Ex_t = dHz/dy - eps0 Jx + f (y - y0)
//   eps0 eps_inf Ey_t = -dHz/dx - eps0 Jy + f (x - x0)
// optionally coupled to a polarization ODE P_t = J,
//   J_t = omega_p^2 E - J / tau - omega0^2 P F(|P|^2).

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fcdg/line_dg2d.hpp"

namespace fcdg {

struct MaxwellParams {
  double mu0 = 1.0;
  double eps0 = 1.0;
  double eps_inf = 1.0;

  void validate() const;
  double wave_speed() const;
};

struct DuffingParams {
  double omega0 = 1.0;
  double omega_p = 1.0;
  double tau_inv = 1.0;
  std::vector<double> lambdas{1.0, 1.0};  // lambda_0, lambda_2, ..., lambda_{2 n_pmd}

  int n_pmd() const { return static_cast<int>(lambdas.size()) - 1; }
  void validate() const;
  /// F_PMD as a function of |P|^2.
  double factor(double p_squared) const;
  /// int_0^s F_PMD(r) dr.
  double factor_integral(double s) const;
};

enum class MaterialModel { Vacuum, Lorentz, Duffing };
MaterialModel parse_material(const std::string& name);

struct ForcingSpec {
  bool enabled = false;
  double amplitude = 2500.0;
  double frequency = 100.0;  // sin(frequency t)
  double width = 36.0;       // exp(-width r^2)
  double x0 = 0.5;
  double y0 = 0.5;

  double value(double x, double y, double t) const;
};

enum class EmBoundary { Periodic, PecCavity };
EmBoundary parse_boundary(const std::string& name);

enum class GhostKind { PecTangential, Even };

/// Exterior trace for a boundary face: the tangential electric field is
/// mirrored with a sign change, everything else evenly.
double apply_em_boundary(double interior, GhostKind kind);

struct MaxwellState {
  Field2D hz, ex, ey;
  Field2D px, py, jx, jy;  // empty without a polarization model

  bool has_polarization() const { return px.size() > 0; }
};

struct DuffingRates {
  double dpx = 0.0, dpy = 0.0;  // P_t = J
  double djx = 0.0, djy = 0.0;  // J_t
};

DuffingRates duffing_rhs(double px, double py, double jx, double jy, double ex, double ey,
                         const DuffingParams& dp);

/// Linear Lorentz rates, coded separately from the Duffing path.
DuffingRates lorentz_rhs(double px, double py, double jx, double jy, double ex, double ey,
                         const DuffingParams& dp);

struct MaxwellSetup {
  MaxwellParams params;
  FluxKind flux = FluxKind::Centered;
  EmBoundary bc = EmBoundary::PecCavity;
  MaterialModel material = MaterialModel::Vacuum;
  DuffingParams duffing;
  ForcingSpec forcing;
};

class MaxwellOperator {
 public:
  MaxwellOperator(const ElementOperators& ops, const Mesh2D& mesh, const std::vector<double>& nodes,
                  const MaxwellSetup& setup);

  int field_size() const { return n_ * n_ * dg_.mesh().elements(); }
  int field_count() const { return setup_.material == MaterialModel::Vacuum ? 3 : 7; }
  int dofs() const { return field_size() * field_count(); }
  const MaxwellSetup& setup() const { return setup_; }
  const LineDG2D& dg() const { return dg_; }

  void rhs(double t, const Eigen::VectorXd& u, Eigen::VectorXd& du) const;

  /// Forcing part of du at time t (zero for disabled forcing).
  void forcing_rhs(double t, Eigen::VectorXd& g) const;

  Eigen::VectorXd pack(const MaxwellState& s) const;
  MaxwellState unpack(const Eigen::VectorXd& u) const;

  /// 1/2 int mu0 Hz^2 + eps0 eps_inf |E|^2 with the tensor trapezoid rule.
  double trapezoid_energy(const Eigen::VectorXd& u) const;
  /// The same energy in the mass-matrix inner product.
  double mass_energy(const Eigen::VectorXd& u) const;
  /// mass_energy plus the polarization energy eps0 / (2 omega_p^2)
  /// (|J|^2 + omega0^2 G(|P|^2)) with G the integral of F; for the Lorentz
  /// model the polarization part uses the mass inner product.
  double total_energy(const Eigen::VectorXd& u) const;
  /// sqrt(1/2 g^T W g): the norm matching mass_energy.
  double mass_norm(const Eigen::VectorXd& g) const;

 private:
  double weighted_block(const Eigen::Ref<const Eigen::MatrixXd>& a) const;

  LineDG2D dg_;
  MaxwellSetup setup_;
  int n_;
  Eigen::MatrixXd mass_;
  std::vector<double> nodes_;
  Eigen::VectorXd trap_;
  Field2D forcing_x_, forcing_y_;  // spatial profile times (y - y0), (x - x0)
};

MaxwellState maxwell_rhs(const MaxwellState& state, const ElementOperators& ops,
                         const Mesh2D& mesh, const std::vector<double>& nodes,
                         const MaxwellSetup& setup, double t);

struct MaxwellConfig {
  BasisSpec basis;
  double x0 = -1.5 * M_PI, x1 = 1.5 * M_PI, y0 = -1.5 * M_PI, y1 = 1.5 * M_PI;
  int n_el_x = 4, n_el_y = 4;
  MaxwellSetup setup;
  std::optional<IntegratorKind> integrator;  // default: Taylor when linear and unforced
  int taylor_order = 8;
  double cfl = 0.2;
  double t_final = 0.0;  // 0 selects one standing-mode period
  std::function<double(double, double)> initial_hz;  // default sin(5x) sin(5y)
  bool standing_mode_error = true;
  std::vector<double> snapshot_times;
  int energy_stride = 10;
};

struct MaxwellSnapshot {
  double t = 0.0;
  Field2D hz, ex, ey;  // node values
};

struct EnergySample {
  double t = 0.0;
  double trapezoid = 0.0;
  double mass = 0.0;
  double total = 0.0;
  double bound = 0.0;  // sqrt-energy bound (sqrt E(0) + int ||g||)^2
};

struct MaxwellResult {
  MaxwellState final_state;
  std::vector<MaxwellSnapshot> snapshots;
  std::vector<EnergySample> energy;
  double hz_error = 0.0;
  double dt = 0.0;
  long steps = 0;
  double t_final = 0.0;
};

double standing_mode_period();
double standing_mode_hz(double x, double y, double t);

MaxwellResult solve_maxwell_2d(const MaxwellConfig& cfg);
MaxwellResult solve_maxwell_2d(const MaxwellConfig& cfg, const ElementBasis& basis);

}  // namespace fcdg
