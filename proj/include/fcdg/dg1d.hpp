#pragma once

// 1-D DG for u_t + alpha u_x = 0 with periodic boundaries. Coefficients are
// stored as an N x n_el matrix (one column per element), flattened
// column-major when handed to the time steppers.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fcdg/element_basis.hpp"
#include "fcdg/time_integration.hpp"

namespace fcdg {

enum class FluxKind { Upwind, Centered, Alternating };

FluxKind parse_flux(const std::string& name);
std::string to_string(FluxKind kind);

struct Mesh1D {
  double a = -1.0;
  double b = 1.0;
  int n_el = 1;
  std::vector<double> bounds;     // n_el + 1 strictly increasing
  std::vector<double> jacobians;  // (x_{k+1} - x_k) / 2

  static Mesh1D uniform(double a, double b, int n_el);
  double x(int k, double z) const { return bounds[k] + jacobians[k] * (z + 1.0); }
};

/// Weights (w_left, w_right) of the interface flux u* = w_left uL + w_right uR.
/// Alternating is upwind for scalar transport.
struct FluxWeights {
  double left = 1.0;
  double right = 0.0;
};
FluxWeights flux_weights(FluxKind kind, double speed);

double numerical_flux(double u_left, double u_right, FluxKind kind, double speed);

using Field1D = Eigen::MatrixXd;

/// Per-element reference derivative r = M^{-1}(-S u + lR u*_R - lL u*_L).
struct LineOperator {
  Eigen::MatrixXd deriv;        // M^{-1} S
  Eigen::VectorXd lift_left;    // M^{-1} lL
  Eigen::VectorXd lift_right;   // M^{-1} lR
  Eigen::RowVectorXd trace_left;   // lL^T
  Eigen::RowVectorXd trace_right;  // lR^T

  explicit LineOperator(const ElementOperators& ops);
  int size() const { return static_cast<int>(deriv.rows()); }

  /// Columns of u are independent lines; flux_left/right hold u* per column.
  void apply(const Eigen::MatrixXd& u, const Eigen::RowVectorXd& flux_left,
             const Eigen::RowVectorXd& flux_right, Eigen::MatrixXd& r) const;
};

class Transport1D {
 public:
  Transport1D(const ElementOperators& ops, const Mesh1D& mesh, double speed, FluxKind flux);

  int dofs() const { return line_.size() * mesh_.n_el; }
  void apply(const Eigen::VectorXd& u, Eigen::VectorXd& du) const;
  Eigen::MatrixXd dense() const;

 private:
  LineOperator line_;
  Mesh1D mesh_;
  double speed_;
  FluxWeights weights_;
  Eigen::RowVectorXd inv_jac_;
};

Field1D semidiscrete_rhs(const Field1D& field, const ElementOperators& ops, const Mesh1D& mesh,
                         double speed, FluxKind flux);

/// sum_k J_k u_k^T M u_k.
double discrete_energy(const Field1D& field, const ElementOperators& ops, const Mesh1D& mesh);

/// Trapezoid weights on sorted nodes.
Eigen::VectorXd trapezoid_weights(const std::vector<double>& nodes);

/// Composite trapezoid L2 norm of (numeric - exact) given at each element's
/// reference nodes (N x n_el node values).
double l2_error(const Eigen::MatrixXd& numeric, const Eigen::MatrixXd& exact, const Mesh1D& mesh,
                const std::vector<double>& ref_nodes);

struct InitialData {
  enum class Kind { Sine, Gaussian } kind = Kind::Sine;
  double param = 10.0;  // sin(param pi x) or exp(-param x^2)

  double operator()(double x) const;
};

struct Transport1DConfig {
  BasisSpec basis;
  double a = -1.0;
  double b = 1.0;
  int n_el = 8;
  double speed = 1.0;
  FluxKind flux = FluxKind::Upwind;
  IntegratorKind integrator = IntegratorKind::Taylor;
  int taylor_order = 8;
  double cfl = 0.2;
  double t_final = 1.0;
  InitialData initial;
  double record_interval = 0.0;  // 0: only the final time
};

struct ErrorSample {
  double t = 0.0;
  double l2_error = 0.0;
};

struct Transport1DResult {
  Field1D coeffs;
  Eigen::MatrixXd node_values;
  std::vector<ErrorSample> history;
  double final_error = 0.0;
  double dt = 0.0;
  long steps = 0;
};

/// Exact solution: the periodic translate of the initial data.
double transport_exact(const Transport1DConfig& cfg, double x, double t);

Transport1DResult solve_transport_1d(const Transport1DConfig& cfg);
Transport1DResult solve_transport_1d(const Transport1DConfig& cfg, const ElementBasis& basis);

}  // namespace fcdg
