#pragma once

// Line-based DG on a structured rectangle of nx x ny affine elements. A
// scalar field is an N x (N * nx * ny) matrix: element e = ex + nx * ey owns
// columns [e N, (e + 1) N), entry (i, e N + j) is the value at x-node i,
// y-node j. Derivatives along x act on columns of each block, derivatives
// along y on its rows.

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "fcdg/dg1d.hpp"

namespace fcdg {

struct Mesh2D {
  double x0 = 0.0, x1 = 1.0;
  double y0 = 0.0, y1 = 1.0;
  int nx = 1, ny = 1;

  Mesh2D() = default;
  Mesh2D(double x0, double x1, double y0, double y1, int nx, int ny);

  int elements() const { return nx * ny; }
  int element(int ex, int ey) const { return ex + nx * ey; }
  double jac_x() const { return 0.5 * (x1 - x0) / nx; }
  double jac_y() const { return 0.5 * (y1 - y0) / ny; }
  double x(int ex, double z) const { return x0 + (x1 - x0) * ex / nx + jac_x() * (z + 1.0); }
  double y(int ey, double z) const { return y0 + (y1 - y0) * ey / ny + jac_y() * (z + 1.0); }
};

using Field2D = Eigen::MatrixXd;

/// Face traces of a field. Column e of each N x n_el matrix lists the trace
/// along the face (over y-nodes for x-faces, over x-nodes for y-faces).
struct FaceTraces {
  Eigen::MatrixXd west, east, south, north;
};

class LineDG2D {
 public:
  LineDG2D(const ElementOperators& ops, const Mesh2D& mesh);

  int n() const { return line_.size(); }
  const Mesh2D& mesh() const { return mesh_; }
  const LineOperator& line() const { return line_; }

  FaceTraces traces(const Eigen::Ref<const Eigen::MatrixXd>& u) const;

  /// Reference x-derivative r1 from per-face flux values (same layout as
  /// FaceTraces::west / east).
  void derivative_x(const Eigen::Ref<const Eigen::MatrixXd>& u, const Eigen::MatrixXd& flux_west,
                    const Eigen::MatrixXd& flux_east, Eigen::Ref<Eigen::MatrixXd> r) const;
  void derivative_y(const Eigen::Ref<const Eigen::MatrixXd>& u, const Eigen::MatrixXd& flux_south,
                    const Eigen::MatrixXd& flux_north, Eigen::Ref<Eigen::MatrixXd> r) const;

  int west_neighbor(int e) const;
  int east_neighbor(int e) const;
  int south_neighbor(int e) const;
  int north_neighbor(int e) const;

 private:
  LineOperator line_;
  Mesh2D mesh_;
  Eigen::MatrixXd deriv_t_;
};

/// Line derivative of a single line with given flux values at its two ends.
Eigen::VectorXd line_derivative(const Eigen::VectorXd& u_line, double flux_left, double flux_right,
                                const ElementOperators& ops);

/// Interface flux matrices for periodic scalar transport with speed sign.
void periodic_fluxes_x(const LineDG2D& dg, const FaceTraces& tr, FluxWeights w,
                       Eigen::MatrixXd& west, Eigen::MatrixXd& east);
void periodic_fluxes_y(const LineDG2D& dg, const FaceTraces& tr, FluxWeights w,
                       Eigen::MatrixXd& south, Eigen::MatrixXd& north);

class Transport2D {
 public:
  Transport2D(const ElementOperators& ops, const Mesh2D& mesh, double alpha, double beta,
              FluxKind flux);

  int dofs() const { return dg_.n() * dg_.n() * dg_.mesh().elements(); }
  void apply(const Eigen::VectorXd& u, Eigen::VectorXd& du) const;

 private:
  LineDG2D dg_;
  double alpha_, beta_;
  FluxWeights wx_, wy_;
};

Field2D semidiscrete_rhs_2d_transport(const Field2D& field, double alpha, double beta,
                                      const ElementOperators& ops, const Mesh2D& mesh,
                                      FluxKind flux);

/// Samples f at the element nodes (nodal bases only).
Field2D sample_field(const Mesh2D& mesh, const std::vector<double>& nodes,
                     const std::function<double(double, double)>& f);

/// Coefficients of f: nodal samples for FC, tensor L2 projection for Legendre.
Field2D project_field(const Mesh2D& mesh, const ElementBasis& basis,
                      const std::function<double(double, double)>& f);

/// Node values of a coefficient field.
Field2D field_node_values(const Field2D& coeffs, const ElementBasis& basis);

/// Tensor trapezoid integral of g over the mesh, g given at element nodes.
double trapezoid_integral(const Field2D& g, const Mesh2D& mesh, const std::vector<double>& nodes);

double l2_error_2d(const Field2D& numeric, const Field2D& exact, const Mesh2D& mesh,
                   const std::vector<double>& nodes);

/// dt = cfl / sum_d (c_d / gap_d) with gap_d the smallest node gap along d.
double cfl_timestep_2d(double cfl, double speed_x, double gap_x, double speed_y, double gap_y);

struct Transport2DConfig {
  BasisSpec basis;
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  int n_el_x = 4;
  int n_el_y = 4;
  double alpha = 1.0;
  double beta = 1.0;
  FluxKind flux = FluxKind::Upwind;
  int taylor_order = 8;
  double cfl = 0.2;
  double t_final = 1.0;
  std::function<double(double, double)> initial;  // default sin(10 pi x) + sin(10 pi y)
};

struct Transport2DResult {
  Field2D coeffs;
  Field2D node_values;
  double final_error = 0.0;
  double dt = 0.0;
  long steps = 0;
};

Transport2DResult solve_transport_2d(const Transport2DConfig& cfg);
Transport2DResult solve_transport_2d(const Transport2DConfig& cfg, const ElementBasis& basis);

}  // namespace fcdg
