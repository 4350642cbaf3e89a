#include "fcdg/line_dg2d.hpp"

#include <cmath>

#include "fcdg/error.hpp"

namespace fcdg {

Mesh2D::Mesh2D(double x0_, double x1_, double y0_, double y1_, int nx_, int ny_)
    : x0(x0_), x1(x1_), y0(y0_), y1(y1_), nx(nx_), ny(ny_) {
  if (nx < 1 || ny < 1) throw ParameterError("2-D mesh needs at least one element per direction");
  if (!(x1 > x0) || !(y1 > y0)) throw ParameterError("2-D mesh needs a nondegenerate rectangle");
}

LineDG2D::LineDG2D(const ElementOperators& ops, const Mesh2D& mesh)
    : line_(ops), mesh_(mesh), deriv_t_(ops.inv_mass_stiffness.transpose()) {}

int LineDG2D::west_neighbor(int e) const {
  const int ex = e % mesh_.nx, ey = e / mesh_.nx;
  return mesh_.element((ex + mesh_.nx - 1) % mesh_.nx, ey);
}
int LineDG2D::east_neighbor(int e) const {
  const int ex = e % mesh_.nx, ey = e / mesh_.nx;
  return mesh_.element((ex + 1) % mesh_.nx, ey);
}
int LineDG2D::south_neighbor(int e) const {
  const int ex = e % mesh_.nx, ey = e / mesh_.nx;
  return mesh_.element(ex, (ey + mesh_.ny - 1) % mesh_.ny);
}
int LineDG2D::north_neighbor(int e) const {
  const int ex = e % mesh_.nx, ey = e / mesh_.nx;
  return mesh_.element(ex, (ey + 1) % mesh_.ny);
}

FaceTraces LineDG2D::traces(const Eigen::Ref<const Eigen::MatrixXd>& u) const {
  const int n = this->n(), ne = mesh_.elements();
  if (u.rows() != n || u.cols() != n * ne) throw ShapeError("2-D field has the wrong shape");
  FaceTraces t;
  const Eigen::RowVectorXd w = line_.trace_left * u;
  const Eigen::RowVectorXd e = line_.trace_right * u;
  t.west = Eigen::Map<const Eigen::MatrixXd>(w.data(), n, ne);
  t.east = Eigen::Map<const Eigen::MatrixXd>(e.data(), n, ne);
  t.south.resize(n, ne);
  t.north.resize(n, ne);
  for (int k = 0; k < ne; ++k) {
    const auto blk = u.middleCols(static_cast<Eigen::Index>(k) * n, n);
    t.south.col(k).noalias() = blk * line_.trace_left.transpose();
    t.north.col(k).noalias() = blk * line_.trace_right.transpose();
  }
  return t;
}

void LineDG2D::derivative_x(const Eigen::Ref<const Eigen::MatrixXd>& u,
                            const Eigen::MatrixXd& flux_west, const Eigen::MatrixXd& flux_east,
                            Eigen::Ref<Eigen::MatrixXd> r) const {
  const Eigen::Index cols = u.cols();
  const Eigen::Map<const Eigen::RowVectorXd> fw(flux_west.data(), cols);
  const Eigen::Map<const Eigen::RowVectorXd> fe(flux_east.data(), cols);
  r.noalias() = -line_.deriv * u;
  r.noalias() += line_.lift_right * fe;
  r.noalias() -= line_.lift_left * fw;
}

void LineDG2D::derivative_y(const Eigen::Ref<const Eigen::MatrixXd>& u,
                            const Eigen::MatrixXd& flux_south, const Eigen::MatrixXd& flux_north,
                            Eigen::Ref<Eigen::MatrixXd> r) const {
  const int n = this->n(), ne = mesh_.elements();
  for (int k = 0; k < ne; ++k) {
    const Eigen::Index c0 = static_cast<Eigen::Index>(k) * n;
    auto out = r.middleCols(c0, n);
    out.noalias() = -u.middleCols(c0, n) * deriv_t_;
    out.noalias() += flux_north.col(k) * line_.lift_right.transpose();
    out.noalias() -= flux_south.col(k) * line_.lift_left.transpose();
  }
}

Eigen::VectorXd line_derivative(const Eigen::VectorXd& u_line, double flux_left, double flux_right,
                                const ElementOperators& ops) {
  if (u_line.size() != ops.size()) throw ShapeError("line length does not match operators");
  const LineOperator line(ops);
  Eigen::MatrixXd r;
  line.apply(u_line, Eigen::RowVectorXd::Constant(1, flux_left),
             Eigen::RowVectorXd::Constant(1, flux_right), r);
  return r.col(0);
}

void periodic_fluxes_x(const LineDG2D& dg, const FaceTraces& tr, FluxWeights w,
                       Eigen::MatrixXd& west, Eigen::MatrixXd& east) {
  const int ne = dg.mesh().elements();
  east.resize(tr.east.rows(), ne);
  west.resize(tr.west.rows(), ne);
  for (int k = 0; k < ne; ++k) {
    east.col(k) = w.left * tr.east.col(k) + w.right * tr.west.col(dg.east_neighbor(k));
  }
  for (int k = 0; k < ne; ++k) west.col(k) = east.col(dg.west_neighbor(k));
}

void periodic_fluxes_y(const LineDG2D& dg, const FaceTraces& tr, FluxWeights w,
                       Eigen::MatrixXd& south, Eigen::MatrixXd& north) {
  const int ne = dg.mesh().elements();
  north.resize(tr.north.rows(), ne);
  south.resize(tr.south.rows(), ne);
  for (int k = 0; k < ne; ++k) {
    north.col(k) = w.left * tr.north.col(k) + w.right * tr.south.col(dg.north_neighbor(k));
  }
  for (int k = 0; k < ne; ++k) south.col(k) = north.col(dg.south_neighbor(k));
}

Transport2D::Transport2D(const ElementOperators& ops, const Mesh2D& mesh, double alpha,
                         double beta, FluxKind flux)
    : dg_(ops, mesh),
      alpha_(alpha),
      beta_(beta),
      wx_(flux_weights(flux, alpha)),
      wy_(flux_weights(flux, beta)) {}

void Transport2D::apply(const Eigen::VectorXd& u, Eigen::VectorXd& du) const {
  const int n = dg_.n();
  const Eigen::Index cols = static_cast<Eigen::Index>(n) * dg_.mesh().elements();
  if (u.size() != n * cols) throw ShapeError("2-D transport state has the wrong length");
  const Eigen::Map<const Eigen::MatrixXd> U(u.data(), n, cols);
  du.resize(u.size());
  Eigen::Map<Eigen::MatrixXd> R(du.data(), n, cols);
  const FaceTraces tr = dg_.traces(U);
  Eigen::MatrixXd fa, fb, r(n, cols);
  periodic_fluxes_x(dg_, tr, wx_, fa, fb);
  dg_.derivative_x(U, fa, fb, r);
  R.noalias() = (-alpha_ / dg_.mesh().jac_x()) * r;
  periodic_fluxes_y(dg_, tr, wy_, fa, fb);
  dg_.derivative_y(U, fa, fb, r);
  R.noalias() += (-beta_ / dg_.mesh().jac_y()) * r;
}

Field2D semidiscrete_rhs_2d_transport(const Field2D& field, double alpha, double beta,
                                      const ElementOperators& ops, const Mesh2D& mesh,
                                      FluxKind flux) {
  const Transport2D op(ops, mesh, alpha, beta, flux);
  const Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(field.data(), field.size());
  Eigen::VectorXd du;
  op.apply(u, du);
  return Eigen::Map<const Eigen::MatrixXd>(du.data(), field.rows(), field.cols());
}

Field2D sample_field(const Mesh2D& mesh, const std::vector<double>& nodes,
                     const std::function<double(double, double)>& f) {
  const int n = static_cast<int>(nodes.size());
  Field2D u(n, static_cast<Eigen::Index>(n) * mesh.elements());
  for (int ey = 0; ey < mesh.ny; ++ey) {
    for (int ex = 0; ex < mesh.nx; ++ex) {
      const Eigen::Index c0 = static_cast<Eigen::Index>(mesh.element(ex, ey)) * n;
      for (int j = 0; j < n; ++j) {
        const double y = mesh.y(ey, nodes[j]);
        for (int i = 0; i < n; ++i) u(i, c0 + j) = f(mesh.x(ex, nodes[i]), y);
      }
    }
  }
  return u;
}

Field2D project_field(const Mesh2D& mesh, const ElementBasis& basis,
                      const std::function<double(double, double)>& f) {
  if (!basis.modal()) return sample_field(mesh, basis.nodes(), f);
  // Tensor projection: project along x for each fine y-node of the
  // over-integrated rule, then along y.
  const int n = basis.size();
  Field2D u(n, static_cast<Eigen::Index>(n) * mesh.elements());
  for (int ey = 0; ey < mesh.ny; ++ey) {
    for (int ex = 0; ex < mesh.nx; ++ex) {
      const Eigen::Index c0 = static_cast<Eigen::Index>(mesh.element(ex, ey)) * n;
      auto proj_y = [&](double zy) {
        return basis.project([&](double zx) { return f(mesh.x(ex, zx), mesh.y(ey, zy)); });
      };
      for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd row =
            basis.project([&](double zy) { return proj_y(zy)(i); });
        u.block(i, c0, 1, n) = row.transpose();
      }
    }
  }
  return u;
}

Field2D field_node_values(const Field2D& coeffs, const ElementBasis& basis) {
  if (!basis.modal()) return coeffs;
  const int n = basis.size();
  const Eigen::MatrixXd v = basis.node_values(Eigen::MatrixXd::Identity(n, n));
  Field2D out(coeffs.rows(), coeffs.cols());
  for (Eigen::Index c0 = 0; c0 < coeffs.cols(); c0 += n) {
    out.middleCols(c0, n) = v * coeffs.middleCols(c0, n) * v.transpose();
  }
  return out;
}

double trapezoid_integral(const Field2D& g, const Mesh2D& mesh, const std::vector<double>& nodes) {
  const Eigen::VectorXd w = trapezoid_weights(nodes);
  const int n = static_cast<int>(nodes.size());
  if (g.rows() != n || g.cols() != static_cast<Eigen::Index>(n) * mesh.elements()) {
    throw ShapeError("trapezoid_integral: field shape does not match mesh");
  }
  double sum = 0.0;
  for (int k = 0; k < mesh.elements(); ++k) {
    sum += w.dot(g.middleCols(static_cast<Eigen::Index>(k) * n, n) * w);
  }
  return sum * mesh.jac_x() * mesh.jac_y();
}

double l2_error_2d(const Field2D& numeric, const Field2D& exact, const Mesh2D& mesh,
                   const std::vector<double>& nodes) {
  if (numeric.rows() != exact.rows() || numeric.cols() != exact.cols()) {
    throw ShapeError("l2_error_2d: field shapes disagree");
  }
  return std::sqrt(trapezoid_integral((numeric - exact).cwiseAbs2(), mesh, nodes));
}

double cfl_timestep_2d(double cfl, double speed_x, double gap_x, double speed_y, double gap_y) {
  const double rate = std::fabs(speed_x) / gap_x + std::fabs(speed_y) / gap_y;
  if (!(cfl > 0.0) || !(rate > 0.0)) throw ParameterError("cfl and wave speed must be positive");
  return cfl / rate;
}

Transport2DResult solve_transport_2d(const Transport2DConfig& cfg) {
  return solve_transport_2d(cfg, ElementBasis(cfg.basis));
}

Transport2DResult solve_transport_2d(const Transport2DConfig& cfg, const ElementBasis& basis) {
  const Mesh2D mesh(cfg.x0, cfg.x1, cfg.y0, cfg.y1, cfg.n_el_x, cfg.n_el_y);
  auto f0 = cfg.initial;
  if (!f0) f0 = [](double x, double y) { return std::sin(10 * M_PI * x) + std::sin(10 * M_PI * y); };
  const Transport2D op(basis.ops(), mesh, cfg.alpha, cfg.beta, cfg.flux);
  check_taylor_order(cfg.taylor_order, cfg.flux == FluxKind::Centered);
  Field2D u0 = project_field(mesh, basis, f0);
  Eigen::VectorXd u = Eigen::Map<Eigen::VectorXd>(u0.data(), u0.size());

  const double dt_max = cfl_timestep_2d(cfg.cfl, cfg.alpha, basis.min_node_gap() * mesh.jac_x(),
                                        cfg.beta, basis.min_node_gap() * mesh.jac_y());
  const auto plan = plan_steps(cfg.t_final, dt_max);
  const LinearRhs apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { op.apply(x, y); };
  const TaylorScheme scheme{cfg.taylor_order, plan.dt, cfg.cfl};
  for (long s = 0; s < plan.steps; ++s) taylor_step(u, apply, scheme);

  Transport2DResult res;
  res.steps = plan.steps;
  res.dt = plan.dt;
  res.coeffs = Eigen::Map<const Eigen::MatrixXd>(u.data(), u0.rows(), u0.cols());
  res.node_values = field_node_values(res.coeffs, basis);
  const double lx = cfg.x1 - cfg.x0, ly = cfg.y1 - cfg.y0;
  auto wrap = [](double v, double a, double len) { return a + (v - a - len * std::floor((v - a) / len)); };
  const Field2D exact = sample_field(mesh, basis.nodes(), [&](double x, double y) {
    return f0(wrap(x - cfg.alpha * cfg.t_final, cfg.x0, lx), wrap(y - cfg.beta * cfg.t_final, cfg.y0, ly));
  });
  res.final_error = l2_error_2d(res.node_values, exact, mesh, basis.nodes());
  return res;
}

}  // namespace fcdg
