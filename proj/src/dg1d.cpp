#include "fcdg/dg1d.hpp"

#include <cmath>

#include "fcdg/error.hpp"

namespace fcdg {

FluxKind parse_flux(const std::string& name) {
  if (name == "upwind") return FluxKind::Upwind;
  if (name == "centered" || name == "central") return FluxKind::Centered;
  if (name == "alternating") return FluxKind::Alternating;
  throw ConfigError("unknown flux '" + name + "' (expected upwind, centered or alternating)");
}

std::string to_string(FluxKind kind) {
  switch (kind) {
    case FluxKind::Upwind: return "upwind";
    case FluxKind::Centered: return "centered";
    case FluxKind::Alternating: return "alternating";
  }
  return "?";
}

Mesh1D Mesh1D::uniform(double a, double b, int n_el) {
  if (n_el < 1) throw ParameterError("mesh needs at least one element");
  if (!(b > a)) throw ParameterError("mesh domain must satisfy a < b");
  Mesh1D m;
  m.a = a;
  m.b = b;
  m.n_el = n_el;
  m.bounds.resize(n_el + 1);
  m.jacobians.resize(n_el);
  for (int k = 0; k <= n_el; ++k) m.bounds[k] = a + (b - a) * k / n_el;
  m.bounds[n_el] = b;
  for (int k = 0; k < n_el; ++k) m.jacobians[k] = 0.5 * (m.bounds[k + 1] - m.bounds[k]);
  return m;
}

FluxWeights flux_weights(FluxKind kind, double speed) {
  switch (kind) {
    case FluxKind::Centered: return {0.5, 0.5};
    case FluxKind::Upwind:
    case FluxKind::Alternating:
      return speed >= 0.0 ? FluxWeights{1.0, 0.0} : FluxWeights{0.0, 1.0};
  }
  return {};
}

double numerical_flux(double u_left, double u_right, FluxKind kind, double speed) {
  const auto w = flux_weights(kind, speed);
  return w.left * u_left + w.right * u_right;
}

LineOperator::LineOperator(const ElementOperators& ops)
    : deriv(ops.inv_mass_stiffness),
      trace_left(ops.lift_left.transpose()),
      trace_right(ops.lift_right.transpose()) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(ops.mass);
  lift_left = lu.solve(ops.lift_left);
  lift_right = lu.solve(ops.lift_right);
}

void LineOperator::apply(const Eigen::MatrixXd& u, const Eigen::RowVectorXd& flux_left,
                         const Eigen::RowVectorXd& flux_right, Eigen::MatrixXd& r) const {
  r.noalias() = -deriv * u;
  r.noalias() += lift_right * flux_right;
  r.noalias() -= lift_left * flux_left;
}

Transport1D::Transport1D(const ElementOperators& ops, const Mesh1D& mesh, double speed,
                         FluxKind flux)
    : line_(ops), mesh_(mesh), speed_(speed), weights_(flux_weights(flux, speed)) {
  inv_jac_.resize(mesh.n_el);
  for (int k = 0; k < mesh.n_el; ++k) inv_jac_(k) = 1.0 / mesh.jacobians[k];
}

void Transport1D::apply(const Eigen::VectorXd& u, Eigen::VectorXd& du) const {
  const int n = line_.size(), ne = mesh_.n_el;
  if (u.size() != n * ne) throw ShapeError("transport state has the wrong length");
  Eigen::Map<const Eigen::MatrixXd> U(u.data(), n, ne);
  const Eigen::RowVectorXd tl = line_.trace_left * U;
  const Eigen::RowVectorXd tr = line_.trace_right * U;
  // Interface k + 1/2 sits between element k and k + 1 (periodic).
  Eigen::RowVectorXd fr(ne), fl(ne);
  for (int k = 0; k < ne; ++k) {
    fr(k) = weights_.left * tr(k) + weights_.right * tl((k + 1) % ne);
  }
  for (int k = 0; k < ne; ++k) fl(k) = fr((k + ne - 1) % ne);
  du.resize(u.size());
  Eigen::Map<Eigen::MatrixXd> R(du.data(), n, ne);
  Eigen::MatrixXd r(n, ne);
  line_.apply(U, fl, fr, r);
  R.noalias() = r * (-speed_ * inv_jac_).asDiagonal();
}

Eigen::MatrixXd Transport1D::dense() const {
  const int n = dofs();
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n), col(n);
  for (int j = 0; j < n; ++j) {
    e(j) = 1.0;
    apply(e, col);
    a.col(j) = col;
    e(j) = 0.0;
  }
  return a;
}

Field1D semidiscrete_rhs(const Field1D& field, const ElementOperators& ops, const Mesh1D& mesh,
                         double speed, FluxKind flux) {
  if (field.rows() != ops.size() || field.cols() != mesh.n_el) {
    throw ShapeError("field shape does not match operators and mesh");
  }
  const Transport1D op(ops, mesh, speed, flux);
  const Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(field.data(), field.size());
  Eigen::VectorXd du;
  op.apply(u, du);
  return Eigen::Map<const Eigen::MatrixXd>(du.data(), field.rows(), field.cols());
}

double discrete_energy(const Field1D& field, const ElementOperators& ops, const Mesh1D& mesh) {
  double e = 0.0;
  for (int k = 0; k < mesh.n_el; ++k) {
    e += mesh.jacobians[k] * field.col(k).dot(ops.mass * field.col(k));
  }
  return e;
}

Eigen::VectorXd trapezoid_weights(const std::vector<double>& nodes) {
  const auto n = static_cast<Eigen::Index>(nodes.size());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double h = nodes[i + 1] - nodes[i];
    w(i) += 0.5 * h;
    w(i + 1) += 0.5 * h;
  }
  return w;
}

double l2_error(const Eigen::MatrixXd& numeric, const Eigen::MatrixXd& exact, const Mesh1D& mesh,
                const std::vector<double>& ref_nodes) {
  if (numeric.rows() != exact.rows() || numeric.cols() != exact.cols() ||
      numeric.cols() != mesh.n_el || numeric.rows() != static_cast<Eigen::Index>(ref_nodes.size())) {
    throw ShapeError("l2_error: shapes of numeric, exact, mesh and nodes disagree");
  }
  const Eigen::VectorXd w = trapezoid_weights(ref_nodes);
  double sum = 0.0;
  for (int k = 0; k < mesh.n_el; ++k) {
    const Eigen::VectorXd d = numeric.col(k) - exact.col(k);
    sum += mesh.jacobians[k] * w.dot(d.cwiseAbs2());
  }
  return std::sqrt(sum);
}

double InitialData::operator()(double x) const {
  if (kind == Kind::Sine) return std::sin(param * M_PI * x);
  return std::exp(-param * x * x);
}

double transport_exact(const Transport1DConfig& cfg, double x, double t) {
  const double len = cfg.b - cfg.a;
  double y = x - cfg.speed * t - cfg.a;
  y -= len * std::floor(y / len);
  double xs = cfg.a + y;
  // Pick the periodic image nearest the origin so that non-periodic data
  // such as the Gaussian is evaluated on its natural window.
  if (xs - len >= cfg.a && std::fabs(xs - len) < std::fabs(xs)) xs -= len;
  return cfg.initial(xs);
}

namespace {

Eigen::MatrixXd exact_nodes(const Transport1DConfig& cfg, const Mesh1D& mesh,
                            const std::vector<double>& nodes, double t) {
  Eigen::MatrixXd v(static_cast<Eigen::Index>(nodes.size()), mesh.n_el);
  for (int k = 0; k < mesh.n_el; ++k) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      v(static_cast<Eigen::Index>(i), k) = transport_exact(cfg, mesh.x(k, nodes[i]), t);
    }
  }
  return v;
}

}  // namespace

Transport1DResult solve_transport_1d(const Transport1DConfig& cfg) {
  return solve_transport_1d(cfg, ElementBasis(cfg.basis));
}

Transport1DResult solve_transport_1d(const Transport1DConfig& cfg, const ElementBasis& basis) {
  const Mesh1D mesh = Mesh1D::uniform(cfg.a, cfg.b, cfg.n_el);
  const int n = basis.size();
  const Transport1D op(basis.ops(), mesh, cfg.speed, cfg.flux);
  if (cfg.integrator == IntegratorKind::Taylor)
    check_taylor_order(cfg.taylor_order, cfg.flux == FluxKind::Centered);

  Field1D u0(n, mesh.n_el);
  for (int k = 0; k < mesh.n_el; ++k) {
    u0.col(k) = basis.project([&](double z) { return cfg.initial(mesh.x(k, z)); });
  }
  Eigen::VectorXd u = Eigen::Map<Eigen::VectorXd>(u0.data(), u0.size());

  const double gap = basis.min_node_gap() * mesh.jacobians[0];
  const double dt_max = cfl_timestep(cfg.cfl, gap, std::fabs(cfg.speed));
  const auto& nodes = basis.nodes();
  Transport1DResult res;

  auto error_at = [&](double t) {
    const Eigen::Map<const Eigen::MatrixXd> c(u.data(), n, mesh.n_el);
    return l2_error(basis.node_values(c), exact_nodes(cfg, mesh, nodes, t), mesh, nodes);
  };

  // Split [0, t_final] into recording segments; each uses equal steps.
  std::vector<double> marks;
  if (cfg.record_interval > 0.0) {
    for (double t = cfg.record_interval; t < cfg.t_final - 1e-12; t += cfg.record_interval) {
      marks.push_back(t);
    }
  }
  marks.push_back(cfg.t_final);

  const LinearRhs apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { op.apply(x, y); };
  const TimeRhs rhs = [&](double, const Eigen::VectorXd& x, Eigen::VectorXd& y) { op.apply(x, y); };
  res.history.push_back({0.0, error_at(0.0)});
  double t = 0.0;
  for (double mark : marks) {
    const auto plan = plan_steps(mark - t, dt_max);
    TaylorScheme scheme{cfg.taylor_order, plan.dt, cfg.cfl};
    for (long s = 0; s < plan.steps; ++s) {
      if (cfg.integrator == IntegratorKind::Taylor) {
        taylor_step(u, apply, scheme);
      } else {
        rk4_step(u, rhs, t + s * plan.dt, plan.dt);
      }
    }
    res.steps += plan.steps;
    res.dt = plan.dt > 0.0 ? plan.dt : res.dt;
    t = mark;
    if (mark > 0.0) res.history.push_back({t, error_at(t)});
  }
  res.coeffs = Eigen::Map<const Eigen::MatrixXd>(u.data(), n, mesh.n_el);
  res.node_values = basis.node_values(res.coeffs);
  res.final_error = res.history.back().l2_error;
  return res;
}

}  // namespace fcdg
