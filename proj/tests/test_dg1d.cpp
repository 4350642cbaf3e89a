#include <doctest.h>

#include <cmath>

#include "fcdg/dg1d.hpp"
#include "fcdg/error.hpp"

using namespace fcdg;

namespace {

Field1D sample(const ElementBasis& basis, const Mesh1D& mesh, double (*f)(double)) {
  Field1D u(basis.size(), mesh.n_el);
  for (int k = 0; k < mesh.n_el; ++k)
    u.col(k) = basis.project([&](double z) { return f(mesh.x(k, z)); });
  return u;
}

double energy_rate(const ElementBasis& basis, FluxKind flux) {
  const Mesh1D mesh = Mesh1D::uniform(-1.0, 1.0, 5);
  // Jumps at the periodic boundary make upwind dissipation visible.
  const Field1D u = sample(basis, mesh, [](double x) { return std::exp(std::sin(M_PI * x)) + x; });
  const Field1D du = semidiscrete_rhs(u, basis.ops(), mesh, 1.0, flux);
  // d/dt sum_k J_k u^T M u = 2 sum_k J_k u^T M du
  double rate = 0.0;
  for (int k = 0; k < mesh.n_el; ++k)
    rate += 2.0 * mesh.jacobians[k] * u.col(k).dot(basis.ops().mass * du.col(k));
  return rate;
}

}  // namespace

TEST_CASE("fluxes") {
  CHECK(parse_flux("upwind") == FluxKind::Upwind);
  CHECK(parse_flux("centered") == FluxKind::Centered);
  CHECK(parse_flux("alternating") == FluxKind::Alternating);
  CHECK_THROWS_AS(parse_flux("lax"), ConfigError);
  CHECK(numerical_flux(1.0, 3.0, FluxKind::Upwind, 1.0) == 1.0);
  CHECK(numerical_flux(1.0, 3.0, FluxKind::Upwind, -1.0) == 3.0);
  CHECK(numerical_flux(1.0, 3.0, FluxKind::Centered, 1.0) == 2.0);
  CHECK(numerical_flux(1.0, 3.0, FluxKind::Alternating, 1.0) == 1.0);
}

TEST_CASE("mesh") {
  const Mesh1D m = Mesh1D::uniform(-1.0, 3.0, 4);
  CHECK(m.jacobians[2] == doctest::Approx(0.5));
  CHECK(m.x(1, -1.0) == doctest::Approx(0.0));
  CHECK(m.x(3, 1.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(Mesh1D::uniform(1.0, 0.0, 2), ParameterError);
}

TEST_CASE("energy behaviour") {
  for (const BasisSpec& spec : {fc_spec(20), legendre_spec(8)}) {
    const ElementBasis basis(spec);
    CHECK(energy_rate(basis, FluxKind::Upwind) < 0.0);
    CHECK(std::fabs(energy_rate(basis, FluxKind::Centered)) <= 1e-9);
  }
}

TEST_CASE("free-stream preservation") {
  for (const BasisSpec& spec : {fc_spec(20), legendre_spec(8)}) {
    const ElementBasis basis(spec);
    // Unit Jacobian, unit speed, unit constant.
    const Mesh1D mesh = Mesh1D::uniform(0.0, 6.0, 3);
    const Field1D u = sample(basis, mesh, [](double) { return 1.0; });
    for (FluxKind f : {FluxKind::Upwind, FluxKind::Centered, FluxKind::Alternating}) {
      CHECK(semidiscrete_rhs(u, basis.ops(), mesh, 1.0, f).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK(semidiscrete_rhs(u, basis.ops(), mesh, -1.0, f).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("dense operator matches apply") {
  const ElementBasis basis(fc_spec(20));
  const Mesh1D mesh = Mesh1D::uniform(-1.0, 1.0, 3);
  const Transport1D op(basis.ops(), mesh, -0.7, FluxKind::Upwind);
  const Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(op.dofs(), -1.0, 2.0).array().sin();
  Eigen::VectorXd du;
  op.apply(u, du);
  CHECK((op.dense() * u - du).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("transport solver") {
  Transport1DConfig cfg;
  cfg.basis = fc_spec(20);
  cfg.n_el = 8;
  cfg.t_final = 0.5;
  cfg.record_interval = 0.25;
  const Transport1DResult r = solve_transport_1d(cfg);
  CHECK(r.history.size() == 3);
  CHECK(r.history.front().l2_error <= 1e-12);
  CHECK(r.final_error < 1e-5);
  CHECK(r.steps * r.dt == doctest::Approx(0.5));

  // A zero-length run returns the initial data.
  cfg.t_final = 0.0;
  const Transport1DResult z = solve_transport_1d(cfg);
  CHECK(z.steps == 0);
  CHECK(z.final_error <= 1e-12);

  cfg.taylor_order = 6;
  cfg.flux = FluxKind::Centered;
  cfg.t_final = 1.0;
  CHECK_THROWS_AS(solve_transport_1d(cfg), ConfigError);
}

TEST_CASE("Legendre baseline converges at order q + 1") {
  Transport1DConfig cfg;
  cfg.basis = legendre_spec(5);
  cfg.t_final = 1.0;
  cfg.cfl = 0.05;
  cfg.initial.param = 2.0;
  cfg.n_el = 8;
  const double e1 = solve_transport_1d(cfg).final_error;
  cfg.n_el = 16;
  const double e2 = solve_transport_1d(cfg).final_error;
  CHECK(std::log2(e1 / e2) == doctest::Approx(6.0).epsilon(0.15));
}
