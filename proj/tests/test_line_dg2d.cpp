#include <doctest.h>

#include <cmath>

#include "fcdg/dg1d.hpp"
#include "fcdg/line_dg2d.hpp"

using namespace fcdg;

namespace {

double f(double x, double y) { return std::sin(2.0 * M_PI * x + 0.3) * std::cos(2.0 * M_PI * y) + x * y; }

}  // namespace

TEST_CASE("mesh geometry") {
  const Mesh2D m(0.0, 2.0, -1.0, 1.0, 4, 2);
  CHECK(m.elements() == 8);
  CHECK(m.jac_x() == doctest::Approx(0.25));
  CHECK(m.jac_y() == doctest::Approx(0.5));
  CHECK(m.x(1, -1.0) == doctest::Approx(0.5));
  CHECK(m.y(1, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("x-only data reduces to the 1-D operator") {
  const ElementBasis basis(fc_spec(20));
  const int n = basis.size(), nx = 3, ny = 2;
  const Mesh2D mesh(-1.0, 1.0, 0.0, 1.0, nx, ny);
  const Field2D u = sample_field(mesh, basis.nodes(), [](double x, double) { return std::exp(std::sin(M_PI * x)); });
  const Field2D du = semidiscrete_rhs_2d_transport(u, 0.8, 0.0, basis.ops(), mesh, FluxKind::Upwind);

  const Mesh1D m1 = Mesh1D::uniform(-1.0, 1.0, nx);
  Field1D u1(n, nx);
  for (int k = 0; k < nx; ++k)
    for (int i = 0; i < n; ++i) u1(i, k) = std::exp(std::sin(M_PI * m1.x(k, basis.nodes()[i])));
  const Field1D du1 = semidiscrete_rhs(u1, basis.ops(), m1, 0.8, FluxKind::Upwind);
  double worst = 0.0;
  for (int ey = 0; ey < ny; ++ey)
    for (int ex = 0; ex < nx; ++ex) {
      const Eigen::Index c0 = Eigen::Index(mesh.element(ex, ey)) * n;
      for (int j = 0; j < n; ++j) worst = std::max(worst, (du.col(c0 + j) - du1.col(ex)).cwiseAbs().maxCoeff());
    }
  CHECK(worst <= 1e-10);
}

TEST_CASE("x-y symmetry") {
  const ElementBasis basis(fc_spec(20));
  const int n = basis.size(), ne = 3;
  const Mesh2D mesh(0.0, 1.0, 0.0, 1.0, ne, ne);
  const Field2D u = sample_field(mesh, basis.nodes(), f);
  const Field2D v = sample_field(mesh, basis.nodes(), [](double x, double y) { return f(y, x); });
  const Field2D du = semidiscrete_rhs_2d_transport(u, 1.0, 0.6, basis.ops(), mesh, FluxKind::Upwind);
  const Field2D dv = semidiscrete_rhs_2d_transport(v, 0.6, 1.0, basis.ops(), mesh, FluxKind::Upwind);
  double worst = 0.0;
  for (int ey = 0; ey < ne; ++ey)
    for (int ex = 0; ex < ne; ++ex) {
      const Eigen::Index a = Eigen::Index(mesh.element(ex, ey)) * n, b = Eigen::Index(mesh.element(ey, ex)) * n;
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) worst = std::max(worst, std::fabs(du(i, a + j) - dv(j, b + i)));
    }
  CHECK(worst <= 1e-10);
}

TEST_CASE("free stream and energy") {
  const ElementBasis basis(fc_spec(20));
  const Mesh2D mesh(0.0, 4.0, 0.0, 6.0, 2, 3);
  const Field2D c = sample_field(mesh, basis.nodes(), [](double, double) { return 1.0; });
  for (FluxKind k : {FluxKind::Upwind, FluxKind::Centered})
    CHECK(semidiscrete_rhs_2d_transport(c, 1.0, -0.5, basis.ops(), mesh, k).cwiseAbs().maxCoeff() <= 1e-10);

  // Mass-weighted energy rate: <u, du> with M (x) M per element.
  const Field2D u = sample_field(mesh, basis.nodes(), f);
  const Eigen::MatrixXd& m = basis.ops().mass;
  const int n = basis.size();
  auto rate = [&](FluxKind k) {
    const Field2D du = semidiscrete_rhs_2d_transport(u, 1.0, 0.7, basis.ops(), mesh, k);
    double r = 0.0;
    for (int e = 0; e < mesh.elements(); ++e)
      r += (u.middleCols(Eigen::Index(e) * n, n).cwiseProduct(m * du.middleCols(Eigen::Index(e) * n, n) * m)).sum();
    return r;
  };
  CHECK(rate(FluxKind::Upwind) < 0.0);
  CHECK(std::fabs(rate(FluxKind::Centered)) <= 1e-9);
}

TEST_CASE("2-D transport solver") {
  Transport2DConfig cfg;
  cfg.basis = fc_spec(20);
  cfg.n_el_x = cfg.n_el_y = 4;
  cfg.t_final = 0.25;
  cfg.initial = [](double x, double y) { return std::sin(2 * M_PI * x) + std::sin(2 * M_PI * y); };
  const Transport2DResult r = solve_transport_2d(cfg);
  CHECK(r.final_error < 1e-8);
  CHECK(r.steps * r.dt == doctest::Approx(0.25));
  CHECK(cfl_timestep_2d(0.2, 1.0, 0.1, 1.0, 0.1) == doctest::Approx(0.01));

  const Mesh2D mesh(0.0, 1.0, 0.0, 1.0, 2, 2);
  const ElementBasis b(fc_spec(20));
  const auto& nodes = b.nodes();
  const Field2D g = sample_field(mesh, nodes, [](double x, double y) { return x * x + y; });
  CHECK(trapezoid_integral(g, mesh, nodes) == doctest::Approx(1.0 / 3 + 0.5).epsilon(1e-3));
}
