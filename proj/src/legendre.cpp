#include "fcdg/legendre.hpp"

#include <cmath>
#include <string>

#include "fcdg/error.hpp"

namespace fcdg {

namespace {

// P_q(z) and P_q'(z).
std::pair<double, double> legendre_with_derivative(int q, double z) {
  double p0 = 1.0, p1 = z;
  if (q == 0) return {1.0, 0.0};
  for (int k = 2; k <= q; ++k) {
    const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = q * (p0 - z * p1) / (1.0 - z * z);
  return {p1, dp};
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> lgl_nodes_weights(int q) {
  if (q < 1) throw ParameterError("LGL rule needs q >= 1, got " + std::to_string(q));
  const int n = q + 1;
  std::vector<double> x(n), w(n);
  x[0] = -1.0;
  x[q] = 1.0;
  // Interior nodes are the roots of P_q'. Newton on P_q' using
  // (1 - z^2) P_q'' = 2 z P_q' - q (q + 1) P_q.
  for (int i = 1; i < q; ++i) {
    double z = -std::cos(M_PI * i / q);
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_with_derivative(q, z);
      const double d2p = (2.0 * z * dp - q * (q + 1.0) * p) / (1.0 - z * z);
      const double dz = dp / d2p;
      z -= dz;
      if (std::fabs(dz) < 1e-15) break;
    }
    x[i] = z;
  }
  for (int i = 0; i < n / 2; ++i) {
    const double s = 0.5 * (x[q - i] - x[i]);
    x[i] = -s;
    x[q - i] = s;
  }
  if (n % 2 == 1) x[q / 2] = 0.0;
  for (int i = 0; i < n; ++i) {
    double p = legendre_with_derivative(q, x[i]).first;
    if (i == 0 || i == q) p = (i == 0 && q % 2 == 1) ? -1.0 : 1.0;
    w[i] = 2.0 / (q * (q + 1.0) * p * p);
  }
  return {x, w};
}

LegendreBasis make_legendre_basis(int q) {
  auto [x, w] = lgl_nodes_weights(q);
  return {q, std::move(x), std::move(w)};
}

Eigen::VectorXd legendre_values(int q, double z) {
  Eigen::VectorXd v(q + 1);
  v(0) = 1.0;
  if (q >= 1) v(1) = z;
  for (int k = 2; k <= q; ++k) v(k) = ((2 * k - 1) * z * v(k - 1) - (k - 1) * v(k - 2)) / k;
  return v;
}

Eigen::MatrixXd legendre_vandermonde(int q, const std::vector<double>& points) {
  Eigen::MatrixXd v(static_cast<Eigen::Index>(points.size()), q + 1);
  for (std::size_t m = 0; m < points.size(); ++m) {
    v.row(static_cast<Eigen::Index>(m)) = legendre_values(q, points[m]).transpose();
  }
  return v;
}

ElementOperators legendre_operators(int q) {
  if (q < 1) throw ParameterError("Legendre basis needs q >= 1, got " + std::to_string(q));
  const int n = q + 1;
  ElementOperators ops;
  ops.mass = Eigen::MatrixXd::Zero(n, n);
  ops.stiffness = Eigen::MatrixXd::Zero(n, n);
  ops.lift_left.resize(n);
  ops.lift_right = Eigen::VectorXd::Ones(n);
  for (int j = 0; j < n; ++j) {
    ops.mass(j, j) = 2.0 / (2 * j + 1);
    ops.lift_left(j) = j % 2 == 0 ? 1.0 : -1.0;
    for (int i = j + 1; i < n; i += 2) ops.stiffness(i, j) = 2.0;
  }
  ops.inv_mass_stiffness = ops.mass.diagonal().cwiseInverse().asDiagonal() * ops.stiffness;
  ops.basis_id.kind = BasisKind::Legendre;
  ops.basis_id.n_points = n;
  validate_operators(ops);
  return ops;
}

Eigen::VectorXd l2_project(const std::function<double(double)>& f, int q) {
  if (q < 1) throw ParameterError("Legendre basis needs q >= 1, got " + std::to_string(q));
  const auto [x, w] = lgl_nodes_weights(q + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(q + 1);
  for (std::size_t m = 0; m < x.size(); ++m) rhs += w[m] * f(x[m]) * legendre_values(q, x[m]);
  for (int j = 0; j <= q; ++j) rhs(j) *= (2 * j + 1) / 2.0;
  return rhs;
}

}  // namespace fcdg
