#pragma once

// Modal Legendre basis phi_j = P_j on [-1, 1], the polynomial DG baseline.

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fcdg/operators.hpp"

namespace fcdg {

struct LegendreBasis {
  int degree = 0;
  std::vector<double> lgl_nodes;
  std::vector<double> lgl_weights;
};

/// Legendre-Gauss-Lobatto nodes (sorted) and weights for q + 1 points.
std::pair<std::vector<double>, std::vector<double>> lgl_nodes_weights(int q);

LegendreBasis make_legendre_basis(int q);

/// P_0(z) .. P_q(z).
Eigen::VectorXd legendre_values(int q, double z);

/// Vandermonde V(m, j) = P_j(points_m).
Eigen::MatrixXd legendre_vandermonde(int q, const std::vector<double>& points);

ElementOperators legendre_operators(int q);

/// Modal coefficients of the L2 projection of f onto P_0 .. P_q, integrated
/// with an (q + 2)-point LGL rule so that degree-2q integrands are exact.
Eigen::VectorXd l2_project(const std::function<double(double)>& f, int q);

}  // namespace fcdg
