#pragma once

// Basis-agnostic view of one reference element used by the solvers:
// operators, output nodes and the map from coefficients to node values.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fcdg/fc_basis.hpp"
#include "fcdg/operators.hpp"

namespace fcdg {

enum class BasisType { Fc, Legendre };

struct BasisSpec {
  BasisType type = BasisType::Fc;
  FcParams fc;      // used when type == Fc
  int degree = 9;   // used when type == Legendre
  QuadratureConfig quad;

  int size() const { return type == BasisType::Fc ? fc.n_points : degree + 1; }
};

BasisSpec fc_spec(int n_points, int poly_points = 10, int ext_points = 25);
BasisSpec legendre_spec(int degree);
std::string describe(const BasisSpec& spec);

class ElementBasis {
 public:
  explicit ElementBasis(const BasisSpec& spec);

  const BasisSpec& spec() const { return spec_; }
  const ElementOperators& ops() const { return ops_; }
  int size() const { return ops_.size(); }
  bool modal() const { return spec_.type == BasisType::Legendre; }

  /// Output nodes on [-1, 1]: the uniform grid for FC, LGL nodes for Legendre.
  const std::vector<double>& nodes() const { return nodes_; }

  /// Coefficients representing f (reference coordinate): nodal samples for
  /// FC, the L2 projection for Legendre.
  Eigen::VectorXd project(const std::function<double(double)>& f) const;

  /// Node values for coefficient columns (identity for FC).
  Eigen::MatrixXd node_values(const Eigen::MatrixXd& coeffs) const;

  /// Smallest and average gap between output nodes, reference units.
  double min_node_gap() const;
  double mean_node_gap() const { return 2.0 / (size() - 1); }

 private:
  BasisSpec spec_;
  ElementOperators ops_;
  std::vector<double> nodes_;
  Eigen::MatrixXd vandermonde_;  // Legendre only
};

}  // namespace fcdg
