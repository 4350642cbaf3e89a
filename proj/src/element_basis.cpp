#include "fcdg/element_basis.hpp"

#include <sstream>

#include "fcdg/legendre.hpp"

namespace fcdg {

BasisSpec fc_spec(int n_points, int poly_points, int ext_points) {
  BasisSpec s;
  s.type = BasisType::Fc;
  s.fc.n_points = n_points;
  s.fc.poly_points = poly_points;
  s.fc.ext_points = ext_points;
  return s;
}

BasisSpec legendre_spec(int degree) {
  BasisSpec s;
  s.type = BasisType::Legendre;
  s.degree = degree;
  return s;
}

std::string describe(const BasisSpec& spec) {
  std::ostringstream os;
  if (spec.type == BasisType::Fc) {
    os << "fc N=" << spec.fc.n_points << " p=" << spec.fc.poly_points << " M=" << spec.fc.ext_points;
  } else {
    os << "legendre q=" << spec.degree;
  }
  return os.str();
}

ElementBasis::ElementBasis(const BasisSpec& spec) : spec_(spec) {
  if (spec.type == BasisType::Fc) {
    ops_ = fc_operators(spec.fc, spec.quad);
    nodes_ = uniform_grid(spec.fc);
  } else {
    ops_ = legendre_operators(spec.degree);
    nodes_ = lgl_nodes_weights(spec.degree).first;
    vandermonde_ = legendre_vandermonde(spec.degree, nodes_);
  }
}

Eigen::VectorXd ElementBasis::project(const std::function<double(double)>& f) const {
  if (modal()) return l2_project(f, spec_.degree);
  Eigen::VectorXd v(size());
  for (int i = 0; i < size(); ++i) v(i) = f(nodes_[i]);
  return v;
}

Eigen::MatrixXd ElementBasis::node_values(const Eigen::MatrixXd& coeffs) const {
  if (modal()) return vandermonde_ * coeffs;
  return coeffs;
}

double ElementBasis::min_node_gap() const {
  double g = 2.0;
  for (std::size_t i = 1; i < nodes_.size(); ++i) g = std::min(g, nodes_[i] - nodes_[i - 1]);
  return g;
}

}  // namespace fcdg
