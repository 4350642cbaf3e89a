#pragma once

// Reference-element operators on [-1, 1] (Jacobian 1):
//   mass_ij = int phi_i phi_j,  stiffness_ij = int phi_i' phi_j,
//   lift_left_i = phi_i(-1),    lift_right_i = phi_i(1).

#include <cstdint>
#include <filesystem>
#include <optional>

#include <Eigen/Dense>

#include "fcdg/fc_basis.hpp"

namespace fcdg {

enum class BasisKind : std::uint8_t { FcExtended = 1, FcDouble = 2, Legendre = 3 };

struct BasisId {
  BasisKind kind = BasisKind::FcExtended;
  int n_points = 0;     // dofs per element
  int poly_points = 0;  // FC only
  int ext_points = 0;   // FC only
  int quad_order = 0;   // Gregory order used in assembly, FC only

  friend bool operator==(const BasisId&, const BasisId&) = default;
};

std::string describe(const BasisId& id);

struct QuadratureConfig {
  int gregory_order = 16;
  int points_per_period = 12;  // refined samples on [-1, 1] >= this * (N + M)
};

struct ElementOperators {
  Eigen::MatrixXd mass;
  Eigen::MatrixXd stiffness;
  Eigen::VectorXd lift_left;
  Eigen::VectorXd lift_right;
  Eigen::MatrixXd inv_mass_stiffness;
  BasisId basis_id;

  int size() const { return static_cast<int>(mass.rows()); }
};

ElementOperators assemble_fc_operators(const FcParams& params, const QuadratureConfig& quad = {});

/// Builds inv_mass_stiffness from mass and stiffness.
void finalize_operators(ElementOperators& ops);

/// 2-norm condition number. Throws NumericError for singular input.
double condition_number(const Eigen::MatrixXd& m);

/// Checks symmetry and definiteness of the mass matrix, the summation-by-parts
/// identity S + S^T = lR lR^T - lL lL^T, the cached M^{-1} S and (for FC)
/// nodal lift vectors. Throws IntegrityError with the first violation.
void validate_operators(const ElementOperators& ops);

void store_cache(const ElementOperators& ops, const std::filesystem::path& path);

/// Throws FormatError for malformed files and IntegrityError for checksum,
/// invariant or (when given) basis-id mismatches.
ElementOperators load_cache(const std::filesystem::path& path,
                            const std::optional<BasisId>& expected = std::nullopt);

BasisId fc_basis_id(const FcParams& params, const QuadratureConfig& quad = {});

/// FC operators through a process-wide memo and, when FCDG_CACHE_DIR is set,
/// the on-disk cache in that directory.
ElementOperators fc_operators(const FcParams& params, const QuadratureConfig& quad = {});

}  // namespace fcdg
