#pragma once

#include <Eigen/Core>

#include "ssir/sym_mat.hpp"

namespace ssir {

/// Rank-d row-span representation of a subspace of R^p.
struct SubspaceEstimate {
  Eigen::MatrixXd b;  // d x p, rows linearly independent
  int d() const { return static_cast<int>(b.rows()); }
  int ambient() const { return static_cast<int>(b.cols()); }
};

enum class WeightKind { inverse, inverse_sqrt };

/// Orthogonal projector B^T (B B^T)^{-1} B onto the row span of B.
/// Throws DimensionError when B is numerically rank deficient.
SymMat projector(const SubspaceEstimate& b);

/// Rank-weighted projector distance 0.5 || w(d1) P1 - w(d2) P2 ||_F^2 with
/// w(d) = 1/d or 1/sqrt(d).
double weighted_distance(const SubspaceEstimate& b1, const SubspaceEstimate& b2,
                         WeightKind weight);

}  // namespace ssir
