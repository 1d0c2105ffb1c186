#pragma once

#include <Eigen/Core>

#include "ssir/grid.hpp"
#include "ssir/sym_mat.hpp"

namespace ssir {

struct MeanCov {
  Eigen::VectorXd mean;
  SymMat cov;
};

/// Per-channel mean and denominator-n sample covariance over all cells.
MeanCov sample_mean_cov(const MultiField& x);

/// Symmetric positive-definite inverse square root V diag(1/sqrt(l)) V^T.
/// Throws NotPositiveDefiniteError when the smallest eigenvalue is at or
/// below rcond times the largest.
SymMat inv_sqrt_sym(const SymMat& s, double rcond = 1e-12);

struct WhitenResult {
  MultiField xst;
  Eigen::VectorXd mean;
  SymMat cov_inv_sqrt;
};

/// Standardizes the field cellwise: xst[i,j] = cov^{-1/2} (x[i,j] - mean).
WhitenResult whiten(const MultiField& x);

}  // namespace ssir
