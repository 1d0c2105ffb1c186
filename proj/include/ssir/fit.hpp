#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ssir/grid.hpp"
#include "ssir/joint_diag.hpp"
#include "ssir/lagged_moments.hpp"
#include "ssir/lags.hpp"
#include "ssir/moments.hpp"

namespace ssir {

/// Fitted SSIR estimator.
///
/// Components (rows of U) are sorted by descending lambda row sums; each row
/// of Gamma has its largest-magnitude coordinate made positive. The subspace
/// is unaffected by either convention.
struct SsirFit {
  Eigen::VectorXd mean;
  SymMat cov_inv_sqrt;
  Eigen::MatrixXd u;        // p x p, orthonormal rows, ordered
  Eigen::MatrixXd gamma;    // u * cov_inv_sqrt; row c is direction c
  Eigen::MatrixXd lambda;   // p x K, normalized to total 1
  LagSet lag_order;         // column labels of lambda
  Eigen::VectorXd row_sums; // rowwise sums of lambda, nonincreasing
  int h = 0;                // effective slice count used
  JadResult jad;
};

/// Squared quadratic forms (u_c^T M_k u_c)^2 for every component row and
/// lagged moment; unnormalized.
Eigen::MatrixXd lambda_values(const Eigen::MatrixXd& u,
                              const std::vector<LaggedMoment>& moments);

/// Full pipeline: whiten, slice, lagged moments, joint diagonalization,
/// lambda normalization, component ordering and sign fixing.
SsirFit ssir_fit(const MultiField& x, const ScalarField& y,
                 const LagSet& lagset, int H = 10);

/// Minimal descending-lambda prefix whose cumulative sum exceeds P.
struct SelectionResult {
  double P = 0.0;
  std::vector<std::pair<int, Lag>> selected_cells;  // (component, lag)
  int d_hat = 0;                 // distinct components among the cells
  std::vector<Lag> selected_lags;  // distinct lags, in order of appearance
};

SelectionResult select(const SsirFit& fit, double P);

}  // namespace ssir
