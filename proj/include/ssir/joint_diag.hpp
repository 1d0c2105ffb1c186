#pragma once

#include <vector>

#include <Eigen/Core>

#include "ssir/sym_mat.hpp"

namespace ssir {

struct JadResult {
  Eigen::MatrixXd V;    // p x p orthogonal; columns are joint eigenvector estimates
  double off_sum = 0.0; // final sum of squared off-diagonal entries, all matrices
  int sweeps = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // sum of squared diagonals, per sweep
};

/// Orthogonal joint approximate diagonalization by cyclic Jacobi sweeps.
///
/// Each (a, b) pair rotation solves the 2x2 subproblem in closed form: the
/// angle comes from the dominant eigenvector of the accumulated Gram matrix
/// of the vectors (M_k[a][a] - M_k[b][b], 2 M_k[a][b]). Sweeps stop when
/// every |sin theta| in a full sweep falls below tol. Reaching max_sweeps
/// is reported via converged = false, not an error.
JadResult joint_diagonalize(const std::vector<SymMat>& matrices,
                            double tol = 1e-12, int max_sweeps = 100);

}  // namespace ssir
