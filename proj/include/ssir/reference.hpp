#pragma once

#include <vector>

#include <Eigen/Core>

#include "ssir/field_sim.hpp"
#include "ssir/grid.hpp"
#include "ssir/lagged_moments.hpp"
#include "ssir/rng.hpp"

namespace ssir::reference {

// Serial reference implementations, kept independent of the production
// kernels. Tests check the fast paths against these; the benchmark tool
// compares their runtimes.

/// Literal definition of the lagged moment: enumerate the valid pairs,
/// compute each slice mean by rescanning, assemble the weighted outer
/// products directly.
LaggedMoment lagged_moment(const MultiField& xst, const SliceAssignment& slices,
                           Lag lag);

std::vector<LaggedMoment> lagged_moments(const MultiField& xst,
                                         const SliceAssignment& slices,
                                         const LagSet& lagset);

/// Exact Gaussian field sampler from the dense covariance matrix (smooth
/// part plus nugget) through its symmetric square root. Small grids only.
class DenseGrfSampler {
 public:
  DenseGrfSampler(const GridShape& shape, const ExpCovParams& params);
  ScalarField sample(StreamRng& rng) const;

 private:
  GridShape shape_;
  Eigen::MatrixXd root_;  // symmetric square root of the covariance
};

}  // namespace ssir::reference
