#pragma once

#include <cstdint>
#include <vector>

#include "ssir/grid.hpp"
#include "ssir/lags.hpp"
#include "ssir/slicing.hpp"
#include "ssir/sym_mat.hpp"

namespace ssir {

struct LaggedMoment {
  Lag lag;
  SymMat m;                 // p x p between-slice covariance of lagged means
  std::int64_t n_valid = 0; // cell pairs used: (rows-|k|)(cols-|l|)
};

/// Between-slice covariance of the whitened field at one spatial lag.
///
/// Pair set: (i, j) with (i+k, j+l) inside the grid; the covariate member of
/// a pair is xst[i+k, j+l] and its slice label is taken at (i, j). Pairs
/// leaving the grid are dropped (no wraparound). Slice means are centered by
/// the mean over the paired covariate cells.
LaggedMoment lagged_moment(const MultiField& xst, const SliceAssignment& slices,
                           Lag lag);

/// Maps lagged_moment over the lag set, preserving order. Lags are computed
/// in parallel; results are ordered by the lag set, not by completion.
std::vector<LaggedMoment> lagged_moments(const MultiField& xst,
                                         const SliceAssignment& slices,
                                         const LagSet& lagset);

}  // namespace ssir
