#pragma once

#include <vector>

#include "ssir/grid.hpp"

namespace ssir {

/// Per-cell slice labels for a discretized response.
///
/// H is the effective slice count: when the response has u <= requested H
/// distinct values, each distinct value becomes its own slice and H == u.
struct SliceAssignment {
  GridShape shape;
  int H = 0;
  std::vector<int> labels;        // per cell, in 0..H-1
  std::vector<double> boundaries; // H-1 interior cut points, nondecreasing
  std::vector<std::int64_t> counts;  // per-slice cell counts, sum = cells
};

/// Equal-count (quantile) slicing of a continuous response into H slices.
/// Ties never split across slices; the lower slice absorbs them. A constant
/// response raises DegenerateResponseError.
SliceAssignment slice_response(const ScalarField& y, int H);

}  // namespace ssir
