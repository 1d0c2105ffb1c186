#include "ssir/slicing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ssir/errors.hpp"

namespace ssir {

SliceAssignment slice_response(const ScalarField& y, int H) {
  const GridShape& shape = y.shape();
  const std::int64_t n = shape.cells();
  if (H < 2) throw std::invalid_argument("slice_response: H must be >= 2");
  if (n < H)
    throw std::invalid_argument("slice_response: fewer cells than slices");
  const std::vector<double>& v = y.values();
  for (double value : v)
    if (!std::isfinite(value))
      throw std::invalid_argument("slice_response: non-finite response value");

  std::vector<std::int64_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
    return v[a] < v[b] || (v[a] == v[b] && a < b);
  });

  std::int64_t distinct = 1;
  for (std::int64_t r = 1; r < n; ++r)
    if (v[order[r]] != v[order[r - 1]]) ++distinct;
  if (distinct == 1)
    throw DegenerateResponseError("degenerate response: constant y");

  SliceAssignment out;
  out.shape = shape;
  out.labels.assign(n, 0);

  if (distinct <= H) {
    // Few distinct values: each value is its own slice.
    out.H = static_cast<int>(distinct);
    int label = 0;
    for (std::int64_t r = 0; r < n; ++r) {
      if (r > 0 && v[order[r]] != v[order[r - 1]]) {
        ++label;
        out.boundaries.push_back(v[order[r]]);
      }
      out.labels[order[r]] = label;
    }
  } else {
    // Quantile slicing on ranks; a tie group takes the label of its first
    // member so equal values never split across slices.
    out.H = H;
    std::int64_t group_start = 0;
    for (std::int64_t r = 0; r < n; ++r) {
      if (r > 0 && v[order[r]] != v[order[r - 1]]) group_start = r;
      out.labels[order[r]] =
          static_cast<int>(group_start * H / n);
    }
    for (int h = 1; h < H; ++h) {
      std::int64_t r = 0;
      while (r < n - 1 && out.labels[order[r]] < h) ++r;
      out.boundaries.push_back(v[order[r]]);
    }
  }

  out.counts.assign(out.H, 0);
  for (std::int64_t c = 0; c < n; ++c) ++out.counts[out.labels[c]];
  return out;
}

}  // namespace ssir
