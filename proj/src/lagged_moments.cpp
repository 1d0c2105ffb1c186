#include "ssir/lagged_moments.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include <Eigen/Dense>

#include "ssir/errors.hpp"

namespace ssir {

namespace {

void check_lag_bounds(const GridShape& shape, Lag lag) {
  if (std::abs(lag.k) >= shape.rows || std::abs(lag.l) >= shape.cols)
    throw std::invalid_argument("lagged_moment: lag (" +
                                std::to_string(lag.k) + ", " +
                                std::to_string(lag.l) + ") exceeds grid");
}

}  // namespace

LaggedMoment lagged_moment(const MultiField& xst,
                           const SliceAssignment& slices, Lag lag) {
  const GridShape& shape = xst.shape();
  if (slices.shape != shape)
    throw DimensionError("lagged_moment: field and slice shapes differ");
  check_lag_bounds(shape, lag);

  const int p = xst.channels();
  const int h_count = slices.H;
  const int i0 = std::max(0, -lag.k);
  const int i1 = shape.rows - std::max(0, lag.k);
  const int j0 = std::max(0, -lag.l);
  const int j1 = shape.cols - std::max(0, lag.l);

  std::vector<double> acc(static_cast<std::size_t>(h_count) * p, 0.0);
  std::vector<std::int64_t> count(h_count, 0);
  const double* values = xst.values().data();
  const int* labels = slices.labels.data();

  for (int i = i0; i < i1; ++i) {
    const std::int64_t row_label = shape.flat(i, 0);
    const std::int64_t row_x = shape.flat(i + lag.k, lag.l);
    for (int j = j0; j < j1; ++j) {
      const int h = labels[row_label + j];
      const double* xp = values + (row_x + j) * p;
      double* a = acc.data() + static_cast<std::size_t>(h) * p;
      for (int c = 0; c < p; ++c) a[c] += xp[c];
      ++count[h];
    }
  }

  const std::int64_t n_valid =
      static_cast<std::int64_t>(shape.rows - std::abs(lag.k)) *
      (shape.cols - std::abs(lag.l));

  // Center slice means by the valid-set mean of the paired covariate cells,
  // so the weighted deviations sum to zero per lag despite border loss.
  Eigen::VectorXd grand = Eigen::VectorXd::Zero(p);
  for (int h = 0; h < h_count; ++h)
    grand += Eigen::Map<const Eigen::VectorXd>(
        acc.data() + static_cast<std::size_t>(h) * p, p);
  grand /= static_cast<double>(n_valid);

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
  for (int h = 0; h < h_count; ++h) {
    if (count[h] == 0) continue;
    Eigen::VectorXd dev =
        Eigen::Map<const Eigen::VectorXd>(
            acc.data() + static_cast<std::size_t>(h) * p, p) /
            static_cast<double>(count[h]) -
        grand;
    const double weight =
        static_cast<double>(count[h]) / static_cast<double>(n_valid);
    m.selfadjointView<Eigen::Lower>().rankUpdate(dev, weight);
  }
  m.triangularView<Eigen::StrictlyUpper>() =
      m.triangularView<Eigen::StrictlyLower>().transpose();

  return {lag, SymMat(m), n_valid};
}

std::vector<LaggedMoment> lagged_moments(const MultiField& xst,
                                         const SliceAssignment& slices,
                                         const LagSet& lagset) {
  const GridShape& shape = xst.shape();
  if (slices.shape != shape)
    throw DimensionError("lagged_moments: field and slice shapes differ");
  // Validate in lag-set order so the first failing lag reports its error
  // before any work starts.
  for (const Lag& lag : lagset) check_lag_bounds(shape, lag);

  const int k_count = lagset.size();
  std::vector<LaggedMoment> out(k_count);
#pragma omp parallel for schedule(static)
  for (int t = 0; t < k_count; ++t)
    out[t] = lagged_moment(xst, slices, lagset[t]);
  return out;
}

}  // namespace ssir
