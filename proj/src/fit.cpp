#include "ssir/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "ssir/errors.hpp"
#include "ssir/slicing.hpp"

namespace ssir {

Eigen::MatrixXd lambda_values(const Eigen::MatrixXd& u,
                              const std::vector<LaggedMoment>& moments) {
  const int rows = static_cast<int>(u.rows());
  const int p = static_cast<int>(u.cols());
  const int k_count = static_cast<int>(moments.size());
  for (const LaggedMoment& lm : moments)
    if (lm.m.dim() != p)
      throw DimensionError("lambda_values: moment dimension mismatch");

  Eigen::MatrixXd lambda(rows, k_count);
  for (int k = 0; k < k_count; ++k) {
    const Eigen::MatrixXd& m = moments[k].m.mat();
    for (int c = 0; c < rows; ++c) {
      const double q = u.row(c) * m * u.row(c).transpose();
      lambda(c, k) = q * q;
    }
  }
  return lambda;
}

SsirFit ssir_fit(const MultiField& x, const ScalarField& y,
                 const LagSet& lagset, int H) {
  if (x.shape() != y.shape())
    throw DimensionError("ssir_fit: x and y shapes differ");

  WhitenResult wr = whiten(x);
  SliceAssignment slices = slice_response(y, H);
  std::vector<LaggedMoment> moments = lagged_moments(wr.xst, slices, lagset);

  std::vector<SymMat> mats;
  mats.reserve(moments.size());
  double total_fro2 = 0.0;
  for (const LaggedMoment& lm : moments) {
    mats.push_back(lm.m);
    total_fro2 += lm.m.mat().squaredNorm();
  }

  JadResult jad = joint_diagonalize(mats);
  if (!jad.converged && jad.off_sum > 1e-6 * total_fro2)
    throw std::runtime_error(
        "ssir_fit: joint diagonalization did not converge (off_sum " +
        std::to_string(jad.off_sum) + ")");

  const int p = x.channels();
  Eigen::MatrixXd u = jad.V.transpose();
  Eigen::MatrixXd lambda = lambda_values(u, moments);
  const double total = lambda.sum();
  if (!(total > 0.0))
    throw DegenerateResponseError("ssir_fit: all lagged moments vanish");
  lambda /= total;
  Eigen::VectorXd row_sums = lambda.rowwise().sum();

  // Order components by descending lambda row sums; ties keep the original
  // diagonalizer column order.
  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return row_sums[a] > row_sums[b]; });

  SsirFit fit;
  fit.mean = std::move(wr.mean);
  fit.cov_inv_sqrt = std::move(wr.cov_inv_sqrt);
  fit.u.resize(p, p);
  fit.lambda.resize(p, lambda.cols());
  fit.row_sums.resize(p);
  for (int c = 0; c < p; ++c) {
    fit.u.row(c) = u.row(order[c]);
    fit.lambda.row(c) = lambda.row(order[c]);
    fit.row_sums[c] = row_sums[order[c]];
  }
  fit.gamma = fit.u * fit.cov_inv_sqrt.mat();

  // Deterministic signs: make the largest-magnitude coordinate of each
  // direction positive.
  for (int c = 0; c < p; ++c) {
    int arg = 0;
    for (int j = 1; j < p; ++j)
      if (std::abs(fit.gamma(c, j)) > std::abs(fit.gamma(c, arg))) arg = j;
    if (fit.gamma(c, arg) < 0.0) {
      fit.gamma.row(c) = -fit.gamma.row(c);
      fit.u.row(c) = -fit.u.row(c);
    }
  }

  fit.lag_order = lagset;
  fit.h = slices.H;
  fit.jad = std::move(jad);
  return fit;
}

SelectionResult select(const SsirFit& fit, double P) {
  if (!(P > 0.0 && P < 1.0))
    throw std::invalid_argument("select: P must be in (0, 1)");
  const int p = static_cast<int>(fit.lambda.rows());
  const int k_count = static_cast<int>(fit.lambda.cols());

  struct Cell {
    double value;
    int component;
    int lag_index;
  };
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(p) * k_count);
  for (int c = 0; c < p; ++c)
    for (int k = 0; k < k_count; ++k) cells.push_back({fit.lambda(c, k), c, k});
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.component != b.component) return a.component < b.component;
    return a.lag_index < b.lag_index;
  });

  SelectionResult res;
  res.P = P;
  double cumulative = 0.0;
  for (const Cell& cell : cells) {
    res.selected_cells.emplace_back(cell.component,
                                    fit.lag_order[cell.lag_index]);
    cumulative += cell.value;
    if (cumulative > P) break;
  }

  std::vector<bool> seen_component(p, false);
  for (const auto& [component, lag] : res.selected_cells) {
    if (!seen_component[component]) {
      seen_component[component] = true;
      ++res.d_hat;
    }
    if (std::find(res.selected_lags.begin(), res.selected_lags.end(), lag) ==
        res.selected_lags.end())
      res.selected_lags.push_back(lag);
  }
  return res;
}

}  // namespace ssir
