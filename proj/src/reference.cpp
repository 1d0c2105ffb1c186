#include "ssir/reference.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include <Eigen/Dense>

#include "ssir/errors.hpp"

namespace ssir::reference {

LaggedMoment lagged_moment(const MultiField& xst,
                           const SliceAssignment& slices, Lag lag) {
  const GridShape& shape = xst.shape();
  if (slices.shape != shape)
    throw DimensionError("reference lagged_moment: shapes differ");
  if (std::abs(lag.k) >= shape.rows || std::abs(lag.l) >= shape.cols)
    throw std::invalid_argument("reference lagged_moment: lag exceeds grid");
  const int p = xst.channels();

  // Enumerate the valid pairs: slice label at (i, j), covariate at
  // (i + k, j + l).
  std::vector<std::pair<int, Eigen::VectorXd>> pairs;
  for (int i = 0; i < shape.rows; ++i)
    for (int j = 0; j < shape.cols; ++j)
      if (shape.contains(i + lag.k, j + lag.l))
        pairs.emplace_back(slices.labels[shape.flat(i, j)],
                           xst.cell(i + lag.k, j + lag.l));

  const auto n = static_cast<double>(pairs.size());
  Eigen::VectorXd grand = Eigen::VectorXd::Zero(p);
  for (const auto& [label, value] : pairs) grand += value;
  grand /= n;

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
  for (int h = 0; h < slices.H; ++h) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(p);
    std::int64_t count = 0;
    for (const auto& [label, value] : pairs) {
      if (label != h) continue;
      sum += value;
      ++count;
    }
    if (count == 0) continue;
    const Eigen::VectorXd dev = sum / static_cast<double>(count) - grand;
    m += (static_cast<double>(count) / n) * dev * dev.transpose();
  }
  return {lag, SymMat(m), static_cast<std::int64_t>(pairs.size())};
}

std::vector<LaggedMoment> lagged_moments(const MultiField& xst,
                                         const SliceAssignment& slices,
                                         const LagSet& lagset) {
  std::vector<LaggedMoment> out;
  out.reserve(lagset.size());
  for (const Lag& lag : lagset)
    out.push_back(reference::lagged_moment(xst, slices, lag));
  return out;
}

DenseGrfSampler::DenseGrfSampler(const GridShape& shape,
                                 const ExpCovParams& params)
    : shape_(shape) {
  shape.validate();
  params.validate();
  const std::int64_t n = shape.cells();
  Eigen::MatrixXd cov(n, n);
  for (std::int64_t a = 0; a < n; ++a) {
    const int ai = static_cast<int>(a / shape.cols);
    const int aj = static_cast<int>(a % shape.cols);
    for (std::int64_t b = 0; b < n; ++b) {
      const int bi = static_cast<int>(b / shape.cols);
      const int bj = static_cast<int>(b % shape.cols);
      const double h = shape.spacing * std::hypot(ai - bi, aj - bj);
      cov(a, b) = params(h);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
  root_ = es.eigenvectors() * clipped.cwiseSqrt().asDiagonal() *
          es.eigenvectors().transpose();
}

ScalarField DenseGrfSampler::sample(StreamRng& rng) const {
  const std::int64_t n = shape_.cells();
  Eigen::VectorXd z(n);
  for (std::int64_t i = 0; i < n; ++i) z(i) = rng.normal();
  Eigen::VectorXd field = root_ * z;
  return ScalarField(shape_,
                     std::vector<double>(field.data(), field.data() + n));
}

}  // namespace ssir::reference
