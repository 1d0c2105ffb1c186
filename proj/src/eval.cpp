#include "ssir/eval.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "ssir/errors.hpp"

namespace ssir {

SymMat projector(const SubspaceEstimate& b) {
  const int d = b.d();
  const int p = b.ambient();
  if (d < 1 || p < 1 || d > p)
    throw DimensionError("projector: need 1 <= d <= p rows");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b.b);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(d - 1) <= 1e-10 * sv(0))
    throw DimensionError("projector: rows are rank deficient");

  // Normal-equations form keeps the projector exactly span-invariant under
  // row scaling.
  Eigen::MatrixXd gram = b.b * b.b.transpose();
  Eigen::MatrixXd solved = gram.llt().solve(b.b);
  return SymMat(b.b.transpose() * solved);
}

double weighted_distance(const SubspaceEstimate& b1,
                         const SubspaceEstimate& b2, WeightKind weight) {
  if (b1.ambient() != b2.ambient())
    throw DimensionError("weighted_distance: ambient dimensions differ");
  const auto w = [weight](int d) {
    return weight == WeightKind::inverse ? 1.0 / d : 1.0 / std::sqrt(double(d));
  };
  const SymMat p1 = projector(b1);
  const SymMat p2 = projector(b2);
  return 0.5 * (w(b1.d()) * p1.mat() - w(b2.d()) * p2.mat()).squaredNorm();
}

}  // namespace ssir
