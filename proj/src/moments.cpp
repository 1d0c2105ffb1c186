#include "ssir/moments.hpp"

#include <string>

#include <Eigen/Dense>

#include "ssir/errors.hpp"

namespace ssir {

MeanCov sample_mean_cov(const MultiField& x) {
  const std::int64_t n = x.shape().cells();
  if (n < 2) throw DimensionError("sample_mean_cov: need at least 2 cells");
  auto mat = x.as_matrix();
  if (!mat.allFinite())
    throw std::invalid_argument("sample_mean_cov: non-finite value in field");
  Eigen::VectorXd mean = mat.colwise().mean();
  Eigen::MatrixXd centered = mat.rowwise() - mean.transpose();
  // denominator-n covariance; the estimator is invariant to this scale
  Eigen::MatrixXd cov =
      (centered.adjoint() * centered) / static_cast<double>(n);
  return {std::move(mean), SymMat(cov)};
}

SymMat inv_sqrt_sym(const SymMat& s, double rcond) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.mat());
  if (es.info() != Eigen::Success)
    throw NotPositiveDefiniteError("inv_sqrt_sym: eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double emax = ev.maxCoeff();
  const double emin = ev.minCoeff();
  if (!(emax > 0.0) || emin <= rcond * emax)
    throw NotPositiveDefiniteError(
        "inv_sqrt_sym: matrix not positive definite (eigenvalues in [" +
        std::to_string(emin) + ", " + std::to_string(emax) + "])");
  Eigen::VectorXd inv_sqrt = ev.array().rsqrt();
  return SymMat(es.eigenvectors() * inv_sqrt.asDiagonal() *
                es.eigenvectors().transpose());
}

WhitenResult whiten(const MultiField& x) {
  MeanCov mc = sample_mean_cov(x);
  SymMat w = inv_sqrt_sym(mc.cov);
  MultiField xst(x.shape(), x.channels());
  xst.as_matrix() =
      (x.as_matrix().rowwise() - mc.mean.transpose()) * w.mat();
  return {std::move(xst), std::move(mc.mean), std::move(w)};
}

}  // namespace ssir
