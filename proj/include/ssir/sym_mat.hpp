#pragma once

#include <Eigen/Core>

namespace ssir {

/// Dense symmetric matrix. Symmetrized as (M + M^T)/2 on construction so
/// (a, b) and (b, a) compare equal exactly.
class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(const Eigen::MatrixXd& m) {
    m_ = 0.5 * (m + m.transpose()).eval();
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& mat() const { return m_; }
  double operator()(int a, int b) const { return m_(a, b); }

 private:
  Eigen::MatrixXd m_;
};

}  // namespace ssir
