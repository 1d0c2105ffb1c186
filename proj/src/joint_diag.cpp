#include "ssir/joint_diag.hpp"

#include <cmath>
#include <stdexcept>

#include "ssir/errors.hpp"

namespace ssir {

JadResult joint_diagonalize(const std::vector<SymMat>& matrices, double tol,
                            int max_sweeps) {
  if (matrices.empty())
    throw std::invalid_argument("joint_diagonalize: need at least one matrix");
  if (!(tol > 0.0))
    throw std::invalid_argument("joint_diagonalize: tol must be positive");
  if (max_sweeps < 1)
    throw std::invalid_argument("joint_diagonalize: max_sweeps must be >= 1");
  const int p = matrices.front().dim();
  for (const SymMat& m : matrices)
    if (m.dim() != p)
      throw DimensionError("joint_diagonalize: matrix dimensions differ");

  std::vector<Eigen::MatrixXd> ms;
  ms.reserve(matrices.size());
  for (const SymMat& m : matrices) ms.push_back(m.mat());

  JadResult res;
  res.V = Eigen::MatrixXd::Identity(p, p);

  auto objective = [&ms]() {
    double sum = 0.0;
    for (const Eigen::MatrixXd& m : ms) sum += m.diagonal().squaredNorm();
    return sum;
  };
  res.objective_trace.push_back(objective());

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    double max_abs_sin = 0.0;
    for (int a = 0; a < p - 1; ++a) {
      for (int b = a + 1; b < p; ++b) {
        // Gram matrix of the per-matrix vectors (m_aa - m_bb, 2 m_ab).
        double g11 = 0.0, g12 = 0.0, g22 = 0.0;
        for (const Eigen::MatrixXd& m : ms) {
          const double h1 = m(a, a) - m(b, b);
          const double h2 = 2.0 * m(a, b);
          g11 += h1 * h1;
          g12 += h1 * h2;
          g22 += h2 * h2;
        }
        if (g11 + g22 < 1e-300) continue;  // degenerate subproblem, skip

        // Dominant eigenvector of [[g11,g12],[g12,g22]], expressed through
        // whichever formula stays well conditioned; x >= 0 keeps the
        // rotation angle within [-pi/4, pi/4].
        const double ton = g11 - g22;
        const double toff = 2.0 * g12;
        const double r = std::hypot(ton, toff);
        double vx, vy;
        if (ton >= 0.0) {
          vx = ton + r;
          vy = toff;
        } else {
          vx = toff;
          vy = r - ton;
        }
        if (vx < 0.0) {
          vx = -vx;
          vy = -vy;
        }
        const double theta = 0.5 * std::atan2(vy, vx);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        max_abs_sin = std::max(max_abs_sin, std::abs(s));
        if (s == 0.0) continue;

        for (Eigen::MatrixXd& m : ms) {
          for (int i = 0; i < p; ++i) {
            const double ma = m(i, a), mb = m(i, b);
            m(i, a) = c * ma + s * mb;
            m(i, b) = -s * ma + c * mb;
          }
          for (int j = 0; j < p; ++j) {
            const double ma = m(a, j), mb = m(b, j);
            m(a, j) = c * ma + s * mb;
            m(b, j) = -s * ma + c * mb;
          }
        }
        for (int i = 0; i < p; ++i) {
          const double va = res.V(i, a), vb = res.V(i, b);
          res.V(i, a) = c * va + s * vb;
          res.V(i, b) = -s * va + c * vb;
        }
      }
    }
    res.sweeps = sweep;
    res.objective_trace.push_back(objective());
    if (max_abs_sin < tol) {
      res.converged = true;
      break;
    }
  }

  for (const Eigen::MatrixXd& m : ms)
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        if (i != j) res.off_sum += m(i, j) * m(i, j);
  return res;
}

}  // namespace ssir
