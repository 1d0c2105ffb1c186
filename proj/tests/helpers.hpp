#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ssir/grid.hpp"
#include "ssir/rng.hpp"
#include "ssir/slicing.hpp"

namespace ssir::test {

/// iid standard-normal multifield.
inline MultiField random_field(GridShape shape, int p, std::uint64_t seed,
                               std::uint64_t stream = 900) {
  StreamRng rng(seed, stream);
  MultiField x(shape, p);
  for (double& v : x.values()) v = rng.normal();
  return x;
}

inline ScalarField random_scalar(GridShape shape, std::uint64_t seed,
                                 std::uint64_t stream = 901) {
  StreamRng rng(seed, stream);
  ScalarField y(shape);
  for (double& v : y.values()) v = rng.normal();
  return y;
}

/// Slice assignment with explicit labels, for kernel tests that do not need
/// a real response.
inline SliceAssignment labels_assignment(GridShape shape,
                                         std::vector<int> labels, int h) {
  SliceAssignment s;
  s.shape = shape;
  s.H = h;
  s.counts.assign(h, 0);
  for (int label : labels) ++s.counts[label];
  s.labels = std::move(labels);
  for (int i = 1; i < h; ++i) s.boundaries.push_back(static_cast<double>(i));
  return s;
}

/// Haar-ish random orthogonal matrix from the QR of a Gaussian draw.
inline Eigen::MatrixXd random_orthogonal(int p, std::uint64_t seed,
                                         std::uint64_t stream = 902) {
  StreamRng rng(seed, stream);
  Eigen::MatrixXd g(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  return q;
}

/// Random nonsingular matrix with singular values in [0.5, 2].
inline Eigen::MatrixXd random_well_conditioned(int p, std::uint64_t seed) {
  StreamRng rng(seed, 903);
  Eigen::MatrixXd q1 = random_orthogonal(p, seed, 904);
  Eigen::MatrixXd q2 = random_orthogonal(p, seed, 905);
  Eigen::VectorXd sv(p);
  for (int i = 0; i < p; ++i) sv(i) = 0.5 + 1.5 * rng.uniform();
  return q1 * sv.asDiagonal() * q2;
}

}  // namespace ssir::test
