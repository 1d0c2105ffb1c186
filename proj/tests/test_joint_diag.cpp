#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "ssir/errors.hpp"
#include "ssir/joint_diag.hpp"

#include "helpers.hpp"

using namespace ssir;

namespace {

std::vector<SymMat> diagonalizable_family(int p, int k_count,
                                          const Eigen::MatrixXd& q,
                                          std::uint64_t seed) {
  StreamRng rng(seed, 910);
  std::vector<SymMat> out;
  for (int k = 0; k < k_count; ++k) {
    Eigen::VectorXd d(p);
    for (int i = 0; i < p; ++i) d(i) = 4.0 * rng.uniform() - 2.0;
    out.emplace_back(q * d.asDiagonal() * q.transpose());
  }
  return out;
}

// 1 - (v.q)^2 for unit vectors: the 1-D projector distance.
double column_span_distance(const Eigen::VectorXd& v, const Eigen::VectorXd& q) {
  const double dot = v.dot(q);
  return 1.0 - dot * dot;
}

}  // namespace

TEST_CASE("joint_diagonalize: single matrix reduces to eigendecomposition") {
  Eigen::MatrixXd a = test::random_well_conditioned(4, 50);
  SymMat s(a * a.transpose());
  JadResult res = joint_diagonalize({s});
  CHECK(res.converged);

  Eigen::VectorXd jad_diag =
      (res.V.transpose() * s.mat() * res.V).diagonal();
  std::sort(jad_diag.data(), jad_diag.data() + 4);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.mat());
  Eigen::VectorXd eig = es.eigenvalues();
  CHECK((jad_diag - eig).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("joint_diagonalize: exactly diagonalizable family is solved") {
  const Eigen::MatrixXd q = test::random_orthogonal(4, 51);
  std::vector<SymMat> family = diagonalizable_family(4, 6, q, 51);
  JadResult res = joint_diagonalize(family);
  CHECK(res.converged);
  CHECK(res.off_sum < 1e-18);

  // columns match q up to permutation and sign
  std::vector<bool> used(4, false);
  for (int c = 0; c < 4; ++c) {
    int best = -1;
    double best_dist = 1e9;
    for (int j = 0; j < 4; ++j) {
      if (used[j]) continue;
      const double dist = column_span_distance(res.V.col(j), q.col(c));
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    used[best] = true;
    CHECK(best_dist < 1e-8);
  }
}

TEST_CASE("joint_diagonalize: diagonal input is a fixed point") {
  std::vector<SymMat> mats;
  StreamRng rng(52, 911);
  for (int k = 0; k < 3; ++k) {
    Eigen::VectorXd d(3);
    for (int i = 0; i < 3; ++i) d(i) = rng.normal();
    mats.emplace_back(Eigen::MatrixXd(d.asDiagonal()));
  }
  JadResult res = joint_diagonalize(mats);
  CHECK(res.converged);
  CHECK(res.sweeps == 1);
  CHECK(res.off_sum == 0.0);
  // V is a signed permutation of the identity; with no rotations it is I
  CHECK((res.V - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("joint_diagonalize: pure off-diagonal 2x2 is handled") {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, 1, 0;
  JadResult res = joint_diagonalize({SymMat(m)});
  CHECK(res.converged);
  CHECK(res.off_sum < 1e-28);
}

TEST_CASE("joint_diagonalize: objective is nondecreasing per sweep") {
  StreamRng rng(53, 912);
  std::vector<SymMat> mats;
  for (int k = 0; k < 5; ++k) {
    Eigen::MatrixXd g(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) g(i, j) = rng.normal();
    mats.emplace_back(g);  // symmetrized by SymMat
  }
  JadResult res = joint_diagonalize(mats);
  REQUIRE(res.objective_trace.size() >= 2);
  for (std::size_t s = 1; s < res.objective_trace.size(); ++s)
    CHECK(res.objective_trace[s] >=
          res.objective_trace[s - 1] - 1e-9 * res.objective_trace.back());
  CHECK((res.V.transpose() * res.V - Eigen::MatrixXd::Identity(5, 5))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("joint_diagonalize: objective invariant to input order") {
  const Eigen::MatrixXd q = test::random_orthogonal(4, 54);
  std::vector<SymMat> family = diagonalizable_family(4, 5, q, 54);
  StreamRng rng(54, 913);
  for (auto& m : family) {
    // add asymmetry-free noise so the family is only approximately common
    Eigen::MatrixXd noise(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) noise(i, j) = 0.05 * rng.normal();
    m = SymMat(m.mat() + noise);
  }
  JadResult forward = joint_diagonalize(family);
  std::vector<SymMat> reversed(family.rbegin(), family.rend());
  JadResult backward = joint_diagonalize(reversed);
  CHECK(forward.objective_trace.back() ==
        doctest::Approx(backward.objective_trace.back()).epsilon(1e-10));
}

TEST_CASE("joint_diagonalize: sweep cap reports converged=false") {
  StreamRng rng(55, 914);
  std::vector<SymMat> mats;
  for (int k = 0; k < 4; ++k) {
    Eigen::MatrixXd g(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) g(i, j) = rng.normal();
    mats.emplace_back(g);
  }
  JadResult res = joint_diagonalize(mats, 1e-12, 1);
  CHECK_FALSE(res.converged);
  CHECK(res.sweeps == 1);
}

TEST_CASE("joint_diagonalize: argument validation") {
  CHECK_THROWS_AS(joint_diagonalize({}), std::invalid_argument);
  SymMat a(Eigen::MatrixXd::Identity(2, 2));
  SymMat b(Eigen::MatrixXd::Identity(3, 3));
  CHECK_THROWS_AS(joint_diagonalize({a, b}), DimensionError);
  CHECK_THROWS_AS(joint_diagonalize({a}, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(joint_diagonalize({a}, 1e-12, 0), std::invalid_argument);
}
