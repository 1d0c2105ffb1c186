#include <cmath>

#include <doctest.h>

#include "ssir/errors.hpp"
#include "ssir/moments.hpp"

#include "helpers.hpp"

using namespace ssir;

TEST_CASE("sample_mean_cov: constant field has zero covariance") {
  MultiField x({3, 4, 1.0}, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) {
      x.at(i, j, 0) = 7.5;
      x.at(i, j, 1) = -2.0;
    }
  MeanCov mc = sample_mean_cov(x);
  CHECK(mc.mean(0) == doctest::Approx(7.5));
  CHECK(mc.mean(1) == doctest::Approx(-2.0));
  CHECK(mc.cov.mat().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sample_mean_cov: 1x2 grid, denominator n") {
  MultiField x({1, 2, 1.0}, 1, {0.0, 2.0});
  MeanCov mc = sample_mean_cov(x);
  CHECK(mc.mean(0) == doctest::Approx(1.0));
  CHECK(mc.cov(0, 0) == doctest::Approx(1.0));  // ((0-1)^2+(2-1)^2)/2
}

TEST_CASE("sample_mean_cov: duplicated channel gives rank-1 covariance") {
  GridShape shape{8, 8, 1.0};
  MultiField base = test::random_field(shape, 1, 11);
  MultiField x(shape, 2);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      x.at(i, j, 0) = base.at(i, j, 0);
      x.at(i, j, 1) = base.at(i, j, 0);
    }
  MeanCov mc = sample_mean_cov(x);
  CHECK(mc.cov(0, 1) == doctest::Approx(mc.cov(0, 0)));
  CHECK(mc.cov(1, 1) == doctest::Approx(mc.cov(0, 0)));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mc.cov.mat());
  CHECK(es.eigenvalues()(0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sample_mean_cov: rejects non-finite values and single cells") {
  MultiField bad({1, 2, 1.0}, 1, {0.0, std::nan("")});
  CHECK_THROWS_AS(sample_mean_cov(bad), std::invalid_argument);
  MultiField tiny({1, 1, 1.0}, 1, {3.0});
  CHECK_THROWS_AS(sample_mean_cov(tiny), DimensionError);
}

TEST_CASE("inv_sqrt_sym: identity and diagonal cases") {
  SymMat eye(Eigen::MatrixXd::Identity(3, 3));
  CHECK((inv_sqrt_sym(eye).mat() - Eigen::MatrixXd::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() < 1e-14);

  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d.diagonal() << 4.0, 9.0;
  SymMat r = inv_sqrt_sym(SymMat(d));
  CHECK(r(0, 0) == doctest::Approx(0.5));
  CHECK(r(1, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(std::abs(r(0, 1)) < 1e-15);
}

TEST_CASE("inv_sqrt_sym: random SPD satisfies R S R = I") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Eigen::MatrixXd a = test::random_well_conditioned(5, seed);
    SymMat s(a * a.transpose());
    SymMat r = inv_sqrt_sym(s);
    // symmetric and PD result
    CHECK((r.mat() - r.mat().transpose()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.mat());
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    CHECK((r.mat() * s.mat() * r.mat() - Eigen::MatrixXd::Identity(5, 5))
              .cwiseAbs()
              .maxCoeff() < 1e-8);
  }
}

TEST_CASE("inv_sqrt_sym: not positive definite") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 0) = 1.0;
  CHECK_THROWS_AS(inv_sqrt_sym(SymMat(m)), NotPositiveDefiniteError);
  CHECK_THROWS_AS(inv_sqrt_sym(SymMat(-Eigen::MatrixXd::Identity(2, 2))),
                  NotPositiveDefiniteError);
}

TEST_CASE("whiten: output has zero mean and identity covariance") {
  MultiField x = test::random_field({20, 20, 1.0}, 3, 5);
  WhitenResult wr = whiten(x);
  MeanCov mc = sample_mean_cov(wr.xst);
  CHECK(mc.mean.cwiseAbs().maxCoeff() < 1e-8);
  CHECK((mc.cov.mat() - Eigen::MatrixXd::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() < 1e-8);
}

TEST_CASE("whiten: idempotent on already-white data") {
  MultiField x = test::random_field({16, 16, 2.0}, 2, 6);
  MultiField white = whiten(x).xst;
  WhitenResult again = whiten(white);
  CHECK((again.cov_inv_sqrt.mat() - Eigen::MatrixXd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-8);
  CHECK((again.xst.as_matrix() - white.as_matrix()).cwiseAbs().maxCoeff() <
        1e-8);
}

TEST_CASE("whiten: uniform rescaling leaves xst unchanged") {
  MultiField x = test::random_field({12, 12, 1.0}, 3, 7);
  MultiField scaled = x;
  for (double& v : scaled.values()) v *= 10.0;
  MultiField a = whiten(x).xst;
  MultiField b = whiten(scaled).xst;
  CHECK((a.as_matrix() - b.as_matrix()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("whiten: affine transforms change xst by a fixed orthogonal map") {
  const GridShape shape{24, 24, 1.0};
  for (std::uint64_t seed : {10u, 11u}) {
    MultiField x = test::random_field(shape, 4, seed);
    Eigen::MatrixXd a = test::random_well_conditioned(4, seed);
    Eigen::VectorXd b(4);
    StreamRng rng(seed, 906);
    for (int i = 0; i < 4; ++i) b(i) = 3.0 * rng.normal();

    MultiField ax(shape, 4);
    ax.as_matrix() =
        (x.as_matrix() * a.transpose()).rowwise() + b.transpose();

    MultiField w1 = whiten(x).xst;
    MultiField w2 = whiten(ax).xst;
    // cross-covariance of the two whitened fields is the orthogonal map
    Eigen::MatrixXd q =
        w2.as_matrix().transpose() * w1.as_matrix() / shape.cells();
    CHECK((q * q.transpose() - Eigen::MatrixXd::Identity(4, 4))
              .cwiseAbs()
              .maxCoeff() < 1e-6);
    // and it maps one whitened field onto the other cellwise
    CHECK((w2.as_matrix() - w1.as_matrix() * q.transpose())
              .cwiseAbs()
              .maxCoeff() < 1e-6);
  }
}
