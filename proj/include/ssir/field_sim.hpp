#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ssir/grid.hpp"
#include "ssir/lags.hpp"

namespace ssir {

/// Isotropic exponential covariance with nugget:
/// C(0) = c0 + c1, C(h) = c0 exp(-h/h0) for h > 0.
struct ExpCovParams {
  double c0 = 1.0;  // partial sill
  double c1 = 1.0;  // nugget
  double h0 = 0.25; // range parameter

  double operator()(double h) const;
  void validate() const;
};

enum class ResponseModel { A, B, C };

const char* to_string(ResponseModel model);
ResponseModel parse_model(const std::string& name);

struct SimSpec {
  ResponseModel model = ResponseModel::A;
  GridShape shape{100, 100, 0.25};
  ExpCovParams params{};
  double noise_sd = 1.0;
  std::uint64_t seed = 0;
  int margin = 2;  // must cover the largest lag in the response formula

  void validate() const;
};

struct TruthPair {
  Eigen::VectorXd direction;  // length p
  Lag lag;
};

struct SimOutput {
  MultiField x;   // p = 4; equals the latent field (identity mixing)
  ScalarField y;
  std::vector<TruthPair> truth;
  std::uint64_t seed = 0;
  std::string rng;  // generator + stream convention identifier
};

/// Zero-mean stationary Gaussian field with the exponential-plus-nugget
/// covariance, sampled exactly by circulant embedding of the smooth part on
/// a 2(n-1)-periodic torus (padding doubled until the embedding spectrum is
/// nonnegative, at most 3 doublings) plus independent per-cell nugget draws.
/// Deterministic given (seed, stream).
ScalarField simulate_grf(const GridShape& shape, const ExpCovParams& params,
                         std::uint64_t seed, std::uint64_t stream = 0);

/// Four independent latent channels on a margin-extended grid, restricted to
/// the core grid, plus the response of the chosen model evaluated at its
/// spatial lags. Streams: channel c uses stream c, the response noise uses
/// stream 4.
SimOutput simulate_model(const SimSpec& spec);

}  // namespace ssir
