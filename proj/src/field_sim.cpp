#include "ssir/field_sim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <utility>

#include <fftw3.h>

#include "ssir/errors.hpp"
#include "ssir/rng.hpp"

namespace ssir {

double ExpCovParams::operator()(double h) const {
  if (h == 0.0) return c0 + c1;
  return c0 * std::exp(-h / h0);
}

void ExpCovParams::validate() const {
  if (!(h0 > 0.0)) throw std::invalid_argument("h0 must be positive");
  if (c0 < 0.0) throw std::invalid_argument("c0 must be nonnegative");
  if (c1 < 0.0) throw std::invalid_argument("c1 must be nonnegative");
  if (!(c0 + c1 > 0.0))
    throw std::invalid_argument("c0 + c1 must be positive");
}

const char* to_string(ResponseModel model) {
  switch (model) {
    case ResponseModel::A: return "A";
    case ResponseModel::B: return "B";
    case ResponseModel::C: return "C";
  }
  return "?";
}

ResponseModel parse_model(const std::string& name) {
  if (name == "A") return ResponseModel::A;
  if (name == "B") return ResponseModel::B;
  if (name == "C") return ResponseModel::C;
  throw std::invalid_argument("unknown model '" + name +
                              "' (expected A, B or C)");
}

void SimSpec::validate() const {
  shape.validate();
  params.validate();
  if (noise_sd < 0.0)
    throw std::invalid_argument("noise-sd must be nonnegative");
  if (margin < 2)
    throw std::invalid_argument(
        "margin must be >= 2 to cover the response lags");
}

namespace {

// FFTW plan creation and destruction are not thread safe; execution is.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

struct Embedding {
  int m1 = 0;
  int m2 = 0;
  std::vector<double> sqrt_lambda;  // sqrt of the BCCB eigenvalues
};

struct EmbeddingKey {
  int rows, cols;
  double spacing, c0, h0;
  bool operator<(const EmbeddingKey& o) const {
    return std::tie(rows, cols, spacing, c0, h0) <
           std::tie(o.rows, o.cols, o.spacing, o.c0, o.h0);
  }
};

void fft2_inplace(int m1, int m2, std::vector<std::complex<double>>& buf,
                  int direction) {
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_2d(m1, m2,
                            reinterpret_cast<fftw_complex*>(buf.data()),
                            reinterpret_cast<fftw_complex*>(buf.data()),
                            direction, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
}

Embedding build_embedding(const GridShape& shape, const ExpCovParams& params) {
  static std::map<EmbeddingKey, Embedding> cache;
  static std::mutex cache_mutex;
  const EmbeddingKey key{shape.rows, shape.cols, shape.spacing, params.c0,
                         params.h0};
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  const int base1 = std::max(2 * (shape.rows - 1), 1);
  const int base2 = std::max(2 * (shape.cols - 1), 1);
  double most_negative = 0.0;
  for (int doubling = 0; doubling <= 3; ++doubling) {
    const int m1 = base1 << doubling;
    const int m2 = base2 << doubling;
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(m1) * m2);
    for (int a = 0; a < m1; ++a) {
      const double di = std::min(a, m1 - a);
      for (int b = 0; b < m2; ++b) {
        const double dj = std::min(b, m2 - b);
        const double h = shape.spacing * std::hypot(di, dj);
        // smooth part only; the nugget is added as per-cell noise
        buf[static_cast<std::size_t>(a) * m2 + b] =
            (h == 0.0) ? params.c0 : params.c0 * std::exp(-h / params.h0);
      }
    }
    fft2_inplace(m1, m2, buf, FFTW_FORWARD);

    double min_ev = 0.0, max_ev = 0.0;
    for (const std::complex<double>& v : buf) {
      min_ev = std::min(min_ev, v.real());
      max_ev = std::max(max_ev, v.real());
    }
    most_negative = std::min(most_negative, min_ev);
    if (min_ev >= -1e-10 * max_ev) {
      Embedding emb;
      emb.m1 = m1;
      emb.m2 = m2;
      emb.sqrt_lambda.resize(buf.size());
      for (std::size_t i = 0; i < buf.size(); ++i)
        emb.sqrt_lambda[i] = std::sqrt(std::max(buf[i].real(), 0.0));
      std::lock_guard<std::mutex> lock(cache_mutex);
      return cache.emplace(key, std::move(emb)).first->second;
    }
  }
  throw std::runtime_error(
      "circulant embedding stayed indefinite after 3 padding doublings "
      "(most negative eigenvalue " +
      std::to_string(most_negative) + ")");
}

}  // namespace

ScalarField simulate_grf(const GridShape& shape, const ExpCovParams& params,
                         std::uint64_t seed, std::uint64_t stream) {
  shape.validate();
  params.validate();
  ScalarField out(shape);
  StreamRng rng(seed, stream);

  if (params.c0 > 0.0) {
    const Embedding emb = build_embedding(shape, params);
    const int m1 = emb.m1, m2 = emb.m2;
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(m1) * m2);
    for (std::size_t idx = 0; idx < buf.size(); ++idx) {
      const double a = rng.normal();
      const double b = rng.normal();
      buf[idx] = emb.sqrt_lambda[idx] * std::complex<double>(a, b);
    }
    fft2_inplace(m1, m2, buf, FFTW_BACKWARD);
    // Real part of the unnormalized inverse transform, scaled by
    // 1/sqrt(m1 m2), has exactly the torus covariance.
    const double scale =
        1.0 / std::sqrt(static_cast<double>(m1) * static_cast<double>(m2));
    for (int i = 0; i < shape.rows; ++i)
      for (int j = 0; j < shape.cols; ++j)
        out.at(i, j) =
            buf[static_cast<std::size_t>(i) * m2 + j].real() * scale;
  }

  if (params.c1 > 0.0) {
    const double sd = std::sqrt(params.c1);
    for (double& v : out.values()) v += sd * rng.normal();
  }
  return out;
}

SimOutput simulate_model(const SimSpec& spec) {
  spec.validate();
  constexpr int kChannels = 4;
  const int m = spec.margin;
  const GridShape ext{spec.shape.rows + 2 * m, spec.shape.cols + 2 * m,
                      spec.shape.spacing};

  std::vector<ScalarField> z(kChannels, ScalarField(ext));
#pragma omp parallel for schedule(static)
  for (int c = 0; c < kChannels; ++c)
    z[c] = simulate_grf(ext, spec.params, spec.seed, c);

  MultiField x(spec.shape, kChannels);
  for (int i = 0; i < spec.shape.rows; ++i)
    for (int j = 0; j < spec.shape.cols; ++j)
      for (int c = 0; c < kChannels; ++c)
        x.at(i, j, c) = z[c].at(i + m, j + m);

  ScalarField y(spec.shape);
  StreamRng eps(spec.seed, kChannels);
  for (int i = 0; i < spec.shape.rows; ++i) {
    for (int j = 0; j < spec.shape.cols; ++j) {
      const int bi = i + m, bj = j + m;
      double signal = 0.0;
      switch (spec.model) {
        case ResponseModel::A:
          signal = 2.0 * z[0].at(bi + 1, bj) + 3.0 * z[1].at(bi + 1, bj);
          break;
        case ResponseModel::B:
          signal = 2.0 * z[0].at(bi + 1, bj) + 3.0 * z[1].at(bi + 2, bj - 2);
          break;
        case ResponseModel::C: {
          const double denom = 0.5 + (z[1].at(bi + 1, bj) + 1.5);
          signal = z[0].at(bi + 1, bj) / (denom * denom);
          break;
        }
      }
      y.at(i, j) = signal + spec.noise_sd * eps.normal();
    }
  }

  auto direction = [](double a, double b, double c, double d) {
    Eigen::VectorXd v(4);
    v << a, b, c, d;
    return v;
  };
  std::vector<TruthPair> truth;
  switch (spec.model) {
    case ResponseModel::A:
      truth.push_back({direction(2, 3, 0, 0), {1, 0}});
      break;
    case ResponseModel::B:
      truth.push_back({direction(2, 0, 0, 0), {1, 0}});
      truth.push_back({direction(0, 3, 0, 0), {2, -2}});
      break;
    case ResponseModel::C:
      truth.push_back({direction(1, 0, 0, 0), {1, 0}});
      truth.push_back({direction(0, 1, 0, 0), {1, 0}});
      break;
  }

  return SimOutput{std::move(x), std::move(y), std::move(truth), spec.seed,
                   std::string(StreamRng::kName) +
                       "; streams: z1..z4 -> 0..3, noise -> 4"};
}

}  // namespace ssir
