#include "ssir/study.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ssir/errors.hpp"
#include "ssir/eval.hpp"
#include "ssir/fit.hpp"
#include "ssir/io.hpp"

namespace ssir {

const char* to_string(Dependence dep) {
  return dep == Dependence::weak ? "weak" : "strong";
}

const char* to_string(LagPreset preset) {
  return preset == LagPreset::first ? "first" : "first2";
}

Dependence parse_dependence(const std::string& name) {
  if (name == "weak") return Dependence::weak;
  if (name == "strong") return Dependence::strong;
  throw std::invalid_argument("unknown dependence '" + name +
                              "' (expected weak or strong)");
}

LagPreset parse_lag_preset(const std::string& name) {
  if (name == "first") return LagPreset::first;
  if (name == "first2") return LagPreset::first2;
  throw std::invalid_argument("unknown lag preset '" + name +
                              "' (expected first or first2)");
}

double dependence_h0(Dependence dep) {
  return dep == Dependence::weak ? 0.25 : 15.0;
}

void StudyConfig::validate() const {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (models.empty() || dependence.empty() || lagsets.empty())
    throw std::invalid_argument("models, dependence and lagsets must be nonempty");
  for (double p : p_values)
    if (!(p > 0.0 && p < 1.0))
      throw std::invalid_argument("P values must be in (0, 1)");
  if (slices < 2) throw std::invalid_argument("slices must be >= 2");
  shape.validate();
  if (!known_d && !estimated_d)
    throw std::invalid_argument("at least one evaluation mode must be enabled");
  if (noise_sd < 0.0) throw std::invalid_argument("noise-sd must be nonnegative");
}

DistSummary summarize(std::vector<double> values) {
  DistSummary s;
  s.n = static_cast<int>(values.size());
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    // linear interpolation between order statistics
    const double pos = q * (values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
  };
  s.min = values.front();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  s.max = values.back();
  return s;
}

namespace {

struct CellSpec {
  ResponseModel model;
  Dependence dep;
  LagPreset lagset;
};

struct TaskResult {
  bool failed = false;
  std::string message;
  std::vector<RepRow> rows;
};

LagSet preset_lags(LagPreset preset) {
  return preset == LagPreset::first ? LagSet::first() : LagSet::first2();
}

SubspaceEstimate truth_span(const SimOutput& out) {
  const auto d = static_cast<int>(out.truth.size());
  Eigen::MatrixXd b(d, out.x.channels());
  for (int r = 0; r < d; ++r) b.row(r) = out.truth[r].direction.transpose();
  return {b};
}

SubspaceEstimate gamma_rows(const SsirFit& fit, const std::vector<int>& rows) {
  Eigen::MatrixXd b(static_cast<int>(rows.size()), fit.gamma.cols());
  for (std::size_t r = 0; r < rows.size(); ++r)
    b.row(static_cast<int>(r)) = fit.gamma.row(rows[r]);
  return {b};
}

TaskResult run_one(const StudyConfig& cfg, const CellSpec& cell, int rep) {
  TaskResult result;
  const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(rep);
  try {
    SimSpec spec;
    spec.model = cell.model;
    spec.shape = cfg.shape;
    spec.params = {cfg.c0, cfg.c1, dependence_h0(cell.dep)};
    spec.noise_sd = cfg.noise_sd;
    spec.seed = seed;
    SimOutput out = simulate_model(spec);
    SsirFit fit = ssir_fit(out.x, out.y, preset_lags(cell.lagset), cfg.slices);
    const SubspaceEstimate truth = truth_span(out);
    const int d_true = truth.d();

    auto emit = [&](const std::string& p_label, const std::vector<int>& rows,
                    int d_hat) {
      const SubspaceEstimate est = gamma_rows(fit, rows);
      RepRow row{cell.model, cell.dep, cell.lagset, rep, seed, p_label, d_hat,
                 weighted_distance(est, truth, WeightKind::inverse),
                 weighted_distance(est, truth, WeightKind::inverse_sqrt)};
      result.rows.push_back(std::move(row));
    };

    if (cfg.known_d) {
      std::vector<int> rows(d_true);
      for (int r = 0; r < d_true; ++r) rows[r] = r;
      emit("known", rows, d_true);
    }
    if (cfg.estimated_d) {
      for (double p : cfg.p_values) {
        const SelectionResult sel = select(fit, p);
        std::vector<int> rows;
        for (const auto& [component, lag] : sel.selected_cells)
          if (std::find(rows.begin(), rows.end(), component) == rows.end())
            rows.push_back(component);
        std::sort(rows.begin(), rows.end());
        emit(io::format_p(p), rows, sel.d_hat);
      }
    }
  } catch (const std::exception& e) {
    result.failed = true;
    result.message = e.what();
  }
  return result;
}

}  // namespace

StudySummary run_study(const StudyConfig& config) {
  config.validate();

  std::vector<CellSpec> cells;
  for (ResponseModel model : config.models)
    for (Dependence dep : config.dependence)
      for (LagPreset lagset : config.lagsets)
        cells.push_back({model, dep, lagset});

  const int total = static_cast<int>(cells.size()) * config.reps;
  std::vector<TaskResult> results(total);

#ifdef _OPENMP
  const int threads =
      config.workers > 0 ? config.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (int t = 0; t < total; ++t) {
    const CellSpec& cell = cells[t / config.reps];
    results[t] = run_one(config, cell, t % config.reps);
  }

  StudySummary summary;
  summary.config = config;
  for (int t = 0; t < total; ++t) {
    const CellSpec& cell = cells[t / config.reps];
    TaskResult& r = results[t];
    if (r.failed) {
      summary.failures.push_back(
          {cell.model, cell.dep, cell.lagset, t % config.reps, r.message});
    } else {
      for (RepRow& row : r.rows) summary.rows.push_back(std::move(row));
    }
  }

  if (summary.failures.size() * 20 > static_cast<std::size_t>(total))
    throw StudyAbortError("study aborted: " +
                          std::to_string(summary.failures.size()) + " of " +
                          std::to_string(total) + " repetitions failed");

  // Per-cell, per-evaluation summaries in deterministic order.
  std::vector<std::string> p_labels;
  if (config.known_d) p_labels.push_back("known");
  if (config.estimated_d)
    for (double p : config.p_values) p_labels.push_back(io::format_p(p));
  for (const CellSpec& cell : cells) {
    for (const std::string& p_label : p_labels) {
      CellSummary cs;
      cs.model = cell.model;
      cs.dep = cell.dep;
      cs.lagset = cell.lagset;
      cs.p = p_label;
      std::vector<double> inv, invsqrt;
      for (const RepRow& row : summary.rows) {
        if (row.model != cell.model || row.dep != cell.dep ||
            row.lagset != cell.lagset || row.p != p_label)
          continue;
        inv.push_back(row.d2_inverse);
        invsqrt.push_back(row.d2_invsqrt);
        ++cs.d_hat_freq[row.d_hat];
      }
      cs.n = static_cast<int>(inv.size());
      cs.d2_inverse = summarize(std::move(inv));
      cs.d2_invsqrt = summarize(std::move(invsqrt));
      summary.cells.push_back(std::move(cs));
    }
  }
  return summary;
}

}  // namespace ssir
