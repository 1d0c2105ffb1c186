#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ssir/field_sim.hpp"
#include "ssir/grid.hpp"

namespace ssir {

enum class Dependence { weak, strong };
enum class LagPreset { first, first2 };

const char* to_string(Dependence dep);
const char* to_string(LagPreset preset);
Dependence parse_dependence(const std::string& name);
LagPreset parse_lag_preset(const std::string& name);
double dependence_h0(Dependence dep);  // weak: 0.25, strong: 15

struct StudyConfig {
  std::vector<ResponseModel> models{ResponseModel::A};
  std::vector<Dependence> dependence{Dependence::weak};
  std::vector<LagPreset> lagsets{LagPreset::first};
  int reps = 50;
  std::uint64_t base_seed = 0;
  std::vector<double> p_values{0.5, 0.8};
  int slices = 10;
  GridShape shape{100, 100, 0.25};
  bool known_d = true;
  bool estimated_d = true;
  int workers = 0;  // 0: runtime default thread count
  double noise_sd = 1.0;
  double c0 = 1.0;
  double c1 = 1.0;

  void validate() const;
};

/// One evaluated repetition. p is "known" for the known-d evaluation and the
/// numeric text of P for the estimated-d evaluations.
struct RepRow {
  ResponseModel model;
  Dependence dep;
  LagPreset lagset;
  int rep = 0;
  std::uint64_t seed = 0;
  std::string p;
  int d_hat = 0;
  double d2_inverse = 0.0;
  double d2_invsqrt = 0.0;
};

struct RepFailure {
  ResponseModel model;
  Dependence dep;
  LagPreset lagset;
  int rep = 0;
  std::string message;
};

struct DistSummary {
  int n = 0;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

/// Five-number summary with linear quantile interpolation.
DistSummary summarize(std::vector<double> values);

struct CellSummary {
  ResponseModel model;
  Dependence dep;
  LagPreset lagset;
  std::string p;
  int n = 0;
  DistSummary d2_inverse;
  DistSummary d2_invsqrt;
  std::map<int, int> d_hat_freq;
};

struct StudySummary {
  StudyConfig config;
  std::vector<RepRow> rows;        // raw per-rep rows, deterministic order
  std::vector<RepFailure> failures;
  std::vector<CellSummary> cells;
};

/// Monte-Carlo driver: simulate -> fit -> select -> evaluate, repeated.
/// Repetition r uses seed base_seed + r; reps run in parallel and results
/// are schedule-independent. Individual failures are recorded and excluded;
/// more than 5% failures aborts with StudyAbortError.
StudySummary run_study(const StudyConfig& config);

}  // namespace ssir
