#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssir/eval.hpp"
#include "ssir/field_sim.hpp"
#include "ssir/fit.hpp"
#include "ssir/grid.hpp"
#include "ssir/study.hpp"

namespace ssir::io {

struct FieldData {
  MultiField x;
  ScalarField y;
  nlohmann::json meta;  // null when the file has no meta line
};

/// Text field file, round-trips doubles bit-exactly:
///   line 1: "ssir-field v1"
///   line 2: "rows cols spacing p"
///   line 3 (optional): "# meta: <json>"
///   then rows*cols lines, row-major, p+1 values each (x_1..x_p, y).
void write_field_file(const std::string& path, const MultiField& x,
                      const ScalarField& y,
                      const nlohmann::json* meta = nullptr);
FieldData read_field_file(const std::string& path);

nlohmann::json fit_report(const SsirFit& fit,
                          const std::vector<SelectionResult>& selections);

/// Schema check for emitted fit reports; throws std::runtime_error with a
/// description of the first violation.
void validate_fit_report(const nlohmann::json& report);

/// Lambda table formatted like the usual presentation: lag rows, component
/// columns, row and column sums. Whitespace-tokenizable.
std::string lambda_table(const SsirFit& fit);

nlohmann::json truth_json(const SimSpec& spec, const SimOutput& out);
SubspaceEstimate truth_subspace(const nlohmann::json& truth);

/// Minimal text form of a P value, used as the selections map key.
std::string format_p(double p);

void write_study_csv(std::ostream& os, const StudySummary& summary);
nlohmann::json study_summary_json(const StudySummary& summary);

}  // namespace ssir::io
