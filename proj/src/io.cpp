#include "ssir/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ssir/errors.hpp"

namespace ssir::io {

namespace {

constexpr const char* kFieldMagic = "ssir-field v1";

// %.17g round-trips IEEE doubles exactly.
std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& token, const std::string& context) {
  // strtod instead of std::stod: subnormal values must parse, not raise
  // out_of_range.
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + token.size() || token.empty())
    throw FieldIoError("field file: bad number '" + token + "' in " + context);
  if (!std::isfinite(v))
    throw FieldIoError("field file: non-finite value in " + context);
  return v;
}

nlohmann::json lag_to_json(const Lag& lag) {
  return nlohmann::json::array({lag.k, lag.l});
}

}  // namespace

void write_field_file(const std::string& path, const MultiField& x,
                      const ScalarField& y, const nlohmann::json* meta) {
  if (x.shape() != y.shape())
    throw DimensionError("write_field_file: x and y shapes differ");
  std::ofstream out(path);
  if (!out) throw FieldIoError("cannot open for writing: " + path);
  const GridShape& shape = x.shape();
  const int p = x.channels();
  out << kFieldMagic << '\n';
  out << shape.rows << ' ' << shape.cols << ' ' << fmt_double(shape.spacing)
      << ' ' << p << '\n';
  if (meta != nullptr && !meta->is_null())
    out << "# meta: " << meta->dump() << '\n';
  for (std::int64_t cell = 0; cell < shape.cells(); ++cell) {
    for (int c = 0; c < p; ++c) {
      out << fmt_double(x.values()[cell * p + c]) << ' ';
    }
    out << fmt_double(y.values()[cell]) << '\n';
  }
  if (!out) throw FieldIoError("write failed: " + path);
}

FieldData read_field_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FieldIoError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kFieldMagic)
    throw FieldIoError("field file " + path + ": bad magic line");

  if (!std::getline(in, line))
    throw FieldIoError("field file " + path + ": missing header");
  std::istringstream header(line);
  std::int64_t rows, cols;
  std::string spacing_token;
  int p;
  if (!(header >> rows >> cols >> spacing_token >> p))
    throw FieldIoError("field file " + path + ": bad header");
  if (rows < 1 || cols < 1 || p < 1 || rows > (1 << 20) || cols > (1 << 20))
    throw FieldIoError("field file " + path + ": bad dimensions");
  const double spacing = parse_double(spacing_token, "header");
  const GridShape shape{static_cast<int>(rows), static_cast<int>(cols),
                        spacing};
  shape.validate();

  nlohmann::json meta;
  std::streampos before_meta = in.tellg();
  if (std::getline(in, line)) {
    if (line.rfind("# meta: ", 0) == 0) {
      meta = nlohmann::json::parse(line.substr(8), nullptr, false);
      if (meta.is_discarded())
        throw FieldIoError("field file " + path + ": bad meta json");
    } else {
      in.seekg(before_meta);
    }
  }

  const std::int64_t n = shape.cells();
  std::vector<double> xv(static_cast<std::size_t>(n) * p);
  std::vector<double> yv(static_cast<std::size_t>(n));
  for (std::int64_t cell = 0; cell < n; ++cell) {
    if (!std::getline(in, line))
      throw FieldIoError("field file " + path + ": truncated at data line " +
                         std::to_string(cell));
    std::istringstream ls(line);
    std::string token;
    const std::string context = "data line " + std::to_string(cell);
    for (int c = 0; c < p; ++c) {
      if (!(ls >> token))
        throw FieldIoError("field file " + path + ": short " + context);
      xv[static_cast<std::size_t>(cell) * p + c] = parse_double(token, context);
    }
    if (!(ls >> token))
      throw FieldIoError("field file " + path + ": short " + context);
    yv[cell] = parse_double(token, context);
    if (ls >> token)
      throw FieldIoError("field file " + path + ": trailing tokens on " +
                         context);
  }
  return FieldData{MultiField(shape, p, std::move(xv)),
                   ScalarField(shape, std::move(yv)), std::move(meta)};
}

std::string format_p(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", p);
  return buf;
}

nlohmann::json fit_report(const SsirFit& fit,
                          const std::vector<SelectionResult>& selections) {
  const int p = static_cast<int>(fit.u.rows());
  nlohmann::json report;
  report["p"] = p;
  report["H"] = fit.h;

  nlohmann::json lags = nlohmann::json::array();
  for (const Lag& lag : fit.lag_order) lags.push_back(lag_to_json(lag));
  report["lagset"] = std::move(lags);

  report["mean"] = std::vector<double>(fit.mean.data(),
                                       fit.mean.data() + fit.mean.size());

  std::vector<double> cis;
  cis.reserve(static_cast<std::size_t>(p) * p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) cis.push_back(fit.cov_inv_sqrt(i, j));
  report["cov_inv_sqrt"] = std::move(cis);

  auto matrix_rows = [](const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  report["U"] = matrix_rows(fit.u);
  report["gamma"] = matrix_rows(fit.gamma);
  report["lambda"] = matrix_rows(fit.lambda);
  report["row_sums"] = std::vector<double>(
      fit.row_sums.data(), fit.row_sums.data() + fit.row_sums.size());
  report["jad"] = {{"off_sum", fit.jad.off_sum},
                   {"sweeps", fit.jad.sweeps},
                   {"converged", fit.jad.converged}};

  nlohmann::json sel_map = nlohmann::json::object();
  for (const SelectionResult& sel : selections) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& [component, lag] : sel.selected_cells)
      cells.push_back({{"component", component}, {"lag", lag_to_json(lag)}});
    nlohmann::json sel_lags = nlohmann::json::array();
    for (const Lag& lag : sel.selected_lags) sel_lags.push_back(lag_to_json(lag));
    sel_map[format_p(sel.P)] = {{"d_hat", sel.d_hat},
                                {"selected_cells", std::move(cells)},
                                {"selected_lags", std::move(sel_lags)}};
  }
  report["selections"] = std::move(sel_map);
  return report;
}

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::runtime_error("fit report schema: " + what);
}

void require_number_array(const nlohmann::json& j, std::size_t size,
                          const std::string& name) {
  require(j.is_array() && j.size() == size, name + " must have " +
                                                std::to_string(size) +
                                                " numbers");
  for (const auto& v : j) require(v.is_number(), name + " must be numeric");
}

}  // namespace

void validate_fit_report(const nlohmann::json& report) {
  require(report.is_object(), "report must be an object");
  for (const char* key :
       {"p", "H", "lagset", "mean", "cov_inv_sqrt", "U", "gamma", "lambda",
        "row_sums", "jad", "selections"})
    require(report.contains(key), std::string("missing key ") + key);

  require(report["p"].is_number_integer() && report["p"].get<int>() >= 1,
          "p must be a positive integer");
  require(report["H"].is_number_integer() && report["H"].get<int>() >= 2,
          "H must be an integer >= 2");
  const int p = report["p"].get<int>();

  const auto& lagset = report["lagset"];
  require(lagset.is_array() && !lagset.empty(), "lagset must be nonempty");
  for (const auto& lag : lagset)
    require(lag.is_array() && lag.size() == 2 &&
                lag[0].is_number_integer() && lag[1].is_number_integer(),
            "lagset entries must be [k, l] integer pairs");
  const std::size_t k_count = lagset.size();

  require_number_array(report["mean"], p, "mean");
  require_number_array(report["cov_inv_sqrt"],
                       static_cast<std::size_t>(p) * p, "cov_inv_sqrt");
  require_number_array(report["row_sums"], p, "row_sums");

  auto check_matrix = [&](const char* name, std::size_t cols) {
    const auto& m = report[name];
    require(m.is_array() && m.size() == static_cast<std::size_t>(p),
            std::string(name) + " must have p rows");
    for (const auto& row : m)
      require_number_array(row, cols, std::string(name) + " row");
  };
  check_matrix("U", p);
  check_matrix("gamma", p);
  check_matrix("lambda", k_count);

  double lambda_sum = 0.0;
  for (const auto& row : report["lambda"])
    for (const auto& v : row) {
      const double value = v.get<double>();
      require(value >= -1e-15, "lambda entries must be nonnegative");
      lambda_sum += value;
    }
  require(std::abs(lambda_sum - 1.0) <= 1e-10, "lambda must sum to 1");

  const auto& jad = report["jad"];
  require(jad.is_object(), "jad must be an object");
  require(jad.contains("off_sum") && jad["off_sum"].is_number() &&
              jad["off_sum"].get<double>() >= 0.0,
          "jad.off_sum must be a nonnegative number");
  require(jad.contains("sweeps") && jad["sweeps"].is_number_integer() &&
              jad["sweeps"].get<int>() >= 0,
          "jad.sweeps must be a nonnegative integer");
  require(jad.contains("converged") && jad["converged"].is_boolean(),
          "jad.converged must be a boolean");

  const auto& selections = report["selections"];
  require(selections.is_object(), "selections must be an object");
  for (const auto& [key, sel] : selections.items()) {
    require(sel.is_object() && sel.contains("d_hat") &&
                sel.contains("selected_cells") && sel.contains("selected_lags"),
            "selection " + key + " incomplete");
    require(sel["d_hat"].is_number_integer() && sel["d_hat"].get<int>() >= 1,
            "selection " + key + ": d_hat must be >= 1");
    require(sel["selected_cells"].is_array() &&
                !sel["selected_cells"].empty(),
            "selection " + key + ": selected_cells must be nonempty");
    for (const auto& cell : sel["selected_cells"]) {
      require(cell.is_object() && cell.contains("component") &&
                  cell.contains("lag"),
              "selection " + key + ": bad cell");
      const int component = cell["component"].get<int>();
      require(component >= 0 && component < p,
              "selection " + key + ": component out of range");
    }
    require(sel["selected_lags"].is_array() && !sel["selected_lags"].empty(),
            "selection " + key + ": selected_lags must be nonempty");
  }
}

std::string lambda_table(const SsirFit& fit) {
  const int p = static_cast<int>(fit.lambda.rows());
  const int k_count = static_cast<int>(fit.lambda.cols());
  std::ostringstream os;
  char buf[64];

  os << "   k   l |";
  for (int c = 0; c < p; ++c) {
    std::snprintf(buf, sizeof(buf), "   u_%d  ", c + 1);
    os << buf;
  }
  os << "|     sum\n";

  for (int k = 0; k < k_count; ++k) {
    const Lag& lag = fit.lag_order[k];
    std::snprintf(buf, sizeof(buf), "%4d%4d |", lag.k, lag.l);
    os << buf;
    double row_sum = 0.0;
    for (int c = 0; c < p; ++c) {
      row_sum += fit.lambda(c, k);
      std::snprintf(buf, sizeof(buf), " %7.4f", fit.lambda(c, k));
      os << buf;
    }
    std::snprintf(buf, sizeof(buf), " | %7.4f\n", row_sum);
    os << buf;
  }

  os << "     sum |";
  for (int c = 0; c < p; ++c) {
    std::snprintf(buf, sizeof(buf), " %7.4f", fit.row_sums[c]);
    os << buf;
  }
  std::snprintf(buf, sizeof(buf), " | %7.4f\n", fit.lambda.sum());
  os << buf;
  return os.str();
}

nlohmann::json truth_json(const SimSpec& spec, const SimOutput& out) {
  nlohmann::json truth = nlohmann::json::array();
  for (const TruthPair& pair : out.truth) {
    truth.push_back(
        {{"direction", std::vector<double>(pair.direction.data(),
                                           pair.direction.data() +
                                               pair.direction.size())},
         {"lag", lag_to_json(pair.lag)}});
  }
  return {{"model", to_string(spec.model)},
          {"p", out.x.channels()},
          {"d", out.truth.size()},
          {"truth", std::move(truth)},
          {"shape",
           {{"rows", spec.shape.rows},
            {"cols", spec.shape.cols},
            {"spacing", spec.shape.spacing}}},
          {"params",
           {{"c0", spec.params.c0},
            {"c1", spec.params.c1},
            {"h0", spec.params.h0}}},
          {"noise_sd", spec.noise_sd},
          {"margin", spec.margin},
          {"seed", spec.seed},
          {"rng", out.rng}};
}

SubspaceEstimate truth_subspace(const nlohmann::json& truth) {
  if (!truth.contains("truth") || !truth["truth"].is_array() ||
      truth["truth"].empty())
    throw FieldIoError("truth json: missing truth array");
  const auto& pairs = truth["truth"];
  const auto d = static_cast<int>(pairs.size());
  const auto& first_dir = pairs[0]["direction"];
  if (!first_dir.is_array() || first_dir.empty())
    throw FieldIoError("truth json: bad direction");
  const auto p = static_cast<int>(first_dir.size());
  Eigen::MatrixXd b(d, p);
  for (int r = 0; r < d; ++r) {
    const auto& dir = pairs[r]["direction"];
    if (!dir.is_array() || static_cast<int>(dir.size()) != p)
      throw FieldIoError("truth json: inconsistent direction lengths");
    for (int c = 0; c < p; ++c) b(r, c) = dir[c].get<double>();
  }
  return {b};
}

void write_study_csv(std::ostream& os, const StudySummary& summary) {
  os << "model,dependence,lagset,rep,seed,P,d_hat,D2_inverse,D2_invsqrt\n";
  for (const RepRow& row : summary.rows) {
    os << to_string(row.model) << ',' << to_string(row.dep) << ','
       << to_string(row.lagset) << ',' << row.rep << ',' << row.seed << ','
       << row.p << ',' << row.d_hat << ',' << fmt_double(row.d2_inverse) << ','
       << fmt_double(row.d2_invsqrt) << '\n';
  }
}

nlohmann::json study_summary_json(const StudySummary& summary) {
  const StudyConfig& cfg = summary.config;
  nlohmann::json models = nlohmann::json::array();
  for (ResponseModel m : cfg.models) models.push_back(to_string(m));
  nlohmann::json deps = nlohmann::json::array();
  for (Dependence d : cfg.dependence) deps.push_back(to_string(d));
  nlohmann::json lagsets = nlohmann::json::array();
  for (LagPreset l : cfg.lagsets) lagsets.push_back(to_string(l));

  nlohmann::json failures = nlohmann::json::array();
  for (const RepFailure& f : summary.failures)
    failures.push_back({{"model", to_string(f.model)},
                        {"dependence", to_string(f.dep)},
                        {"lagset", to_string(f.lagset)},
                        {"rep", f.rep},
                        {"error", f.message}});

  auto dist_json = [](const DistSummary& d) {
    return nlohmann::json{{"min", d.min},
                          {"q1", d.q1},
                          {"median", d.median},
                          {"q3", d.q3},
                          {"max", d.max}};
  };
  nlohmann::json cells = nlohmann::json::array();
  for (const CellSummary& cs : summary.cells) {
    nlohmann::json freq = nlohmann::json::object();
    for (const auto& [d_hat, count] : cs.d_hat_freq)
      freq[std::to_string(d_hat)] = count;
    cells.push_back({{"model", to_string(cs.model)},
                     {"dependence", to_string(cs.dep)},
                     {"lagset", to_string(cs.lagset)},
                     {"p", cs.p},
                     {"n", cs.n},
                     {"d2_inverse", dist_json(cs.d2_inverse)},
                     {"d2_invsqrt", dist_json(cs.d2_invsqrt)},
                     {"d_hat_freq", std::move(freq)}});
  }

  return {{"models", std::move(models)},
          {"dependence", std::move(deps)},
          {"lagsets", std::move(lagsets)},
          {"reps", cfg.reps},
          {"base_seed", cfg.base_seed},
          {"p_values", cfg.p_values},
          {"slices", cfg.slices},
          {"shape",
           {{"rows", cfg.shape.rows},
            {"cols", cfg.shape.cols},
            {"spacing", cfg.shape.spacing}}},
          {"failures", std::move(failures)},
          {"cells", std::move(cells)}};
}

}  // namespace ssir::io
