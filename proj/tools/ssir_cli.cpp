// Command-line frontend: simulate / fit / eval / replicate.
//
// Exit codes: 0 ok, 1 usage or validation error, 2 unreadable input,
// 3 degenerate response, 4 covariance not positive definite, 5 rank or
// dimension mismatch, 6 replicate study aborted (too many failed reps).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssir/errors.hpp"
#include "ssir/eval.hpp"
#include "ssir/field_sim.hpp"
#include "ssir/fit.hpp"
#include "ssir/io.hpp"
#include "ssir/study.hpp"

namespace {

using nlohmann::json;

struct SimulateArgs {
  std::string model = "A";
  int rows = 100, cols = 100;
  double spacing = 0.25;
  double h0 = 0.25, c0 = 1.0, c1 = 1.0, noise_sd = 1.0;
  std::uint64_t seed = 1;
  int margin = 2;
  std::string out;
};

struct FitArgs {
  std::string input;
  std::string lags = "first";
  int slices = 10;
  std::vector<double> p_values{0.5, 0.8};
  std::string out;
};

struct EvalArgs {
  std::string fit_path;
  std::string truth_path;
  std::string d_spec;
  std::string weight = "inverse";
};

struct ReplicateArgs {
  std::vector<std::string> models{"A"};
  std::vector<std::string> dependence{"weak"};
  std::vector<std::string> lagsets{"first"};
  int reps = 50;
  std::uint64_t seed = 0;
  std::vector<double> p_values{0.5, 0.8};
  int slices = 10;
  int rows = 100, cols = 100;
  double spacing = 0.25;
  int workers = 0;
  std::string out_dir = ".";
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ssir::FieldIoError("cannot open: " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ssir::FieldIoError("bad json in: " + path);
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ssir::FieldIoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw ssir::FieldIoError("write failed: " + path);
}

int run_simulate(const SimulateArgs& args) {
  if (!(args.h0 > 0.0)) throw std::invalid_argument("h0 must be positive");
  if (args.out.empty()) throw std::invalid_argument("--out is required");
  ssir::SimSpec spec;
  spec.model = ssir::parse_model(args.model);
  spec.shape = {args.rows, args.cols, args.spacing};
  spec.params = {args.c0, args.c1, args.h0};
  spec.noise_sd = args.noise_sd;
  spec.seed = args.seed;
  spec.margin = args.margin;
  spec.validate();

  ssir::SimOutput out = ssir::simulate_model(spec);
  json meta = {{"model", ssir::to_string(spec.model)},
               {"seed", spec.seed},
               {"h0", spec.params.h0},
               {"c0", spec.params.c0},
               {"c1", spec.params.c1},
               {"noise_sd", spec.noise_sd},
               {"margin", spec.margin},
               {"rng", out.rng}};
  ssir::io::write_field_file(args.out, out.x, out.y, &meta);
  write_text_file(args.out + ".truth.json",
                  ssir::io::truth_json(spec, out).dump(2) + "\n");
  std::cout << "wrote " << args.out << " and " << args.out << ".truth.json\n";
  return 0;
}

int run_fit(const FitArgs& args) {
  if (args.input.empty()) throw std::invalid_argument("--input is required");
  if (args.out.empty()) throw std::invalid_argument("--out is required");
  ssir::io::FieldData data = ssir::io::read_field_file(args.input);
  ssir::LagSet lags = ssir::LagSet::parse(args.lags);

  ssir::SsirFit fit = ssir::ssir_fit(data.x, data.y, lags, args.slices);
  std::vector<ssir::SelectionResult> selections;
  for (double p : args.p_values) selections.push_back(ssir::select(fit, p));

  json report = ssir::io::fit_report(fit, selections);
  ssir::io::validate_fit_report(report);
  write_text_file(args.out, report.dump(2) + "\n");
  std::cout << ssir::io::lambda_table(fit);
  return 0;
}

int run_eval(const EvalArgs& args) {
  if (args.fit_path.empty() || args.truth_path.empty() || args.d_spec.empty())
    throw std::invalid_argument("--fit, --truth and --d are required");

  ssir::WeightKind weight;
  if (args.weight == "inverse") {
    weight = ssir::WeightKind::inverse;
  } else if (args.weight == "invsqrt") {
    weight = ssir::WeightKind::inverse_sqrt;
  } else {
    throw std::invalid_argument("--weight must be inverse or invsqrt");
  }

  const json fit = read_json_file(args.fit_path);
  ssir::io::validate_fit_report(fit);
  const json truth = read_json_file(args.truth_path);
  const ssir::SubspaceEstimate truth_span = ssir::io::truth_subspace(truth);

  const int p = fit["p"].get<int>();
  const auto& gamma = fit["gamma"];

  std::vector<int> rows;
  if (args.d_spec.rfind("est:", 0) == 0) {
    const double p_value = std::stod(args.d_spec.substr(4));
    if (!(p_value > 0.0 && p_value < 1.0))
      throw std::invalid_argument("est:P needs P in (0, 1)");
    // Recompute the selection from the reported lambda matrix; the fit does
    // not need to have been run with this P.
    struct Cell {
      double value;
      int component;
      int lag_index;
    };
    std::vector<Cell> cells;
    const auto& lambda = fit["lambda"];
    for (int c = 0; c < p; ++c)
      for (std::size_t k = 0; k < lambda[c].size(); ++k)
        cells.push_back({lambda[c][k].get<double>(), c, static_cast<int>(k)});
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
      if (a.value != b.value) return a.value > b.value;
      if (a.component != b.component) return a.component < b.component;
      return a.lag_index < b.lag_index;
    });
    double cumulative = 0.0;
    for (const Cell& cell : cells) {
      if (std::find(rows.begin(), rows.end(), cell.component) == rows.end())
        rows.push_back(cell.component);
      cumulative += cell.value;
      if (cumulative > p_value) break;
    }
    std::sort(rows.begin(), rows.end());
  } else {
    int d = 0;
    try {
      std::size_t used = 0;
      d = std::stoi(args.d_spec, &used);
      if (used != args.d_spec.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("--d must be an integer or est:P");
    }
    if (d < 1 || d > p)
      throw ssir::DimensionError("--d out of range for the fitted p");
    for (int r = 0; r < d; ++r) rows.push_back(r);
  }

  Eigen::MatrixXd b(static_cast<int>(rows.size()), p);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int j = 0; j < p; ++j) b(static_cast<int>(r), j) =
        gamma[rows[r]][j].get<double>();

  const double dist =
      ssir::weighted_distance({b}, truth_span, weight);
  std::printf("%.10g\n", dist);
  return 0;
}

int run_replicate(const ReplicateArgs& args) {
  ssir::StudyConfig cfg;
  cfg.models.clear();
  for (const std::string& m : args.models)
    cfg.models.push_back(ssir::parse_model(m));
  cfg.dependence.clear();
  for (const std::string& d : args.dependence)
    cfg.dependence.push_back(ssir::parse_dependence(d));
  cfg.lagsets.clear();
  for (const std::string& l : args.lagsets)
    cfg.lagsets.push_back(ssir::parse_lag_preset(l));
  cfg.reps = args.reps;
  cfg.base_seed = args.seed;
  cfg.p_values = args.p_values;
  cfg.slices = args.slices;
  cfg.shape = {args.rows, args.cols, args.spacing};
  cfg.workers = args.workers;
  if (const char* env = std::getenv("SSIR_WORKERS")) {
    cfg.workers = std::atoi(env);  // environment wins over the flag
    if (cfg.workers < 0) throw std::invalid_argument("SSIR_WORKERS must be >= 0");
  }
  cfg.validate();

  ssir::StudySummary summary = ssir::run_study(cfg);

  std::filesystem::create_directories(args.out_dir);
  const std::string csv_path = args.out_dir + "/replicates.csv";
  const std::string json_path = args.out_dir + "/summary.json";
  {
    std::ofstream csv(csv_path);
    if (!csv) throw ssir::FieldIoError("cannot open for writing: " + csv_path);
    ssir::io::write_study_csv(csv, summary);
  }
  write_text_file(json_path,
                  ssir::io::study_summary_json(summary).dump(2) + "\n");

  std::cout << "wrote " << csv_path << " and " << json_path << " ("
            << summary.rows.size() << " rows, " << summary.failures.size()
            << " failures)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial sliced inverse regression on regular grids"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Simulate a latent Gaussian field model to a field file");
  simulate->add_option("--model", sim.model, "Response model: A, B or C");
  simulate->add_option("--rows", sim.rows, "Grid rows");
  simulate->add_option("--cols", sim.cols, "Grid columns");
  simulate->add_option("--spacing", sim.spacing, "Physical cell spacing");
  simulate->add_option("--h0", sim.h0, "Covariance range parameter");
  simulate->add_option("--c0", sim.c0, "Partial sill");
  simulate->add_option("--c1", sim.c1, "Nugget");
  simulate->add_option("--noise-sd", sim.noise_sd, "Response noise sd");
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_option("--margin", sim.margin, "Latent grid extension");
  simulate->add_option("--out", sim.out, "Output field file")->required();

  FitArgs fit;
  CLI::App* fit_cmd =
      app.add_subcommand("fit", "Fit the estimator on a field file");
  fit_cmd->add_option("--input", fit.input, "Input field file")->required();
  fit_cmd->add_option("--lags", fit.lags,
                      "first|first2|se|onsite|file:PATH");
  fit_cmd->add_option("--slices", fit.slices, "Number of slices H");
  fit_cmd->add_option("--P", fit.p_values, "Selection proportions")
      ->delimiter(',');
  fit_cmd->add_option("--out", fit.out, "Output report json")->required();

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "Projector distance between a fit and the truth");
  eval_cmd->add_option("--fit", eval.fit_path, "Fit report json")->required();
  eval_cmd->add_option("--truth", eval.truth_path, "Truth json")->required();
  eval_cmd->add_option("--d", eval.d_spec, "Known d (integer) or est:P")
      ->required();
  eval_cmd->add_option("--weight", eval.weight, "inverse|invsqrt");

  ReplicateArgs rep;
  CLI::App* rep_cmd =
      app.add_subcommand("replicate", "Monte-Carlo study driver");
  rep_cmd->add_option("--models", rep.models, "Subset of A,B,C")
      ->delimiter(',');
  rep_cmd->add_option("--dependence", rep.dependence, "Subset of weak,strong")
      ->delimiter(',');
  rep_cmd->add_option("--lags", rep.lagsets, "Subset of first,first2")
      ->delimiter(',');
  rep_cmd->add_option("--reps", rep.reps, "Repetitions per cell");
  rep_cmd->add_option("--seed", rep.seed, "Base seed; rep r uses seed+r");
  rep_cmd->add_option("--P", rep.p_values, "Selection proportions")
      ->delimiter(',');
  rep_cmd->add_option("--slices", rep.slices, "Number of slices H");
  rep_cmd->add_option("--rows", rep.rows, "Grid rows");
  rep_cmd->add_option("--cols", rep.cols, "Grid columns");
  rep_cmd->add_option("--spacing", rep.spacing, "Physical cell spacing");
  rep_cmd->add_option("--workers", rep.workers,
                      "Parallel reps (0: default; SSIR_WORKERS overrides)");
  rep_cmd->add_option("--out-dir", rep.out_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (fit_cmd->parsed()) return run_fit(fit);
    if (eval_cmd->parsed()) return run_eval(eval);
    if (rep_cmd->parsed()) return run_replicate(rep);
  } catch (const ssir::FieldIoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ssir::DegenerateResponseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ssir::NotPositiveDefiniteError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const ssir::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const ssir::StudyAbortError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 6;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
