// Command-line front end: fit, path, simulate, bench. CSV in, JSON out.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "combss/bench.hpp"
#include "combss/csv.hpp"
#include "combss/parallel.hpp"
#include "combss/path.hpp"
#include "combss/simulate.hpp"

using json = nlohmann::ordered_json;
using namespace combss;

namespace {

struct CommonOptions {
  std::string delta = "auto";
  double tau = 0.5;
  double eta = 0.001;
  std::string optimizer = "adam";
  double adam_alpha = 0.1;
  double gd_alpha = 0.1;
  double term_epsilon = 0.001;
  int term_window = 10;
  int max_iters = 1000;
  double cg_tol = 1e-5;
  int cg_max_iters = 0;
  std::string route = "auto";
  bool no_warm_start = false;
  bool center = false;
  bool standardize = false;
  int threads = 0;
};

void add_common_options(CLI::App* cmd, CommonOptions* opt) {
  cmd->add_option("--delta", opt->delta, "shrinkage weight, or 'auto' for n");
  cmd->add_option("--tau", opt->tau, "selection threshold in (0,1)");
  cmd->add_option("--eta", opt->eta, "truncation level in [0,1)");
  cmd->add_option("--optimizer", opt->optimizer, "adam or gd")
      ->check(CLI::IsMember({"adam", "gd"}));
  cmd->add_option("--adam-alpha", opt->adam_alpha, "adam learning rate");
  cmd->add_option("--gd-alpha", opt->gd_alpha, "plain descent learning rate");
  cmd->add_option("--term-epsilon", opt->term_epsilon,
                  "termination tolerance on max-norm t change");
  cmd->add_option("--term-window", opt->term_window,
                  "consecutive small-change iterations required");
  cmd->add_option("--max-iters", opt->max_iters, "iteration cap");
  cmd->add_option("--cg-tol", opt->cg_tol, "linear-solver relative residual");
  cmd->add_option("--cg-max-iters", opt->cg_max_iters,
                  "linear-solver iteration cap (0 = system dimension)");
  cmd->add_option("--route", opt->route, "auto, direct, or woodbury")
      ->check(CLI::IsMember({"auto", "direct", "woodbury"}));
  cmd->add_flag("--no-warm-start", opt->no_warm_start,
                "restart the linear solver from zero each iteration");
  cmd->add_flag("--center", opt->center,
                "subtract column means from x and the mean from y");
  cmd->add_flag("--standardize", opt->standardize,
                "scale x columns to unit sample standard deviation");
  cmd->add_option("--threads", opt->threads,
                  "worker pool size (0 = COMBSS_THREADS or hardware)");
}

CombssConfig build_config(const CommonOptions& opt, const Dataset& data) {
  CombssConfig cfg = default_config(data);
  if (opt.delta != "auto") {
    try {
      std::size_t used = 0;
      cfg.delta = std::stod(opt.delta, &used);
      if (used != opt.delta.size()) throw std::invalid_argument(opt.delta);
    } catch (const std::exception&) {
      throw InvalidInput(ErrorCode::InvalidConfig,
                         "--delta must be a number or 'auto'");
    }
  }
  cfg.tau = opt.tau;
  cfg.eta = opt.eta;
  cfg.optimizer =
      opt.optimizer == "gd" ? Optimizer::BasicGd : Optimizer::Adam;
  cfg.adam_alpha = opt.adam_alpha;
  cfg.gd_alpha = opt.gd_alpha;
  cfg.term_epsilon = opt.term_epsilon;
  cfg.term_window = opt.term_window;
  cfg.max_iters = opt.max_iters;
  cfg.cg_tol = opt.cg_tol;
  cfg.cg_max_iters = opt.cg_max_iters;
  cfg.route = opt.route == "direct"     ? SolveRoute::Direct
              : opt.route == "woodbury" ? SolveRoute::Woodbury
                                        : SolveRoute::Auto;
  cfg.warm_start = !opt.no_warm_start;
  cfg.check();
  return cfg;
}

struct Preprocessed {
  Dataset data;
  Vector x_offset;  // per-column shift removed from x (zeros when inactive)
  Vector scale;     // per-column divisor applied to x (ones when inactive)
  double y_offset = 0.0;
};

// Transforms derived from the training data; the same shifts and scales are
// reapplied to any validation data.
Preprocessed preprocess(Matrix x, Vector y, const CommonOptions& opt) {
  Vector offset = Vector::Zero(x.cols());
  Vector scale = Vector::Ones(x.cols());
  double y_offset = 0.0;
  if (opt.center) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      offset(j) = x.col(j).mean();
      x.col(j).array() -= offset(j);
    }
    y_offset = y.mean();
    y.array() -= y_offset;
  }
  if (opt.standardize) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double mean = x.col(j).mean();
      const double sd = std::sqrt((x.col(j).array() - mean).square().sum() /
                                  std::max<double>(1.0, x.rows() - 1));
      if (sd > 0) {
        scale(j) = sd;
        x.col(j) /= sd;
      }
    }
  }
  return {validate_dataset(std::move(x), std::move(y)), std::move(offset),
          std::move(scale), y_offset};
}

Dataset apply_transform(Matrix x, Vector y, const Preprocessed& ref) {
  if (x.cols() != ref.x_offset.size()) {
    throw InvalidInput(ErrorCode::DimensionMismatch,
                       "validation set has a different number of columns");
  }
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    x.col(j).array() -= ref.x_offset(j);
    x.col(j) /= ref.scale(j);
  }
  y.array() -= ref.y_offset;
  return validate_dataset(std::move(x), std::move(y));
}

json subset_to_json(const Subset& s) {
  json arr = json::array();
  for (int j : s) arr.push_back(j);
  return arr;
}

json coeffs_to_json(const Vector& coeffs, const Subset& subset,
                    const Vector& scale) {
  json arr = json::array();
  for (std::size_t k = 0; k < subset.size(); ++k) {
    arr.push_back(coeffs(static_cast<Eigen::Index>(k)) / scale(subset[k]));
  }
  return arr;
}

json record_to_json(const PathRecord& rec, const Vector& scale) {
  json flags = json::array();
  if (rec.singular_refit) flags.push_back("singular_refit");
  if (rec.failed) flags.push_back("failed");
  json j;
  j["lambda"] = rec.lambda;
  j["selected"] = subset_to_json(rec.subset);
  j["coeffs"] = coeffs_to_json(rec.coeffs, rec.subset, scale);
  if (std::isnan(rec.val_mse)) {
    j["val_mse"] = nullptr;
  } else {
    j["val_mse"] = rec.val_mse;
  }
  j["train_mse"] = rec.train_mse;
  j["iters"] = rec.iters;
  j["runtime_ms"] = rec.runtime_ms;
  j["terminated_by"] = to_string(rec.terminated_by);
  j["flags"] = flags;
  if (rec.failed) j["error"] = rec.error;
  return j;
}

json config_to_json(const CombssConfig& cfg) {
  json j;
  j["delta"] = cfg.delta;
  j["tau"] = cfg.tau;
  j["eta"] = cfg.eta;
  j["optimizer"] = cfg.optimizer == Optimizer::Adam ? "adam" : "gd";
  j["adam_alpha"] = cfg.adam_alpha;
  j["adam_xi1"] = cfg.adam_xi1;
  j["adam_xi2"] = cfg.adam_xi2;
  j["adam_c"] = cfg.adam_c;
  j["gd_alpha"] = cfg.gd_alpha;
  j["term_epsilon"] = cfg.term_epsilon;
  j["term_window"] = cfg.term_window;
  j["max_iters"] = cfg.max_iters;
  j["cg_tol"] = cfg.cg_tol;
  j["cg_max_iters"] = cfg.cg_max_iters;
  j["route"] = cfg.route == SolveRoute::Direct     ? "direct"
               : cfg.route == SolveRoute::Woodbury ? "woodbury"
                                                   : "auto";
  j["warm_start"] = cfg.warm_start;
  return j;
}

struct FitArgs {
  std::string x_file, y_file;
  double lambda = 0.0;
  std::string trace_file;
  CommonOptions common;
};

int cmd_fit(const FitArgs& args) {
  Preprocessed pre = preprocess(read_csv_matrix(args.x_file),
                                read_csv_vector(args.y_file), args.common);
  CombssConfig cfg = build_config(args.common, pre.data);
  if (args.lambda < 0) {
    throw InvalidInput(ErrorCode::InvalidConfig, "--lambda must be >= 0");
  }
  cfg.lambda = args.lambda;

  const auto start = std::chrono::steady_clock::now();
  FitOutput fit = run_fit(pre.data, cfg.lambda, cfg);

  PathRecord rec;
  rec.lambda = cfg.lambda;
  rec.t_final = fit.state.t;
  rec.iters = fit.state.iter;
  rec.terminated_by = fit.state.terminated_by;
  rec.subset = threshold(fit.state.t, cfg.tau);
  RefitResult refit = refit_ols(pre.data, rec.subset);
  rec.coeffs = refit.coeffs;
  rec.train_mse = refit.train_mse;
  rec.singular_refit = refit.singular;
  rec.runtime_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();

  if (!args.trace_file.empty()) {
    std::ofstream trace(args.trace_file);
    if (!trace) {
      throw InvalidInput(ErrorCode::Io,
                         "cannot write '" + args.trace_file + "'");
    }
    for (const IterationRecord& it : fit.state.trace) {
      json line;
      line["iter"] = it.iter;
      line["dt_inf"] = it.dt_inf;
      line["p_plus"] = it.p_plus;
      line["cg_iters"] = it.cg_iters_beta + it.cg_iters_c;
      line["f"] = it.objective;
      trace << line.dump() << "\n";
    }
  }

  json out = record_to_json(rec, pre.scale);
  out["p_plus_final"] = fit.state.p_plus();
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct PathArgs {
  std::string x_file, y_file, val_x_file, val_y_file, out_file;
  int grid_count = 50;
  double grid_factor = 0.8;
  bool warm_path = false;
  CommonOptions common;
};

int cmd_path(const PathArgs& args) {
  if (args.val_x_file.empty() != args.val_y_file.empty()) {
    throw InvalidInput(ErrorCode::InvalidConfig,
                       "--val-x and --val-y must be given together");
  }
  Preprocessed pre = preprocess(read_csv_matrix(args.x_file),
                                read_csv_vector(args.y_file), args.common);
  CombssConfig cfg = build_config(args.common, pre.data);

  std::optional<Dataset> validation;
  if (!args.val_x_file.empty()) {
    validation.emplace(apply_transform(read_csv_matrix(args.val_x_file),
                                       read_csv_vector(args.val_y_file), pre));
  }

  const Vector grid =
      lambda_grid(pre.data.y(), pre.data.n(), args.grid_count,
                  args.grid_factor);
  SolutionPath path = run_path(pre.data, validation ? &*validation : nullptr,
                               cfg, grid, args.common.threads,
                               args.warm_path);

  json doc;
  doc["schema"] = "combss-path-v1";
  doc["config"] = config_to_json(cfg);
  doc["grid_count"] = args.grid_count;
  doc["grid_factor"] = args.grid_factor;
  json records = json::array();
  for (const PathRecord& rec : path.records) {
    records.push_back(record_to_json(rec, pre.scale));
  }
  doc["records"] = records;
  if (path.best_index >= 0) {
    doc["best_index"] = path.best_index;
  } else {
    doc["best_index"] = nullptr;
  }

  if (args.out_file.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream out(args.out_file);
    if (!out) {
      throw InvalidInput(ErrorCode::Io,
                         "cannot write '" + args.out_file + "'");
    }
    out << doc.dump(2) << "\n";
    if (path.best_index >= 0) {
      std::cout << record_to_json(
                       path.records[static_cast<std::size_t>(path.best_index)],
                       pre.scale)
                       .dump()
                << "\n";
    } else {
      std::cout << R"({"records": )" << path.records.size() << "}\n";
    }
  }
  return 0;
}

struct SimArgs {
  int n = 0, p = 0;
  double rho = 0.0, snr = 0.0;
  int beta_type = 1;
  int k0 = 10;
  uint64_t seed = 0;
  uint64_t stream = 0;
  std::string out_dir;
};

int cmd_simulate(const SimArgs& args) {
  SimSpec spec{args.n,
               args.p,
               args.rho,
               args.snr,
               args.beta_type == 2 ? BetaType::Type2 : BetaType::Type1,
               args.k0,
               args.seed};
  spec.check();
  std::filesystem::create_directories(args.out_dir);
  SimData data = gen_dataset(spec, args.stream);

  const std::string x_path = args.out_dir + "/x.csv";
  const std::string y_path = args.out_dir + "/y.csv";
  write_csv_matrix(x_path, data.x);
  write_csv_vector(y_path, data.y);

  json manifest;
  manifest["schema"] = "combss-sim-v1";
  manifest["n"] = spec.n;
  manifest["p"] = spec.p;
  manifest["rho"] = spec.rho;
  manifest["snr"] = spec.snr;
  manifest["beta_type"] = args.beta_type;
  manifest["k0"] = spec.k0;
  manifest["seed"] = spec.seed;
  manifest["stream"] = args.stream;
  manifest["sigma2"] = data.sigma2;
  json support = json::array();
  for (Eigen::Index j = 0; j < data.beta.size(); ++j) {
    if (data.beta(j) != 0.0) support.push_back(static_cast<int>(j));
  }
  manifest["true_support"] = support;
  manifest["files"] = {{"x", "x.csv"}, {"y", "y.csv"}};
  std::ofstream mf(args.out_dir + "/manifest.json");
  if (!mf) {
    throw InvalidInput(ErrorCode::Io, "cannot write manifest");
  }
  mf << manifest.dump(2) << "\n";
  std::cout << manifest.dump(2) << "\n";
  return 0;
}

struct BenchArgs {
  std::string scenario_file;
  std::string out_dir;
  int threads = 0;
};

BenchScenario parse_scenario(const std::string& file) {
  std::ifstream in(file);
  if (!in) {
    throw InvalidInput(ErrorCode::Io, "cannot open '" + file + "'");
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InvalidInput(ErrorCode::Io,
                       "bad scenario JSON: " + std::string(e.what()));
  }
  BenchScenario sc;
  try {
    sc.n = doc.at("n").get<int>();
    sc.p = doc.at("p").get<int>();
    sc.k0 = doc.value("k0", 10);
    sc.rho = doc.at("rho").get<double>();
    for (const auto& v : doc.at("snr")) sc.snrs.push_back(v.get<double>());
    for (const auto& v : doc.at("beta_types")) {
      const int bt = v.get<int>();
      if (bt != 1 && bt != 2) {
        throw InvalidInput(ErrorCode::InvalidConfig,
                           "beta_types entries must be 1 or 2");
      }
      sc.beta_types.push_back(bt == 2 ? BetaType::Type2 : BetaType::Type1);
    }
    sc.replications = doc.at("replications").get<int>();
    for (const auto& v : doc.at("methods")) {
      sc.methods.push_back(v.get<std::string>());
    }
    sc.seed = doc.value("seed", 0ULL);
    sc.validation_n = doc.value("validation_n", 5000);
    sc.grid_count = doc.value("grid_count", 50);
    sc.grid_factor = doc.value("grid_factor", 0.8);
    sc.fs_k_max = doc.value("fs_k_max", 0);
  } catch (const json::exception& e) {
    throw InvalidInput(ErrorCode::Io,
                       "bad scenario JSON: " + std::string(e.what()));
  }
  return sc;
}

int cmd_bench(const BenchArgs& args) {
  BenchScenario scenario = parse_scenario(args.scenario_file);
  scenario.check();
  std::filesystem::create_directories(args.out_dir);
  BenchResult result = run_bench(scenario, args.threads);

  {
    std::ofstream rows(args.out_dir + "/results.csv");
    if (!rows) {
      throw InvalidInput(ErrorCode::Io, "cannot write results.csv");
    }
    rows << "beta_type,snr,replication,method,metric,value\n";
    for (const BenchRow& r : result.rows) {
      rows << r.beta_type << ',' << format_double(r.snr) << ','
           << r.replication << ',' << r.method << ',' << r.metric << ','
           << format_double(r.value) << '\n';
    }
  }
  {
    std::ofstream summary(args.out_dir + "/summary.csv");
    if (!summary) {
      throw InvalidInput(ErrorCode::Io, "cannot write summary.csv");
    }
    summary << "beta_type,snr,method,metric,mean,stderr\n";
    for (const BenchSummaryRow& r : result.summary) {
      summary << r.beta_type << ',' << format_double(r.snr) << ',' << r.method
              << ',' << r.metric << ',' << format_double(r.mean) << ','
              << format_double(r.stderr_) << '\n';
    }
  }
  std::cout << "wrote " << result.rows.size() << " rows to " << args.out_dir
            << "/results.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"COMBSS: continuous best subset selection for linear regression"};
  app.require_subcommand(1);

  FitArgs fit_args;
  CLI::App* fit = app.add_subcommand("fit", "one fit at a fixed lambda");
  fit->add_option("--x", fit_args.x_file, "design matrix CSV (n rows, p columns)")
      ->required();
  fit->add_option("--y", fit_args.y_file, "response CSV (single column)")
      ->required();
  fit->add_option("--lambda", fit_args.lambda, "sparsity penalty weight")
      ->required();
  fit->add_option("--trace", fit_args.trace_file,
                  "write per-iteration records (JSON lines)");
  add_common_options(fit, &fit_args.common);

  PathArgs path_args;
  CLI::App* path = app.add_subcommand("path", "fit a descending lambda grid");
  path->add_option("--x", path_args.x_file, "design matrix CSV")->required();
  path->add_option("--y", path_args.y_file, "response CSV")->required();
  path->add_option("--val-x", path_args.val_x_file, "validation design CSV");
  path->add_option("--val-y", path_args.val_y_file, "validation response CSV");
  path->add_option("--grid-count", path_args.grid_count, "grid size");
  path->add_option("--grid-factor", path_args.grid_factor,
                   "geometric decay in (0,1)");
  path->add_option("--out", path_args.out_file, "path document destination");
  path->add_flag("--warm-path", path_args.warm_path,
                 "chain fits across the grid from the previous solution");
  add_common_options(path, &path_args.common);

  SimArgs sim_args;
  CLI::App* sim = app.add_subcommand("simulate", "write a synthetic dataset");
  sim->add_option("--n", sim_args.n, "rows")->required();
  sim->add_option("--p", sim_args.p, "columns")->required();
  sim->add_option("--rho", sim_args.rho, "serial correlation in (-1,1)")
      ->required();
  sim->add_option("--snr", sim_args.snr, "signal-to-noise ratio")->required();
  sim->add_option("--beta-type", sim_args.beta_type, "1 or 2")
      ->required()
      ->check(CLI::IsMember({1, 2}));
  sim->add_option("--k0", sim_args.k0, "number of unit coefficients");
  sim->add_option("--seed", sim_args.seed, "base seed")->required();
  sim->add_option("--stream", sim_args.stream, "substream index");
  sim->add_option("--out-dir", sim_args.out_dir, "output directory")
      ->required();

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "replication study from a scenario file");
  bench->add_option("--scenario", bench_args.scenario_file, "scenario JSON")
      ->required();
  bench->add_option("--out-dir", bench_args.out_dir, "output directory")
      ->required();
  bench->add_option("--threads", bench_args.threads,
                    "worker pool size (0 = COMBSS_THREADS or hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (fit->parsed()) return cmd_fit(fit_args);
    if (path->parsed()) return cmd_path(path_args);
    if (sim->parsed()) return cmd_simulate(sim_args);
    if (bench->parsed()) return cmd_bench(bench_args);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
