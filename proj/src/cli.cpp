// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairred/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "fairred/csv.hpp"
#include "fairred/error.hpp"
#include "fairred/expgrad.hpp"
#include "fairred/model_io.hpp"

namespace fairred {

namespace fs = std::filesystem;

namespace {

struct Prepared {
  TrainingSet raw;
  SplitIndices split;
  Standardizer standardizer;
  TrainingSet train;
  TrainingSet test;
  ConstraintSystem cs_train;  // without slack
  ConstraintSystem cs_test;
};

DatasetSchema SchemaOf(const CliOptions& opts) {
  DatasetSchema schema;
  schema.label_column = opts.label;
  schema.protected_column = opts.protected_column;
  schema.categorical_columns = opts.categorical;
  schema.drop_columns = opts.drop;
  return schema;
}

Prepared Prepare(const CliOptions& opts) {
  if (!(opts.test_frac > 0.0 && opts.test_frac < 1.0)) {
    throw Error(ErrorKind::kArgument, "--test-frac must lie in (0, 1)");
  }
  Prepared p;
  p.raw = LoadCsv(opts.data, SchemaOf(opts));
  p.split = SplitRows(p.raw, 1.0 - opts.test_frac, opts.seed);
  const TrainingSet train_raw = Subset(p.raw, p.split.train);
  p.standardizer = opts.standardize ? Standardizer::Fit(train_raw)
                                    : Standardizer::Identity(train_raw.dim());
  p.train = p.standardizer.Apply(train_raw);
  p.test = p.standardizer.Apply(Subset(p.raw, p.split.test));

  if (opts.constraint == "dp") {
    p.cs_train = BuildDemographicParity(p.train);
    p.cs_test = BuildDemographicParity(p.test);
  } else if (opts.constraint == "eo") {
    p.cs_train = BuildEqualizedOdds(p.train);
    p.cs_test = BuildEqualizedOdds(p.test);
  } else if (opts.constraint.rfind("file:", 0) == 0) {
    const ConstraintSystem full = LoadConstraintFile(opts.constraint.substr(5));
    if (full.num_rows() != p.raw.size()) {
      throw Error(ErrorKind::kSchema, "constraint file has " + std::to_string(full.num_rows()) +
                                          " rows, data has " + std::to_string(p.raw.size()));
    }
    p.cs_train = RestrictRows(full, p.split.train);
    p.cs_test = RestrictRows(full, p.split.test);
  } else {
    throw Error(ErrorKind::kUsage, "--constraint must be dp, eo or file:PATH, got '" +
                                       opts.constraint + "'");
  }
  return p;
}

double Violation(const ConstraintSystem& cs, const Eigen::VectorXd& predictions,
                 const TrainingSet& ts) {
  if (cs.kind != ConstraintSystem::Kind::kGeneric) {
    return ParityViolation(cs.kind, predictions, ts);
  }
  const GammaVector gamma = Gamma(cs, MomentOf(cs, predictions));
  if (gamma.values.size() == 0) return 0.0;
  return std::max(0.0, (gamma.values - cs.c).maxCoeff());
}

// Slack per constraint: the uniform value, the file's own slack, or the
// default rule.
ConstraintSystem ApplyEps(const ConstraintSystem& cs, const CliOptions& opts,
                          std::optional<double> eps) {
  if (eps) {
    if (!(*eps >= 0.0) || !std::isfinite(*eps)) {
      throw Error(ErrorKind::kArgument, "--eps values must be finite and nonnegative");
    }
    return cs.WithUniformEpsilon(*eps);
  }
  if (cs.kind == ConstraintSystem::Kind::kGeneric && cs.eps.size() > 0 &&
      cs.eps.cwiseAbs().maxCoeff() > 0.0) {
    return cs;
  }
  return cs.WithEpsilon(DefaultEpsilon(cs, opts.c_prime, opts.alpha));
}

SolverConfig Resolve(const CliOptions& opts, const TrainingSet& train,
                     const ConstraintSystem& cs) {
  SolverConfig config = DefaultConfig(train, cs);
  if (opts.bound) config.bound = *opts.bound;
  if (opts.nu) config.nu = *opts.nu;
  const double rho = RhoBound(cs);
  config.eta = opts.eta ? *opts.eta : config.nu / (2.0 * rho * rho * config.bound);
  if (opts.max_iter) {
    config.max_iter = *opts.max_iter;
  } else {
    const std::int64_t cap = IterationCap(rho, config.bound, cs.num_constraints(), config.nu);
    config.max_iter = static_cast<int>(std::min<std::int64_t>(cap, 5000));
  }
  config.seed = opts.seed;
  config.learner.kind = ParseLearnerKind(opts.learner);
  config.learner.seed = opts.seed;
  Validate(config);
  return config;
}

std::string JoinNames(const std::vector<std::string>& items) {
  std::string s;
  for (const auto& item : items) s += (s.empty() ? "" : ",") + item;
  return s;
}

std::string Quote(const std::string& s) {
  if (!s.empty() && s.find_first_of(" \t\"'") == std::string::npos) return s;
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

std::string Echo(const std::string& command, const CliOptions& opts, const SolverConfig& config,
                 std::optional<double> eps) {
  std::ostringstream s;
  s << command << " --data " << Quote(opts.data) << " --label " << Quote(opts.label)
    << " --protected " << Quote(opts.protected_column);
  if (!opts.categorical.empty()) s << " --categorical " << Quote(JoinNames(opts.categorical));
  if (!opts.drop.empty()) s << " --drop " << Quote(JoinNames(opts.drop));
  s << " --test-frac " << csv::FormatDouble(opts.test_frac) << " --seed " << opts.seed;
  if (!opts.standardize) s << " --no-standardize";
  s << " --constraint " << Quote(opts.constraint);
  if (eps) {
    s << " --eps " << csv::FormatDouble(*eps);
  } else {
    s << " --cprime " << csv::FormatDouble(opts.c_prime) << " --alpha "
      << csv::FormatDouble(opts.alpha);
  }
  s << " --B " << csv::FormatDouble(config.bound) << " --nu " << csv::FormatDouble(config.nu)
    << " --eta " << csv::FormatDouble(config.eta) << " --max-iter " << config.max_iter
    << " --learner " << LearnerName(config.learner.kind);
  return s.str();
}

std::string RunId(std::size_t index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 3) digits.insert(0, 3 - digits.size(), '0');
  return "run-" + digits;
}

std::string OutPath(const CliOptions& opts, const std::string& name) {
  return (fs::path(opts.out) / name).string();
}

void EnsureOutDir(const CliOptions& opts) {
  std::error_code ec;
  fs::create_directories(opts.out, ec);
  if (ec) throw Error(ErrorKind::kArgument, "cannot create output directory " + opts.out);
}

template <typename Writer>
void WriteFile(const std::string& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kArgument, "cannot write " + path);
  writer(out);
}

// Solves one eps value and saves its artifacts under the given names.
RunRecord RunOne(const std::string& command, const CliOptions& opts, const Prepared& p,
                 std::optional<double> eps, const std::string& run_id,
                 const std::string& model_name, const std::string& gap_name) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord record;
  record.run_id = run_id;
  record.constraint = opts.constraint;
  record.eps = eps ? csv::FormatDouble(*eps) : "default";
  record.learner = opts.learner;
  record.seed = opts.seed;
  record.model_path = OutPath(opts, model_name);

  const ConstraintSystem cs = ApplyEps(p.cs_train, opts, eps);
  const SolverConfig config = Resolve(opts, p.train, cs);
  record.command = Echo(command, opts, config, eps);
  record.learner = std::string(LearnerName(config.learner.kind));
  record.bound = config.bound;
  record.nu = config.nu;
  record.eta = config.eta;
  record.max_iter = config.max_iter;

  const SaddleResult result = Solve(p.train, cs, config);
  record.iterations = result.iterations;
  record.converged = result.converged;
  record.final_nu = result.gap_history.empty() ? 0.0 : result.gap_history.back().nu_t;

  const Eigen::VectorXd train_pred = PredictExpected(result.ensemble, p.train.features);
  const Eigen::VectorXd test_pred = PredictExpected(result.ensemble, p.test.features);
  record.train_error = ErrorOf(train_pred, p.train.labels);
  record.test_error = ErrorOf(test_pred, p.test.labels);
  record.train_violation = Violation(p.cs_train, train_pred, p.train);
  record.test_violation = Violation(p.cs_test, test_pred, p.test);

  ModelArtifact model;
  model.learner = record.learner;
  model.schema = SchemaOf(opts);
  model.test_fraction = opts.test_frac;
  model.split_seed = opts.seed;
  model.feature_names = p.raw.feature_names;
  model.standardizer = p.standardizer;
  model.ensemble = result.ensemble;
  SaveModel(record.model_path, model);
  WriteFile(OutPath(opts, gap_name), [&](std::ostream& out) {
    WriteGapTrace(out, result.gap_history);
  });

  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

void WriteRunReports(const CliOptions& opts, const std::vector<RunRecord>& runs) {
  WriteFile(OutPath(opts, "runs.csv"), [&](std::ostream& out) { WriteRunsCsv(out, runs); });
  WriteFile(OutPath(opts, "runs.jsonl"), [&](std::ostream& out) { WriteRunsJsonl(out, runs); });
  WriteFile(OutPath(opts, "timings.csv"), [&](std::ostream& out) { WriteTimings(out, runs); });
}

std::string FailureStatus(const std::exception& e) {
  const auto* error = dynamic_cast<const Error*>(&e);
  const std::string category =
      error ? std::string(ErrorCategory(error->kind())) : std::string("internal");
  std::string message = e.what();
  std::replace(message.begin(), message.end(), '\n', ' ');
  return "failed: " + category + ": " + message;
}

template <typename Task>
void RunParallel(std::size_t count, int jobs, Task&& task) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  }
}

std::vector<double> DefaultSweep() {
  std::vector<double> eps;
  for (int i = 0; i < 10; ++i) eps.push_back(0.001 * std::pow(100.0, i / 9.0));
  return eps;
}

}  // namespace

RunRecord CmdTrain(const CliOptions& opts) {
  if (opts.eps.size() > 1) throw Error(ErrorKind::kUsage, "train takes a single --eps value");
  const Prepared p = Prepare(opts);
  EnsureOutDir(opts);
  std::optional<double> eps;
  if (!opts.eps.empty()) eps = opts.eps.front();
  RunRecord record = RunOne("train", opts, p, eps, RunId(0), "model.txt", "gap.csv");
  WriteRunReports(opts, {record});
  return record;
}

std::vector<RunRecord> CmdSweep(const CliOptions& opts) {
  const std::vector<double> eps_list = opts.eps.empty() ? DefaultSweep() : opts.eps;
  const Prepared p = Prepare(opts);
  EnsureOutDir(opts);

  std::vector<RunRecord> runs(eps_list.size());
  std::vector<std::optional<Error>> failures(eps_list.size());
  RunParallel(eps_list.size(), opts.jobs, [&](std::size_t i) {
    const std::string id = RunId(i);
    try {
      runs[i] = RunOne("sweep", opts, p, eps_list[i], id, "model-" + id + ".txt",
                       "gap-" + id + ".csv");
    } catch (const std::exception& e) {
      RunRecord failed;
      failed.run_id = id;
      failed.constraint = opts.constraint;
      failed.eps = csv::FormatDouble(eps_list[i]);
      failed.learner = opts.learner;
      failed.seed = opts.seed;
      failed.command = "sweep --eps " + failed.eps;
      failed.status = FailureStatus(e);
      runs[i] = failed;
      const auto* error = dynamic_cast<const Error*>(&e);
      failures[i] = Error(error ? error->kind() : ErrorKind::kNumeric, e.what());
    }
  });

  WriteRunReports(opts, runs);
  WriteFile(OutPath(opts, "frontier_train.csv"),
            [&](std::ostream& out) { WriteFrontier(out, runs, false); });
  WriteFile(OutPath(opts, "frontier_test.csv"),
            [&](std::ostream& out) { WriteFrontier(out, runs, true); });
  if (std::all_of(failures.begin(), failures.end(), [](const auto& f) { return f.has_value(); })) {
    throw *failures.front();
  }
  return runs;
}

std::vector<GridPointResult> CmdGrid(const CliOptions& opts) {
  if (opts.constraint != "dp" && opts.constraint != "eo") {
    throw Error(ErrorKind::kNotApplicable, "grid search supports dp and eo constraints only");
  }
  const Prepared p = Prepare(opts);
  GridSpec spec = DefaultGridSpec(p.train, p.cs_train);
  for (auto& dim : spec.dims) {
    if (opts.grid_lo) dim.lo = *opts.grid_lo;
    if (opts.grid_hi) dim.hi = *opts.grid_hi;
    if (opts.grid_points) dim.points = *opts.grid_points;
    if (dim.points < 1 || !(dim.lo <= dim.hi)) {
      throw Error(ErrorKind::kArgument, "grid needs --grid-points >= 1 and --grid-lo <= --grid-hi");
    }
  }
  LearnerConfig learner;
  learner.kind = ParseLearnerKind(opts.learner);
  learner.seed = opts.seed;

  std::vector<GridPointResult> results = GridSearch(p.train, p.cs_train, spec, learner, opts.jobs);
  EvaluateGrid(results, p.test, p.cs_train.kind);

  EnsureOutDir(opts);
  const std::vector<std::size_t> frontier = GridFrontier(results);
  WriteFile(OutPath(opts, "grid.csv"),
            [&](std::ostream& out) { WriteGridCsv(out, spec, results); });
  WriteFile(OutPath(opts, "grid_frontier.csv"),
            [&](std::ostream& out) { WriteGridCsv(out, spec, results, &frontier); });
  WriteFile(OutPath(opts, "grid_models.txt"), [&](std::ostream& out) {
    for (std::size_t i = 0; i < results.size(); ++i) {
      out << i << ' ' << results[i].classifier.Serialize() << '\n';
    }
  });
  return results;
}

EvalMetrics CmdEvaluate(const CliOptions& opts) {
  const ModelArtifact model = LoadModel(opts.model);
  DatasetSchema schema = model.schema;
  if (!opts.label.empty()) schema.label_column = opts.label;
  if (!opts.protected_column.empty()) schema.protected_column = opts.protected_column;
  TrainingSet data = LoadCsv(opts.data, schema);
  if (opts.subset == "train" || opts.subset == "test") {
    const SplitIndices split = SplitRows(data, 1.0 - model.test_fraction, model.split_seed);
    data = Subset(data, opts.subset == "train" ? split.train : split.test);
  } else if (opts.subset != "all") {
    throw Error(ErrorKind::kUsage, "--subset must be all, train or test");
  }
  const Eigen::VectorXd pred = PredictExpected(model, data);
  EvalMetrics metrics;
  metrics.rows = data.size();
  metrics.error = ErrorOf(pred, data.labels);
  metrics.dp_violation = DpViolation(pred, data.group);
  try {
    metrics.eo_violation = EoViolation(pred, data.group, data.labels);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kDegenerateData) throw;
  }
  return metrics;
}

namespace {

void AddDataFlags(CLI::App* cmd, CliOptions& o, bool required) {
  cmd->add_option("--data", o.data, "CSV file with a header row")->required();
  auto* label = cmd->add_option("--label", o.label, "label column");
  auto* prot = cmd->add_option("--protected", o.protected_column, "protected attribute column");
  if (required) {
    label->required();
    prot->required();
  }
  cmd->add_option("--categorical", o.categorical, "columns to one-hot encode")->delimiter(',');
  cmd->add_option("--drop", o.drop, "columns to ignore")->delimiter(',');
}

struct OptionalFlags {
  double bound = 0, nu = 0, eta = 0, grid_lo = 0, grid_hi = 0;
  int max_iter = 0, grid_points = 0;
  CLI::Option *bound_opt = nullptr, *nu_opt = nullptr, *eta_opt = nullptr,
              *max_iter_opt = nullptr, *lo_opt = nullptr, *hi_opt = nullptr,
              *points_opt = nullptr;
};

void AddSolverFlags(CLI::App* cmd, CliOptions& o, OptionalFlags& f, bool solver) {
  cmd->add_option("--test-frac", o.test_frac, "held-out fraction")->capture_default_str();
  cmd->add_option("--seed", o.seed, "split and learner seed")->capture_default_str();
  cmd->add_flag("--no-standardize", [&o](std::int64_t) { o.standardize = false; },
                "keep numeric features unscaled");
  cmd->add_option("--constraint", o.constraint, "dp, eo or file:PATH")->capture_default_str();
  cmd->add_option("--learner", o.learner, "logistic, stumps or threshold1d")
      ->capture_default_str();
  cmd->add_option("--jobs", o.jobs, "worker threads")->capture_default_str();
  cmd->add_option("--out", o.out, "output directory")->capture_default_str();
  if (!solver) return;
  cmd->add_option("--eps", o.eps, "uniform slack values")->delimiter(',');
  cmd->add_option("--cprime", o.c_prime, "default slack scale")->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "default slack exponent")->capture_default_str();
  f.bound_opt = cmd->add_option("--B", f.bound, "dual bound");
  f.nu_opt = cmd->add_option("--nu", f.nu, "target suboptimality");
  f.eta_opt = cmd->add_option("--eta", f.eta, "learning rate");
  f.max_iter_opt = cmd->add_option("--max-iter", f.max_iter, "iteration limit");
}

void ApplyOptional(const OptionalFlags& f, CliOptions& o) {
  auto set = [](CLI::Option* opt, auto value, auto& target) {
    if (opt && opt->count() > 0) target = value;
  };
  set(f.bound_opt, f.bound, o.bound);
  set(f.nu_opt, f.nu, o.nu);
  set(f.eta_opt, f.eta, o.eta);
  set(f.max_iter_opt, f.max_iter, o.max_iter);
  set(f.lo_opt, f.grid_lo, o.grid_lo);
  set(f.hi_opt, f.grid_hi, o.grid_hi);
  set(f.points_opt, f.grid_points, o.grid_points);
}

std::string Metric(double v) { return csv::FormatDouble(v); }

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fair classification by reduction to cost-sensitive learning", "fairred"};
  app.require_subcommand(1);
  CliOptions opts;
  OptionalFlags flags;

  auto* train = app.add_subcommand("train", "solve for one slack value");
  AddDataFlags(train, opts, true);
  AddSolverFlags(train, opts, flags, true);

  CliOptions sweep_opts;
  OptionalFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "solve for a list of slack values");
  AddDataFlags(sweep, sweep_opts, true);
  AddSolverFlags(sweep, sweep_opts, sweep_flags, true);

  CliOptions grid_opts;
  OptionalFlags grid_flags;
  auto* grid = app.add_subcommand("grid", "grid search over collapsed dual variables");
  AddDataFlags(grid, grid_opts, true);
  AddSolverFlags(grid, grid_opts, grid_flags, false);
  grid_flags.lo_opt = grid->add_option("--grid-lo", grid_flags.grid_lo, "lowest adjustment");
  grid_flags.hi_opt = grid->add_option("--grid-hi", grid_flags.grid_hi, "highest adjustment");
  grid_flags.points_opt =
      grid->add_option("--grid-points", grid_flags.grid_points, "points per dimension");

  CliOptions eval_opts;
  eval_opts.out.clear();
  auto* evaluate = app.add_subcommand("evaluate", "score a saved model on a data file");
  evaluate->add_option("--model", eval_opts.model, "model file")->required();
  AddDataFlags(evaluate, eval_opts, false);
  evaluate->add_option("--subset", eval_opts.subset, "all, train or test")->capture_default_str();
  evaluate->add_option("--out", eval_opts.out, "directory for metrics.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << ErrorCategory(ErrorKind::kUsage) << ": " << e.what() << '\n';
    return ExitStatus(ErrorKind::kUsage);
  }

  try {
    if (train->parsed()) {
      ApplyOptional(flags, opts);
      const RunRecord r = CmdTrain(opts);
      WriteRunsCsv(out, {r});
    } else if (sweep->parsed()) {
      ApplyOptional(sweep_flags, sweep_opts);
      WriteRunsCsv(out, CmdSweep(sweep_opts));
    } else if (grid->parsed()) {
      ApplyOptional(grid_flags, grid_opts);
      const auto results = CmdGrid(grid_opts);
      const std::vector<std::size_t> frontier = GridFrontier(results);
      out << "points " << results.size() << ", frontier " << frontier.size() << '\n';
    } else if (evaluate->parsed()) {
      const EvalMetrics m = CmdEvaluate(eval_opts);
      std::ostringstream text;
      csv::WriteRow(text, {"rows", "error", "dp_violation", "eo_violation"});
      csv::WriteRow(text, {std::to_string(m.rows), Metric(m.error), Metric(m.dp_violation),
                           m.eo_violation ? Metric(*m.eo_violation) : "nan"});
      out << text.str();
      if (!eval_opts.out.empty()) {
        std::error_code ec;
        fs::create_directories(eval_opts.out, ec);
        WriteFile((fs::path(eval_opts.out) / "metrics.csv").string(),
                  [&](std::ostream& file) { file << text.str(); });
      }
    }
  } catch (const Error& e) {
    err << "error: " << ErrorCategory(e.kind()) << ": " << e.what() << '\n';
    return ExitStatus(e.kind());
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace fairred
