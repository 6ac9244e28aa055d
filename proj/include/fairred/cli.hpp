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

// The fairred commands: train, sweep, grid and evaluate.

#ifndef FAIRRED_CLI_HPP_
#define FAIRRED_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fairred/gridsearch.hpp"
#include "fairred/report.hpp"

namespace fairred {

struct CliOptions {
  // Data.
  std::string data;
  std::string label;
  std::string protected_column;
  std::vector<std::string> categorical;
  std::vector<std::string> drop;
  double test_frac = 0.25;
  std::uint64_t seed = 0;
  bool standardize = true;

  // Constraints and solver. Unset values resolve to the solver defaults.
  std::string constraint = "dp";  // dp, eo or file:PATH
  std::vector<double> eps;        // empty: per-constraint defaults
  double c_prime = 0.1;
  double alpha = 0.5;
  std::optional<double> bound;
  std::optional<double> nu;
  std::optional<double> eta;
  std::optional<int> max_iter;
  std::string learner = "logistic";
  int jobs = 1;
  std::string out = ".";

  // grid
  std::optional<double> grid_lo;
  std::optional<double> grid_hi;
  std::optional<int> grid_points;

  // evaluate
  std::string model;
  std::string subset = "all";  // all, train or test
};

struct EvalMetrics {
  Eigen::Index rows = 0;
  double error = 0.0;
  double dp_violation = 0.0;
  std::optional<double> eo_violation;  // unset when a label value is absent
};

// Writes model.txt, gap.csv, runs.csv, runs.jsonl and timings.csv into out.
RunRecord CmdTrain(const CliOptions& opts);
// One run per eps value (ten log-spaced values in [0.001, 0.1] when none are
// given). Writes per-run models and gap traces, runs.csv, runs.jsonl,
// timings.csv, frontier_train.csv and frontier_test.csv. Failed runs are
// recorded; throws only when every run fails.
std::vector<RunRecord> CmdSweep(const CliOptions& opts);
// Writes grid.csv, grid_frontier.csv and grid_models.txt.
std::vector<GridPointResult> CmdGrid(const CliOptions& opts);
// Metrics of a saved model on a data file, from expected predictions. With
// subset train or test the model's own split is reproduced.
EvalMetrics CmdEvaluate(const CliOptions& opts);

// Full command line entry point. Returns the exit status; errors are printed
// to err as "error: <category>: <message>".
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fairred

#endif  // FAIRRED_CLI_HPP_
