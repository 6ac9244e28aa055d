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

// Run records and the CSV / JSON-lines files written by the commands.
//
// runs.csv columns, in order:
//   run_id, command, constraint, eps, learner, B, nu, eta, max_iter, seed,
//   iterations, converged, final_nu, train_error, test_error,
//   train_violation, test_violation, model_path, status
// Wall-clock seconds go to a separate timings file so that report files are
// identical across repeated runs.

#ifndef FAIRRED_REPORT_HPP_
#define FAIRRED_REPORT_HPP_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "fairred/gridsearch.hpp"

namespace fairred {

struct RunRecord {
  std::string run_id;
  std::string command;     // every resolved parameter, as flags
  std::string constraint;  // dp, eo or file:PATH
  std::string eps;         // the uniform value, or "default"
  std::string learner;
  double bound = 0.0;
  double nu = 0.0;
  double eta = 0.0;
  int max_iter = 0;
  std::uint64_t seed = 0;
  int iterations = 0;
  bool converged = false;
  double final_nu = std::numeric_limits<double>::quiet_NaN();
  double train_error = std::numeric_limits<double>::quiet_NaN();
  double test_error = std::numeric_limits<double>::quiet_NaN();
  double train_violation = std::numeric_limits<double>::quiet_NaN();
  double test_violation = std::numeric_limits<double>::quiet_NaN();
  double wall_seconds = 0.0;
  std::string model_path;
  std::string status = "ok";  // "ok" or "failed: <category>: <message>"

  bool ok() const { return status == "ok"; }
};

const std::vector<std::string>& RunColumns();

void WriteRunsCsv(std::ostream& out, const std::vector<RunRecord>& runs);
void WriteRunsJsonl(std::ostream& out, const std::vector<RunRecord>& runs);
// run_id,wall_seconds
void WriteTimings(std::ostream& out, const std::vector<RunRecord>& runs);
// run_id,eps,error,violation for the Pareto-optimal successful runs, by
// violation ascending. `test` picks test metrics over train metrics.
void WriteFrontier(std::ostream& out, const std::vector<RunRecord>& runs, bool test);

// point,<dimension labels...>,train_error,train_violation,test_error,test_violation
// `only` restricts the output to the listed point indices.
void WriteGridCsv(std::ostream& out, const GridSpec& spec,
                  const std::vector<GridPointResult>& results,
                  const std::vector<std::size_t>* only = nullptr);
// Indices of the grid points on the train Pareto frontier.
std::vector<std::size_t> GridFrontier(const std::vector<GridPointResult>& results);

}  // namespace fairred

#endif  // FAIRRED_REPORT_HPP_
