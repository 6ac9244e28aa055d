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

#include "fairred/report.hpp"

#include <cmath>
#include <ostream>

#include "json.hpp"

#include "fairred/csv.hpp"
#include "fairred/evaluate.hpp"

namespace fairred {

namespace {

std::string Num(double v) { return std::isfinite(v) ? csv::FormatDouble(v) : "nan"; }

nlohmann::json JsonNum(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

std::string OptNum(const std::optional<double>& v) { return v ? Num(*v) : ""; }

}  // namespace

const std::vector<std::string>& RunColumns() {
  static const std::vector<std::string> columns = {
      "run_id",     "command",    "constraint",  "eps",         "learner",
      "B",          "nu",         "eta",         "max_iter",    "seed",
      "iterations", "converged",  "final_nu",    "train_error", "test_error",
      "train_violation", "test_violation", "model_path", "status"};
  return columns;
}

void WriteRunsCsv(std::ostream& out, const std::vector<RunRecord>& runs) {
  csv::WriteRow(out, RunColumns());
  for (const auto& r : runs) {
    csv::WriteRow(out, {r.run_id, r.command, r.constraint, r.eps, r.learner, Num(r.bound),
                        Num(r.nu), Num(r.eta), std::to_string(r.max_iter), std::to_string(r.seed),
                        std::to_string(r.iterations), r.converged ? "true" : "false",
                        Num(r.final_nu), Num(r.train_error), Num(r.test_error),
                        Num(r.train_violation), Num(r.test_violation), r.model_path, r.status});
  }
}

void WriteRunsJsonl(std::ostream& out, const std::vector<RunRecord>& runs) {
  for (const auto& r : runs) {
    nlohmann::ordered_json j;
    j["run_id"] = r.run_id;
    j["command"] = r.command;
    j["constraint"] = r.constraint;
    j["eps"] = r.eps;
    j["learner"] = r.learner;
    j["B"] = JsonNum(r.bound);
    j["nu"] = JsonNum(r.nu);
    j["eta"] = JsonNum(r.eta);
    j["max_iter"] = r.max_iter;
    j["seed"] = r.seed;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["final_nu"] = JsonNum(r.final_nu);
    j["train_error"] = JsonNum(r.train_error);
    j["test_error"] = JsonNum(r.test_error);
    j["train_violation"] = JsonNum(r.train_violation);
    j["test_violation"] = JsonNum(r.test_violation);
    j["model_path"] = r.model_path;
    j["status"] = r.status;
    out << j.dump() << '\n';
  }
}

void WriteTimings(std::ostream& out, const std::vector<RunRecord>& runs) {
  csv::WriteRow(out, {"run_id", "wall_seconds"});
  for (const auto& r : runs) csv::WriteRow(out, {r.run_id, Num(r.wall_seconds)});
}

void WriteFrontier(std::ostream& out, const std::vector<RunRecord>& runs, bool test) {
  std::vector<const RunRecord*> usable;
  std::vector<TradeoffPoint> points;
  for (const auto& r : runs) {
    const double err = test ? r.test_error : r.train_error;
    const double vio = test ? r.test_violation : r.train_violation;
    if (!r.ok() || !std::isfinite(err) || !std::isfinite(vio)) continue;
    usable.push_back(&r);
    points.push_back({err, vio});
  }
  csv::WriteRow(out, {"run_id", "eps", "error", "violation"});
  for (std::size_t i : ParetoIndices(points)) {
    csv::WriteRow(out, {usable[i]->run_id, usable[i]->eps, Num(points[i].error),
                        Num(points[i].violation)});
  }
}

void WriteGridCsv(std::ostream& out, const GridSpec& spec,
                  const std::vector<GridPointResult>& results,
                  const std::vector<std::size_t>* only) {
  csv::Row header = {"point"};
  for (const auto& d : spec.dims) header.push_back(d.label);
  for (const char* c : {"train_error", "train_violation", "test_error", "test_violation"}) {
    header.emplace_back(c);
  }
  csv::WriteRow(out, header);
  auto emit = [&](std::size_t i) {
    const auto& r = results[i];
    csv::Row row = {std::to_string(i)};
    for (double a : r.adjustments) row.push_back(Num(a));
    row.push_back(Num(r.train_error));
    row.push_back(Num(r.train_violation));
    row.push_back(OptNum(r.test_error));
    row.push_back(OptNum(r.test_violation));
    csv::WriteRow(out, row);
  };
  if (only) {
    for (std::size_t i : *only) emit(i);
  } else {
    for (std::size_t i = 0; i < results.size(); ++i) emit(i);
  }
}

std::vector<std::size_t> GridFrontier(const std::vector<GridPointResult>& results) {
  std::vector<TradeoffPoint> points;
  points.reserve(results.size());
  for (const auto& r : results) points.push_back({r.train_error, r.train_violation});
  return ParetoIndices(points);
}

}  // namespace fairred
