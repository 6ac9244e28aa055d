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

// Grid search over collapsed multipliers for small parity systems.
//
// With a binary protected attribute the parity costs depend on lambda only
// through per-group adjustments delta of the cost of predicting 1, which obey
// sum_a p_a delta_a = 0 (per label value for equalized odds). Fixing all but
// one delta by that identity leaves a 1-D grid for demographic parity (2-D
// with three groups) and a 2-D grid for equalized odds.

#ifndef FAIRRED_GRIDSEARCH_HPP_
#define FAIRRED_GRIDSEARCH_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairred/data.hpp"
#include "fairred/evaluate.hpp"
#include "fairred/learners.hpp"
#include "fairred/moments.hpp"

namespace fairred {

struct GridDimension {
  std::string label;
  double lo = 0.0;
  double hi = 0.0;
  int points = 1;
};

struct GridSpec {
  std::vector<GridDimension> dims;

  // Full Cartesian grid, first dimension varying slowest. A dimension with a
  // single point uses lo.
  std::vector<std::vector<double>> Enumerate() const;
};

struct GridPointResult {
  std::vector<double> adjustments;
  BaseClassifier classifier;
  double train_error = 0.0;
  double train_violation = 0.0;
  std::optional<double> test_error;
  std::optional<double> test_violation;
};

// C0_i = 1{Y_i != 0}, C1_i = 1{Y_i != 1} + delta_{A_i}. `deltas` holds the
// adjustments of every group but the last, whose adjustment follows from
// sum_a p_a delta_a = 0. Needs two or three groups (Error(kNotApplicable)
// otherwise) and rows in every group (Error(kDegenerateData)).
CostPairSet DpAdjustCosts(const TrainingSet& ts, std::span<const double> deltas);
CostPairSet DpAdjustCosts(const TrainingSet& ts, double delta_first);

// C1_i = 1{Y_i != 1} + delta_{(A_i, Y_i)} for two groups; the second group's
// adjustments follow from p_(a,y) delta_(a,y) + p_(a',y) delta_(a',y) = 0.
CostPairSet EoAdjustCosts(const TrainingSet& ts, double delta_first_0, double delta_first_1);

// Adjustments of every group implied by the free deltas (for inspection and
// tests): DP returns one value per group, EO returns [group][label].
std::vector<double> DpAdjustments(const TrainingSet& ts, std::span<const double> deltas);
std::vector<std::vector<double>> EoAdjustments(const TrainingSet& ts, double delta_first_0,
                                               double delta_first_1);

// [-2 rho, 2 rho] with 33 points per free dimension.
GridSpec DefaultGridSpec(const TrainingSet& ts, const ConstraintSystem& cs);

// One fit per grid point, results in enumeration order. `jobs` > 1 fits
// points on that many threads.
std::vector<GridPointResult> GridSearch(const TrainingSet& ts, const ConstraintSystem& cs,
                                        const GridSpec& spec, const LearnerConfig& learner,
                                        int jobs = 1);

// DpViolation or EoViolation of the predictions on ts, per constraint kind.
// Throws Error(kNotApplicable) for generic systems.
double ParityViolation(ConstraintSystem::Kind kind, const Eigen::VectorXd& predictions,
                       const TrainingSet& ts);

// Fills test metrics of each result on held-out data.
void EvaluateGrid(std::vector<GridPointResult>& results, const TrainingSet& test,
                  ConstraintSystem::Kind kind);

// Non-dominated results in (train error, train violation), by violation.
std::vector<GridPointResult> SelectPareto(const std::vector<GridPointResult>& results);

}  // namespace fairred

#endif  // FAIRRED_GRIDSEARCH_HPP_
