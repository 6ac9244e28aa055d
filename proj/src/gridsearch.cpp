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

#include "fairred/gridsearch.hpp"

#include <atomic>
#include <exception>
#include <thread>

#include "fairred/error.hpp"

namespace fairred {

namespace {

std::vector<double> GroupMass(const TrainingSet& ts) {
  std::vector<double> mass(ts.attribute_values.size(), 0.0);
  for (int g : ts.group) mass[static_cast<std::size_t>(g)] += 1.0;
  for (double& m : mass) m /= static_cast<double>(ts.size());
  return mass;
}

CostPairSet PlainCosts(const TrainingSet& ts) {
  return {ts.labels, (1.0 - ts.labels.array()).matrix()};
}

}  // namespace

std::vector<std::vector<double>> GridSpec::Enumerate() const {
  std::vector<std::vector<double>> axes;
  for (const GridDimension& dim : dims) {
    if (dim.points < 1 || !(dim.lo <= dim.hi)) {
      throw Error(ErrorKind::kArgument, "grid dimension " + dim.label + " is invalid");
    }
    std::vector<double> axis;
    for (int k = 0; k < dim.points; ++k) {
      axis.push_back(dim.points == 1 ? dim.lo
                                     : dim.lo + (dim.hi - dim.lo) * k / (dim.points - 1));
    }
    axes.push_back(std::move(axis));
  }
  std::vector<std::vector<double>> grid{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : grid) {
      for (double v : axis) {
        auto point = prefix;
        point.push_back(v);
        next.push_back(std::move(point));
      }
    }
    grid = std::move(next);
  }
  return grid;
}

std::vector<double> DpAdjustments(const TrainingSet& ts, std::span<const double> deltas) {
  const std::size_t groups = ts.attribute_values.size();
  if (groups != 2 && groups != 3) {
    throw Error(ErrorKind::kNotApplicable,
                "grid search for demographic parity supports two or three protected values, got " +
                    std::to_string(groups));
  }
  if (deltas.size() != groups - 1) {
    throw Error(ErrorKind::kArgument, "need one adjustment per group except the last");
  }
  const std::vector<double> mass = GroupMass(ts);
  for (double p : mass) {
    if (p == 0.0) throw Error(ErrorKind::kDegenerateData, "a protected group has no rows");
  }
  std::vector<double> delta(deltas.begin(), deltas.end());
  double balance = 0.0;
  for (std::size_t a = 0; a + 1 < groups; ++a) balance += mass[a] * delta[a];
  delta.push_back(-balance / mass[groups - 1]);
  return delta;
}

CostPairSet DpAdjustCosts(const TrainingSet& ts, std::span<const double> deltas) {
  const std::vector<double> delta = DpAdjustments(ts, deltas);
  CostPairSet costs = PlainCosts(ts);
  for (Eigen::Index i = 0; i < ts.size(); ++i) {
    costs.c1[i] += delta[static_cast<std::size_t>(ts.group[static_cast<std::size_t>(i)])];
  }
  return costs;
}

CostPairSet DpAdjustCosts(const TrainingSet& ts, double delta_first) {
  if (ts.attribute_values.size() != 2) {
    throw Error(ErrorKind::kNotApplicable,
                "one-dimensional grid needs a binary protected attribute");
  }
  const double deltas[] = {delta_first};
  return DpAdjustCosts(ts, deltas);
}

std::vector<std::vector<double>> EoAdjustments(const TrainingSet& ts, double delta_first_0,
                                               double delta_first_1) {
  if (ts.attribute_values.size() != 2) {
    throw Error(ErrorKind::kNotApplicable,
                "grid search for equalized odds needs a binary protected attribute, got " +
                    std::to_string(ts.attribute_values.size()) + " values");
  }
  double cell[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  for (Eigen::Index i = 0; i < ts.size(); ++i) {
    cell[ts.group[static_cast<std::size_t>(i)]][static_cast<int>(ts.labels[i])] += 1.0;
  }
  for (auto& row : cell) {
    for (double& c : row) {
      if (c == 0.0) {
        throw Error(ErrorKind::kDegenerateData, "an (attribute, label) cell has no rows");
      }
      c /= static_cast<double>(ts.size());
    }
  }
  const double first[2] = {delta_first_0, delta_first_1};
  std::vector<std::vector<double>> delta(2, std::vector<double>(2));
  for (int y = 0; y < 2; ++y) {
    delta[0][static_cast<std::size_t>(y)] = first[y];
    delta[1][static_cast<std::size_t>(y)] = -cell[0][y] * first[y] / cell[1][y];
  }
  return delta;
}

CostPairSet EoAdjustCosts(const TrainingSet& ts, double delta_first_0, double delta_first_1) {
  const auto delta = EoAdjustments(ts, delta_first_0, delta_first_1);
  CostPairSet costs = PlainCosts(ts);
  for (Eigen::Index i = 0; i < ts.size(); ++i) {
    costs.c1[i] += delta[static_cast<std::size_t>(ts.group[static_cast<std::size_t>(i)])]
                        [static_cast<std::size_t>(ts.labels[i])];
  }
  return costs;
}

GridSpec DefaultGridSpec(const TrainingSet& ts, const ConstraintSystem& cs) {
  const double rho = RhoBound(cs);
  GridSpec spec;
  auto add = [&](std::string label) { spec.dims.push_back({std::move(label), -2.0 * rho, 2.0 * rho, 33}); };
  switch (cs.kind) {
    case ConstraintSystem::Kind::kDemographicParity:
      for (std::size_t a = 0; a + 1 < ts.attribute_values.size(); ++a) {
        add("delta_" + ts.attribute_values[a]);
      }
      break;
    case ConstraintSystem::Kind::kEqualizedOdds:
      add("delta_" + ts.attribute_values.front() + ",0");
      add("delta_" + ts.attribute_values.front() + ",1");
      break;
    case ConstraintSystem::Kind::kGeneric:
      throw Error(ErrorKind::kNotApplicable, "grid search supports dp and eo constraints only");
  }
  return spec;
}

double ParityViolation(ConstraintSystem::Kind kind, const Eigen::VectorXd& predictions,
                       const TrainingSet& ts) {
  switch (kind) {
    case ConstraintSystem::Kind::kDemographicParity:
      return DpViolation(predictions, ts.group);
    case ConstraintSystem::Kind::kEqualizedOdds:
      return EoViolation(predictions, ts.group, ts.labels);
    case ConstraintSystem::Kind::kGeneric:
      break;
  }
  throw Error(ErrorKind::kNotApplicable, "parity violation is defined for dp and eo only");
}

std::vector<GridPointResult> GridSearch(const TrainingSet& ts, const ConstraintSystem& cs,
                                        const GridSpec& spec, const LearnerConfig& learner,
                                        int jobs) {
  const std::size_t groups = ts.attribute_values.size();
  std::size_t expected_dims = 0;
  switch (cs.kind) {
    case ConstraintSystem::Kind::kDemographicParity:
      if (groups != 2 && groups != 3) {
        throw Error(ErrorKind::kNotApplicable,
                    "grid search for demographic parity supports at most three protected values; "
                    "got " + std::to_string(groups));
      }
      expected_dims = groups - 1;
      break;
    case ConstraintSystem::Kind::kEqualizedOdds:
      if (groups != 2) {
        throw Error(ErrorKind::kNotApplicable,
                    "grid search for equalized odds needs a binary protected attribute; got " +
                        std::to_string(groups) + " values");
      }
      expected_dims = 2;
      break;
    case ConstraintSystem::Kind::kGeneric:
      throw Error(ErrorKind::kNotApplicable, "grid search supports dp and eo constraints only");
  }
  if (spec.dims.size() != expected_dims) {
    throw Error(ErrorKind::kArgument, "grid needs " + std::to_string(expected_dims) +
                                          " dimensions for this constraint");
  }

  const std::vector<std::vector<double>> points = spec.Enumerate();
  std::vector<std::optional<GridPointResult>> slots(points.size());
  auto evaluate = [&](std::size_t p) {
    const auto& delta = points[p];
    const CostPairSet costs = cs.kind == ConstraintSystem::Kind::kEqualizedOdds
                                  ? EoAdjustCosts(ts, delta[0], delta[1])
                                  : DpAdjustCosts(ts, delta);
    BaseClassifier h = Fit(learner, ts, CostToWeighted(costs));
    const Eigen::VectorXd predictions = h.Predict(ts.features);
    slots[p] = GridPointResult{delta, std::move(h), ErrorOf(predictions, ts.labels),
                               ParityViolation(cs.kind, predictions, ts), std::nullopt,
                               std::nullopt};
  };

  if (jobs <= 1) {
    for (std::size_t p = 0; p < points.size(); ++p) evaluate(p);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(jobs));
    std::vector<std::jthread> workers;
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t p = next++; p < points.size(); p = next++) evaluate(p);
        } catch (...) {
          failures[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    workers.clear();
    for (const auto& failure : failures) {
      if (failure) std::rethrow_exception(failure);
    }
  }

  std::vector<GridPointResult> results;
  results.reserve(points.size());
  for (auto& slot : slots) results.push_back(std::move(*slot));
  return results;
}

void EvaluateGrid(std::vector<GridPointResult>& results, const TrainingSet& test,
                  ConstraintSystem::Kind kind) {
  for (GridPointResult& r : results) {
    const Eigen::VectorXd predictions = r.classifier.Predict(test.features);
    r.test_error = ErrorOf(predictions, test.labels);
    r.test_violation = ParityViolation(kind, predictions, test);
  }
}

std::vector<GridPointResult> SelectPareto(const std::vector<GridPointResult>& results) {
  if (results.empty()) throw Error(ErrorKind::kArgument, "no grid results to filter");
  std::vector<TradeoffPoint> points;
  for (const auto& r : results) points.push_back({r.train_error, r.train_violation});
  std::vector<GridPointResult> frontier;
  for (std::size_t idx : ParetoIndices(points)) frontier.push_back(results[idx]);
  return frontier;
}

}  // namespace fairred
