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

#include "fairred/reduction.hpp"

#include "fairred/error.hpp"

namespace fairred {

CostPairSet ComputeCosts(const TrainingSet& ts, const ConstraintSystem& cs,
                         const LambdaVector& lambda) {
  if (lambda.values.size() != cs.num_constraints() || cs.num_rows() != ts.size()) {
    throw Error(ErrorKind::kArgument, "lambda, constraints and data disagree in size");
  }
  // Per-moment weight sum_k M_kj lambda_k / p_j.
  const Eigen::VectorXd moment_weight =
      (cs.M.transpose() * lambda.values).cwiseQuotient(cs.probs);
  CostPairSet costs;
  costs.c0 = ts.labels + cs.g0 * moment_weight;
  costs.c1 = (1.0 - ts.labels.array()).matrix() + cs.g1 * moment_weight;
  return costs;
}

BaseClassifier BestH(const LambdaVector& lambda, const TrainingSet& ts,
                     const ConstraintSystem& cs, const LearnerConfig& learner) {
  const std::vector<WeightedSample> samples = CostToWeighted(ComputeCosts(ts, cs, lambda));
  return Fit(learner, ts, samples);
}

LambdaVector BestLambda(const Eigen::Ref<const Eigen::VectorXd>& q_predictions,
                        const ConstraintSystem& cs, double bound) {
  if (!(bound > 0.0)) throw Error(ErrorKind::kArgument, "bound B must be positive");
  LambdaVector best{Eigen::VectorXd::Zero(cs.num_constraints()), bound};
  if (cs.num_constraints() == 0) return best;
  const Eigen::VectorXd violation =
      Gamma(cs, MomentOf(cs, q_predictions)).values - cs.c_hat();
  Eigen::Index k_star = 0;
  for (Eigen::Index k = 1; k < violation.size(); ++k) {
    if (violation[k] > violation[k_star]) k_star = k;
  }
  if (violation[k_star] > 0.0) best.values[k_star] = bound;
  return best;
}

double Lagrangian(const Eigen::Ref<const Eigen::VectorXd>& q_predictions, double q_error,
                  const ConstraintSystem& cs, const LambdaVector& lambda) {
  if (lambda.values.size() != cs.num_constraints()) {
    throw Error(ErrorKind::kArgument, "lambda has the wrong length");
  }
  const Eigen::VectorXd violation =
      Gamma(cs, MomentOf(cs, q_predictions)).values - cs.c_hat();
  return q_error + lambda.values.dot(violation);
}

}  // namespace fairred
