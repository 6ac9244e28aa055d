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

// Lagrangian  L(Q, lambda) = err(Q) + lambda^T (M mu(Q) - c_hat)  and the best
// responses of both players.

#ifndef FAIRRED_REDUCTION_HPP_
#define FAIRRED_REDUCTION_HPP_

#include <Eigen/Core>

#include "fairred/data.hpp"
#include "fairred/learners.hpp"
#include "fairred/moments.hpp"

namespace fairred {

struct LambdaVector {
  Eigen::VectorXd values;  // >= 0, |values|_1 <= bound
  double bound = 1.0;      // B
};

// C0_i = 1{Y_i != 0} + sum_{k,j} M_kj lambda_k / p_j * g0_ij,
// C1_i = 1{Y_i != 1} + sum_{k,j} M_kj lambda_k / p_j * g1_ij.
CostPairSet ComputeCosts(const TrainingSet& ts, const ConstraintSystem& cs,
                         const LambdaVector& lambda);

// The Q-player's best response: one weighted fit on the lambda costs.
BaseClassifier BestH(const LambdaVector& lambda, const TrainingSet& ts,
                     const ConstraintSystem& cs, const LearnerConfig& learner);

// The lambda-player's best response: zero when every constraint holds,
// otherwise all of B on the most violated one (lowest index on ties).
LambdaVector BestLambda(const Eigen::Ref<const Eigen::VectorXd>& q_predictions,
                        const ConstraintSystem& cs, double bound);

double Lagrangian(const Eigen::Ref<const Eigen::VectorXd>& q_predictions, double q_error,
                  const ConstraintSystem& cs, const LambdaVector& lambda);

}  // namespace fairred

#endif  // FAIRRED_REDUCTION_HPP_
