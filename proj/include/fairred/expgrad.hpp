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

// Exponentiated-gradient saddle-point solver for
//   min_Q max_{lambda >= 0, |lambda|_1 <= B}  L(Q, lambda).
//
// The lambda-player runs exponentiated gradient on log-domain parameters
// theta; the Q-player best-responds with one weighted fit per iteration. The
// uniform averages of both players' plays converge to a nu-approximate saddle
// point, with suboptimality at iteration t bounded by
//   nu_t <= B ln(|K| + 1) / (eta t) + eta rho^2 B
// whenever the learner returns exact best responses.

#ifndef FAIRRED_EXPGRAD_HPP_
#define FAIRRED_EXPGRAD_HPP_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "fairred/evaluate.hpp"
#include "fairred/learners.hpp"
#include "fairred/moments.hpp"
#include "fairred/reduction.hpp"

namespace fairred {

struct ThetaVector {
  Eigen::VectorXd values;
};

struct SolverConfig {
  double bound = 1.0;  // B
  double nu = 0.01;    // target suboptimality
  double eta = 0.1;    // learning rate
  int max_iter = 5000;
  std::uint64_t seed = 0;
  LearnerConfig learner;
};

// Throws Error(kArgument) unless B, nu, eta, max_iter are positive and finite.
void Validate(const SolverConfig& config);

struct GapRecord {
  int t = 0;
  double nu_t = 0.0;
  double lagrangian = 0.0;     // L(Q_hat_t, lambda_hat_t)
  double upper = 0.0;          // L(Q_hat_t, best lambda)
  double lower = 0.0;          // L(best h, lambda_hat_t)
  double max_violation = 0.0;  // max_k gamma_k(Q_hat_t) - c_hat_k
  double error = 0.0;          // err(Q_hat_t)
  double envelope = 0.0;       // right-hand side of the suboptimality bound
};

struct SaddleResult {
  RandomizedClassifier ensemble;  // Q_hat, weights sum to one
  LambdaVector lambda_avg;        // lambda_hat
  std::vector<GapRecord> gap_history;
  int iterations = 0;
  bool converged = false;
  double rho = 0.0;  // the bound used for eta checks and the envelope
  Eigen::VectorXd train_predictions;  // expected predictions of Q_hat

  // True when nu_t <= envelope at every logged iteration.
  bool envelope_held() const;
};

// lambda_k = B exp(theta_k) / (1 + sum_k' exp(theta_k')), evaluated with the
// largest exponent factored out.
LambdaVector LambdaFromTheta(const ThetaVector& theta, double bound);

// theta + eta (gamma - c_hat).
ThetaVector ThetaUpdate(const ThetaVector& theta, const GammaVector& gamma,
                        const Eigen::Ref<const Eigen::VectorXd>& c_hat, double eta);

// ceil(4 rho^2 B^2 ln(nK + 1) / nu^2), saturating at INT64_MAX.
std::int64_t IterationCap(double rho, double bound, Eigen::Index num_constraints, double nu);

// nu = 1/(2 sqrt n), B = 2 sqrt n, eta = nu / (2 rho^2 B) with rho from
// RhoBound, max_iter = min(IterationCap, 5000).
SolverConfig DefaultConfig(const TrainingSet& ts, const ConstraintSystem& cs);

// Runs until nu_t <= nu or max_iter iterations (converged = false then).
// Learner errors are rethrown with the iteration number; a non-finite
// Lagrangian throws Error(kNumeric).
SaddleResult Solve(const TrainingSet& ts, const ConstraintSystem& cs, const SolverConfig& config);

// CSV trace: t,nu_t,L,L_upper,L_lower,max_violation,error,envelope
void WriteGapTrace(std::ostream& out, const std::vector<GapRecord>& history);

}  // namespace fairred

#endif  // FAIRRED_EXPGRAD_HPP_
