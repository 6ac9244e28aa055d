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

#include "fairred/expgrad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "fairred/csv.hpp"
#include "fairred/error.hpp"

namespace fairred {

namespace {

double MaxViolation(const ConstraintSystem& cs, const Eigen::VectorXd& predictions) {
  if (cs.num_constraints() == 0) return 0.0;
  return (Gamma(cs, MomentOf(cs, predictions)).values - cs.c_hat()).maxCoeff();
}

}  // namespace

void Validate(const SolverConfig& config) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(config.bound)) throw Error(ErrorKind::kArgument, "B must be positive");
  if (!positive(config.nu)) throw Error(ErrorKind::kArgument, "nu must be positive");
  if (!positive(config.eta)) throw Error(ErrorKind::kArgument, "eta must be positive");
  if (config.max_iter < 1) throw Error(ErrorKind::kArgument, "max_iter must be positive");
}

bool SaddleResult::envelope_held() const {
  for (const GapRecord& r : gap_history) {
    if (!(r.nu_t <= r.envelope)) return false;
  }
  return true;
}

LambdaVector LambdaFromTheta(const ThetaVector& theta, double bound) {
  if (!(bound > 0.0)) throw Error(ErrorKind::kArgument, "bound B must be positive");
  const double top = theta.values.size() > 0 ? std::max(0.0, theta.values.maxCoeff()) : 0.0;
  const Eigen::ArrayXd scaled = (theta.values.array() - top).exp();
  const double denom = std::exp(-top) + scaled.sum();
  return {(bound * scaled / denom).matrix(), bound};
}

ThetaVector ThetaUpdate(const ThetaVector& theta, const GammaVector& gamma,
                        const Eigen::Ref<const Eigen::VectorXd>& c_hat, double eta) {
  if (gamma.values.size() != theta.values.size() || c_hat.size() != theta.values.size()) {
    throw Error(ErrorKind::kArgument, "theta update dimensions disagree");
  }
  return {theta.values + eta * (gamma.values - c_hat)};
}

std::int64_t IterationCap(double rho, double bound, Eigen::Index num_constraints, double nu) {
  const double cap = std::ceil(4.0 * rho * rho * bound * bound *
                               std::log(static_cast<double>(num_constraints) + 1.0) / (nu * nu));
  if (!(cap < 9.2e18)) return std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(cap);
}

SolverConfig DefaultConfig(const TrainingSet& ts, const ConstraintSystem& cs) {
  const double root_n = std::sqrt(static_cast<double>(ts.size()));
  SolverConfig config;
  config.nu = 0.5 / root_n;
  config.bound = 2.0 * root_n;
  const double rho = RhoBound(cs);
  if (rho > 0.0) {
    config.eta = config.nu / (2.0 * rho * rho * config.bound);
    const std::int64_t cap = IterationCap(rho, config.bound, cs.num_constraints(), config.nu);
    config.max_iter = static_cast<int>(std::clamp<std::int64_t>(cap, 1, 5000));
  } else {
    config.eta = 1.0;
    config.max_iter = 1;
  }
  return config;
}

SaddleResult Solve(const TrainingSet& ts, const ConstraintSystem& cs, const SolverConfig& config) {
  Validate(config);
  if (cs.num_rows() != ts.size()) {
    throw Error(ErrorKind::kArgument, "constraint system was built on different data");
  }
  const double B = config.bound;
  const Eigen::Index K = cs.num_constraints();
  const Eigen::VectorXd c_hat = cs.c_hat();

  SaddleResult result;
  result.rho = RhoBound(cs);
  const double log_term = B * std::log(static_cast<double>(K) + 1.0) / config.eta;
  const double noise_term = config.eta * result.rho * result.rho * B;

  ThetaVector theta{Eigen::VectorXd::Zero(K)};
  Eigen::VectorXd prediction_sum = Eigen::VectorXd::Zero(ts.size());
  Eigen::VectorXd lambda_sum = Eigen::VectorXd::Zero(K);
  RandomizedClassifier plays;

  for (int t = 1; t <= config.max_iter; ++t) {
    try {
      const LambdaVector lambda = LambdaFromTheta(theta, B);
      const BaseClassifier h = BestH(lambda, ts, cs, config.learner);
      const Eigen::VectorXd h_predictions = h.Predict(ts.features);
      plays.Add(h, 1.0);
      prediction_sum += h_predictions;
      lambda_sum += lambda.values;

      const double td = static_cast<double>(t);
      const Eigen::VectorXd q_predictions = prediction_sum / td;
      const double q_error = ErrorOf(q_predictions, ts.labels);
      const LambdaVector lambda_hat{lambda_sum / td, B};

      const double lagrangian = Lagrangian(q_predictions, q_error, cs, lambda_hat);
      const double upper =
          Lagrangian(q_predictions, q_error, cs, BestLambda(q_predictions, cs, B));
      const BaseClassifier h_lower = BestH(lambda_hat, ts, cs, config.learner);
      const Eigen::VectorXd lower_predictions = h_lower.Predict(ts.features);
      const double lower = Lagrangian(lower_predictions, ErrorOf(lower_predictions, ts.labels),
                                      cs, lambda_hat);
      const double nu_t = std::max(lagrangian - lower, upper - lagrangian);
      if (!std::isfinite(nu_t)) {
        throw Error(ErrorKind::kNumeric, "Lagrangian is not finite");
      }

      GapRecord record;
      record.t = t;
      record.nu_t = nu_t;
      record.lagrangian = lagrangian;
      record.upper = upper;
      record.lower = lower;
      record.max_violation = MaxViolation(cs, q_predictions);
      record.error = q_error;
      record.envelope = log_term / td + noise_term;
      result.gap_history.push_back(record);
      result.iterations = t;
      result.lambda_avg = lambda_hat;
      result.train_predictions = q_predictions;

      if (nu_t <= config.nu) {
        result.converged = true;
        break;
      }
      theta = ThetaUpdate(theta, Gamma(cs, MomentOf(cs, h_predictions)), c_hat, config.eta);
    } catch (const Error& e) {
      throw Error(e.kind(), "iteration " + std::to_string(t) + ": " + e.what());
    }
  }
  plays.Normalize();
  result.ensemble = std::move(plays);
  return result;
}

void WriteGapTrace(std::ostream& out, const std::vector<GapRecord>& history) {
  out << "t,nu_t,L,L_upper,L_lower,max_violation,error,envelope\n";
  for (const GapRecord& r : history) {
    out << r.t << ',' << csv::FormatDouble(r.nu_t) << ',' << csv::FormatDouble(r.lagrangian) << ','
        << csv::FormatDouble(r.upper) << ',' << csv::FormatDouble(r.lower) << ','
        << csv::FormatDouble(r.max_violation) << ',' << csv::FormatDouble(r.error) << ','
        << csv::FormatDouble(r.envelope) << '\n';
  }
}

}  // namespace fairred
