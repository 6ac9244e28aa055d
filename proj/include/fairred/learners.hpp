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

// Weighted binary classification oracles.
//
// A cost-sensitive problem {(X_i, C0_i, C1_i)} becomes the weighted problem
// {(X_i, target_i, W_i)} with W_i = |C0_i - C1_i| and target_i = 1{C0_i >= C1_i};
// the two objectives differ by sum_i min(C0_i, C1_i), a constant.

#ifndef FAIRRED_LEARNERS_HPP_
#define FAIRRED_LEARNERS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "fairred/data.hpp"

namespace fairred {

struct CostPairSet {
  Eigen::VectorXd c0;  // cost of predicting 0
  Eigen::VectorXd c1;  // cost of predicting 1
};

struct WeightedSample {
  Eigen::Index row = 0;
  int target = 0;
  double weight = 0.0;
};

std::vector<WeightedSample> CostToWeighted(const CostPairSet& costs);

struct LogisticModel {
  Eigen::VectorXd coef;
  double intercept = 0.0;
};

struct Stump {
  Eigen::Index feature = 0;
  double threshold = 0.0;
  double left_vote = -1.0;   // vote for x < threshold
  double right_vote = 1.0;   // vote for x >= threshold
  double weight = 0.0;       // stage weight
};

struct BoostedStumps {
  std::vector<Stump> stumps;
};

// Predicts 1 iff x[feature] >= threshold (greater_equal) or
// x[feature] < threshold (otherwise).
struct ThresholdRule {
  Eigen::Index feature = 0;
  double threshold = 0.0;
  bool greater_equal = true;
};

struct ConstantRule {
  int bit = 1;
};

class BaseClassifier {
 public:
  enum class Kind { kLogistic, kBoostedStumps, kThreshold1d, kConstant };
  using Model = std::variant<LogisticModel, BoostedStumps, ThresholdRule, ConstantRule>;

  BaseClassifier(Model model, Eigen::Index dim);

  Kind kind() const;
  const Model& model() const { return model_; }
  Eigen::Index dim() const { return dim_; }

  // 0/1 predictions as doubles. Throws Error(kArgument) on a column mismatch.
  Eigen::VectorXd Predict(const Eigen::Ref<const Eigen::MatrixXd>& features) const;

  // One-line record "<kind> <dim> <params...>" with round-trip decimals.
  std::string Serialize() const;
  static BaseClassifier Parse(std::string_view record);

  friend bool operator==(const BaseClassifier& a, const BaseClassifier& b) {
    return a.Serialize() == b.Serialize();
  }

 private:
  Model model_;
  Eigen::Index dim_;
};

std::string_view KindName(BaseClassifier::Kind kind);

struct LearnerConfig {
  enum class Kind { kLogistic, kBoostedStumps, kThreshold1d };

  Kind kind = Kind::kLogistic;
  std::uint64_t seed = 0;
  // Logistic regression.
  double l2 = 1e-6;
  int max_iter = 5000;
  double grad_tol = 1e-8;
  // Boosting.
  int rounds = 50;
};

std::string_view LearnerName(LearnerConfig::Kind kind);
// Accepts "logistic", "stumps", "threshold1d".
LearnerConfig::Kind ParseLearnerKind(std::string_view name);

// Approximately minimizes sum_i W_i 1{h(X_i) != target_i} over the learner's
// family. Zero total weight returns the constant-1 classifier; a non-finite or
// negative weight throws Error(kNumeric). Deterministic.
BaseClassifier Fit(const LearnerConfig& config, const TrainingSet& ts,
                   std::span<const WeightedSample> samples);

}  // namespace fairred

#endif  // FAIRRED_LEARNERS_HPP_
