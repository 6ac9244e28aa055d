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

// Randomized classifiers and the evaluation metrics.
//
// A randomized classifier Q predicts by drawing a member h ~ Q and returning
// h(x). Error and conditional moments of Q are the Q-weighted averages of the
// members' values, so all metrics below accept fractional predictions: the
// expected prediction of Q gives the exact mixture value.

#ifndef FAIRRED_EVALUATE_HPP_
#define FAIRRED_EVALUATE_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "fairred/learners.hpp"

namespace fairred {

class RandomizedClassifier {
 public:
  struct Member {
    BaseClassifier classifier;
    double weight;
  };

  RandomizedClassifier() = default;
  explicit RandomizedClassifier(BaseClassifier only);

  // Adds mass to h, merging with an existing member that serializes the
  // same. Weights are not renormalized.
  void Add(const BaseClassifier& h, double weight);
  // Rescales weights to sum to one; drops members of weight zero.
  void Normalize();

  const std::vector<Member>& members() const { return members_; }
  bool empty() const { return members_.empty(); }
  double total_weight() const;

 private:
  std::vector<Member> members_;
};

// sum_h Q(h) h(x), entries in [0, 1].
Eigen::VectorXd PredictExpected(const RandomizedClassifier& q,
                                const Eigen::Ref<const Eigen::MatrixXd>& features);

// Draws one member per row, independently, with probability Q(h).
Eigen::VectorXd PredictSampled(const RandomizedClassifier& q,
                               const Eigen::Ref<const Eigen::MatrixXd>& features,
                               std::uint64_t seed);

// (1/n) sum_i pred_i (1 - y_i) + (1 - pred_i) y_i.
double ErrorOf(const Eigen::Ref<const Eigen::VectorXd>& predictions,
               const Eigen::Ref<const Eigen::VectorXd>& labels);

// max_a |E[h | A=a] - E[h]| over groups present in `group`.
double DpViolation(const Eigen::Ref<const Eigen::VectorXd>& predictions,
                   const std::vector<int>& group);

// max_{a,y} |E[h | A=a, Y=y] - E[h | Y=y]| over nonempty cells. Throws
// Error(kDegenerateData) when a label value is absent.
double EoViolation(const Eigen::Ref<const Eigen::VectorXd>& predictions,
                   const std::vector<int>& group,
                   const Eigen::Ref<const Eigen::VectorXd>& labels);

struct TradeoffPoint {
  double error = 0.0;
  double violation = 0.0;
};

// Indices of the points not dominated in (error, violation), ordered by
// violation then error ascending; identical points are all kept.
std::vector<std::size_t> ParetoIndices(const std::vector<TradeoffPoint>& points);

}  // namespace fairred

#endif  // FAIRRED_EVALUATE_HPP_
