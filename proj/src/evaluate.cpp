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

#include "fairred/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fairred/error.hpp"
#include "fairred/random.hpp"

namespace fairred {

RandomizedClassifier::RandomizedClassifier(BaseClassifier only) { Add(only, 1.0); }

void RandomizedClassifier::Add(const BaseClassifier& h, double weight) {
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw Error(ErrorKind::kArgument, "member weight must be finite and nonnegative");
  }
  const std::string key = h.Serialize();
  for (Member& m : members_) {
    if (m.classifier.Serialize() == key) {
      m.weight += weight;
      return;
    }
  }
  members_.push_back({h, weight});
}

void RandomizedClassifier::Normalize() {
  std::erase_if(members_, [](const Member& m) { return m.weight == 0.0; });
  const double total = total_weight();
  if (!(total > 0.0)) throw Error(ErrorKind::kArgument, "randomized classifier has no mass");
  for (Member& m : members_) m.weight /= total;
}

double RandomizedClassifier::total_weight() const {
  double total = 0.0;
  for (const Member& m : members_) total += m.weight;
  return total;
}

Eigen::VectorXd PredictExpected(const RandomizedClassifier& q,
                                const Eigen::Ref<const Eigen::MatrixXd>& features) {
  if (q.empty()) throw Error(ErrorKind::kArgument, "randomized classifier has no members");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(features.rows());
  for (const auto& m : q.members()) out += m.weight * m.classifier.Predict(features);
  return out.cwiseMax(0.0).cwiseMin(1.0);
}

Eigen::VectorXd PredictSampled(const RandomizedClassifier& q,
                               const Eigen::Ref<const Eigen::MatrixXd>& features,
                               std::uint64_t seed) {
  if (q.empty()) throw Error(ErrorKind::kArgument, "randomized classifier has no members");
  const auto& members = q.members();
  std::vector<Eigen::VectorXd> member_predictions;
  std::vector<double> cumulative;
  double running = 0.0;
  for (const auto& m : members) {
    member_predictions.push_back(m.classifier.Predict(features));
    running += m.weight;
    cumulative.push_back(running);
  }
  Rng rng(seed);
  Eigen::VectorXd out(features.rows());
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    const double u = UniformUnit(rng) * running;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t pick = static_cast<std::size_t>(it - cumulative.begin());
    pick = std::min(pick, members.size() - 1);
    out[i] = member_predictions[pick][i];
  }
  return out;
}

double ErrorOf(const Eigen::Ref<const Eigen::VectorXd>& predictions,
               const Eigen::Ref<const Eigen::VectorXd>& labels) {
  if (predictions.size() != labels.size() || labels.size() == 0) {
    throw Error(ErrorKind::kArgument, "predictions and labels differ in length");
  }
  const Eigen::ArrayXd p = predictions.array();
  const Eigen::ArrayXd y = labels.array();
  return (p * (1.0 - y) + (1.0 - p) * y).sum() / static_cast<double>(labels.size());
}

double DpViolation(const Eigen::Ref<const Eigen::VectorXd>& predictions,
                   const std::vector<int>& group) {
  if (static_cast<Eigen::Index>(group.size()) != predictions.size() || group.empty()) {
    throw Error(ErrorKind::kArgument, "predictions and protected values differ in length");
  }
  std::map<int, std::pair<double, double>> sums;  // group -> (sum, count)
  for (std::size_t i = 0; i < group.size(); ++i) {
    auto& s = sums[group[i]];
    s.first += predictions[static_cast<Eigen::Index>(i)];
    s.second += 1.0;
  }
  const double overall = predictions.mean();
  double worst = 0.0;
  for (const auto& [g, s] : sums) worst = std::max(worst, std::abs(s.first / s.second - overall));
  return worst;
}

double EoViolation(const Eigen::Ref<const Eigen::VectorXd>& predictions,
                   const std::vector<int>& group,
                   const Eigen::Ref<const Eigen::VectorXd>& labels) {
  if (static_cast<Eigen::Index>(group.size()) != predictions.size() ||
      labels.size() != predictions.size()) {
    throw Error(ErrorKind::kArgument, "predictions, protected values and labels differ in length");
  }
  std::map<std::pair<int, int>, std::pair<double, double>> cells;
  double label_sum[2] = {0.0, 0.0};
  double label_count[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < group.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const int y = labels[r] != 0.0 ? 1 : 0;
    auto& c = cells[{group[i], y}];
    c.first += predictions[r];
    c.second += 1.0;
    label_sum[y] += predictions[r];
    label_count[y] += 1.0;
  }
  if (label_count[0] == 0.0 || label_count[1] == 0.0) {
    throw Error(ErrorKind::kDegenerateData, "equalized odds needs both label values");
  }
  double worst = 0.0;
  for (const auto& [key, c] : cells) {
    const int y = key.second;
    worst = std::max(worst, std::abs(c.first / c.second - label_sum[y] / label_count[y]));
  }
  return worst;
}

std::vector<std::size_t> ParetoIndices(const std::vector<TradeoffPoint>& points) {
  std::vector<std::size_t> frontier;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
      const TradeoffPoint& a = points[j];
      const TradeoffPoint& b = points[i];
      dominated = a.error <= b.error && a.violation <= b.violation &&
                  (a.error < b.error || a.violation < b.violation);
    }
    if (!dominated) frontier.push_back(i);
  }
  std::stable_sort(frontier.begin(), frontier.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].violation != points[b].violation) {
      return points[a].violation < points[b].violation;
    }
    return points[a].error < points[b].error;
  });
  return frontier;
}

}  // namespace fairred
