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

// Small hand-checkable datasets and brute-force reference computations.
// Nothing here calls into the library's moment, cost or metric code.

#ifndef FAIRRED_TESTS_FIXTURES_HPP_
#define FAIRRED_TESTS_FIXTURES_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fairred/data.hpp"

namespace fixtures {

// Rows (x, a, y): (0,a,0) (0,a,0) (1,b,1) (0,b,1).
inline fairred::TrainingSet D4() {
  Eigen::MatrixXd x(4, 1);
  x << 0, 0, 1, 0;
  return fairred::MakeTrainingSet(x, {"a", "a", "b", "b"}, {0, 0, 1, 1}, {"x"});
}

// Rows (x, a, y): (0,a,0) (1,a,1) (0,b,0) (1,b,1) (1,a,0) (0,b,1).
inline fairred::TrainingSet D6() {
  Eigen::MatrixXd x(6, 1);
  x << 0, 1, 0, 1, 1, 0;
  return fairred::MakeTrainingSet(x, {"a", "a", "b", "b", "a", "b"}, {0, 1, 0, 1, 0, 1}, {"x"});
}

inline Eigen::VectorXd Threshold(const fairred::TrainingSet& ts, double t) {
  Eigen::VectorXd h(ts.size());
  for (Eigen::Index i = 0; i < ts.size(); ++i) h[i] = ts.features(i, 0) >= t ? 1.0 : 0.0;
  return h;
}

// Mean of pred over rows satisfying keep(i).
template <typename Keep>
double MeanWhere(const Eigen::VectorXd& pred, Keep keep) {
  double sum = 0.0;
  int count = 0;
  for (Eigen::Index i = 0; i < pred.size(); ++i) {
    if (keep(i)) {
      sum += pred[i];
      ++count;
    }
  }
  return count ? sum / count : std::nan("");
}

inline double Error(const Eigen::VectorXd& pred, const fairred::TrainingSet& ts) {
  double e = 0.0;
  for (Eigen::Index i = 0; i < ts.size(); ++i) {
    e += ts.labels[i] == 1.0 ? 1.0 - pred[i] : pred[i];
  }
  return e / static_cast<double>(ts.size());
}

inline double DpGap(const Eigen::VectorXd& pred, const fairred::TrainingSet& ts) {
  const double all = MeanWhere(pred, [](Eigen::Index) { return true; });
  double worst = 0.0;
  for (int a = 0; a < ts.num_groups(); ++a) {
    const double m = MeanWhere(pred, [&](Eigen::Index i) { return ts.group[i] == a; });
    if (!std::isnan(m)) worst = std::max(worst, std::abs(m - all));
  }
  return worst;
}

inline double EoGap(const Eigen::VectorXd& pred, const fairred::TrainingSet& ts) {
  double worst = 0.0;
  for (int y = 0; y < 2; ++y) {
    const double all = MeanWhere(pred, [&](Eigen::Index i) { return ts.labels[i] == y; });
    for (int a = 0; a < ts.num_groups(); ++a) {
      const double m = MeanWhere(
          pred, [&](Eigen::Index i) { return ts.group[i] == a && ts.labels[i] == y; });
      if (!std::isnan(m)) worst = std::max(worst, std::abs(m - all));
    }
  }
  return worst;
}

inline double Share(const fairred::TrainingSet& ts, int a) {
  return static_cast<double>(std::count(ts.group.begin(), ts.group.end(), a)) /
         static_cast<double>(ts.size());
}

// Closed-form DP costs: C0 = 1{y != 0}, C1 = 1{y != 1} + l_A / p_A - sum_a l_a
// with l_a = lambda(a,+) - lambda(a,-). lambda is indexed (group, sign).
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> DpCosts(
    const fairred::TrainingSet& ts, const std::vector<std::pair<double, double>>& lambda) {
  const auto n = ts.size();
  Eigen::VectorXd c0(n), c1(n);
  double total = 0.0;
  for (const auto& [plus, minus] : lambda) total += plus - minus;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int a = ts.group[i];
    const double la = lambda[a].first - lambda[a].second;
    c0[i] = ts.labels[i] == 0.0 ? 0.0 : 1.0;
    c1[i] = (ts.labels[i] == 1.0 ? 0.0 : 1.0) + la / Share(ts, a) - total;
  }
  return {c0, c1};
}

// Closed-form EO costs: C1 = 1{y != 1} + l_(A,Y) / p_(A,Y) - sum_a l_(a,Y) / p_(*,Y),
// with p_(a,y) = P(A=a, Y=y) and p_(*,y) = P(Y=y). lambda is keyed by (a, y)
// and holds the net (+ minus -) multiplier.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> EoCosts(
    const fairred::TrainingSet& ts, const std::map<std::pair<int, int>, double>& lambda) {
  const auto n = ts.size();
  auto p_cell = [&](int a, int y) {
    double c = 0;
    for (Eigen::Index i = 0; i < n; ++i) c += (ts.group[i] == a && ts.labels[i] == y);
    return c / static_cast<double>(n);
  };
  auto p_label = [&](int y) {
    double c = 0;
    for (Eigen::Index i = 0; i < n; ++i) c += ts.labels[i] == y;
    return c / static_cast<double>(n);
  };
  Eigen::VectorXd c0(n), c1(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int a = ts.group[i];
    const int y = static_cast<int>(ts.labels[i]);
    double sum = 0.0;
    for (const auto& [key, value] : lambda) {
      if (key.second == y) sum += value;
    }
    const auto it = lambda.find({a, y});
    const double own = it == lambda.end() ? 0.0 : it->second;
    c0[i] = y == 0 ? 0.0 : 1.0;
    c1[i] = (y == 1 ? 0.0 : 1.0) + own / p_cell(a, y) - sum / p_label(y);
  }
  return {c0, c1};
}

// Every threshold rule on feature 0 (both polarities) plus both constants.
inline std::vector<Eigen::VectorXd> EnumerateThresholdRules(const fairred::TrainingSet& ts) {
  std::vector<double> values(ts.features.col(0).data(),
                             ts.features.col(0).data() + ts.size());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<double> cuts = {-INFINITY};
  for (std::size_t k = 0; k + 1 < values.size(); ++k) cuts.push_back(0.5 * (values[k] + values[k + 1]));
  cuts.push_back(INFINITY);
  std::vector<Eigen::VectorXd> rules;
  for (double t : cuts) {
    Eigen::VectorXd ge = Threshold(ts, t);
    rules.push_back(ge);
    rules.push_back(Eigen::VectorXd::Ones(ts.size()) - ge);
  }
  return rules;
}

}  // namespace fixtures

#endif  // FAIRRED_TESTS_FIXTURES_HPP_
