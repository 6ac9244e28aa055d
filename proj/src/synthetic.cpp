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

#include "fairred/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fairred/error.hpp"
#include "fairred/random.hpp"

namespace fairred {

namespace {

double Clip(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

std::string Integer(double v) { return std::to_string(static_cast<long long>(std::lround(v))); }

double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

csv::Table SyntheticAdult(Eigen::Index n, std::uint64_t seed) {
  if (n <= 0) throw Error(ErrorKind::kArgument, "row count must be positive");
  Rng rng(seed);
  csv::Table table;
  table.header = {"age",      "workclass",    "education_num", "marital", "hours_per_week",
                  "capital_gain", "sex", "race", "income"};
  table.rows.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool male = UniformUnit(rng) < 0.67;
    const bool white = UniformUnit(rng) < 0.85;
    const double age = Clip(38.0 + 13.0 * StandardNormal(rng), 17.0, 90.0);
    const double edu = Clip(10.0 + 2.5 * StandardNormal(rng), 1.0, 16.0);
    const double hours =
        Clip((male ? 42.0 : 36.0) + 11.0 * StandardNormal(rng), 1.0, 99.0);

    const double u_work = UniformUnit(rng);
    const char* work = u_work < 0.72 ? "Private" : (u_work < 0.86 ? "Self-emp" : "Gov");

    const double married_p = (age < 25.0 ? 0.1 : (male ? 0.62 : 0.28));
    const double u_mar = UniformUnit(rng);
    const char* marital =
        u_mar < married_p ? "Married" : (u_mar < married_p + 0.5 * (1.0 - married_p)
                                             ? "Never-married"
                                             : "Divorced");
    const bool married = std::string(marital) == "Married";

    double gain = 0.0;
    if (UniformUnit(rng) < 0.08) gain = std::exp(8.0 + 1.0 * StandardNormal(rng));

    const double z = -9.0 + 0.33 * edu + 0.025 * age + 0.03 * hours + 1.9 * (married ? 1.0 : 0.0) +
                     0.7 * (male ? 1.0 : 0.0) + 0.2 * (white ? 1.0 : 0.0) +
                     (gain > 0.0 ? 1.5 : 0.0) + (std::string(work) == "Self-emp" ? 0.3 : 0.0);
    const bool rich = UniformUnit(rng) < Sigmoid(z);

    table.rows.push_back({Integer(age), work, Integer(edu), marital, Integer(hours),
                          Integer(gain), male ? "Male" : "Female",
                          white ? "White" : "Non-white", rich ? ">50K" : "<=50K"});
  }
  return table;
}

TrainingSet SyntheticDisparity(Eigen::Index n, std::uint64_t seed, int groups) {
  if (n <= 0) throw Error(ErrorKind::kArgument, "row count must be positive");
  if (groups != 2 && groups != 3) throw Error(ErrorKind::kArgument, "groups must be 2 or 3");
  Rng rng(seed);
  Eigen::MatrixXd x(n, 3);
  std::vector<std::string> protect(static_cast<std::size_t>(n));
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = UniformUnit(rng);
    int g = u < 0.6 ? 0 : 1;
    if (groups == 3 && u >= 0.85) g = 2;
    const double shift = g == 0 ? 0.6 : (g == 1 ? -0.6 : 0.0);
    const double x1 = shift + StandardNormal(rng);
    const double x2 = StandardNormal(rng);
    const double noise = StandardNormal(rng);
    x(i, 0) = x1;
    x(i, 1) = x2;
    x(i, 2) = g == 0 ? 1.0 : 0.0;
    protect[static_cast<std::size_t>(i)] = std::string(1, static_cast<char>('a' + g));
    labels[static_cast<std::size_t>(i)] = (1.2 * x1 + 0.5 * x2 + 0.6 * noise > 0.0) ? 1 : 0;
  }
  return MakeTrainingSet(std::move(x), protect, labels, {"x1", "x2", "is_a"});
}

}  // namespace fairred
