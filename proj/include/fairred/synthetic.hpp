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

// Seeded synthetic datasets for examples and tests.

#ifndef FAIRRED_SYNTHETIC_HPP_
#define FAIRRED_SYNTHETIC_HPP_

#include <cstdint>

#include "fairred/csv.hpp"
#include "fairred/data.hpp"

namespace fairred {

// Census-style table: age, workclass, education_num, marital, hours_per_week,
// capital_gain, sex, race, income. Roughly two thirds of rows are "Male"; the
// positive rate of income (">50K") is about three times higher for them.
// Load with label=income, protected=sex, categorical=workclass,marital,race.
csv::Table SyntheticAdult(Eigen::Index n, std::uint64_t seed);

// Numeric features x1, x2 and a group indicator; groups "a" and "b" (plus
// "c" when groups == 3). x1 is shifted by group and the label depends on x1,
// so an unconstrained fit has a clear demographic-parity gap.
TrainingSet SyntheticDisparity(Eigen::Index n, std::uint64_t seed, int groups = 2);

}  // namespace fairred

#endif  // FAIRRED_SYNTHETIC_HPP_
