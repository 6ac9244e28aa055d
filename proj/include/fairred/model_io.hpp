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

// Saved randomized-classifier artifact.
//
//   fairred-model 1
//   learner <kind>
//   label <column>
//   protected <column>
//   categorical <csv list>
//   drop <csv list>
//   split <test fraction> <seed>
//   features <d>
//   feature <name>              (d lines)
//   standardize <d>
//   <mean> <scale>              (d lines)
//   members <m>
//   <weight> <classifier record> (m lines)
//   end
//
// Numbers are written in shortest round-trip form, so Write followed by Read
// reproduces every double bit for bit.

#ifndef FAIRRED_MODEL_IO_HPP_
#define FAIRRED_MODEL_IO_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fairred/data.hpp"
#include "fairred/evaluate.hpp"

namespace fairred {

struct ModelArtifact {
  std::string learner = "logistic";
  DatasetSchema schema;
  double test_fraction = 0.25;
  std::uint64_t split_seed = 0;
  std::vector<std::string> feature_names;
  Standardizer standardizer;
  RandomizedClassifier ensemble;
};

void WriteModel(std::ostream& out, const ModelArtifact& model);
void SaveModel(const std::string& path, const ModelArtifact& model);
// Throws Error(kArtifact) on any malformed content.
ModelArtifact ReadModel(std::istream& in);
ModelArtifact LoadModel(const std::string& path);

// Expected predictions on raw (unstandardized) rows. Throws
// Error(kCompatibility) naming the first feature that differs.
Eigen::VectorXd PredictExpected(const ModelArtifact& model, const TrainingSet& raw);

}  // namespace fairred

#endif  // FAIRRED_MODEL_IO_HPP_
