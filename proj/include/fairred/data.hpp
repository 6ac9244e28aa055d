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

#ifndef FAIRRED_DATA_HPP_
#define FAIRRED_DATA_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace fairred {

// How one source CSV column maps onto the feature matrix.
struct SourceColumn {
  enum class Role { kNumeric, kCategorical, kLabel, kProtected };

  std::string name;
  Role role = Role::kNumeric;
  // Category tokens in first-appearance order; one indicator feature each.
  std::vector<std::string> categories;
  // First feature column fed by this source column; -1 for the label.
  Eigen::Index offset = -1;

  friend bool operator==(const SourceColumn&, const SourceColumn&) = default;
};

// The (X, A, Y) sample. Immutable once built; share freely across threads.
struct TrainingSet {
  Eigen::MatrixXd features;              // n x d
  std::vector<int> group;                // protected value per row, as index
  Eigen::VectorXd labels;                // 0.0 or 1.0
  std::vector<std::string> feature_names;
  std::vector<std::string> attribute_values;  // first-appearance order

  // Provenance needed to write the set back out as CSV.
  std::string label_name = "label";
  std::string protected_name = "group";
  std::vector<std::string> label_tokens = {"0", "1"};
  std::vector<SourceColumn> columns;

  Eigen::Index size() const { return labels.size(); }
  Eigen::Index dim() const { return features.cols(); }
  Eigen::Index num_groups() const {
    return static_cast<Eigen::Index>(attribute_values.size());
  }
  const std::string& protected_value(Eigen::Index row) const {
    return attribute_values[static_cast<std::size_t>(group[static_cast<std::size_t>(row)])];
  }

  friend bool operator==(const TrainingSet& a, const TrainingSet& b);
};

struct DatasetSchema {
  std::string label_column;
  std::string protected_column;
  std::vector<std::string> categorical_columns;
  std::vector<std::string> drop_columns;
};

// Throws Error(kArgument) when an invariant of TrainingSet does not hold.
void Validate(const TrainingSet& ts);
void Validate(const DatasetSchema& schema);

// Builds a set straight from arrays. Groups are indexed in first-appearance
// order; feature names default to x0, x1, ... and every column is numeric.
TrainingSet MakeTrainingSet(Eigen::MatrixXd features,
                            const std::vector<std::string>& protected_values,
                            const std::vector<int>& labels,
                            std::vector<std::string> feature_names = {});

// Categorical columns, and always the protected column, are one-hot encoded
// in place; other non-dropped columns must be numeric. Row order is kept.
TrainingSet LoadCsv(const std::string& path, const DatasetSchema& schema);
TrainingSet ReadCsv(std::istream& in, const DatasetSchema& schema);

// Inverse of ReadCsv for the retained columns.
void WriteCsv(std::ostream& out, const TrainingSet& ts);

TrainingSet Subset(const TrainingSet& ts, const std::vector<Eigen::Index>& rows);

struct SplitIndices {
  std::vector<Eigen::Index> train;
  std::vector<Eigen::Index> test;
};

// Seeded shuffle into ceil(fraction * n) training rows and the rest; each
// side is returned in ascending row order. If the training side would miss a
// label value the test side has, one row is swapped across.
SplitIndices SplitRows(const TrainingSet& ts, double train_fraction, std::uint64_t seed);
std::pair<TrainingSet, TrainingSet> Split(const TrainingSet& ts, double train_fraction,
                                          std::uint64_t seed);

// Per-feature affine map x -> (x - mean) / scale. Indicator features keep
// mean 0, scale 1.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static Standardizer Identity(Eigen::Index dim);
  // Fits numeric columns only; zero-variance columns get scale 1.
  static Standardizer Fit(const TrainingSet& ts);

  Eigen::MatrixXd Apply(const Eigen::MatrixXd& features) const;
  TrainingSet Apply(const TrainingSet& ts) const;
  bool is_identity() const;
};

}  // namespace fairred

#endif  // FAIRRED_DATA_HPP_
