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

#include "fairred/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

#include "fairred/csv.hpp"
#include "fairred/error.hpp"
#include "fairred/random.hpp"

namespace fairred {

namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

bool ParseDouble(std::string_view text, double& out) {
  text = Trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

// Maps label tokens to {0, 1}: numeric 0/1 tokens keep their value, otherwise
// exactly two distinct tokens are ordered lexicographically.
std::vector<std::string> LabelTokens(const std::vector<std::string>& cells) {
  std::set<std::string> distinct;
  for (const auto& cell : cells) distinct.insert(std::string(Trim(cell)));

  bool numeric = true;
  std::string zero, one;
  for (const auto& token : distinct) {
    double v;
    if (!ParseDouble(token, v) || (v != 0.0 && v != 1.0)) {
      numeric = false;
      break;
    }
  }
  if (numeric) return {"0", "1"};
  if (distinct.size() != 2) {
    throw Error(ErrorKind::kParse,
                "label column must hold 0/1 values or exactly two distinct tokens, found " +
                    std::to_string(distinct.size()));
  }
  return {*distinct.begin(), *std::next(distinct.begin())};
}

double LabelValue(const std::string& cell, const std::vector<std::string>& tokens,
                  std::size_t row) {
  const std::string_view t = Trim(cell);
  if (tokens[0] == "0" && tokens[1] == "1") {
    double v;
    if (ParseDouble(t, v)) return v;
  }
  if (t == tokens[0]) return 0.0;
  if (t == tokens[1]) return 1.0;
  throw Error(ErrorKind::kParse, "unrecognised label at row " + std::to_string(row));
}

}  // namespace

bool operator==(const TrainingSet& a, const TrainingSet& b) {
  return a.features.rows() == b.features.rows() && a.features.cols() == b.features.cols() &&
         a.features == b.features && a.group == b.group && a.labels == b.labels &&
         a.feature_names == b.feature_names && a.attribute_values == b.attribute_values &&
         a.label_name == b.label_name && a.protected_name == b.protected_name &&
         a.label_tokens == b.label_tokens && a.columns == b.columns;
}

void Validate(const TrainingSet& ts) {
  const Eigen::Index n = ts.labels.size();
  if (n < 1) throw Error(ErrorKind::kArgument, "training set has no rows");
  if (ts.features.rows() != n || static_cast<Eigen::Index>(ts.group.size()) != n) {
    throw Error(ErrorKind::kArgument, "features, protected and labels differ in length");
  }
  if (static_cast<Eigen::Index>(ts.feature_names.size()) != ts.features.cols()) {
    throw Error(ErrorKind::kArgument, "feature_names does not match feature count");
  }
  if (ts.attribute_values.empty()) {
    throw Error(ErrorKind::kArgument, "attribute_values is empty");
  }
  for (int g : ts.group) {
    if (g < 0 || g >= static_cast<int>(ts.attribute_values.size())) {
      throw Error(ErrorKind::kArgument, "protected value outside attribute_values");
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (ts.labels[i] != 0.0 && ts.labels[i] != 1.0) {
      throw Error(ErrorKind::kArgument, "label at row " + std::to_string(i) + " is not 0/1");
    }
  }
  if (!ts.features.allFinite()) {
    throw Error(ErrorKind::kNumeric, "features contain non-finite values");
  }
}

void Validate(const DatasetSchema& schema) {
  if (schema.label_column.empty()) throw Error(ErrorKind::kUsage, "label column not set");
  if (schema.protected_column.empty()) {
    throw Error(ErrorKind::kUsage, "protected column not set");
  }
  if (schema.label_column == schema.protected_column) {
    throw Error(ErrorKind::kSchema, "label and protected column are the same");
  }
  std::set<std::string> seen{schema.label_column, schema.protected_column};
  bool protected_listed = false;
  for (const auto& col : schema.categorical_columns) {
    if (col == schema.protected_column && !protected_listed) {
      protected_listed = true;
      continue;
    }
    if (!seen.insert(col).second) {
      throw Error(ErrorKind::kSchema, "column listed twice: " + col);
    }
  }
  for (const auto& col : schema.drop_columns) {
    if (!seen.insert(col).second) {
      throw Error(ErrorKind::kSchema, "column listed twice: " + col);
    }
  }
}

TrainingSet MakeTrainingSet(Eigen::MatrixXd features,
                            const std::vector<std::string>& protected_values,
                            const std::vector<int>& labels,
                            std::vector<std::string> feature_names) {
  TrainingSet ts;
  const auto n = static_cast<Eigen::Index>(labels.size());
  ts.features = std::move(features);
  ts.labels.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) ts.labels[i] = labels[static_cast<std::size_t>(i)];
  std::unordered_map<std::string, int> index;
  for (const auto& v : protected_values) {
    auto [it, inserted] = index.try_emplace(v, static_cast<int>(ts.attribute_values.size()));
    if (inserted) ts.attribute_values.push_back(v);
    ts.group.push_back(it->second);
  }
  if (feature_names.empty()) {
    for (Eigen::Index j = 0; j < ts.features.cols(); ++j) {
      feature_names.push_back("x" + std::to_string(j));
    }
  }
  ts.feature_names = std::move(feature_names);
  for (Eigen::Index j = 0; j < ts.features.cols(); ++j) {
    ts.columns.push_back({ts.feature_names[static_cast<std::size_t>(j)],
                          SourceColumn::Role::kNumeric, {}, j});
  }
  // The protected value is carried outside the features here.
  ts.columns.push_back({ts.protected_name, SourceColumn::Role::kProtected, ts.attribute_values, -1});
  ts.columns.push_back({ts.label_name, SourceColumn::Role::kLabel, {}, -1});
  Validate(ts);
  return ts;
}

TrainingSet ReadCsv(std::istream& in, const DatasetSchema& schema) {
  Validate(schema);
  csv::Table table = csv::Read(in);
  const std::size_t n = table.rows.size();
  if (n == 0) throw Error(ErrorKind::kEmptyInput, "CSV has a header but no data rows");

  std::map<std::string, std::size_t> position;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (!position.emplace(std::string(Trim(table.header[c])), c).second) {
      throw Error(ErrorKind::kSchema, "duplicate column in header: " + table.header[c]);
    }
  }
  auto require = [&](const std::string& name) {
    if (!position.count(name)) throw Error(ErrorKind::kSchema, "missing column: " + name);
  };
  require(schema.label_column);
  require(schema.protected_column);
  for (const auto& col : schema.categorical_columns) require(col);

  const std::set<std::string> categorical(schema.categorical_columns.begin(),
                                          schema.categorical_columns.end());
  const std::set<std::string> dropped(schema.drop_columns.begin(), schema.drop_columns.end());

  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (dropped.count(std::string(Trim(table.header[c])))) continue;
      if (Trim(table.rows[r][c]).empty()) {
        throw Error(ErrorKind::kParse, "missing value at row " + std::to_string(r) +
                                           ", column " + table.header[c]);
      }
    }
  }

  TrainingSet ts;
  ts.label_name = schema.label_column;
  ts.protected_name = schema.protected_column;

  // First pass: roles and category dictionaries.
  Eigen::Index width = 0;
  std::vector<std::size_t> source_index;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const std::string name(Trim(table.header[c]));
    if (dropped.count(name)) continue;
    SourceColumn col;
    col.name = name;
    if (name == schema.label_column) {
      col.role = SourceColumn::Role::kLabel;
    } else {
      const bool is_protected = name == schema.protected_column;
      col.role = is_protected ? SourceColumn::Role::kProtected
                 : categorical.count(name) ? SourceColumn::Role::kCategorical
                                           : SourceColumn::Role::kNumeric;
      col.offset = width;
      if (col.role == SourceColumn::Role::kNumeric) {
        ++width;
      } else {
        std::unordered_map<std::string, int> seen;
        for (const auto& row : table.rows) {
          std::string token(Trim(row[c]));
          if (seen.try_emplace(token, static_cast<int>(seen.size())).second) {
            col.categories.push_back(std::move(token));
          }
        }
        width += static_cast<Eigen::Index>(col.categories.size());
      }
    }
    ts.columns.push_back(std::move(col));
    source_index.push_back(c);
  }

  ts.features = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), width);
  ts.labels.resize(static_cast<Eigen::Index>(n));
  ts.group.resize(n);
  ts.feature_names.resize(static_cast<std::size_t>(width));

  for (std::size_t k = 0; k < ts.columns.size(); ++k) {
    const SourceColumn& col = ts.columns[k];
    const std::size_t c = source_index[k];
    switch (col.role) {
      case SourceColumn::Role::kLabel: {
        std::vector<std::string> cells;
        cells.reserve(n);
        for (const auto& row : table.rows) cells.push_back(row[c]);
        ts.label_tokens = LabelTokens(cells);
        for (std::size_t r = 0; r < n; ++r) {
          ts.labels[static_cast<Eigen::Index>(r)] = LabelValue(cells[r], ts.label_tokens, r);
        }
        break;
      }
      case SourceColumn::Role::kNumeric: {
        ts.feature_names[static_cast<std::size_t>(col.offset)] = col.name;
        for (std::size_t r = 0; r < n; ++r) {
          double v;
          if (!ParseDouble(table.rows[r][c], v)) {
            throw Error(ErrorKind::kParse, "cannot parse number at row " + std::to_string(r) +
                                               ", column " + col.name + ": '" +
                                               table.rows[r][c] + "'");
          }
          ts.features(static_cast<Eigen::Index>(r), col.offset) = v;
        }
        break;
      }
      case SourceColumn::Role::kCategorical:
      case SourceColumn::Role::kProtected: {
        std::unordered_map<std::string, int> index;
        for (std::size_t v = 0; v < col.categories.size(); ++v) {
          index.emplace(col.categories[v], static_cast<int>(v));
          ts.feature_names[static_cast<std::size_t>(col.offset) + v] =
              col.name + "=" + col.categories[v];
        }
        for (std::size_t r = 0; r < n; ++r) {
          const int v = index.at(std::string(Trim(table.rows[r][c])));
          ts.features(static_cast<Eigen::Index>(r), col.offset + v) = 1.0;
          if (col.role == SourceColumn::Role::kProtected) ts.group[r] = v;
        }
        if (col.role == SourceColumn::Role::kProtected) ts.attribute_values = col.categories;
        break;
      }
    }
  }
  Validate(ts);
  return ts;
}

TrainingSet LoadCsv(const std::string& path, const DatasetSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kArgument, "cannot open data file: " + path);
  return ReadCsv(in, schema);
}

void WriteCsv(std::ostream& out, const TrainingSet& ts) {
  csv::Row header;
  for (const auto& col : ts.columns) header.push_back(col.name);
  csv::WriteRow(out, header);
  csv::Row row(ts.columns.size());
  for (Eigen::Index i = 0; i < ts.size(); ++i) {
    for (std::size_t k = 0; k < ts.columns.size(); ++k) {
      const SourceColumn& col = ts.columns[k];
      switch (col.role) {
        case SourceColumn::Role::kLabel:
          row[k] = ts.label_tokens[ts.labels[i] != 0.0 ? 1 : 0];
          break;
        case SourceColumn::Role::kNumeric:
          row[k] = csv::FormatDouble(ts.features(i, col.offset));
          break;
        case SourceColumn::Role::kProtected:
          row[k] = ts.protected_value(i);
          break;
        case SourceColumn::Role::kCategorical: {
          Eigen::Index hot = 0;
          ts.features.row(i)
              .segment(col.offset, static_cast<Eigen::Index>(col.categories.size()))
              .maxCoeff(&hot);
          row[k] = col.categories[static_cast<std::size_t>(hot)];
          break;
        }
      }
    }
    csv::WriteRow(out, row);
  }
}

TrainingSet Subset(const TrainingSet& ts, const std::vector<Eigen::Index>& rows) {
  TrainingSet out;
  const auto m = static_cast<Eigen::Index>(rows.size());
  out.features.resize(m, ts.dim());
  out.labels.resize(m);
  out.group.resize(rows.size());
  for (Eigen::Index r = 0; r < m; ++r) {
    const Eigen::Index src = rows[static_cast<std::size_t>(r)];
    out.features.row(r) = ts.features.row(src);
    out.labels[r] = ts.labels[src];
    out.group[static_cast<std::size_t>(r)] = ts.group[static_cast<std::size_t>(src)];
  }
  out.feature_names = ts.feature_names;
  out.attribute_values = ts.attribute_values;
  out.label_name = ts.label_name;
  out.protected_name = ts.protected_name;
  out.label_tokens = ts.label_tokens;
  out.columns = ts.columns;
  return out;
}

SplitIndices SplitRows(const TrainingSet& ts, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorKind::kArgument, "train fraction must lie in (0, 1)");
  }
  const Eigen::Index n = ts.size();
  // The small offset keeps products such as 0.7 * 10 from rounding up.
  const auto n_train = static_cast<Eigen::Index>(
      std::ceil(train_fraction * static_cast<double>(n) - 1e-9));
  if (n_train < 1 || n_train >= n) {
    throw Error(ErrorKind::kArgument, "split of " + std::to_string(n) +
                                          " rows leaves one side empty");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng rng(seed);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[UniformIndex(rng, i + 1)]);
  }

  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + n_train);
  out.test.assign(order.begin() + n_train, order.end());
  for (double y : {0.0, 1.0}) {
    auto has = [&](const std::vector<Eigen::Index>& side) {
      return std::any_of(side.begin(), side.end(), [&](Eigen::Index r) { return ts.labels[r] == y; });
    };
    if (has(out.train)) continue;
    auto donor = std::find_if(out.test.begin(), out.test.end(),
                              [&](Eigen::Index r) { return ts.labels[r] == y; });
    if (donor == out.test.end()) continue;
    // Give the test side a row of the other label, which the train side must
    // then hold in abundance.
    std::swap(out.train.back(), *donor);
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<TrainingSet, TrainingSet> Split(const TrainingSet& ts, double train_fraction,
                                          std::uint64_t seed) {
  const SplitIndices idx = SplitRows(ts, train_fraction, seed);
  return {Subset(ts, idx.train), Subset(ts, idx.test)};
}

Standardizer Standardizer::Identity(Eigen::Index dim) {
  return {Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim)};
}

Standardizer Standardizer::Fit(const TrainingSet& ts) {
  Standardizer s = Identity(ts.dim());
  const auto n = static_cast<double>(ts.size());
  for (const auto& col : ts.columns) {
    if (col.role != SourceColumn::Role::kNumeric || col.offset < 0) continue;
    const auto x = ts.features.col(col.offset);
    const double mean = x.sum() / n;
    const double var = (x.array() - mean).square().sum() / n;
    s.mean[col.offset] = mean;
    s.scale[col.offset] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return s;
}

Eigen::MatrixXd Standardizer::Apply(const Eigen::MatrixXd& features) const {
  if (features.cols() != mean.size()) {
    throw Error(ErrorKind::kArgument, "standardizer dimension mismatch");
  }
  return (features.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

TrainingSet Standardizer::Apply(const TrainingSet& ts) const {
  TrainingSet out = ts;
  out.features = Apply(ts.features);
  return out;
}

bool Standardizer::is_identity() const {
  return (mean.array() == 0.0).all() && (scale.array() == 1.0).all();
}

}  // namespace fairred
