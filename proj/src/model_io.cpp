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

#include "fairred/model_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fairred/csv.hpp"
#include "fairred/error.hpp"

namespace fairred {

namespace {

constexpr const char* kMagic = "fairred-model 1";

std::string JoinList(const std::vector<std::string>& items) {
  std::ostringstream out;
  csv::WriteRow(out, items);
  std::string line = out.str();
  line.pop_back();
  return line;
}

std::vector<std::string> SplitList(const std::string& text) {
  if (text.empty()) return {};
  std::istringstream in(text + "\n");
  csv::Table table = csv::Read(in);
  return table.header;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::string Next() {
    std::string line;
    if (!std::getline(in_, line)) throw Error(ErrorKind::kArtifact, "model file is truncated");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  // Reads "key value..." and returns the value part.
  std::string Field(const std::string& key) {
    const std::string line = Next();
    if (line == key) return {};
    if (line.rfind(key + " ", 0) != 0) {
      throw Error(ErrorKind::kArtifact, "expected '" + key + "' in model file, got '" + line + "'");
    }
    return line.substr(key.size() + 1);
  }

 private:
  std::istream& in_;
};

double ToDouble(const std::string& token) {
  double v = 0.0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::kArtifact, "bad number in model file: '" + token + "'");
  }
  return v;
}

std::size_t ToCount(const std::string& token) {
  std::size_t v = 0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::kArtifact, "bad count in model file: '" + token + "'");
  }
  return v;
}

void CheckName(const std::string& name) {
  if (name.find_first_of("\r\n") != std::string::npos) {
    throw Error(ErrorKind::kArgument, "names may not contain line breaks: " + name);
  }
}

}  // namespace

void WriteModel(std::ostream& out, const ModelArtifact& model) {
  const auto d = model.feature_names.size();
  if (static_cast<std::size_t>(model.standardizer.mean.size()) != d ||
      static_cast<std::size_t>(model.standardizer.scale.size()) != d) {
    throw Error(ErrorKind::kArgument, "standardizer does not match feature names");
  }
  for (const auto& name : model.feature_names) CheckName(name);
  CheckName(model.schema.label_column);
  CheckName(model.schema.protected_column);

  out << kMagic << '\n';
  out << "learner " << model.learner << '\n';
  out << "label " << model.schema.label_column << '\n';
  out << "protected " << model.schema.protected_column << '\n';
  out << "categorical " << JoinList(model.schema.categorical_columns) << '\n';
  out << "drop " << JoinList(model.schema.drop_columns) << '\n';
  out << "split " << csv::FormatDouble(model.test_fraction) << ' ' << model.split_seed << '\n';
  out << "features " << d << '\n';
  for (const auto& name : model.feature_names) out << "feature " << name << '\n';
  out << "standardize " << d << '\n';
  for (std::size_t j = 0; j < d; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    out << csv::FormatDouble(model.standardizer.mean[jj]) << ' '
        << csv::FormatDouble(model.standardizer.scale[jj]) << '\n';
  }
  out << "members " << model.ensemble.members().size() << '\n';
  for (const auto& m : model.ensemble.members()) {
    out << csv::FormatDouble(m.weight) << ' ' << m.classifier.Serialize() << '\n';
  }
  out << "end\n";
}

void SaveModel(const std::string& path, const ModelArtifact& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kArgument, "cannot write model file: " + path);
  WriteModel(out, model);
}

ModelArtifact ReadModel(std::istream& in) {
  LineReader reader(in);
  if (reader.Next() != kMagic) throw Error(ErrorKind::kArtifact, "not a fairred model file");
  ModelArtifact model;
  try {
    model.learner = reader.Field("learner");
    model.schema.label_column = reader.Field("label");
    model.schema.protected_column = reader.Field("protected");
    model.schema.categorical_columns = SplitList(reader.Field("categorical"));
    model.schema.drop_columns = SplitList(reader.Field("drop"));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kArtifact) throw;
    throw Error(ErrorKind::kArtifact, std::string("bad column list: ") + e.what());
  }
  {
    std::istringstream split(reader.Field("split"));
    std::string frac, seed;
    split >> frac >> seed;
    model.test_fraction = ToDouble(frac);
    model.split_seed = ToCount(seed);
  }
  const std::size_t d = ToCount(reader.Field("features"));
  for (std::size_t j = 0; j < d; ++j) model.feature_names.push_back(reader.Field("feature"));
  if (ToCount(reader.Field("standardize")) != d) {
    throw Error(ErrorKind::kArtifact, "standardize block size differs from feature count");
  }
  model.standardizer = Standardizer::Identity(static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j) {
    std::istringstream line(reader.Next());
    std::string mean, scale, extra;
    line >> mean >> scale;
    if (line >> extra) throw Error(ErrorKind::kArtifact, "trailing data in standardize line");
    model.standardizer.mean[static_cast<Eigen::Index>(j)] = ToDouble(mean);
    model.standardizer.scale[static_cast<Eigen::Index>(j)] = ToDouble(scale);
  }
  const std::size_t members = ToCount(reader.Field("members"));
  if (members == 0) throw Error(ErrorKind::kArtifact, "model has no members");
  for (std::size_t m = 0; m < members; ++m) {
    const std::string line = reader.Next();
    const auto space = line.find(' ');
    if (space == std::string::npos) throw Error(ErrorKind::kArtifact, "bad member line");
    const double weight = ToDouble(line.substr(0, space));
    BaseClassifier h = BaseClassifier::Parse(std::string_view(line).substr(space + 1));
    if (h.dim() != static_cast<Eigen::Index>(d)) {
      throw Error(ErrorKind::kArtifact, "member dimension differs from feature count");
    }
    if (!(weight > 0.0)) throw Error(ErrorKind::kArtifact, "member weight must be positive");
    model.ensemble.Add(h, weight);
  }
  if (reader.Next() != "end") throw Error(ErrorKind::kArtifact, "model file lacks 'end'");
  return model;
}

ModelArtifact LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kArtifact, "cannot open model file: " + path);
  return ReadModel(in);
}

Eigen::VectorXd PredictExpected(const ModelArtifact& model, const TrainingSet& raw) {
  const auto& expected = model.feature_names;
  const auto& actual = raw.feature_names;
  for (std::size_t j = 0; j < std::max(expected.size(), actual.size()); ++j) {
    if (j >= expected.size() || j >= actual.size() || expected[j] != actual[j]) {
      throw Error(ErrorKind::kCompatibility,
                  "feature " + std::to_string(j) + " differs: model has '" +
                      (j < expected.size() ? expected[j] : std::string("<none>")) +
                      "', data has '" + (j < actual.size() ? actual[j] : std::string("<none>")) +
                      "'");
    }
  }
  return PredictExpected(model.ensemble, model.standardizer.Apply(raw.features));
}

}  // namespace fairred
