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

#include <functional>
#include <optional>
#include <sstream>

#include "doctest.h"
#include "fairred/error.hpp"
#include "fairred/expgrad.hpp"
#include "fairred/model_io.hpp"
#include "fairred/moments.hpp"
#include "fairred/synthetic.hpp"

using namespace fairred;

namespace {

std::optional<ErrorKind> KindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

ModelArtifact Trained() {
  const TrainingSet raw = SyntheticDisparity(300, 4);
  const Standardizer st = Standardizer::Fit(raw);
  const TrainingSet ts = st.Apply(raw);
  SolverConfig cfg;
  cfg.bound = 5;
  cfg.nu = 0.01;
  cfg.eta = 0.5;
  cfg.max_iter = 200;
  const ConstraintSystem cs = BuildDemographicParity(ts).WithUniformEpsilon(0.02);
  ModelArtifact m;
  m.learner = "logistic";
  m.schema = {"y", "group", {"colour"}, {"id", "note, quoted"}};
  m.test_fraction = 0.3;
  m.split_seed = 12345678901234ull;
  m.feature_names = ts.feature_names;
  m.standardizer = st;
  m.ensemble = Solve(ts, cs, cfg).ensemble;
  return m;
}

std::string Text(const ModelArtifact& m) {
  std::ostringstream out;
  WriteModel(out, m);
  return out.str();
}

ModelArtifact FromText(const std::string& text) {
  std::istringstream in(text);
  return ReadModel(in);
}

}  // namespace

TEST_CASE("model round trip is exact") {
  const ModelArtifact m = Trained();
  REQUIRE(m.ensemble.members().size() >= 1);
  const std::string text = Text(m);
  const ModelArtifact back = FromText(text);
  CHECK(Text(back) == text);
  CHECK(back.learner == m.learner);
  CHECK(back.schema.label_column == "y");
  CHECK(back.schema.categorical_columns == m.schema.categorical_columns);
  CHECK(back.schema.drop_columns == m.schema.drop_columns);
  CHECK(back.test_fraction == m.test_fraction);
  CHECK(back.split_seed == m.split_seed);
  CHECK(back.feature_names == m.feature_names);
  CHECK(back.standardizer.mean == m.standardizer.mean);
  CHECK(back.standardizer.scale == m.standardizer.scale);

  const TrainingSet raw = SyntheticDisparity(300, 4);
  CHECK(PredictExpected(back, raw) == PredictExpected(m, raw));
}

TEST_CASE("every learner kind survives a round trip") {
  ModelArtifact m;
  m.feature_names = {"a", "b"};
  m.standardizer = Standardizer::Identity(2);
  m.standardizer.mean[0] = 0.1;
  m.standardizer.scale[0] = 3.0 / 7.0;
  m.ensemble.Add(BaseClassifier(LogisticModel{Eigen::Vector2d(1.0 / 3, -2e-300), 0.7}, 2), 1.0 / 3);
  m.ensemble.Add(BaseClassifier(BoostedStumps{{{1, 0.25, -1.0, 1.0, 0.1}, {0, -1e10, 1.0, -1.0, 2}}}, 2),
                 0.2);
  m.ensemble.Add(BaseClassifier(ThresholdRule{1, -0.5, false}, 2), 0.3);
  m.ensemble.Add(BaseClassifier(ConstantRule{0}, 2), 1e-17);
  const std::string text = Text(m);
  const ModelArtifact back = FromText(text);
  CHECK(Text(back) == text);
  REQUIRE(back.ensemble.members().size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(back.ensemble.members()[i].classifier == m.ensemble.members()[i].classifier);
    CHECK(back.ensemble.members()[i].weight == m.ensemble.members()[i].weight);
  }
}

TEST_CASE("corrupt model files are rejected") {
  const std::string good = Text(Trained());
  CHECK(KindOf([] { FromText(""); }) == ErrorKind::kArtifact);
  CHECK(KindOf([] { FromText("hello\n"); }) == ErrorKind::kArtifact);
  CHECK(KindOf([&] { FromText(good.substr(0, good.size() / 2)); }) == ErrorKind::kArtifact);
  CHECK(KindOf([&] { FromText(good.substr(0, good.size() - 4)); }) == ErrorKind::kArtifact);

  std::string bad = good;
  bad.replace(bad.find("split 0.3"), 9, "split x.3");
  CHECK(KindOf([&] { FromText(bad); }) == ErrorKind::kArtifact);

  bad = good;
  bad.replace(bad.find("features 3"), 10, "features 4");
  CHECK(KindOf([&] { FromText(bad); }) == ErrorKind::kArtifact);

  bad = good;
  const auto members = bad.find("members ");
  const auto line = bad.find('\n', members) + 1;
  bad.replace(line, bad.find(' ', line) - line, "-1");
  CHECK(KindOf([&] { FromText(bad); }) == ErrorKind::kArtifact);

  bad = good;
  bad.replace(bad.find(' ', line) + 1, 3, "zzz");
  CHECK(KindOf([&] { FromText(bad); }) == ErrorKind::kArtifact);

  CHECK(KindOf([] { LoadModel("/nonexistent/model.txt"); }) == ErrorKind::kArtifact);
}

TEST_CASE("feature mismatch is a compatibility error") {
  const ModelArtifact m = Trained();
  TrainingSet other = SyntheticDisparity(20, 5);
  other.feature_names[1] = "renamed";
  try {
    PredictExpected(m, other);
    FAIL("expected a compatibility error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kCompatibility);
    CHECK(std::string(e.what()).find("renamed") != std::string::npos);
  }
  const TrainingSet narrow =
      MakeTrainingSet(Eigen::MatrixXd::Zero(2, 2), {"a", "b"}, {0, 1}, {"x1", "x2"});
  CHECK(KindOf([&] { PredictExpected(m, narrow); }) == ErrorKind::kCompatibility);
}

TEST_CASE("names with line breaks cannot be written") {
  ModelArtifact m;
  m.feature_names = {"a\nb"};
  m.standardizer = Standardizer::Identity(1);
  m.ensemble.Add(BaseClassifier(ConstantRule{1}, 1), 1.0);
  CHECK(KindOf([&] { Text(m); }) == ErrorKind::kArgument);
}
