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

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fairred/error.hpp"
#include "fairred/expgrad.hpp"
#include "fairred/synthetic.hpp"
#include "fixtures.hpp"

using namespace fairred;
using doctest::Approx;

namespace {

SolverConfig ThresholdConfig(double bound, double nu, double eta, int max_iter) {
  SolverConfig c;
  c.bound = bound;
  c.nu = nu;
  c.eta = eta;
  c.max_iter = max_iter;
  c.learner.kind = LearnerConfig::Kind::kThreshold1d;
  return c;
}

TrainingSet RandomOneDim(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> v(0, 7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd x(n, 1);
  std::vector<std::string> a;
  std::vector<int> y;
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool b = u(rng) < 0.4;
    x(i, 0) = v(rng) + (b ? -1.0 : 1.0);
    a.push_back(b ? "b" : "a");
    y.push_back(u(rng) < (x(i, 0) > 3.0 ? 0.8 : 0.25) ? 1 : 0);
  }
  y[0] = 0;
  y[1] = 1;
  return MakeTrainingSet(x, a, y, {"x"});
}

double MaxViolation(const ConstraintSystem& cs, const Eigen::VectorXd& pred) {
  return (Gamma(cs, MomentOf(cs, pred)).values - cs.c_hat()).maxCoeff();
}

}  // namespace

TEST_CASE("lambda from theta") {
  const LambdaVector a = LambdaFromTheta({Eigen::Vector3d::Zero()}, 6.0);
  CHECK(a.values == Eigen::Vector3d(1.5, 1.5, 1.5));
  const LambdaVector b = LambdaFromTheta({Eigen::Vector2d(std::log(2.0), 0.0)}, 3.0);
  CHECK(b.values[0] == Approx(1.5));
  CHECK(b.values[1] == Approx(0.75));
  const LambdaVector c = LambdaFromTheta({Eigen::Vector2d(-800.0, -900.0)}, 3.0);
  CHECK(c.values.maxCoeff() < 1e-300);
  const LambdaVector d = LambdaFromTheta({Eigen::Vector2d(800.0, 799.0)}, 3.0);
  CHECK(d.values.allFinite());
  CHECK(d.values.sum() <= 3.0);
  CHECK(d.values[0] / d.values[1] == Approx(std::exp(1.0)));

  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 5.0);
  for (int draw = 0; draw < 100; ++draw) {
    Eigen::VectorXd theta(4);
    for (auto& v : theta) v = g(rng);
    const LambdaVector l = LambdaFromTheta({theta}, 7.0);
    CHECK(l.values.minCoeff() >= 0.0);
    CHECK(l.values.sum() < 7.0);
  }
}

TEST_CASE("theta update") {
  const Eigen::Vector2d zero = Eigen::Vector2d::Zero();
  const GammaVector v{Eigen::Vector2d(0.25, -0.25)};
  CHECK(ThetaUpdate({Eigen::Vector2d(1, 2)}, v, zero, 0.0).values == Eigen::Vector2d(1, 2));
  CHECK(ThetaUpdate({zero}, v, zero, 1.0).values == Eigen::Vector2d(0.25, -0.25));
  const ThetaVector once = ThetaUpdate({zero}, v, zero, 0.5);
  CHECK(ThetaUpdate(once, v, zero, 0.5).values == 2 * 0.5 * v.values);
  CHECK(ThetaUpdate({zero}, v, Eigen::Vector2d(0.25, 0.25), 1.0).values == Eigen::Vector2d(0, -0.5));
}

TEST_CASE("iteration cap") {
  CHECK(IterationCap(2.0, 1.0, 1, 1.0) == 12);
  const double base = 4.0 * 4.0 * 9.0 * std::log(5.0) / 0.01;
  CHECK(IterationCap(2.0, 3.0, 4, 0.1) == static_cast<std::int64_t>(std::ceil(base)));
  CHECK(IterationCap(2.0, 3.0, 4, 0.2) == static_cast<std::int64_t>(std::ceil(base / 4)));
  CHECK(IterationCap(2.0, 6.0, 4, 0.1) == static_cast<std::int64_t>(std::ceil(base * 4)));
  CHECK(IterationCap(2.0, 1e10, 4, 1e-10) == INT64_MAX);
}

TEST_CASE("default config") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(400, 1);
  std::vector<std::string> a(400, "a");
  std::vector<int> y(400, 0);
  for (int i = 0; i < 400; i += 2) {
    a[i] = "b";
    y[i] = 1;
  }
  const TrainingSet ts = MakeTrainingSet(x, a, y);
  const ConstraintSystem cs = BuildDemographicParity(ts);
  const SolverConfig c = DefaultConfig(ts, cs);
  CHECK(c.nu == Approx(0.025));
  CHECK(c.bound == Approx(40.0));
  CHECK(c.eta == Approx(c.nu / (2 * 4 * c.bound)));
  CHECK(c.max_iter == 5000);

  Eigen::MatrixXd x4 = Eigen::MatrixXd::Zero(1600, 1);
  std::vector<std::string> a4(1600, "a");
  std::vector<int> y4(1600, 0);
  y4[0] = 1;
  const TrainingSet big = MakeTrainingSet(x4, a4, y4);
  const SolverConfig c4 = DefaultConfig(big, BuildDemographicParity(big));
  CHECK(c4.bound == Approx(2 * c.bound));
  CHECK(c4.nu == Approx(c.nu / 2));
}

TEST_CASE("invalid solver settings") {
  const TrainingSet d4 = fixtures::D4();
  const ConstraintSystem cs = BuildDemographicParity(d4);
  for (auto bad : {ThresholdConfig(0, 0.1, 0.1, 10), ThresholdConfig(1, -1, 0.1, 10),
                   ThresholdConfig(1, 0.1, NAN, 10), ThresholdConfig(1, 0.1, 0.1, 0)}) {
    try {
      Solve(d4, cs, bad);
      FAIL("accepted a bad config");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kArgument);
    }
  }
}

TEST_CASE("single group converges immediately to the unconstrained fit") {
  Eigen::MatrixXd x(6, 1);
  x << 0, 1, 2, 3, 4, 5;
  const TrainingSet ts = MakeTrainingSet(x, std::vector<std::string>(6, "g"), {0, 0, 1, 0, 1, 1});
  const ConstraintSystem cs = BuildDemographicParity(ts);
  const SaddleResult r = Solve(ts, cs, ThresholdConfig(5, 0.01, 0.1, 100));
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  REQUIRE(r.ensemble.members().size() == 1);
  CHECK(r.train_predictions == fixtures::Threshold(ts, 1.5));
}

TEST_CASE("violation bound on D4") {
  const TrainingSet d4 = fixtures::D4();
  const ConstraintSystem cs = BuildDemographicParity(d4);
  const SaddleResult r = Solve(d4, cs, ThresholdConfig(10, 0.01, 0.2, 5000));
  REQUIRE(r.converged);
  CHECK(MaxViolation(cs, r.train_predictions) <= (1 + 2 * 0.01) / 10 + 1e-9);
}

TEST_CASE("envelope holds at every iteration with an exact learner") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    const TrainingSet ts = RandomOneDim(30 + 5 * trial, rng);
    const ConstraintSystem cs = trial % 2 ? BuildEqualizedOdds(ts) : BuildDemographicParity(ts);
    const SaddleResult r = Solve(ts, cs, ThresholdConfig(2 + trial, 0.02, 0.2, 400));
    for (const GapRecord& g : r.gap_history) CHECK(g.nu_t <= g.envelope);
    CHECK(r.envelope_held());
  }
}

TEST_CASE("result bookkeeping") {
  const TrainingSet ts = SyntheticDisparity(120, 3);
  const ConstraintSystem cs = BuildDemographicParity(ts).WithUniformEpsilon(0.01);
  const SaddleResult r = Solve(ts, cs, ThresholdConfig(4, 1e-6, 0.3, 60));
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 60);
  CHECK(r.gap_history.size() == 60);
  CHECK(r.ensemble.total_weight() == Approx(1.0));
  CHECK(r.ensemble.members().size() < 60);
  CHECK(r.lambda_avg.values.sum() < 4.0);
  CHECK(r.lambda_avg.values.minCoeff() >= 0.0);
  CHECK((PredictExpected(r.ensemble, ts.features) - r.train_predictions).cwiseAbs().maxCoeff() <
        1e-12);
  for (std::size_t i = 0; i < r.gap_history.size(); ++i) {
    CHECK(r.gap_history[i].t == static_cast<int>(i) + 1);
    CHECK(r.gap_history[i].lower <= r.gap_history[i].lagrangian + 1e-12);
    CHECK(r.gap_history[i].upper >= r.gap_history[i].lagrangian - 1e-12);
  }
}

TEST_CASE("solves are bitwise reproducible") {
  const TrainingSet ts = SyntheticDisparity(200, 4);
  const ConstraintSystem cs = BuildEqualizedOdds(ts).WithUniformEpsilon(0.02);
  for (auto kind : {LearnerConfig::Kind::kLogistic, LearnerConfig::Kind::kBoostedStumps}) {
    SolverConfig c = ThresholdConfig(5, 0.005, 0.5, 40);
    c.learner.kind = kind;
    std::ostringstream a, b;
    WriteGapTrace(a, Solve(ts, cs, c).gap_history);
    WriteGapTrace(b, Solve(ts, cs, c).gap_history);
    CHECK(a.str() == b.str());
  }
}

TEST_CASE("gap trace layout") {
  std::ostringstream out;
  WriteGapTrace(out, {GapRecord{1, 0.5, 0.25, 0.75, 0.125, -0.1, 0.3, 2.0}});
  CHECK(out.str() ==
        "t,nu_t,L,L_upper,L_lower,max_violation,error,envelope\n1,0.5,0.25,0.75,0.125,-0.1,0.3,2\n");
}

TEST_CASE("suboptimality and violation bounds with an exact learner") {
  std::mt19937_64 rng(13);
  int checked = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const TrainingSet ts = RandomOneDim(20 + 3 * trial, rng);
    const double eps = 0.02 * (trial % 4);
    const ConstraintSystem cs =
        (trial % 2 ? BuildEqualizedOdds(ts) : BuildDemographicParity(ts)).WithUniformEpsilon(eps);
    const double nu = 0.01;
    const SaddleResult r = Solve(ts, cs, ThresholdConfig(5, nu, 0.5, 5000));
    if (!r.converged) continue;
    ++checked;
    const double err = fixtures::Error(r.train_predictions, ts);
    for (const Eigen::VectorXd& h : fixtures::EnumerateThresholdRules(ts)) {
      if (MaxViolation(cs, h) <= 0.0) CHECK(err <= fixtures::Error(h, ts) + 2 * nu + 1e-9);
    }
    CHECK(MaxViolation(cs, r.train_predictions) <= (1 + 2 * nu) / 5 + 1e-9);
  }
  CHECK(checked >= 10);
}
