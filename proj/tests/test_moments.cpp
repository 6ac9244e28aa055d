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

#include <random>
#include <sstream>

#include "doctest.h"
#include "fairred/error.hpp"
#include "fairred/moments.hpp"
#include "fairred/synthetic.hpp"
#include "fixtures.hpp"

using namespace fairred;
using doctest::Approx;

namespace {

Eigen::VectorXd RandomPredictions(Eigen::Index n, std::mt19937_64& rng, bool binary) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd p(n);
  for (Eigen::Index i = 0; i < n; ++i) p[i] = binary ? (u(rng) < 0.5 ? 0.0 : 1.0) : u(rng);
  return p;
}

}  // namespace

TEST_CASE("demographic parity system on D4") {
  const ConstraintSystem cs = BuildDemographicParity(fixtures::D4());
  CHECK(cs.kind == ConstraintSystem::Kind::kDemographicParity);
  CHECK(cs.num_moments() == 3);
  CHECK(cs.num_constraints() == 4);
  CHECK(cs.probs[0] == 0.5);
  CHECK(cs.probs[1] == 0.5);
  CHECK(cs.probs[2] == 1.0);
  CHECK(cs.moment_ids == std::vector<std::string>{"a", "b", "*"});
  CHECK(cs.constraint_ids == std::vector<std::string>{"a,+", "a,-", "b,+", "b,-"});
  CHECK(cs.M.row(0) == Eigen::RowVector3d(1, 0, -1));
  CHECK(cs.M.row(1) == Eigen::RowVector3d(-1, 0, 1));
  CHECK(cs.c.isZero());
  CHECK(cs.eps.isZero());
}

TEST_CASE("single group gives two constraints that are always tight") {
  Eigen::MatrixXd x(3, 1);
  x << 0, 1, 2;
  const TrainingSet ts = MakeTrainingSet(x, {"a", "a", "a"}, {0, 1, 1});
  const ConstraintSystem cs = BuildDemographicParity(ts);
  CHECK(cs.num_constraints() == 2);
  std::mt19937_64 rng(3);
  for (int r = 0; r < 20; ++r) {
    const GammaVector g = Gamma(cs, MomentOf(cs, RandomPredictions(3, rng, r % 2 == 0)));
    CHECK(g.values.cwiseAbs().maxCoeff() == Approx(0.0));
  }
}

TEST_CASE("equalized odds system on D6") {
  const ConstraintSystem cs = BuildEqualizedOdds(fixtures::D6());
  CHECK(cs.num_moments() == 6);
  CHECK(cs.num_constraints() == 8);
  CHECK(cs.moment_ids == std::vector<std::string>{"a,0", "a,1", "b,0", "b,1", "*,0", "*,1"});
  CHECK(cs.probs[0] == Approx(1.0 / 3));
  CHECK(cs.probs[1] == Approx(1.0 / 6));
  CHECK(cs.probs[2] == Approx(1.0 / 6));
  CHECK(cs.probs[3] == Approx(1.0 / 3));
  CHECK(cs.probs[4] == Approx(0.5));
  CHECK(cs.probs[5] == Approx(0.5));
  CHECK(cs.warnings.empty());
}

TEST_CASE("equalized odds on D4 drops the empty cells") {
  const ConstraintSystem cs = BuildEqualizedOdds(fixtures::D4());
  CHECK(cs.moment_ids == std::vector<std::string>{"a,0", "b,1", "*,0", "*,1"});
  CHECK(cs.constraint_ids == std::vector<std::string>{"a,0,+", "a,0,-", "b,1,+", "b,1,-"});
  CHECK(cs.warnings.size() >= 1);
}

TEST_CASE("equalized odds needs both labels") {
  Eigen::MatrixXd x(3, 1);
  x << 0, 1, 2;
  const TrainingSet ts = MakeTrainingSet(x, {"a", "b", "a"}, {0, 0, 0});
  try {
    BuildEqualizedOdds(ts);
    FAIL("expected degenerate-data error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDegenerateData);
  }
}

TEST_CASE("moments of the threshold rule") {
  const TrainingSet d4 = fixtures::D4();
  const ConstraintSystem dp = BuildDemographicParity(d4);
  const MomentVector mu = MomentOf(dp, fixtures::Threshold(d4, 0.5));
  CHECK(mu.values[0] == 0.0);
  CHECK(mu.values[1] == 0.5);
  CHECK(mu.values[2] == 0.25);
  const GammaVector g = Gamma(dp, mu);
  CHECK(g.values[0] == -0.25);
  CHECK(g.values[1] == 0.25);
  CHECK(g.values[2] == 0.25);
  CHECK(g.values[3] == -0.25);

  const TrainingSet d6 = fixtures::D6();
  const ConstraintSystem eo = BuildEqualizedOdds(d6);
  const MomentVector m6 = MomentOf(eo, fixtures::Threshold(d6, 0.5));
  CHECK(m6.values[0] == Approx(0.5));
  CHECK(m6.values[1] == Approx(1.0));
  CHECK(m6.values[2] == Approx(0.0));
  CHECK(m6.values[3] == Approx(0.5));
  CHECK(m6.values[4] == Approx(1.0 / 3));
  CHECK(m6.values[5] == Approx(2.0 / 3));

  CHECK(MomentOf(dp, Eigen::VectorXd::Ones(4)).values == Eigen::VectorXd::Ones(3));
}

TEST_CASE("moment length mismatch") {
  const ConstraintSystem cs = BuildDemographicParity(fixtures::D4());
  try {
    MomentOf(cs, Eigen::VectorXd::Zero(3));
    FAIL("expected argument error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kArgument);
  }
}

TEST_CASE("gamma of parity and of a zero matrix") {
  ConstraintSystem cs = BuildDemographicParity(fixtures::D6());
  CHECK(Gamma(cs, MomentVector{Eigen::Vector3d(0.4, 0.4, 0.4)}).values.isZero());
  cs.M.setZero();
  CHECK(Gamma(cs, MomentVector{Eigen::Vector3d(0.1, 0.7, 0.3)}).values.isZero());
}

TEST_CASE("default epsilon") {
  const ConstraintSystem cs = BuildDemographicParity(fixtures::D4());
  const Eigen::VectorXd eps = DefaultEpsilon(cs, 1.0, 0.5);
  CHECK(eps[0] == Approx(1.0 / std::sqrt(2.0) + 0.5).epsilon(1e-12));
  CHECK(eps[1] == Approx(eps[0]));
  CHECK(DefaultEpsilon(cs, 0.0, 0.5).isZero());

  Eigen::MatrixXd x(4, 1);
  x << 0, 1, 2, 3;
  const ConstraintSystem one = BuildDemographicParity(MakeTrainingSet(x, {"g", "g", "g", "g"}, {0, 1, 0, 1}));
  CHECK(DefaultEpsilon(one, 0.3, 0.5)[0] == Approx(0.3 * 2.0 / 2.0));
}

TEST_CASE("rho bound") {
  const ConstraintSystem dp = BuildDemographicParity(fixtures::D6());
  CHECK(RhoBound(dp) == 2.0);
  CHECK(RhoBound(dp.WithUniformEpsilon(0.9)) == 2.0);
  CHECK(RhoBound(BuildEqualizedOdds(fixtures::D6())) == 2.0);

  ConstraintSystem generic = dp;
  generic.kind = ConstraintSystem::Kind::kGeneric;
  generic.M = Eigen::MatrixXd::Zero(1, 3);
  generic.M(0, 0) = 1.0;
  generic.M(0, 1) = -1.0;
  generic.c = Eigen::VectorXd::Zero(1);
  generic.eps = Eigen::VectorXd::Zero(1);
  CHECK(RhoBound(generic) == 2.0);
}

TEST_CASE("moment_of is linear in the predictions") {
  const TrainingSet ts = SyntheticDisparity(80, 11);
  const ConstraintSystem eo = BuildEqualizedOdds(ts);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int r = 0; r < 50; ++r) {
    const Eigen::VectorXd p1 = RandomPredictions(80, rng, false);
    const Eigen::VectorXd p2 = RandomPredictions(80, rng, true);
    const double a = u(rng);
    const Eigen::VectorXd lhs = MomentOf(eo, a * p1 + (1 - a) * p2).values;
    const Eigen::VectorXd rhs = a * MomentOf(eo, p1).values + (1 - a) * MomentOf(eo, p2).values;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("dp gamma pairs are exact negatives and bounded by rho") {
  const TrainingSet ts = SyntheticDisparity(60, 2, 3);
  const ConstraintSystem dp = BuildDemographicParity(ts).WithUniformEpsilon(0.05);
  const ConstraintSystem eo = BuildEqualizedOdds(ts);
  std::mt19937_64 rng(8);
  for (int r = 0; r < 100; ++r) {
    const Eigen::VectorXd p = RandomPredictions(60, rng, true);
    const Eigen::VectorXd g = Gamma(dp, MomentOf(dp, p)).values;
    for (Eigen::Index k = 0; k < g.size(); k += 2) CHECK(g[k] == -g[k + 1]);
    CHECK((g - dp.c_hat()).cwiseAbs().maxCoeff() <= RhoBound(dp));
    const Eigen::VectorXd ge = Gamma(eo, MomentOf(eo, p)).values;
    CHECK((ge - eo.c_hat()).cwiseAbs().maxCoeff() <= RhoBound(eo));
  }
}

TEST_CASE("moments match brute-force conditional means") {
  const TrainingSet ts = SyntheticDisparity(90, 4, 3);
  const ConstraintSystem dp = BuildDemographicParity(ts);
  const ConstraintSystem eo = BuildEqualizedOdds(ts);
  std::mt19937_64 rng(21);
  for (int r = 0; r < 20; ++r) {
    const Eigen::VectorXd p = RandomPredictions(90, rng, true);
    const Eigen::VectorXd mu = MomentOf(dp, p).values;
    for (int a = 0; a < ts.num_groups(); ++a) {
      CHECK(mu[a] == Approx(fixtures::MeanWhere(p, [&](Eigen::Index i) { return ts.group[i] == a; })));
    }
    CHECK(mu[ts.num_groups()] == Approx(p.mean()));
    const Eigen::VectorXd me = MomentOf(eo, p).values;
    for (int a = 0; a <= ts.num_groups(); ++a) {
      for (int y = 0; y < 2; ++y) {
        const double brute = fixtures::MeanWhere(p, [&](Eigen::Index i) {
          return (a == ts.num_groups() || ts.group[i] == a) && ts.labels[i] == y;
        });
        CHECK(me[2 * a + y] == Approx(brute));
      }
    }
  }
}

TEST_CASE("restricting rows recomputes counts") {
  const TrainingSet d6 = fixtures::D6();
  const ConstraintSystem cs = BuildDemographicParity(d6);
  const ConstraintSystem sub = RestrictRows(cs, {0, 1, 2});
  CHECK(sub.num_rows() == 3);
  CHECK(sub.counts[0] == 2);
  CHECK(sub.counts[1] == 1);
  CHECK(sub.probs[2] == 1.0);
}

TEST_CASE("constraint file round trip") {
  const ConstraintSystem cs = BuildEqualizedOdds(fixtures::D6()).WithUniformEpsilon(0.125);
  std::stringstream buffer;
  WriteConstraintFile(buffer, cs);
  const ConstraintSystem back = ReadConstraintFile(buffer);
  CHECK(back.kind == ConstraintSystem::Kind::kGeneric);
  CHECK(back.M == cs.M);
  CHECK(back.c_hat() == cs.c_hat());
  CHECK(back.g1 == cs.g1);
  CHECK(back.counts == cs.counts);
  CHECK(back.moment_ids == cs.moment_ids);
  std::mt19937_64 rng(1);
  const Eigen::VectorXd p = RandomPredictions(6, rng, false);
  CHECK(MomentOf(back, p).values == MomentOf(cs, p).values);
}

TEST_CASE("malformed constraint files are rejected") {
  for (const char* text : {"{}", "not json", R"({"format":"fairred-constraints/1","rows":2})"}) {
    std::istringstream in(text);
    CHECK_THROWS_AS(ReadConstraintFile(in), Error);
  }
}
