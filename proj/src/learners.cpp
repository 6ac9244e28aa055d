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

#include "fairred/learners.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "fairred/csv.hpp"
#include "fairred/error.hpp"

namespace fairred {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// ---------------------------------------------------------------------------
// Exact weighted threshold search.

struct ThresholdFit {
  Eigen::Index feature = 0;
  double threshold = kInf;  // x >= +inf never holds: constant 0
  bool greater_equal = true;
  double error = kInf;
};

class ThresholdSearch {
 public:
  ThresholdSearch(const Eigen::MatrixXd& features, std::vector<Eigen::Index> rows)
      : features_(features), rows_(std::move(rows)) {
    const auto m = rows_.size();
    order_.resize(static_cast<std::size_t>(features.cols()));
    for (Eigen::Index f = 0; f < features.cols(); ++f) {
      auto& order = order_[static_cast<std::size_t>(f)];
      order.resize(m);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return features_(rows_[a], f) < features_(rows_[b], f);
      });
    }
  }

  // Minimizes sum_s weight_s 1{rule(x_s) != target_s}. Candidates per feature
  // are -inf, midpoints between consecutive distinct values, and +inf; order of
  // preference on ties is feature, then threshold ascending, then >= before <.
  ThresholdFit Best(const std::vector<int>& targets, const Eigen::VectorXd& weights) const {
    double pos_total = 0.0, neg_total = 0.0;
    for (std::size_t s = 0; s < rows_.size(); ++s) {
      (targets[s] == 1 ? pos_total : neg_total) += weights[static_cast<Eigen::Index>(s)];
    }
    const double tie_tol = 1e-12 * (pos_total + neg_total);

    ThresholdFit best;
    auto consider = [&](Eigen::Index f, double t, bool ge, double err) {
      if (err < best.error - tie_tol) best = {f, t, ge, err};
    };

    for (Eigen::Index f = 0; f < features_.cols(); ++f) {
      const auto& order = order_[static_cast<std::size_t>(f)];
      // At t = -inf: ">=" predicts all 1, "<" predicts all 0.
      double err_ge = neg_total;
      double err_lt = pos_total;
      consider(f, -kInf, true, err_ge);
      consider(f, -kInf, false, err_lt);
      std::size_t k = 0;
      while (k < order.size()) {
        const double x = features_(rows_[order[k]], f);
        double pos = 0.0, neg = 0.0;
        while (k < order.size() && features_(rows_[order[k]], f) == x) {
          const std::size_t s = order[k];
          (targets[s] == 1 ? pos : neg) += weights[static_cast<Eigen::Index>(s)];
          ++k;
        }
        err_ge += pos - neg;
        err_lt += neg - pos;
        double t = kInf;
        if (k < order.size()) {
          const double next = features_(rows_[order[k]], f);
          t = x + (next - x) / 2.0;
          if (!(t > x)) t = next;
        }
        consider(f, t, true, err_ge);
        consider(f, t, false, err_lt);
      }
    }
    return best;
  }

 private:
  const Eigen::MatrixXd& features_;
  std::vector<Eigen::Index> rows_;
  std::vector<std::vector<std::size_t>> order_;
};

BaseClassifier FitThreshold(const TrainingSet& ts, const std::vector<Eigen::Index>& rows,
                            const std::vector<int>& targets, const Eigen::VectorXd& weights) {
  ThresholdSearch search(ts.features, rows);
  const ThresholdFit fit = search.Best(targets, weights);
  return BaseClassifier(ThresholdRule{fit.feature, fit.threshold, fit.greater_equal}, ts.dim());
}

// Discrete AdaBoost over threshold stumps.
BaseClassifier FitBoostedStumps(const LearnerConfig& config, const TrainingSet& ts,
                                const std::vector<Eigen::Index>& rows,
                                const std::vector<int>& targets, Eigen::VectorXd weights) {
  ThresholdSearch search(ts.features, rows);
  weights /= weights.sum();
  BoostedStumps model;
  for (int round = 0; round < config.rounds; ++round) {
    const ThresholdFit fit = search.Best(targets, weights);
    if (fit.error >= 0.5 - 1e-12 && round > 0) break;
    const double err = std::clamp(fit.error, 1e-12, 0.5);
    const double alpha = 0.5 * std::log((1.0 - err) / err);
    Stump stump{fit.feature, fit.threshold, fit.greater_equal ? -1.0 : 1.0,
                fit.greater_equal ? 1.0 : -1.0, alpha};
    for (std::size_t s = 0; s < rows.size(); ++s) {
      const double x = ts.features(rows[s], stump.feature);
      const double vote = x >= stump.threshold ? stump.right_vote : stump.left_vote;
      const double y = targets[s] == 1 ? 1.0 : -1.0;
      weights[static_cast<Eigen::Index>(s)] *= std::exp(-alpha * y * vote);
    }
    weights /= weights.sum();
    model.stumps.push_back(stump);
    if (fit.error <= 1e-12) break;
  }
  return BaseClassifier(std::move(model), ts.dim());
}

// Weighted logistic loss + (l2/2)|coef|^2 by gradient descent. The first trial
// step of each iteration is the Barzilai-Borwein step, then halved until the
// Armijo condition holds.
BaseClassifier FitLogistic(const LearnerConfig& config, const TrainingSet& ts,
                           const std::vector<Eigen::Index>& rows,
                           const std::vector<int>& targets, const Eigen::VectorXd& weights) {
  const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index d = ts.dim();
  Eigen::MatrixXd X(m, d + 1);
  Eigen::VectorXd t(m);
  for (Eigen::Index s = 0; s < m; ++s) {
    X.row(s).head(d) = ts.features.row(rows[static_cast<std::size_t>(s)]);
    X(s, d) = 1.0;
    t[s] = targets[static_cast<std::size_t>(s)];
  }
  const Eigen::VectorXd v = weights / weights.sum();
  Eigen::VectorXd penalty = Eigen::VectorXd::Constant(d + 1, config.l2);
  penalty[d] = 0.0;

  // Loss, gradient and, on request, the curvature weights v_s sigma (1 - sigma).
  auto objective = [&](const Eigen::VectorXd& beta, Eigen::VectorXd* grad,
                       Eigen::VectorXd* curve) {
    const Eigen::VectorXd z = X * beta;
    double loss = 0.0;
    Eigen::VectorXd residual(m);
    if (curve) curve->resize(m);
    for (Eigen::Index s = 0; s < m; ++s) {
      const double zs = z[s];
      const double e = std::exp(-std::abs(zs));
      const double softplus = std::max(zs, 0.0) + std::log1p(e);
      loss += v[s] * (softplus - t[s] * zs);
      const double sigma = zs >= 0.0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
      residual[s] = v[s] * (sigma - t[s]);
      if (curve) (*curve)[s] = v[s] * sigma * (1.0 - sigma);
    }
    loss += 0.5 * beta.cwiseProduct(penalty).dot(beta);
    if (grad) *grad = X.transpose() * residual + penalty.cwiseProduct(beta);
    return loss;
  };

  // Damped Newton: the Newton direction with Armijo backtracking, falling
  // back to the negative gradient when the direction is not a descent one.
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d + 1);
  Eigen::VectorXd grad;
  Eigen::VectorXd curve;
  double f = objective(beta, &grad, &curve);
  for (int iter = 0; iter < config.max_iter; ++iter) {
    if (grad.norm() <= config.grad_tol) break;
    Eigen::MatrixXd hessian = X.transpose() * curve.asDiagonal() * X;
    hessian.diagonal() += penalty;
    hessian.diagonal().array() += 1e-12;
    Eigen::VectorXd direction = -hessian.ldlt().solve(grad);
    double slope = grad.dot(direction);
    if (!direction.allFinite() || !(slope < 0.0)) {
      direction = -grad;
      slope = -grad.squaredNorm();
    }
    double step = 1.0;
    Eigen::VectorXd trial;
    double f_trial = f;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      trial = beta + step * direction;
      f_trial = objective(trial, nullptr, nullptr);
      if (f_trial <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    // No strict decrease left: the gradient is at its rounding floor.
    if (!accepted || !(f_trial < f)) break;
    beta = std::move(trial);
    f = objective(beta, &grad, &curve);
  }
  if (!beta.allFinite()) throw Error(ErrorKind::kNumeric, "logistic fit diverged");
  return BaseClassifier(LogisticModel{beta.head(d), beta[d]}, d);
}

std::string Fmt(double v) { return csv::FormatDouble(v); }

double ParseNumber(std::istringstream& in) {
  std::string token;
  if (!(in >> token)) throw Error(ErrorKind::kArtifact, "classifier record truncated");
  double v = 0.0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::kArtifact, "bad number in classifier record: " + token);
  }
  return v;
}

Eigen::Index ParseIndex(std::istringstream& in) {
  const double v = ParseNumber(in);
  if (v < 0 || v != std::floor(v)) throw Error(ErrorKind::kArtifact, "bad index in record");
  return static_cast<Eigen::Index>(v);
}

}  // namespace

std::vector<WeightedSample> CostToWeighted(const CostPairSet& costs) {
  if (costs.c0.size() != costs.c1.size()) {
    throw Error(ErrorKind::kArgument, "cost vectors differ in length");
  }
  std::vector<WeightedSample> out(static_cast<std::size_t>(costs.c0.size()));
  for (Eigen::Index i = 0; i < costs.c0.size(); ++i) {
    out[static_cast<std::size_t>(i)] = {i, costs.c0[i] >= costs.c1[i] ? 1 : 0,
                                        std::abs(costs.c0[i] - costs.c1[i])};
  }
  return out;
}

BaseClassifier::BaseClassifier(Model model, Eigen::Index dim) : model_(std::move(model)), dim_(dim) {}

BaseClassifier::Kind BaseClassifier::kind() const {
  return std::visit(Overloaded{[](const LogisticModel&) { return Kind::kLogistic; },
                               [](const BoostedStumps&) { return Kind::kBoostedStumps; },
                               [](const ThresholdRule&) { return Kind::kThreshold1d; },
                               [](const ConstantRule&) { return Kind::kConstant; }},
                    model_);
}

Eigen::VectorXd BaseClassifier::Predict(const Eigen::Ref<const Eigen::MatrixXd>& features) const {
  if (features.cols() != dim_) {
    throw Error(ErrorKind::kArgument, "classifier expects " + std::to_string(dim_) +
                                          " features, got " + std::to_string(features.cols()));
  }
  const Eigen::Index n = features.rows();
  return std::visit(
      Overloaded{
          [&](const LogisticModel& m) -> Eigen::VectorXd {
            const Eigen::ArrayXd score = ((features * m.coef).array() + m.intercept);
            return (score >= 0.0).cast<double>().matrix();
          },
          [&](const BoostedStumps& m) -> Eigen::VectorXd {
            Eigen::ArrayXd score = Eigen::ArrayXd::Zero(n);
            for (const Stump& s : m.stumps) {
              const auto right = (features.col(s.feature).array() >= s.threshold);
              score += s.weight * right.select(Eigen::ArrayXd::Constant(n, s.right_vote),
                                               Eigen::ArrayXd::Constant(n, s.left_vote));
            }
            return (score >= 0.0).cast<double>().matrix();
          },
          [&](const ThresholdRule& m) -> Eigen::VectorXd {
            const Eigen::ArrayXd ge = (features.col(m.feature).array() >= m.threshold).cast<double>();
            return (m.greater_equal ? ge : 1.0 - ge).matrix();
          },
          [&](const ConstantRule& m) -> Eigen::VectorXd {
            return Eigen::VectorXd::Constant(n, m.bit);
          }},
      model_);
}

std::string_view KindName(BaseClassifier::Kind kind) {
  switch (kind) {
    case BaseClassifier::Kind::kLogistic: return "logistic";
    case BaseClassifier::Kind::kBoostedStumps: return "stumps";
    case BaseClassifier::Kind::kThreshold1d: return "threshold1d";
    case BaseClassifier::Kind::kConstant: return "constant";
  }
  return "unknown";
}

std::string BaseClassifier::Serialize() const {
  std::string out(KindName(kind()));
  out += ' ' + std::to_string(dim_);
  std::visit(Overloaded{[&](const LogisticModel& m) {
                          out += ' ' + Fmt(m.intercept);
                          for (Eigen::Index j = 0; j < m.coef.size(); ++j) out += ' ' + Fmt(m.coef[j]);
                        },
                        [&](const BoostedStumps& m) {
                          out += ' ' + std::to_string(m.stumps.size());
                          for (const Stump& s : m.stumps) {
                            out += ' ' + std::to_string(s.feature) + ' ' + Fmt(s.threshold) + ' ' +
                                   Fmt(s.left_vote) + ' ' + Fmt(s.right_vote) + ' ' + Fmt(s.weight);
                          }
                        },
                        [&](const ThresholdRule& m) {
                          out += ' ' + std::to_string(m.feature) + ' ' + Fmt(m.threshold) +
                                 (m.greater_equal ? " ge" : " lt");
                        },
                        [&](const ConstantRule& m) { out += ' ' + std::to_string(m.bit); }},
             model_);
  return out;
}

BaseClassifier BaseClassifier::Parse(std::string_view record) {
  std::istringstream in{std::string(record)};
  std::string kind;
  if (!(in >> kind)) throw Error(ErrorKind::kArtifact, "empty classifier record");
  const Eigen::Index dim = ParseIndex(in);
  auto check_feature = [&](Eigen::Index f) {
    if (f >= dim) throw Error(ErrorKind::kArtifact, "feature index out of range in record");
    return f;
  };
  std::optional<BaseClassifier> result;
  if (kind == "logistic") {
    LogisticModel m;
    m.intercept = ParseNumber(in);
    m.coef.resize(dim);
    for (Eigen::Index j = 0; j < dim; ++j) m.coef[j] = ParseNumber(in);
    result.emplace(std::move(m), dim);
  } else if (kind == "stumps") {
    BoostedStumps m;
    const Eigen::Index count = ParseIndex(in);
    for (Eigen::Index s = 0; s < count; ++s) {
      Stump stump;
      stump.feature = check_feature(ParseIndex(in));
      stump.threshold = ParseNumber(in);
      stump.left_vote = ParseNumber(in);
      stump.right_vote = ParseNumber(in);
      stump.weight = ParseNumber(in);
      m.stumps.push_back(stump);
    }
    result.emplace(std::move(m), dim);
  } else if (kind == "threshold1d") {
    ThresholdRule m;
    m.feature = check_feature(ParseIndex(in));
    m.threshold = ParseNumber(in);
    std::string polarity;
    in >> polarity;
    if (polarity != "ge" && polarity != "lt") {
      throw Error(ErrorKind::kArtifact, "threshold polarity must be ge or lt");
    }
    m.greater_equal = polarity == "ge";
    result.emplace(m, dim);
  } else if (kind == "constant") {
    const double bit = ParseNumber(in);
    if (bit != 0.0 && bit != 1.0) throw Error(ErrorKind::kArtifact, "constant bit must be 0 or 1");
    result.emplace(ConstantRule{static_cast<int>(bit)}, dim);
  } else {
    throw Error(ErrorKind::kArtifact, "unknown classifier kind: " + kind);
  }
  std::string extra;
  if (in >> extra) throw Error(ErrorKind::kArtifact, "trailing data in classifier record");
  return *result;
}

std::string_view LearnerName(LearnerConfig::Kind kind) {
  switch (kind) {
    case LearnerConfig::Kind::kLogistic: return "logistic";
    case LearnerConfig::Kind::kBoostedStumps: return "stumps";
    case LearnerConfig::Kind::kThreshold1d: return "threshold1d";
  }
  return "unknown";
}

LearnerConfig::Kind ParseLearnerKind(std::string_view name) {
  if (name == "logistic") return LearnerConfig::Kind::kLogistic;
  if (name == "stumps") return LearnerConfig::Kind::kBoostedStumps;
  if (name == "threshold1d") return LearnerConfig::Kind::kThreshold1d;
  throw Error(ErrorKind::kUsage, "unknown learner: " + std::string(name));
}

BaseClassifier Fit(const LearnerConfig& config, const TrainingSet& ts,
                   std::span<const WeightedSample> samples) {
  std::vector<Eigen::Index> rows;
  std::vector<int> targets;
  std::vector<double> weights;
  double total = 0.0;
  for (const WeightedSample& s : samples) {
    if (!std::isfinite(s.weight) || s.weight < 0.0) {
      throw Error(ErrorKind::kNumeric, "sample weight at row " + std::to_string(s.row) +
                                           " is negative or not finite");
    }
    if (s.row < 0 || s.row >= ts.size()) throw Error(ErrorKind::kArgument, "sample row out of range");
    if (s.weight == 0.0) continue;
    rows.push_back(s.row);
    targets.push_back(s.target);
    weights.push_back(s.weight);
    total += s.weight;
  }
  if (!(total > 0.0)) return BaseClassifier(ConstantRule{1}, ts.dim());
  if (!std::isfinite(total)) throw Error(ErrorKind::kNumeric, "total sample weight overflows");

  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(weights.data(),
                                                              static_cast<Eigen::Index>(weights.size()));
  switch (config.kind) {
    case LearnerConfig::Kind::kThreshold1d:
      return FitThreshold(ts, rows, targets, w);
    case LearnerConfig::Kind::kBoostedStumps:
      return FitBoostedStumps(config, ts, rows, targets, w);
    case LearnerConfig::Kind::kLogistic:
      return FitLogistic(config, ts, rows, targets, w);
  }
  throw Error(ErrorKind::kArgument, "unknown learner kind");
}

}  // namespace fairred
