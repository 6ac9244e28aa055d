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

#include "fairred/moments.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "json.hpp"

#include "fairred/error.hpp"

namespace fairred {

namespace {

constexpr const char* kConstraintFormat = "fairred-constraints/1";

// Fills a system whose every moment is the mean of h(X) over its event.
ConstraintSystem MeanPredictionSystem(const BoolMatrix& membership) {
  ConstraintSystem cs;
  cs.membership = membership;
  cs.g0 = Eigen::MatrixXd::Zero(membership.rows(), membership.cols());
  cs.g1 = membership.cast<double>();
  return cs;
}

// Appends the +/- pair  mu_j - mu_star <= 0,  -mu_j + mu_star <= 0.
void AddParityPair(Eigen::MatrixXd& M, Eigen::Index row, Eigen::Index j, Eigen::Index star) {
  M(row, j) = 1.0;
  M(row, star) = -1.0;
  M(row + 1, j) = -1.0;
  M(row + 1, star) = 1.0;
}

}  // namespace

ConstraintSystem ConstraintSystem::WithEpsilon(const Eigen::VectorXd& slack) const {
  if (slack.size() != num_constraints()) {
    throw Error(ErrorKind::kArgument, "epsilon vector has the wrong length");
  }
  if ((slack.array() < 0.0).any() || !slack.allFinite()) {
    throw Error(ErrorKind::kArgument, "epsilon must be finite and nonnegative");
  }
  ConstraintSystem out = *this;
  out.eps = slack;
  return out;
}

ConstraintSystem ConstraintSystem::WithUniformEpsilon(double slack) const {
  return WithEpsilon(Eigen::VectorXd::Constant(num_constraints(), slack));
}

ConstraintSystem BuildDemographicParity(const TrainingSet& ts) {
  Validate(ts);
  const Eigen::Index n = ts.size();
  const Eigen::Index groups = ts.num_groups();
  const Eigen::Index star = groups;

  BoolMatrix membership = BoolMatrix::Constant(n, groups + 1, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    membership(i, ts.group[static_cast<std::size_t>(i)]) = true;
    membership(i, star) = true;
  }
  ConstraintSystem cs = MeanPredictionSystem(membership);
  cs.kind = ConstraintSystem::Kind::kDemographicParity;
  cs.M = Eigen::MatrixXd::Zero(2 * groups, groups + 1);
  for (Eigen::Index a = 0; a < groups; ++a) {
    const std::string& name = ts.attribute_values[static_cast<std::size_t>(a)];
    cs.moment_ids.push_back(name);
    cs.constraint_ids.push_back(name + ",+");
    cs.constraint_ids.push_back(name + ",-");
    AddParityPair(cs.M, 2 * a, a, star);
  }
  cs.moment_ids.push_back("*");
  cs.c = Eigen::VectorXd::Zero(2 * groups);
  cs.eps = Eigen::VectorXd::Zero(2 * groups);
  return Finalize(std::move(cs));
}

ConstraintSystem BuildEqualizedOdds(const TrainingSet& ts) {
  Validate(ts);
  const Eigen::Index n = ts.size();
  const Eigen::Index groups = ts.num_groups();
  auto cell = [](Eigen::Index a, Eigen::Index y) { return 2 * a + y; };
  const Eigen::Index star = groups;

  BoolMatrix membership = BoolMatrix::Constant(n, 2 * (groups + 1), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto y = static_cast<Eigen::Index>(ts.labels[i]);
    membership(i, cell(ts.group[static_cast<std::size_t>(i)], y)) = true;
    membership(i, cell(star, y)) = true;
  }
  for (Eigen::Index y = 0; y < 2; ++y) {
    if (!membership.col(cell(star, y)).any()) {
      throw Error(ErrorKind::kDegenerateData,
                  "equalized odds needs both label values; label " + std::to_string(y) +
                      " is absent");
    }
  }

  ConstraintSystem cs = MeanPredictionSystem(membership);
  cs.kind = ConstraintSystem::Kind::kEqualizedOdds;
  cs.M = Eigen::MatrixXd::Zero(4 * groups, 2 * (groups + 1));
  for (Eigen::Index a = 0; a <= groups; ++a) {
    const std::string name = a < groups ? ts.attribute_values[static_cast<std::size_t>(a)] : "*";
    for (Eigen::Index y = 0; y < 2; ++y) {
      cs.moment_ids.push_back(name + "," + std::to_string(y));
    }
  }
  for (Eigen::Index a = 0; a < groups; ++a) {
    for (Eigen::Index y = 0; y < 2; ++y) {
      const std::string id =
          ts.attribute_values[static_cast<std::size_t>(a)] + "," + std::to_string(y);
      cs.constraint_ids.push_back(id + ",+");
      cs.constraint_ids.push_back(id + ",-");
      AddParityPair(cs.M, 2 * cell(a, y), cell(a, y), cell(star, y));
    }
  }
  cs.c = Eigen::VectorXd::Zero(4 * groups);
  cs.eps = Eigen::VectorXd::Zero(4 * groups);
  return Finalize(std::move(cs));
}

ConstraintSystem Finalize(ConstraintSystem cs) {
  const Eigen::Index n = cs.membership.rows();
  const Eigen::Index J = cs.membership.cols();
  const Eigen::Index K = cs.M.rows();
  if (n < 1) throw Error(ErrorKind::kEmptyInput, "constraint system has no rows");
  if (cs.g0.rows() != n || cs.g0.cols() != J || cs.g1.rows() != n || cs.g1.cols() != J ||
      cs.M.cols() != J || cs.c.size() != K || cs.eps.size() != K ||
      static_cast<Eigen::Index>(cs.moment_ids.size()) != J ||
      static_cast<Eigen::Index>(cs.constraint_ids.size()) != K) {
    throw Error(ErrorKind::kArgument, "constraint system shapes disagree");
  }
  if (!cs.M.allFinite() || !cs.c.allFinite() || !cs.eps.allFinite() ||
      (cs.eps.array() < 0.0).any()) {
    throw Error(ErrorKind::kArgument, "M, c must be finite and eps finite and nonnegative");
  }
  const Eigen::ArrayXXd member = cs.membership.cast<double>().array();
  const auto in_range = [](const Eigen::MatrixXd& g) {
    return (g.array() >= 0.0).all() && (g.array() <= 1.0).all();
  };
  // Off-event entries never contribute; zero them so products stay exact.
  cs.g0 = (cs.g0.array() * member).matrix();
  cs.g1 = (cs.g1.array() * member).matrix();
  if (!in_range(cs.g0) || !in_range(cs.g1)) {
    throw Error(ErrorKind::kArgument, "g values must lie in [0, 1] on event members");
  }

  const Eigen::VectorXi counts = cs.membership.cast<int>().colwise().sum().transpose();
  std::vector<Eigen::Index> keep_moments;
  std::vector<bool> drop_constraint(static_cast<std::size_t>(K), false);
  for (Eigen::Index j = 0; j < J; ++j) {
    if (counts[j] > 0) {
      keep_moments.push_back(j);
      continue;
    }
    std::string dropped;
    for (Eigen::Index k = 0; k < K; ++k) {
      if (cs.M(k, j) != 0.0 && !drop_constraint[static_cast<std::size_t>(k)]) {
        drop_constraint[static_cast<std::size_t>(k)] = true;
        dropped += (dropped.empty() ? "" : " ") + cs.constraint_ids[static_cast<std::size_t>(k)];
      }
    }
    cs.warnings.push_back("empty event for moment " + cs.moment_ids[static_cast<std::size_t>(j)] +
                          "; dropped constraints: " + (dropped.empty() ? "none" : dropped));
  }
  std::vector<Eigen::Index> keep_constraints;
  for (Eigen::Index k = 0; k < K; ++k) {
    if (!drop_constraint[static_cast<std::size_t>(k)]) keep_constraints.push_back(k);
  }

  if (static_cast<Eigen::Index>(keep_moments.size()) != J ||
      static_cast<Eigen::Index>(keep_constraints.size()) != K) {
    ConstraintSystem out;
    out.kind = cs.kind;
    out.warnings = std::move(cs.warnings);
    out.membership = cs.membership(Eigen::all, keep_moments);
    out.g0 = cs.g0(Eigen::all, keep_moments);
    out.g1 = cs.g1(Eigen::all, keep_moments);
    out.M = cs.M(keep_constraints, keep_moments);
    out.c = cs.c(keep_constraints);
    out.eps = cs.eps(keep_constraints);
    for (auto j : keep_moments) out.moment_ids.push_back(cs.moment_ids[static_cast<std::size_t>(j)]);
    for (auto k : keep_constraints) {
      out.constraint_ids.push_back(cs.constraint_ids[static_cast<std::size_t>(k)]);
    }
    cs = std::move(out);
  }
  cs.counts = cs.membership.cast<int>().colwise().sum().transpose();
  cs.probs = cs.counts.cast<double>() / static_cast<double>(n);
  return cs;
}

ConstraintSystem RestrictRows(const ConstraintSystem& cs, const std::vector<Eigen::Index>& rows) {
  ConstraintSystem out;
  out.kind = cs.kind;
  out.moment_ids = cs.moment_ids;
  out.constraint_ids = cs.constraint_ids;
  out.membership = cs.membership(rows, Eigen::all);
  out.g0 = cs.g0(rows, Eigen::all);
  out.g1 = cs.g1(rows, Eigen::all);
  out.M = cs.M;
  out.c = cs.c;
  out.eps = cs.eps;
  return Finalize(std::move(out));
}

MomentVector MomentOf(const ConstraintSystem& cs,
                      const Eigen::Ref<const Eigen::VectorXd>& predictions) {
  if (predictions.size() != cs.num_rows()) {
    throw Error(ErrorKind::kArgument, "prediction vector length " +
                                          std::to_string(predictions.size()) + " != " +
                                          std::to_string(cs.num_rows()));
  }
  const Eigen::VectorXd sums = cs.g0.transpose() * (1.0 - predictions.array()).matrix() +
                               cs.g1.transpose() * predictions;
  return {sums.cwiseQuotient(cs.counts.cast<double>())};
}

GammaVector Gamma(const ConstraintSystem& cs, const MomentVector& mu) {
  if (mu.values.size() != cs.num_moments()) {
    throw Error(ErrorKind::kArgument, "moment vector has the wrong length");
  }
  return {cs.M * mu.values};
}

Eigen::VectorXd DefaultEpsilon(const ConstraintSystem& cs, double c_prime, double alpha) {
  if (c_prime < 0.0 || !(alpha > 0.0 && alpha <= 0.5)) {
    throw Error(ErrorKind::kArgument, "need C' >= 0 and alpha in (0, 0.5]");
  }
  const Eigen::VectorXd scale = cs.counts.cast<double>().array().pow(-alpha).matrix();
  return c_prime * (cs.M.cwiseAbs() * scale);
}

double RhoBound(const ConstraintSystem& cs) {
  const bool parity = cs.kind == ConstraintSystem::Kind::kDemographicParity ||
                      cs.kind == ConstraintSystem::Kind::kEqualizedOdds;
  if (parity && (cs.c.array() == 0.0).all() && (cs.eps.array() <= 1.0).all()) return 2.0;
  if (cs.num_constraints() == 0) return 0.0;
  return (cs.M.cwiseAbs().rowwise().sum() + cs.c_hat().cwiseAbs()).maxCoeff();
}

ConstraintSystem ReadConstraintFile(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("constraint file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.value("format", std::string()) != kConstraintFormat) {
      throw Error(ErrorKind::kParse, std::string("constraint file format must be ") +
                                         kConstraintFormat);
    }
    ConstraintSystem cs;
    const auto n = doc.at("rows").get<Eigen::Index>();
    cs.moment_ids = doc.at("moments").get<std::vector<std::string>>();
    cs.constraint_ids = doc.at("constraints").get<std::vector<std::string>>();
    const auto J = static_cast<Eigen::Index>(cs.moment_ids.size());
    const auto K = static_cast<Eigen::Index>(cs.constraint_ids.size());
    if (n < 1) throw Error(ErrorKind::kParse, "constraint file needs rows >= 1");

    const auto& m_rows = doc.at("M");
    if (static_cast<Eigen::Index>(m_rows.size()) != K) {
      throw Error(ErrorKind::kParse, "M must have one row per constraint");
    }
    cs.M.resize(K, J);
    for (Eigen::Index k = 0; k < K; ++k) {
      const auto row = m_rows[static_cast<std::size_t>(k)].get<std::vector<double>>();
      if (static_cast<Eigen::Index>(row.size()) != J) {
        throw Error(ErrorKind::kParse, "M row " + std::to_string(k) + " has the wrong width");
      }
      for (Eigen::Index j = 0; j < J; ++j) cs.M(k, j) = row[static_cast<std::size_t>(j)];
    }
    const auto c = doc.at("c").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(c.size()) != K) throw Error(ErrorKind::kParse, "c length != |K|");
    cs.c = Eigen::Map<const Eigen::VectorXd>(c.data(), K);
    cs.eps = Eigen::VectorXd::Zero(K);
    if (doc.contains("eps")) {
      const auto eps = doc.at("eps").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(eps.size()) != K) {
        throw Error(ErrorKind::kParse, "eps length != |K|");
      }
      cs.eps = Eigen::Map<const Eigen::VectorXd>(eps.data(), K);
    }

    std::unordered_map<std::string, Eigen::Index> moment_index;
    for (Eigen::Index j = 0; j < J; ++j) moment_index[cs.moment_ids[static_cast<std::size_t>(j)]] = j;

    cs.membership = BoolMatrix::Constant(n, J, false);
    cs.g0 = Eigen::MatrixXd::Zero(n, J);
    cs.g1 = Eigen::MatrixXd::Zero(n, J);
    for (const auto& entry : doc.at("entries")) {
      if (!entry.is_array() || entry.size() != 5) {
        throw Error(ErrorKind::kParse, "each entry must be [row, moment, member, g0, g1]");
      }
      const auto row = entry[0].get<Eigen::Index>();
      const Eigen::Index j = entry[1].is_string() ? moment_index.at(entry[1].get<std::string>())
                                                  : entry[1].get<Eigen::Index>();
      if (row < 0 || row >= n || j < 0 || j >= J) {
        throw Error(ErrorKind::kParse, "entry index out of range");
      }
      cs.membership(row, j) = entry[2].get<double>() != 0.0;
      cs.g0(row, j) = entry[3].get<double>();
      cs.g1(row, j) = entry[4].get<double>();
    }
    return Finalize(std::move(cs));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("malformed constraint file: ") + e.what());
  } catch (const std::out_of_range&) {
    throw Error(ErrorKind::kParse, "constraint file names an unknown moment");
  }
}

ConstraintSystem LoadConstraintFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kArgument, "cannot open constraint file: " + path);
  return ReadConstraintFile(in);
}

void WriteConstraintFile(std::ostream& out, const ConstraintSystem& cs) {
  nlohmann::json doc;
  doc["format"] = kConstraintFormat;
  doc["rows"] = cs.num_rows();
  doc["moments"] = cs.moment_ids;
  doc["constraints"] = cs.constraint_ids;
  auto& m = doc["M"] = nlohmann::json::array();
  for (Eigen::Index k = 0; k < cs.num_constraints(); ++k) {
    std::vector<double> row;
    for (Eigen::Index j = 0; j < cs.num_moments(); ++j) row.push_back(cs.M(k, j));
    m.push_back(row);
  }
  doc["c"] = std::vector<double>(cs.c.data(), cs.c.data() + cs.c.size());
  doc["eps"] = std::vector<double>(cs.eps.data(), cs.eps.data() + cs.eps.size());
  auto& entries = doc["entries"] = nlohmann::json::array();
  for (Eigen::Index i = 0; i < cs.num_rows(); ++i) {
    for (Eigen::Index j = 0; j < cs.num_moments(); ++j) {
      if (!cs.membership(i, j)) continue;
      entries.push_back({i, j, 1, cs.g0(i, j), cs.g1(i, j)});
    }
  }
  out << doc.dump() << '\n';
}

}  // namespace fairred
