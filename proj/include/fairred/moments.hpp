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

// Linear-moment fairness constraints  M * mu(h) <= c + eps.
//
// Every moment j is a conditional mean of g_j over an event E_j that does not
// depend on the classifier. Because g_j sees the classifier only through its
// 0/1 output, the system stores g_j at both outputs for every example, which
// turns moments and cost vectors into matrix products.

#ifndef FAIRRED_MOMENTS_HPP_
#define FAIRRED_MOMENTS_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fairred/data.hpp"

namespace fairred {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct ConstraintSystem {
  enum class Kind { kDemographicParity, kEqualizedOdds, kGeneric };

  Kind kind = Kind::kGeneric;
  std::vector<std::string> moment_ids;      // J
  std::vector<std::string> constraint_ids;  // K
  BoolMatrix membership;                    // n x |J|
  Eigen::MatrixXd g0;                       // n x |J|, zero off-event
  Eigen::MatrixXd g1;                       // n x |J|, zero off-event
  Eigen::MatrixXd M;                        // |K| x |J|
  Eigen::VectorXd c;
  Eigen::VectorXd eps;
  Eigen::VectorXi counts;  // n_j
  Eigen::VectorXd probs;   // p_j = n_j / n
  std::vector<std::string> warnings;

  Eigen::Index num_rows() const { return membership.rows(); }
  Eigen::Index num_moments() const { return M.cols(); }
  Eigen::Index num_constraints() const { return M.rows(); }

  Eigen::VectorXd c_hat() const { return c + eps; }

  ConstraintSystem WithEpsilon(const Eigen::VectorXd& slack) const;
  ConstraintSystem WithUniformEpsilon(double slack) const;
};

struct MomentVector {
  Eigen::VectorXd values;
};

struct GammaVector {
  Eigen::VectorXd values;
};

// J = groups then *, K = (a,+), (a,-) per group.
ConstraintSystem BuildDemographicParity(const TrainingSet& ts);

// J = (a,0), (a,1) per group then (*,0), (*,1); K = (a,y,+), (a,y,-).
// Empty (a,y) cells drop their moment and constraint pair with a warning; an
// absent label value throws Error(kDegenerateData).
ConstraintSystem BuildEqualizedOdds(const TrainingSet& ts);

// Recomputes n_j and p_j from the membership table, dropping empty events and
// the constraints that reference them. Throws Error(kArgument) when a stored
// invariant (g in [0,1] on members, eps >= 0, shapes) fails.
ConstraintSystem Finalize(ConstraintSystem cs);

// Keeps only the given rows (in the given order) and re-finalizes.
ConstraintSystem RestrictRows(const ConstraintSystem& cs, const std::vector<Eigen::Index>& rows);

// mu_j = (1/n_j) sum_{i in E_j} (1 - p_i) g0_ij + p_i g1_ij for predictions p
// in [0,1]; fractional predictions give the exact mixture moments.
MomentVector MomentOf(const ConstraintSystem& cs,
                      const Eigen::Ref<const Eigen::VectorXd>& predictions);

GammaVector Gamma(const ConstraintSystem& cs, const MomentVector& mu);

// eps_k = C' * sum_j |M_kj| n_j^(-alpha).
Eigen::VectorXd DefaultEpsilon(const ConstraintSystem& cs, double c_prime, double alpha);

// Upper bound on max_h ||M mu(h) - c_hat||_inf. The built-in parity systems
// with c = 0 and eps <= 1 get the bound 2; otherwise
// max_k sum_j |M_kj| + |c_hat_k|, valid since every moment lies in [0,1].
double RhoBound(const ConstraintSystem& cs);

// JSON constraint file, format tag "fairred-constraints/1":
//   { "format": ..., "rows": n,
//     "moments": [id...], "constraints": [id...],
//     "M": [[...] per constraint], "c": [...], "eps": [...] (optional),
//     "entries": [[row, moment, member, g0, g1], ...] }
// `moment` is an index into "moments" or its id. Unlisted (row, moment)
// pairs are non-members.
ConstraintSystem ReadConstraintFile(std::istream& in);
ConstraintSystem LoadConstraintFile(const std::string& path);
void WriteConstraintFile(std::ostream& out, const ConstraintSystem& cs);

}  // namespace fairred

#endif  // FAIRRED_MOMENTS_HPP_
