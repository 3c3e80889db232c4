// Copyright 2026 The EPP Authors.
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

#ifndef EPP_BT_FITTER_H_
#define EPP_BT_FITTER_H_

// Maximum-likelihood EPP ratings under the pairwise logistic model
//
//   logit P(i beats j) = beta_i - beta_j.
//
// Comparisons are aggregated per pair, so each pair is one binomial design
// row with +1 on player i and -1 on player j. beta is identified only up to
// an additive constant; the fit pins it with either a mean-zero constraint
// or a reference player rated 0.

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "epp/core.h"
#include "epp/match_engine.h"

namespace epp {

struct MeanZero {
  bool operator==(const MeanZero&) const = default;
};
struct Reference {
  PlayerId player;
  bool operator==(const Reference&) const = default;
};
using Constraint = std::variant<MeanZero, Reference>;

std::string ConstraintToString(const Constraint& constraint);

struct FitConfig {
  Constraint constraint = MeanZero{};
  double ridge = 0.0;  // L2 penalty coefficient on beta
  double tol = 1e-8;   // constrained gradient 2-norm
  int max_iter = 100;

  // Throws kInvalidArgument unless tol > 0, ridge >= 0 and max_iter > 0.
  void Validate() const;
};

// Players whose |beta| exceeds this at termination are reported separated.
inline constexpr double kSeparationThreshold = 30.0;

struct DesignRow {
  int i = 0;  // coefficient +1
  int j = 0;  // coefficient -1
  double successes = 0.0;  // wins of i
  double failures = 0.0;   // wins of j
};

// Penalized binomial log-likelihood
//   sum_rows s*log sigma(b_i - b_j) + f*log sigma(b_j - b_i) - ridge/2 |b|^2.
// Throws kShapeError when a row index is out of range.
double LogLikelihood(const Eigen::VectorXd& beta,
                     std::span<const DesignRow> rows, double ridge = 0.0);

Eigen::VectorXd Gradient(const Eigen::VectorXd& beta,
                         std::span<const DesignRow> rows, double ridge = 0.0);

// Negative semidefinite curvature of LogLikelihood (minus ridge * I).
Eigen::MatrixXd Hessian(const Eigen::VectorXd& beta,
                        std::span<const DesignRow> rows, double ridge = 0.0);

// invlogit(beta_i - beta_j), evaluated without overflow. kDomainError on
// non-finite input.
double WinProbability(double beta_i, double beta_j);

// Numerically stable logistic function and its logarithm.
double Sigmoid(double x);
double LogSigmoid(double x);

struct EppResult {
  TournamentId tournament;
  std::vector<PlayerId> players;  // sorted
  std::vector<double> beta;
  std::vector<double> std_error;  // sqrt(diag(covariance))
  Eigen::MatrixXd covariance;
  double loglik = 0.0;
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;
  // True when the win graph admits no finite unpenalized MLE.
  bool separated = false;
  std::vector<PlayerId> separated_players;
  std::string constraint = "mean-zero";
  double ridge = 0.0;
  // Log-likelihood at the start and after every accepted Newton step.
  std::vector<double> loglik_trace;

  // Index of `player` in `players`; throws kUnknownPlayer.
  int IndexOf(const PlayerId& player) const;
  double BetaOf(const PlayerId& player) const { return beta[IndexOf(player)]; }
};

// Fits one tournament. Players are taken from the pairs. Throws
// kTooFewPlayers, kDisconnectedGraph, kUnknownPlayer (reference not present)
// and kInvalidArgument (bad config).
EppResult FitEpp(const TournamentId& tournament,
                 std::span<const PairCounts> counts, const FitConfig& config);

// Same, but every player in `matches.players` must be connected to the rest;
// a player with no surviving comparisons makes the graph disconnected.
EppResult FitEpp(const TournamentMatches& matches, const FitConfig& config);

// JSON array of results. Non-finite numbers are written as null.
std::string EppResultsToJson(std::span<const EppResult> results);
std::vector<EppResult> EppResultsFromJson(std::string_view text);

}  // namespace epp

#endif  // EPP_BT_FITTER_H_
