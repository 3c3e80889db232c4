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

#ifndef EPP_ANALYSIS_H_
#define EPP_ANALYSIS_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "epp/bt_fitter.h"
#include "epp/core.h"

namespace epp {

// P(a, b) = invlogit(beta_a - beta_b); the diagonal is exactly 0.5.
struct ProbabilityMatrix {
  TournamentId tournament;
  std::vector<PlayerId> players;
  Eigen::MatrixXd p;
};

// Throws kNotConverged for an unconverged fit unless `force` is set.
ProbabilityMatrix ComputeProbabilityMatrix(const EppResult& result,
                                           bool force = false);

struct LeaderboardEntry {
  int rank = 0;
  PlayerId player;
  double beta = 0.0;
  double std_error = 0.0;
};

// Sorted by beta descending, ties by player id. Equal ratings share the
// smaller rank ("1, 1, 3").
std::vector<LeaderboardEntry> Leaderboard(const EppResult& result,
                                          bool force = false);

struct Comparison {
  PlayerId i;
  PlayerId j;
  double delta = 0.0;    // beta_i - beta_j
  double prob = 0.5;     // P(i beats j)
  double z = 0.0;        // NaN when degenerate
  double p_value = 1.0;  // two-sided
  bool degenerate = false;
};

// Wald test of beta_i - beta_j = 0 using the fit's covariance. Throws
// kUnknownPlayer.
Comparison Compare(const EppResult& result, const PlayerId& i,
                   const PlayerId& j);

// Two-sided standard normal tail probability P(|Z| >= |z|).
double TwoSidedNormalPValue(double z);

struct SpreadStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double range = 0.0;
};

// Quartiles by linear interpolation between order statistics.
// Throws kInvalidArgument on empty input.
SpreadStats ComputeSpread(std::vector<double> values);

struct TunabilitySummary {
  TournamentId tournament;
  std::string algorithm;
  int settings = 0;
  SpreadStats stats;
};

using AlgorithmLabel = std::function<std::string(const PlayerId&)>;

// One summary per (tournament, algorithm) over the EPP of the algorithm's
// hyperparameter settings. The default grouping is PlayerId::algorithm.
std::vector<TunabilitySummary> Tunability(
    std::span<const EppResult> results, const AlgorithmLabel& grouping = {});

// tournaments x players; mask(r, c) is true where the player was not rated.
struct EppMatrix {
  std::vector<TournamentId> rows;
  std::vector<PlayerId> cols;
  Eigen::MatrixXd values;  // 0 in masked cells
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask;

  int ObservedCells() const;
  bool Complete() const { return ObservedCells() == values.size(); }
  // Keeps only players rated in every tournament.
  EppMatrix FullyObservedColumns() const;
};

EppMatrix BuildEppMatrix(std::span<const EppResult> results);

struct EmbeddingResult {
  std::vector<TournamentId> row_labels;
  std::vector<PlayerId> col_labels;
  Eigen::MatrixXd matrix;    // uncentered input
  Eigen::MatrixXd scores;    // rows x k
  Eigen::MatrixXd loadings;  // cols x k, orthonormal columns
  Eigen::VectorXd explained_variance;  // k, non-increasing
  double total_variance = 0.0;
};

// PCA through the SVD of the column-centered matrix. Each loading column is
// sign-fixed so its largest-magnitude entry is positive. Throws
// kIncompleteMatrix when cells are masked and kShapeError unless
// 1 <= k <= min(rows, cols) and rows >= 2.
EmbeddingResult PcaEmbed(const EppMatrix& matrix, int k);

// Output encoders.
std::string LeaderboardsToCsv(std::span<const EppResult> results,
                              bool force = false);
std::string ProbabilitiesToCsv(std::span<const ProbabilityMatrix> matrices);
std::string ComparisonToJson(const TournamentId& tournament,
                             const Comparison& comparison);
std::string TunabilityToCsv(std::span<const TunabilitySummary> summaries);
std::string EmbeddingToJson(const EmbeddingResult& embedding);
std::string EppMatrixToCsv(const EppMatrix& matrix);

}  // namespace epp

#endif  // EPP_ANALYSIS_H_
