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

#include "epp/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <Eigen/SVD>

#include "epp/csv.h"
#include "epp/error.h"
#include "json.hpp"

namespace epp {
namespace {

using nlohmann::ordered_json;

void RequireConverged(const EppResult& result, bool force) {
  if (!result.converged && !force) {
    throw EppError(ErrorCode::kNotConverged,
                   "fit for tournament " + result.tournament.name +
                       " did not converge" +
                       (result.separated ? " (separated)" : ""));
  }
}

ordered_json Number(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

ordered_json MatrixToJson(const Eigen::MatrixXd& m) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(Number(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

ProbabilityMatrix ComputeProbabilityMatrix(const EppResult& result,
                                           bool force) {
  RequireConverged(result, force);
  const auto n = static_cast<Eigen::Index>(result.players.size());
  ProbabilityMatrix out;
  out.tournament = result.tournament;
  out.players = result.players;
  out.p.resize(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    out.p(a, a) = 0.5;
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const double p = WinProbability(result.beta[a], result.beta[b]);
      out.p(a, b) = p;
      out.p(b, a) = WinProbability(result.beta[b], result.beta[a]);
    }
  }
  return out;
}

std::vector<LeaderboardEntry> Leaderboard(const EppResult& result, bool force) {
  RequireConverged(result, force);
  std::vector<LeaderboardEntry> board;
  for (std::size_t k = 0; k < result.players.size(); ++k) {
    board.push_back({0, result.players[k], result.beta[k], result.std_error[k]});
  }
  std::sort(board.begin(), board.end(), [](const auto& a, const auto& b) {
    if (a.beta != b.beta) return a.beta > b.beta;
    return a.player < b.player;
  });
  for (std::size_t k = 0; k < board.size(); ++k) {
    board[k].rank = (k > 0 && board[k].beta == board[k - 1].beta)
                        ? board[k - 1].rank
                        : static_cast<int>(k) + 1;
  }
  return board;
}

double TwoSidedNormalPValue(double z) {
  const double p = std::erfc(std::abs(z) / std::numbers::sqrt2);
  return std::clamp(p, std::numeric_limits<double>::min(), 1.0);
}

Comparison Compare(const EppResult& result, const PlayerId& i,
                   const PlayerId& j) {
  const int a = result.IndexOf(i);
  const int b = result.IndexOf(j);
  Comparison out;
  out.i = i;
  out.j = j;
  out.delta = result.beta[a] - result.beta[b];
  out.prob = WinProbability(result.beta[a], result.beta[b]);
  const double var = result.covariance(a, a) + result.covariance(b, b) -
                     2.0 * result.covariance(a, b);
  if (a == b || !(var > 0.0)) {
    out.degenerate = true;
    out.z = std::numeric_limits<double>::quiet_NaN();
    out.p_value = 1.0;
    return out;
  }
  out.z = out.delta / std::sqrt(var);
  out.p_value = TwoSidedNormalPValue(out.z);
  return out;
}

SpreadStats ComputeSpread(std::vector<double> values) {
  if (values.empty()) {
    throw EppError(ErrorCode::kInvalidArgument, "spread of an empty set");
  }
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double h = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  SpreadStats s;
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  s.range = s.max - s.min;
  return s;
}

std::vector<TunabilitySummary> Tunability(std::span<const EppResult> results,
                                          const AlgorithmLabel& grouping) {
  if (results.empty()) {
    throw EppError(ErrorCode::kInvalidArgument, "no results to summarize");
  }
  std::vector<TunabilitySummary> out;
  for (const EppResult& r : results) {
    std::map<std::string, std::vector<double>> by_algorithm;
    for (std::size_t k = 0; k < r.players.size(); ++k) {
      const std::string label =
          grouping ? grouping(r.players[k]) : r.players[k].algorithm;
      by_algorithm[label].push_back(r.beta[k]);
    }
    for (auto& [algorithm, values] : by_algorithm) {
      TunabilitySummary summary;
      summary.tournament = r.tournament;
      summary.algorithm = algorithm;
      summary.settings = static_cast<int>(values.size());
      summary.stats = ComputeSpread(std::move(values));
      out.push_back(std::move(summary));
    }
  }
  return out;
}

int EppMatrix::ObservedCells() const {
  return static_cast<int>(mask.size() - mask.count());
}

EppMatrix EppMatrix::FullyObservedColumns() const {
  EppMatrix out;
  out.rows = rows;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(cols.size()); ++c) {
    if (!mask.col(c).any()) keep.push_back(c);
  }
  const auto n_rows = static_cast<Eigen::Index>(rows.size());
  const auto n_keep = static_cast<Eigen::Index>(keep.size());
  out.values.resize(n_rows, n_keep);
  out.mask.setConstant(n_rows, n_keep, false);
  for (Eigen::Index k = 0; k < n_keep; ++k) {
    out.cols.push_back(cols[keep[k]]);
    out.values.col(k) = values.col(keep[k]);
  }
  return out;
}

EppMatrix BuildEppMatrix(std::span<const EppResult> results) {
  std::map<TournamentId, const EppResult*> by_tournament;
  std::map<PlayerId, Eigen::Index> col_index;
  for (const EppResult& r : results) {
    if (!by_tournament.emplace(r.tournament, &r).second) {
      throw EppError(ErrorCode::kInvalidArgument,
                     "tournament " + r.tournament.name + " appears twice");
    }
    for (const PlayerId& p : r.players) col_index.emplace(p, 0);
  }
  EppMatrix out;
  for (auto& [player, index] : col_index) {
    index = static_cast<Eigen::Index>(out.cols.size());
    out.cols.push_back(player);
  }
  const auto n_rows = static_cast<Eigen::Index>(by_tournament.size());
  const auto n_cols = static_cast<Eigen::Index>(out.cols.size());
  out.values.setZero(n_rows, n_cols);
  out.mask.setConstant(n_rows, n_cols, true);
  Eigen::Index row = 0;
  for (const auto& [tournament, result] : by_tournament) {
    out.rows.push_back(tournament);
    for (std::size_t k = 0; k < result->players.size(); ++k) {
      const Eigen::Index col = col_index.at(result->players[k]);
      out.values(row, col) = result->beta[k];
      out.mask(row, col) = false;
    }
    ++row;
  }
  return out;
}

EmbeddingResult PcaEmbed(const EppMatrix& matrix, int k) {
  if (!matrix.Complete()) {
    throw EppError(ErrorCode::kIncompleteMatrix,
                   std::to_string(matrix.values.size() - matrix.ObservedCells()) +
                       " masked cell(s); filter to fully observed columns");
  }
  const Eigen::Index rows = matrix.values.rows();
  const Eigen::Index cols = matrix.values.cols();
  if (rows < 2) {
    throw EppError(ErrorCode::kShapeError, "PCA needs at least 2 rows");
  }
  if (k < 1 || k > std::min(rows, cols)) {
    throw EppError(ErrorCode::kShapeError,
                   "k = " + std::to_string(k) + " outside [1, " +
                       std::to_string(std::min(rows, cols)) + "]");
  }

  EmbeddingResult out;
  out.row_labels = matrix.rows;
  out.col_labels = matrix.cols;
  out.matrix = matrix.values;
  const Eigen::MatrixXd centered =
      matrix.values.rowwise() - matrix.values.colwise().mean();
  const double dof = static_cast<double>(rows - 1);
  out.total_variance = centered.squaredNorm() / dof;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  out.loadings = svd.matrixV().leftCols(k);
  for (int c = 0; c < k; ++c) {
    Eigen::Index pivot = 0;
    out.loadings.col(c).cwiseAbs().maxCoeff(&pivot);
    if (out.loadings(pivot, c) < 0.0) out.loadings.col(c) *= -1.0;
  }
  out.scores = centered * out.loadings;
  out.explained_variance =
      svd.singularValues().head(k).array().square() / dof;
  return out;
}

std::string LeaderboardsToCsv(std::span<const EppResult> results, bool force) {
  std::string out = "tournament,rank,player,beta,stderr\n";
  for (const EppResult& r : results) {
    for (const LeaderboardEntry& e : Leaderboard(r, force)) {
      out += csv::JoinLine({csv::Escape(r.tournament.name),
                            std::to_string(e.rank),
                            csv::Escape(e.player.ToString()),
                            csv::FormatDouble(e.beta),
                            csv::FormatDouble(e.std_error)});
    }
  }
  return out;
}

std::string ProbabilitiesToCsv(std::span<const ProbabilityMatrix> matrices) {
  std::string out = "tournament,player_i,player_j,probability\n";
  for (const ProbabilityMatrix& m : matrices) {
    for (std::size_t a = 0; a < m.players.size(); ++a) {
      for (std::size_t b = 0; b < m.players.size(); ++b) {
        out += csv::JoinLine(
            {csv::Escape(m.tournament.name), csv::Escape(m.players[a].ToString()),
             csv::Escape(m.players[b].ToString()),
             csv::FormatDouble(m.p(static_cast<Eigen::Index>(a),
                                   static_cast<Eigen::Index>(b)))});
      }
    }
  }
  return out;
}

std::string ComparisonToJson(const TournamentId& tournament,
                             const Comparison& c) {
  ordered_json doc;
  doc["tournament"] = tournament.name;
  doc["i"] = c.i.ToString();
  doc["j"] = c.j.ToString();
  doc["delta"] = Number(c.delta);
  doc["prob"] = Number(c.prob);
  doc["z"] = Number(c.z);
  doc["p_value"] = Number(c.p_value);
  doc["degenerate"] = c.degenerate;
  return doc.dump(2) + "\n";
}

std::string TunabilityToCsv(std::span<const TunabilitySummary> summaries) {
  std::string out =
      "tournament,algorithm,settings,min,q1,median,q3,max,range\n";
  for (const TunabilitySummary& s : summaries) {
    out += csv::JoinLine(
        {csv::Escape(s.tournament.name), csv::Escape(s.algorithm),
         std::to_string(s.settings), csv::FormatDouble(s.stats.min),
         csv::FormatDouble(s.stats.q1), csv::FormatDouble(s.stats.median),
         csv::FormatDouble(s.stats.q3), csv::FormatDouble(s.stats.max),
         csv::FormatDouble(s.stats.range)});
  }
  return out;
}

std::string EmbeddingToJson(const EmbeddingResult& e) {
  ordered_json doc;
  doc["row_labels"] = ordered_json::array();
  for (const TournamentId& t : e.row_labels) doc["row_labels"].push_back(t.name);
  doc["col_labels"] = ordered_json::array();
  for (const PlayerId& p : e.col_labels) {
    doc["col_labels"].push_back(p.ToString());
  }
  doc["scores"] = MatrixToJson(e.scores);
  doc["loadings"] = MatrixToJson(e.loadings);
  doc["explained_variance"] = ordered_json::array();
  for (double v : e.explained_variance) {
    doc["explained_variance"].push_back(Number(v));
  }
  doc["total_variance"] = Number(e.total_variance);
  return doc.dump(2) + "\n";
}

std::string EppMatrixToCsv(const EppMatrix& m) {
  std::vector<std::string> header = {"tournament"};
  for (const PlayerId& p : m.cols) header.push_back(csv::Escape(p.ToString()));
  std::string out = csv::JoinLine(header);
  for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(m.rows.size()); ++r) {
    std::vector<std::string> line = {csv::Escape(m.rows[r].name)};
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(m.cols.size()); ++c) {
      line.push_back(m.mask(r, c) ? "" : csv::FormatDouble(m.values(r, c)));
    }
    out += csv::JoinLine(line);
  }
  return out;
}

}  // namespace epp
