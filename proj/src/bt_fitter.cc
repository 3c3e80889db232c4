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

#include "epp/bt_fitter.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>

#include <Eigen/Cholesky>

#include "epp/error.h"
#include "json.hpp"

namespace epp {
namespace {

using nlohmann::ordered_json;

void CheckRows(const Eigen::VectorXd& beta, std::span<const DesignRow> rows) {
  const auto n = beta.size();
  for (const DesignRow& row : rows) {
    if (row.i < 0 || row.j < 0 || row.i >= n || row.j >= n) {
      throw EppError(ErrorCode::kShapeError,
                     "design row index out of range for " + std::to_string(n) +
                         " players");
    }
    if (row.i == row.j) {
      throw EppError(ErrorCode::kShapeError, "design row with i == j");
    }
  }
}

// Maps beta to the free parameters: beta = basis * theta. For a reference
// player the column for that player is dropped; for mean-zero the last
// player is expressed as minus the sum of the others.
Eigen::MatrixXd ConstraintBasis(int n, int reference) {
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, n - 1);
  if (reference >= 0) {
    for (int k = 0, col = 0; k < n; ++k) {
      if (k == reference) continue;
      basis(k, col++) = 1.0;
    }
  } else {
    basis.topRows(n - 1).setIdentity();
    basis.row(n - 1).setConstant(-1.0);
  }
  return basis;
}

// Undirected connected components over pairs with at least one comparison.
std::vector<std::vector<int>> Components(int n,
                                         std::span<const DesignRow> rows) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const DesignRow& row : rows) {
    if (row.successes + row.failures <= 0.0) continue;
    const int a = find(row.i);
    const int b = find(row.j);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<int, std::vector<int>> groups;
  for (int k = 0; k < n; ++k) groups[find(k)].push_back(k);
  std::vector<std::vector<int>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

// The unpenalized MLE is finite iff the directed "has beaten" graph is
// strongly connected. Assumes the undirected graph is connected.
bool WinGraphStronglyConnected(int n, std::span<const DesignRow> rows) {
  std::vector<std::vector<int>> forward(n);
  std::vector<std::vector<int>> backward(n);
  for (const DesignRow& row : rows) {
    if (row.successes > 0.0) {
      forward[row.i].push_back(row.j);
      backward[row.j].push_back(row.i);
    }
    if (row.failures > 0.0) {
      forward[row.j].push_back(row.i);
      backward[row.i].push_back(row.j);
    }
  }
  auto reaches_all = [n](const std::vector<std::vector<int>>& adj) {
    std::vector<bool> seen(n, false);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = true;
    int count = 1;
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (int v : adj[u]) {
        if (!seen[v]) {
          seen[v] = true;
          ++count;
          frontier.push(v);
        }
      }
    }
    return count == n;
  };
  return reaches_all(forward) && reaches_all(backward);
}

ordered_json Number(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

double NumberOr(const ordered_json& value, double fallback) {
  if (value.is_null()) return fallback;
  return value.get<double>();
}

ordered_json PlayerToJson(const PlayerId& p) {
  ordered_json item;
  item["algorithm"] = p.algorithm;
  item["hyperparam_set"] = p.hyperparam_set;
  return item;
}

PlayerId PlayerFromJson(const ordered_json& item) {
  return {item.at("algorithm").get<std::string>(),
          item.at("hyperparam_set").get<std::string>()};
}

}  // namespace

std::string ConstraintToString(const Constraint& constraint) {
  if (const auto* ref = std::get_if<Reference>(&constraint)) {
    return "reference=" + ref->player.ToString();
  }
  return "mean-zero";
}

void FitConfig::Validate() const {
  if (!(tol > 0.0)) {
    throw EppError(ErrorCode::kInvalidArgument, "tol must be positive");
  }
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
    throw EppError(ErrorCode::kInvalidArgument, "ridge must be >= 0");
  }
  if (max_iter <= 0) {
    throw EppError(ErrorCode::kInvalidArgument, "max_iter must be positive");
  }
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double LogSigmoid(double x) {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

double WinProbability(double beta_i, double beta_j) {
  if (!std::isfinite(beta_i) || !std::isfinite(beta_j)) {
    throw EppError(ErrorCode::kDomainError, "non-finite rating");
  }
  return Sigmoid(beta_i - beta_j);
}

double LogLikelihood(const Eigen::VectorXd& beta,
                     std::span<const DesignRow> rows, double ridge) {
  CheckRows(beta, rows);
  double total = 0.0;
  for (const DesignRow& row : rows) {
    const double d = beta[row.i] - beta[row.j];
    if (row.successes > 0.0) total += row.successes * LogSigmoid(d);
    if (row.failures > 0.0) total += row.failures * LogSigmoid(-d);
  }
  return total - 0.5 * ridge * beta.squaredNorm();
}

Eigen::VectorXd Gradient(const Eigen::VectorXd& beta,
                         std::span<const DesignRow> rows, double ridge) {
  CheckRows(beta, rows);
  Eigen::VectorXd grad = -ridge * beta;
  for (const DesignRow& row : rows) {
    const double d = beta[row.i] - beta[row.j];
    // successes - n * p, written so neither term cancels catastrophically.
    const double r = row.successes * Sigmoid(-d) - row.failures * Sigmoid(d);
    grad[row.i] += r;
    grad[row.j] -= r;
  }
  return grad;
}

Eigen::MatrixXd Hessian(const Eigen::VectorXd& beta,
                        std::span<const DesignRow> rows, double ridge) {
  CheckRows(beta, rows);
  const auto n = beta.size();
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
  hess.diagonal().setConstant(-ridge);
  for (const DesignRow& row : rows) {
    const double d = beta[row.i] - beta[row.j];
    const double w = (row.successes + row.failures) * Sigmoid(d) * Sigmoid(-d);
    hess(row.i, row.i) -= w;
    hess(row.j, row.j) -= w;
    hess(row.i, row.j) += w;
    hess(row.j, row.i) += w;
  }
  return hess;
}

int EppResult::IndexOf(const PlayerId& player) const {
  auto it = std::lower_bound(players.begin(), players.end(), player);
  if (it == players.end() || !(*it == player)) {
    throw EppError(ErrorCode::kUnknownPlayer,
                   player.ToString() + " not rated in tournament " +
                       tournament.name);
  }
  return static_cast<int>(it - players.begin());
}

EppResult FitEpp(const TournamentId& tournament,
                 std::span<const PairCounts> counts, const FitConfig& config) {
  TournamentMatches matches;
  matches.tournament = tournament;
  for (const PairCounts& p : counts) {
    matches.players.push_back(p.i);
    matches.players.push_back(p.j);
  }
  std::sort(matches.players.begin(), matches.players.end());
  matches.players.erase(
      std::unique(matches.players.begin(), matches.players.end()),
      matches.players.end());
  matches.pairs.assign(counts.begin(), counts.end());
  return FitEpp(matches, config);
}

EppResult FitEpp(const TournamentMatches& matches, const FitConfig& config) {
  config.Validate();

  EppResult result;
  result.tournament = matches.tournament;
  result.players = matches.players;
  std::sort(result.players.begin(), result.players.end());
  result.players.erase(
      std::unique(result.players.begin(), result.players.end()),
      result.players.end());
  result.constraint = ConstraintToString(config.constraint);
  result.ridge = config.ridge;

  const int n = static_cast<int>(result.players.size());
  if (n < 2) {
    throw EppError(ErrorCode::kTooFewPlayers,
                   "tournament " + matches.tournament.name + " has " +
                       std::to_string(n) + " player(s); need at least 2");
  }

  std::vector<DesignRow> rows;
  rows.reserve(matches.pairs.size());
  for (const PairCounts& p : matches.pairs) {
    if (!(p.wins_i >= 0.0) || !(p.wins_j >= 0.0)) {
      throw EppError(ErrorCode::kInvalidArgument,
                     "negative win count for " + p.i.ToString() + " vs " +
                         p.j.ToString());
    }
    if (p.total() <= 0.0) continue;
    rows.push_back({result.IndexOf(p.i), result.IndexOf(p.j), p.wins_i,
                    p.wins_j});
  }

  const auto components = Components(n, rows);
  if (components.size() > 1) {
    std::string names;
    for (std::size_t c = 0; c < components.size(); ++c) {
      names += (c ? "; " : "") + std::string("{");
      for (std::size_t k = 0; k < components[c].size(); ++k) {
        names += (k ? ", " : "") + result.players[components[c][k]].ToString();
      }
      names += "}";
    }
    throw EppError(ErrorCode::kDisconnectedGraph,
                   "tournament " + matches.tournament.name + " splits into " +
                       std::to_string(components.size()) +
                       " components: " + names);
  }

  int reference = -1;
  if (const auto* ref = std::get_if<Reference>(&config.constraint)) {
    reference = result.IndexOf(ref->player);
  }
  // Without a penalty the constraint only fixes the location, so the fit
  // runs pinned to one player and is recentred afterwards. Pinning keeps a
  // separated player's vanishing curvature out of sums with O(1) entries,
  // where a mean-zero basis would round it away.
  const bool recentre = reference < 0 && config.ridge == 0.0;
  const Eigen::MatrixXd basis =
      ConstraintBasis(n, recentre ? 0 : reference);

  result.separated =
      config.ridge == 0.0 && !WinGraphStronglyConnected(n, rows);

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(n - 1);
  Eigen::VectorXd beta = basis * theta;
  double loglik = LogLikelihood(beta, rows, config.ridge);
  result.loglik_trace.push_back(loglik);

  auto reduced_gradient = [&](const Eigen::VectorXd& b) {
    return Eigen::VectorXd(basis.transpose() * Gradient(b, rows, config.ridge));
  };
  auto newton_step = [&](const Eigen::VectorXd& b, const Eigen::VectorXd& g,
                         Eigen::VectorXd& step) {
    const Eigen::MatrixXd info =
        -basis.transpose() * Hessian(b, rows, config.ridge) * basis;
    Eigen::LDLT<Eigen::MatrixXd> solver(info);
    if (solver.info() != Eigen::Success) return false;
    step = solver.solve(g);
    return step.allFinite();
  };
  // Changes this small are indistinguishable from rounding in the sum.
  auto noise = [](double value) {
    return 64.0 * std::numeric_limits<double>::epsilon() *
           (1.0 + std::abs(value));
  };

  Eigen::VectorXd step;
  for (int iter = 0; iter < config.max_iter; ++iter) {
    const Eigen::VectorXd grad = reduced_gradient(beta);
    const double grad_norm = grad.norm();
    // Under separation the gradient vanishes only asymptotically; keep
    // stepping so the diverging ratings cross the reporting threshold.
    const bool done = grad_norm < config.tol && !result.separated;
    if (!newton_step(beta, grad, step)) break;

    double scale = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= (done ? 0 : 30); ++halving) {
      const Eigen::VectorXd candidate_theta = theta + scale * step;
      const Eigen::VectorXd candidate_beta = basis * candidate_theta;
      const double candidate = LogLikelihood(candidate_beta, rows, config.ridge);
      bool ok = std::isfinite(candidate) && candidate >= loglik;
      if (!ok && scale == 1.0 && std::isfinite(candidate) &&
          candidate >= loglik - noise(loglik)) {
        // Near the optimum the gain drops below rounding; a full Newton
        // step still counts as progress if the gradient shrinks.
        ok = reduced_gradient(candidate_beta).norm() < grad_norm;
      }
      if (ok) {
        theta = candidate_theta;
        beta = candidate_beta;
        loglik = candidate;
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) break;
    ++result.iterations;
    result.loglik_trace.push_back(loglik);
    // Once within tolerance, a single extra step lands on the optimum to
    // machine precision (quadratic convergence).
    if (done) break;
  }

  if (reference < 0) beta.array() -= beta.mean();
  if (reference >= 0) beta[reference] = 0.0;
  result.loglik = LogLikelihood(beta, rows, config.ridge);
  result.gradient_norm = reduced_gradient(beta).norm();
  result.converged = result.gradient_norm < config.tol && !result.separated;

  const Eigen::MatrixXd info =
      -basis.transpose() * Hessian(beta, rows, config.ridge) * basis;
  Eigen::LLT<Eigen::MatrixXd> chol(info);
  if (chol.info() == Eigen::Success) {
    const Eigen::MatrixXd reduced_cov =
        chol.solve(Eigen::MatrixXd::Identity(n - 1, n - 1));
    Eigen::MatrixXd cov = basis * reduced_cov * basis.transpose();
    if (recentre) {
      // Centring is linear: cov(C beta) = C cov(beta) C.
      const Eigen::MatrixXd centre =
          Eigen::MatrixXd::Identity(n, n) -
          Eigen::MatrixXd::Constant(n, n, 1.0 / n);
      cov = centre * cov * centre;
    }
    result.covariance = 0.5 * (cov + cov.transpose());
  } else {
    result.covariance = Eigen::MatrixXd::Constant(
        n, n, std::numeric_limits<double>::infinity());
  }
  if (reference >= 0) {
    result.covariance.row(reference).setZero();
    result.covariance.col(reference).setZero();
  }

  result.beta.assign(beta.data(), beta.data() + n);
  result.std_error.resize(n);
  for (int k = 0; k < n; ++k) {
    result.std_error[k] = std::sqrt(std::max(0.0, result.covariance(k, k)));
    if (std::abs(result.beta[k]) > kSeparationThreshold) {
      result.separated_players.push_back(result.players[k]);
    }
  }
  return result;
}

std::string EppResultsToJson(std::span<const EppResult> results) {
  ordered_json doc = ordered_json::array();
  for (const EppResult& r : results) {
    ordered_json item;
    item["tournament"] = r.tournament.name;
    item["players"] = ordered_json::array();
    for (const PlayerId& p : r.players) item["players"].push_back(PlayerToJson(p));
    item["beta"] = ordered_json::array();
    item["stderr"] = ordered_json::array();
    for (std::size_t k = 0; k < r.beta.size(); ++k) {
      item["beta"].push_back(Number(r.beta[k]));
      item["stderr"].push_back(Number(r.std_error[k]));
    }
    item["covariance"] = ordered_json::array();
    for (Eigen::Index a = 0; a < r.covariance.rows(); ++a) {
      ordered_json row = ordered_json::array();
      for (Eigen::Index b = 0; b < r.covariance.cols(); ++b) {
        row.push_back(Number(r.covariance(a, b)));
      }
      item["covariance"].push_back(std::move(row));
    }
    item["loglik"] = Number(r.loglik);
    item["converged"] = r.converged;
    item["iterations"] = r.iterations;
    item["gradient_norm"] = Number(r.gradient_norm);
    item["separated"] = r.separated;
    item["separated_players"] = ordered_json::array();
    for (const PlayerId& p : r.separated_players) {
      item["separated_players"].push_back(PlayerToJson(p));
    }
    item["constraint"] = r.constraint;
    item["ridge"] = r.ridge;
    ordered_json warnings = ordered_json::array();
    if (r.separated) warnings.push_back("Separated");
    if (!r.converged) warnings.push_back("NotConverged");
    item["warnings"] = std::move(warnings);
    doc.push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

std::vector<EppResult> EppResultsFromJson(std::string_view text) {
  std::vector<EppResult> results;
  try {
    const ordered_json doc = ordered_json::parse(text);
    if (!doc.is_array()) {
      throw EppError(ErrorCode::kParseError, "results must be a JSON array");
    }
    constexpr double kInf = std::numeric_limits<double>::infinity();
    for (const ordered_json& item : doc) {
      EppResult r;
      r.tournament.name = item.at("tournament").get<std::string>();
      for (const auto& p : item.at("players")) {
        r.players.push_back(PlayerFromJson(p));
      }
      const std::size_t n = r.players.size();
      if (!std::is_sorted(r.players.begin(), r.players.end())) {
        throw EppError(ErrorCode::kParseError,
                       "players of " + r.tournament.name + " are not sorted");
      }
      const auto& beta = item.at("beta");
      const auto& se = item.at("stderr");
      const auto& cov = item.at("covariance");
      if (beta.size() != n || se.size() != n || cov.size() != n) {
        throw EppError(ErrorCode::kShapeError,
                       "result for " + r.tournament.name +
                           " has inconsistent dimensions");
      }
      r.covariance.resize(static_cast<Eigen::Index>(n),
                          static_cast<Eigen::Index>(n));
      for (std::size_t a = 0; a < n; ++a) {
        r.beta.push_back(beta[a].get<double>());
        r.std_error.push_back(NumberOr(se[a], kInf));
        if (cov[a].size() != n) {
          throw EppError(ErrorCode::kShapeError, "covariance is not square");
        }
        for (std::size_t b = 0; b < n; ++b) {
          r.covariance(static_cast<Eigen::Index>(a),
                       static_cast<Eigen::Index>(b)) = NumberOr(cov[a][b], kInf);
        }
      }
      r.loglik = NumberOr(item.at("loglik"), -kInf);
      r.converged = item.at("converged").get<bool>();
      r.iterations = item.at("iterations").get<int>();
      r.gradient_norm = NumberOr(item.value("gradient_norm", ordered_json()), 0.0);
      r.separated = item.value("separated", false);
      for (const auto& p : item.at("separated_players")) {
        r.separated_players.push_back(PlayerFromJson(p));
      }
      r.constraint = item.value("constraint", std::string("mean-zero"));
      r.ridge = item.value("ridge", 0.0);
      results.push_back(std::move(r));
    }
  } catch (const ordered_json::exception& e) {
    throw EppError(ErrorCode::kParseError, e.what());
  }
  return results;
}

}  // namespace epp
