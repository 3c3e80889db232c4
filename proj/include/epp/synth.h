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

#ifndef EPP_SYNTH_H_
#define EPP_SYNTH_H_

// Ground-truth tournament generator used by recovery and calibration tests.
//
// Randomness comes from std::mt19937_64, whose output sequence is fixed by
// the C++ standard. Uniforms take the top 53 bits of one draw; binomials are
// sums of Bernoulli trials; normals use Box-Muller (cosine branch, one draw
// pair per variate). None of the <random> distributions are used, so
// fixtures do not depend on the standard library vendor.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "epp/core.h"

namespace epp {

inline constexpr std::uint64_t kDefaultSeed = 20190101;

class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform();
  double Normal();
  std::int64_t Binomial(std::int64_t trials, double p);

 private:
  std::mt19937_64 engine_;
};

struct SynthConfig {
  std::vector<double> true_beta;  // sum must be 0
  std::int64_t n_comparisons_per_pair = 100;
  std::uint64_t seed = kDefaultSeed;
  // Optional labels; defaults to ("player", "pNN").
  std::vector<PlayerId> players;
  TournamentId tournament{"synthetic"};

  // Throws kInvalidArgument on a non-centered beta, n < 1 or label mismatch.
  void Validate() const;
  std::vector<PlayerId> PlayerLabels() const;
};

// n evenly spaced values on [-spread, spread], centered.
std::vector<double> EvenlySpacedBeta(int n, double spread);

// wins_i ~ Binomial(n, invlogit(beta_i - beta_j)) for every unordered pair.
std::vector<PairCounts> GeneratePairCounts(const SynthConfig& config);

struct ScoreSynthConfig {
  SynthConfig base;
  int n_splits = 20;
  double noise_scale = 1.0;
};

// score = beta_player + noise_scale * N(0, 1) for every player and split.
ScoreTable GenerateScoreTable(const ScoreSynthConfig& config);

// Multi-tournament fixture: `algorithms` x `settings` players; each
// tournament perturbs the shared ratings by N(0, tournament_sd) before
// re-centering. Player labels are ("algN", "hNN").
struct BenchmarkSynthConfig {
  int algorithms = 1;
  int settings = 10;
  int tournaments = 1;
  int n_splits = 20;
  double spread = 2.0;
  double tournament_sd = 0.5;
  double noise_scale = 1.0;
  std::uint64_t seed = kDefaultSeed;
};

ScoreTable GenerateBenchmark(const BenchmarkSynthConfig& config);

}  // namespace epp

#endif  // EPP_SYNTH_H_
