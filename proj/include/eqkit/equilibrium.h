// Copyright 2026 The eqkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EQKIT_EQUILIBRIUM_H_
#define EQKIT_EQUILIBRIUM_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "eqkit/game.h"

namespace eqkit {

struct NashResult {
  StrategyProfile profile;
  // Largest unilateral gain found by NeVerify.
  double epsilon = 0.0;
  std::vector<double> utilities;
};

// Max over players of the best unilateral gain u_i(s_i', s_-i) - u_i(s).
// Exhaustive for finite games; for intervals the deviation search is
// BestResponseGrid with `deviation_points` grid points. Never negative.
double NeVerify(const Game& game, std::span<const double> profile,
                int deviation_points = 201);

// Every joint action with no strictly profitable unilateral deviation.
std::vector<NashResult> PureNeSearch(const FiniteGame& game);

enum class UpdateMode { kSequential, kSimultaneous };

using BestResponseOverride =
    std::function<double(int player, std::span<const double> profile)>;

struct BrDynamicsOptions {
  int max_sweeps = 500;
  // A sweep that moves no component by more than `tol` ends the run.
  double tol = 1e-6;
  int br_points = 201;
  int deviation_points = 201;
  UpdateMode mode = UpdateMode::kSequential;
  // Player order within a sweep; empty means ascending index.
  std::vector<int> order;
  // Closed-form best response; the grid search is used when unset.
  BestResponseOverride best_response;
};

struct BrTrace {
  std::vector<StrategyProfile> iterates;
  // Player updated to produce each iterate; -1 for the start and for
  // simultaneous sweeps.
  std::vector<int> updated_player;
  std::vector<int> sweep_order;
  bool converged = false;
  int sweeps = 0;
  std::optional<StrategyProfile> limit;
  double limit_epsilon = 0.0;
};

BrTrace BrDynamics(const Game& game, std::span<const double> start,
                   const BrDynamicsOptions& options = {});

struct BasinMap {
  static constexpr int kDiverged = -1;

  int resolution = 0;
  std::vector<double> axis0;
  std::vector<double> axis1;
  // labels[a * resolution + b] for the start (axis0[a], axis1[b]).
  std::vector<int> labels;
  std::vector<StrategyProfile> equilibria;
  double cluster_radius = 0.0;

  int label(int a, int b) const { return labels[a * resolution + b]; }
};

// BR dynamics from every start of a resolution x resolution grid over a
// two-player interval game. Limits within 10 * tol (max-norm) share a label.
BasinMap ComputeBasinMap(const Game& game, int resolution,
                         const BrDynamicsOptions& options = {});

// Number of 4-connected components formed by the cells carrying `label`.
int CountBasinComponents(const BasinMap& map, int label);

// Largest gain from a pure deviation against a mixed profile.
double MixedNeGap(const FiniteGame& game, const MixedProfile& mix);

struct SupportEnumerationResult {
  std::vector<MixedProfile> equilibria;
  int singular_systems = 0;
};

// Equal-size support enumeration for two-player games with at most
// kMaxSupportActions actions per player.
inline constexpr int kMaxSupportActions = 8;
SupportEnumerationResult SupportEnumeration(const FiniteGame& game);

struct CorrelatedResult {
  JointDistribution distribution;
  double max_violation = 0.0;
  double max_average_regret = 0.0;
  uint64_t seed = 0;
  int iterations = 0;
};

// Regret-matching self-play on conditional (swap) regrets. Each round a
// player plays the stationary distribution of its positive-regret switching
// matrix, uniform when no regret is positive. Returns the empirical joint
// distribution of play.
CorrelatedResult RegretMatchingCe(const FiniteGame& game, int iterations,
                                  uint64_t seed);

// max over (i, a, a') of sum_{s_-i} dist(a, s_-i) (u_i(a', s_-i) - u_i(a, s_-i)).
double CeVerify(const FiniteGame& game, const JointDistribution& dist);

}  // namespace eqkit

#endif  // EQKIT_EQUILIBRIUM_H_
