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

// Welfare, Pareto optimality, price of anarchy / stability, and checks of
// normalized equilibria under a shared constraint.

#ifndef EQKIT_EFFICIENCY_H_
#define EQKIT_EFFICIENCY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqkit/equilibrium.h"
#include "eqkit/game.h"
#include "eqkit/structural.h"
#include "eqkit/wireless.h"

namespace eqkit {

// Sum of utilities.
double SocialWelfare(const Game& game, std::span<const double> profile);
double SocialWelfare(const FiniteGame& game, int64_t cell);

// sum_i f(SINR_i) / sum_i p_i. Throws DomainError when every power is 0.
double VirtualMimoMetric(std::span<const double> efficiencies,
                         std::span<const double> powers);
double VirtualMimoMetric(const EnergyEfficientPc& game,
                         std::span<const double> powers);

struct ParetoResult {
  bool pareto_optimal = true;
  // First cell (lowest index) that weakly improves everyone and strictly
  // improves someone.
  std::optional<int64_t> dominating_cell;
};

ParetoResult IsParetoOptimal(const FiniteGame& game, int64_t cell);
// Same scan for an arbitrary utility vector, e.g. an off-grid equilibrium.
ParetoResult IsParetoOptimal(const FiniteGame& game,
                             std::span<const double> utilities,
                             int64_t skip_cell = -1);

// argmax_s sum_i alpha_i u_i(s), lowest cell on ties. Throws
// ParameterError unless every weight is positive.
int64_t WeightedSumPo(const FiniteGame& game, std::span<const double> alpha);

struct PoaResult {
  double max_welfare = 0.0;
  int64_t max_welfare_cell = 0;
  double worst_ne_welfare = 0.0;
  double best_ne_welfare = 0.0;
  // False when some equilibrium has nonpositive welfare; poa/pos are then
  // NaN and only the gaps are meaningful.
  bool ratio_defined = true;
  double poa = 0.0;
  double pos = 0.0;
  double worst_gap = 0.0;  // max welfare - worst NE welfare
  double best_gap = 0.0;   // max welfare - best NE welfare
};

// Welfare ratios against the grid maximum. NE profiles are evaluated with
// the game's own payoffs; for discretized games they need not lie on the
// grid, in which case `continuous` must be supplied.
PoaResult PoaPos(const FiniteGame& game, const std::vector<NashResult>& ne_set,
                 const Game* continuous = nullptr);

// Feasible set {s : h(s) >= 0} shared by all players, with weights r.
struct ConstraintSpec {
  PotentialFunction h;
  std::vector<double> r;
};

struct NormalizedEqVerdict {
  bool holds = false;
  bool active = false;
  double constraint_value = 0.0;
  std::vector<double> multipliers;     // lambda_i >= 0 under u_i + lambda_i h
  std::vector<double> scaled;          // lambda_i r_i
  std::vector<int> unidentifiable;     // players with dh/ds_i ~ 0
  double epsilon = 0.0;                // NE gap when inactive
  double min_utility = 0.0;
  double sum_log_utility = 0.0;        // -inf if some utility <= 0
  std::string note;
};

// KKT check of a candidate normalized equilibrium. Active constraint
// (|h| <= tol): lambda_i = -(du_i/ds_i) / (dh/ds_i) by finite differences;
// holds iff every lambda_i >= -tol and the products lambda_i r_i agree
// within 1e-3 relative. Inactive: holds iff the profile is an ε-NE with
// ε <= tol scaled by the utility magnitude.
NormalizedEqVerdict NormalizedEqCheck(const Game& game,
                                      std::span<const double> profile,
                                      const ConstraintSpec& constraint,
                                      const FDConfig& cfg = {});

inline constexpr double kMultiplierRelativeTolerance = 1e-3;

}  // namespace eqkit

#endif  // EQKIT_EFFICIENCY_H_
