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

// Sampled tests of the structural conditions behind pure-equilibrium
// existence and uniqueness results. Every test falsifies or accumulates
// evidence; HOLDS_ON_SAMPLES is never a proof.

#ifndef EQKIT_STRUCTURAL_H_
#define EQKIT_STRUCTURAL_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqkit/game.h"

namespace eqkit {

enum class CheckStatus { kHoldsOnSamples, kCounterexample };

enum class CheckKind {
  kQuasiConcavity,
  kSupermodular,
  kSubmodular,
  kPotentialCondition,
  kExactPotential,
  kOrdinalPotential,
  kDsc,
  kStandardMonotonicity,
  kStandardScalability,
};

std::string ToString(CheckStatus status);
std::string ToString(CheckKind kind);

// The points and numbers that violate a condition. `profiles` holds the
// evaluation points in the order the defining inequality uses them.
struct Witness {
  std::vector<StrategyProfile> profiles;
  std::vector<double> values;
  int player = -1;
  int other_player = -1;
  std::vector<double> steps;
  double alpha = 0.0;
  std::string description;
};

struct CheckVerdict {
  CheckKind kind = CheckKind::kQuasiConcavity;
  CheckStatus status = CheckStatus::kHoldsOnSamples;
  std::optional<Witness> witness;
  int samples_used = 0;
  double tolerance = 0.0;
  // Smallest slack observed across samples (negative means violated).
  double worst_margin = 0.0;

  bool holds() const { return status == CheckStatus::kHoldsOnSamples; }
};

// Sign the sampled DSC quantity (s - s') . (gamma(s) - gamma(s')) must
// take. kNegative is the monotone-operator orientation satisfied by
// concave games; kPositive is the literal "> 0" form.
enum class DscConvention { kNegative, kPositive };

struct FDConfig {
  // Finite-difference step as a fraction of each interval's width.
  double step_fraction = 1e-4;
  // Interior grid points per axis for cross-partials and opponent sweeps.
  int grid_points = 9;
  // Points along the player's own axis for quasi-concavity.
  int line_points = 201;
  int sample_pairs = 200;
  int potential_samples = 1000;
  int monotonicity_samples = 100;
  int scalability_samples = 100;
  double alpha_max = 4.0;
  // Relative tolerance against a per-check magnitude scale (floor 1).
  double tolerance = 1e-6;
  uint64_t seed = 0;
  DscConvention dsc_convention = DscConvention::kNegative;

  void Validate() const;
};

using PotentialFunction = std::function<double(std::span<const double>)>;
using BestResponseMap =
    std::function<std::vector<double>(std::span<const double>)>;

// Central-difference estimate of d^2 u_k / ds_i ds_j at `point` with
// per-axis steps h_i, h_j.
double CrossPartial(const Game& game, int utility_index, int i, int j,
                    std::span<const double> point, double h_i, double h_j);

// First partial d u_k / ds_k, central where the step fits, one-sided at
// the boundary.
double OwnPartial(const Game& game, int player, std::span<const double> point,
                  double h);

// No strict interior dip along the player's own axis for sampled opponent
// profiles.
CheckVerdict CheckQuasiConcavity(const Game& game, int player,
                                 const FDConfig& cfg);

struct SModularVerdict {
  CheckVerdict supermodular;
  CheckVerdict submodular;
};

SModularVerdict CheckSModular(const Game& game, const FDConfig& cfg);

// d^2 (u_i - u_j) / ds_i ds_j == 0 for every pair on sampled points.
CheckVerdict CheckPotentialCondition(const Game& game, const FDConfig& cfg);

enum class PotentialMode { kExact, kOrdinal };

// Compares unilateral-deviation differences of u_i and phi. Exhaustive
// over all deviations for finite games, sampled otherwise.
CheckVerdict VerifyPotential(const Game& game, const PotentialFunction& phi,
                             const FDConfig& cfg,
                             PotentialMode mode = PotentialMode::kExact);

// Sampled diagonal strict concavity of the weighted pseudogradient.
CheckVerdict CheckDsc(const Game& game, std::span<const double> weights,
                      const FDConfig& cfg);

struct StandardBrVerdict {
  CheckVerdict monotonicity;
  CheckVerdict scalability;
  bool holds() const { return monotonicity.holds() && scalability.holds(); }
};

// Monotonicity and scalability of a best-response map on the box
// [0, box_upper]. Throws DomainError on a negative output component.
StandardBrVerdict CheckStandardBr(const BestResponseMap& br,
                                  std::span<const double> box_upper,
                                  const FDConfig& cfg);

// Re-evaluates a counterexample witness through its defining inequality.
// Returns true when the violation reproduces beyond tolerance.
bool ReplayWitness(const Game& game, const CheckVerdict& verdict,
                   const PotentialFunction& phi = nullptr);
bool ReplayWitness(const BestResponseMap& br, const CheckVerdict& verdict);

enum class ExistenceConclusion {
  kPureNeGuaranteed,
  kMixedNeGuaranteed,
  kUnknown,
};

std::string ToString(ExistenceConclusion conclusion);

struct ExistenceReport {
  std::vector<CheckVerdict> quasi_concavity;  // one per player
  std::optional<CheckVerdict> supermodular;
  std::optional<CheckVerdict> submodular;
  std::optional<CheckVerdict> potential;
  bool finite_game = false;
  ExistenceConclusion conclusion = ExistenceConclusion::kUnknown;
  // E.g. "Debreu-Fan-Glicksberg", "Topkis", "Monderer-Shapley", "Nash".
  std::string theorem;
  std::string note;
};

// Runs the applicable checks in the order quasi-concavity, S-modularity,
// potential, finiteness, and concludes with the first theorem whose
// premises hold on samples.
ExistenceReport BuildExistenceReport(const Game& game, const FDConfig& cfg,
                                     const PotentialFunction& phi = nullptr);

}  // namespace eqkit

#endif  // EQKIT_STRUCTURAL_H_
