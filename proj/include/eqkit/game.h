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

#ifndef EQKIT_GAME_H_
#define EQKIT_GAME_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "eqkit/errors.h"

namespace eqkit {

// Tolerance used for probability vectors and exact utility comparisons.
inline constexpr double kProbabilityTolerance = 1e-9;

struct Interval {
  double lower = 0.0;
  double upper = 1.0;
  double width() const { return upper - lower; }
};

struct FiniteActions {
  int count = 1;
};

class StrategySpace {
 public:
  static StrategySpace MakeInterval(double lower, double upper);
  static StrategySpace MakeFinite(int action_count);

  bool is_interval() const { return std::holds_alternative<Interval>(kind_); }
  bool is_finite() const { return !is_interval(); }
  const Interval& interval() const;
  int action_count() const;

  bool Contains(double value) const;
  std::string ToString() const;

 private:
  explicit StrategySpace(std::variant<Interval, FiniteActions> kind)
      : kind_(kind) {}
  std::variant<Interval, FiniteActions> kind_;
};

// One value per player. Finite components hold integral action indices.
using StrategyProfile = std::vector<double>;

using UtilityOracle =
    std::function<std::vector<double>(std::span<const double>)>;

class FiniteGame;

// A strategic-form game: players, strategy spaces, and a utility oracle.
// Immutable after construction; the oracle must be reentrant.
class Game {
 public:
  Game(std::string name, std::vector<StrategySpace> spaces,
       UtilityOracle utility);

  const std::string& name() const { return name_; }
  int num_players() const { return static_cast<int>(spaces_.size()); }
  const StrategySpace& space(int player) const;
  const std::vector<StrategySpace>& spaces() const { return spaces_; }

  bool all_intervals() const;
  bool all_finite() const;

  // Set when the game was built from an explicit payoff tensor.
  const FiniteGame* finite() const { return finite_.get(); }

  // Raw oracle call without validation. Used on hot paths after the caller
  // has established validity.
  std::vector<double> RawUtilities(std::span<const double> profile) const {
    return utility_(profile);
  }

 private:
  friend class FiniteGame;
  std::string name_;
  std::vector<StrategySpace> spaces_;
  UtilityOracle utility_;
  std::shared_ptr<const FiniteGame> finite_;
};

// Throws DomainError naming the first offending player.
void ValidateProfile(const Game& game, std::span<const double> profile);

// u_1(s), ..., u_K(s). Rejects invalid profiles and non-finite outputs.
std::vector<double> EvaluateUtility(const Game& game,
                                    std::span<const double> profile);

// Explicit payoff tensor. Cells are laid out row-major with the last
// player's action varying fastest; each cell stores K payoffs.
class FiniteGame {
 public:
  FiniteGame(std::string name, std::vector<int> action_counts,
             std::vector<double> payoffs);

  // Two-player game from row-player and column-player payoff matrices.
  static FiniteGame FromBimatrix(std::string name,
                                 const std::vector<std::vector<double>>& row,
                                 const std::vector<std::vector<double>>& col);

  const std::string& name() const { return name_; }
  int num_players() const { return static_cast<int>(action_counts_.size()); }
  const std::vector<int>& action_counts() const { return action_counts_; }
  int64_t num_cells() const { return num_cells_; }

  int64_t CellIndex(std::span<const int> actions) const;
  std::vector<int> ActionsOf(int64_t cell) const;
  // Offset of one player's action in the flat cell index.
  int64_t stride(int player) const { return strides_[player]; }

  std::span<const double> Payoffs(int64_t cell) const {
    return {payoffs_.data() + cell * num_players(),
            static_cast<size_t>(num_players())};
  }
  double Payoff(int64_t cell, int player) const {
    return payoffs_[cell * num_players() + player];
  }

  // Grid coordinates when produced by Discretize; empty otherwise.
  const std::vector<std::vector<double>>& grid() const { return grid_; }
  StrategyProfile GridProfile(int64_t cell) const;

  // View as a Game with finite strategy spaces.
  Game AsGame() const;

 private:
  friend FiniteGame Discretize(const Game& game, int points_per_player);
  std::string name_;
  std::vector<int> action_counts_;
  std::vector<int64_t> strides_;
  int64_t num_cells_ = 0;
  std::vector<double> payoffs_;
  std::vector<std::vector<double>> grid_;
};

// Converts a finite-game profile (integral doubles) to action indices.
std::vector<int> ToActions(std::span<const double> profile);
StrategyProfile FromActions(std::span<const int> actions);

struct MixedProfile {
  std::vector<std::vector<double>> distributions;

  static MixedProfile Uniform(const FiniteGame& game);
  static MixedProfile PointMass(const FiniteGame& game,
                                std::span<const int> actions);
};

// Throws on dimension mismatch or a vector that is not a distribution.
void ValidateMixedProfile(const FiniteGame& game, const MixedProfile& mix);

// Correlated lottery over joint actions; same layout as FiniteGame cells.
struct JointDistribution {
  std::vector<int> action_counts;
  std::vector<double> probabilities;

  static JointDistribution Product(const FiniteGame& game,
                                   const MixedProfile& mix);
  static JointDistribution PointMass(const FiniteGame& game,
                                     std::span<const int> actions);
};

void ValidateJointDistribution(const FiniteGame& game,
                               const JointDistribution& dist);

// Expected utilities under independent lotteries: sum over cells of
// prod_j q_j(s_j) * u_i(s).
std::vector<double> ExpectedUtility(const FiniteGame& game,
                                    const MixedProfile& mix);

// Uniform endpoint-inclusive grid on every interval; fills the tensor by
// EvaluateUtility. Rejects non-finite payoffs with the offending profile.
FiniteGame Discretize(const Game& game, int points_per_player);

std::vector<double> UniformGrid(const Interval& interval, int points);

// Grid argmax over the player's interval followed by one golden-section
// search on the bracketing cell. Ties break to the smallest value.
double BestResponseGrid(const Game& game, int player,
                        std::span<const double> profile, int points);

// Best action index against the other components of `profile` (lowest
// index on ties).
int BestResponseFinite(const FiniteGame& game, int player,
                       std::span<const int> actions);

}  // namespace eqkit

#endif  // EQKIT_GAME_H_
