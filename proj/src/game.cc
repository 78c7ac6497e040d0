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

#include "eqkit/game.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace eqkit {
namespace {

std::string ProfileToString(std::span<const double> profile) {
  std::ostringstream out;
  out.precision(17);
  out << "(";
  for (size_t i = 0; i < profile.size(); ++i) {
    if (i > 0) out << ", ";
    out << profile[i];
  }
  out << ")";
  return out.str();
}

void CheckFinite(const Game& game, std::span<const double> profile,
                 const std::vector<double>& payoffs) {
  if (static_cast<int>(payoffs.size()) != game.num_players()) {
    throw EvaluationError("game '" + game.name() + "': oracle returned " +
                          std::to_string(payoffs.size()) +
                          " payoffs, expected " +
                          std::to_string(game.num_players()));
  }
  for (size_t i = 0; i < payoffs.size(); ++i) {
    if (!std::isfinite(payoffs[i])) {
      throw EvaluationError("game '" + game.name() +
                            "': non-finite utility for player " +
                            std::to_string(i) + " at profile " +
                            ProfileToString(profile));
    }
  }
}

void ValidateDistribution(std::span<const double> q, const std::string& what) {
  double total = 0.0;
  for (double p : q) {
    if (!(p >= -kProbabilityTolerance)) {
      throw DomainError(what + " has a negative entry");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw DomainError(what + " sums to " + std::to_string(total) +
                      ", expected 1");
  }
}

double PlayerUtility(const Game& game, int player,
                     std::vector<double>& scratch, double value) {
  scratch[player] = value;
  std::vector<double> u = game.RawUtilities(scratch);
  if (!std::isfinite(u[player])) {
    throw EvaluationError("game '" + game.name() +
                          "': non-finite utility on best-response path at " +
                          ProfileToString(scratch));
  }
  return u[player];
}

}  // namespace

StrategySpace StrategySpace::MakeInterval(double lower, double upper) {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    throw ParameterError("interval requires finite lower < upper");
  }
  return StrategySpace(Interval{lower, upper});
}

StrategySpace StrategySpace::MakeFinite(int action_count) {
  if (action_count < 1) {
    throw ParameterError("finite strategy space needs at least one action");
  }
  return StrategySpace(FiniteActions{action_count});
}

const Interval& StrategySpace::interval() const {
  if (!is_interval()) throw DomainError("strategy space is not an interval");
  return std::get<Interval>(kind_);
}

int StrategySpace::action_count() const {
  if (!is_finite()) throw DomainError("strategy space is not finite");
  return std::get<FiniteActions>(kind_).count;
}

bool StrategySpace::Contains(double value) const {
  if (is_interval()) {
    const Interval& iv = std::get<Interval>(kind_);
    return value >= iv.lower && value <= iv.upper;
  }
  const int n = std::get<FiniteActions>(kind_).count;
  return value >= 0 && value < n && value == std::floor(value);
}

std::string StrategySpace::ToString() const {
  std::ostringstream out;
  out.precision(17);
  if (is_interval()) {
    out << "[" << interval().lower << ", " << interval().upper << "]";
  } else {
    out << "{0.." << action_count() - 1 << "}";
  }
  return out.str();
}

Game::Game(std::string name, std::vector<StrategySpace> spaces,
           UtilityOracle utility)
    : name_(std::move(name)),
      spaces_(std::move(spaces)),
      utility_(std::move(utility)) {
  if (spaces_.empty()) throw ParameterError("game needs at least one player");
  if (!utility_) throw ParameterError("game needs a utility oracle");
}

const StrategySpace& Game::space(int player) const {
  if (player < 0 || player >= num_players()) {
    throw DomainError("player index " + std::to_string(player) +
                      " out of range");
  }
  return spaces_[player];
}

bool Game::all_intervals() const {
  return std::all_of(spaces_.begin(), spaces_.end(),
                     [](const StrategySpace& s) { return s.is_interval(); });
}

bool Game::all_finite() const {
  return std::all_of(spaces_.begin(), spaces_.end(),
                     [](const StrategySpace& s) { return s.is_finite(); });
}

void ValidateProfile(const Game& game, std::span<const double> profile) {
  if (static_cast<int>(profile.size()) != game.num_players()) {
    throw DomainError("profile has " + std::to_string(profile.size()) +
                      " components, game '" + game.name() + "' has " +
                      std::to_string(game.num_players()) + " players");
  }
  for (int i = 0; i < game.num_players(); ++i) {
    if (!game.space(i).Contains(profile[i])) {
      std::ostringstream out;
      out.precision(17);
      out << "player " << i << ": strategy " << profile[i]
          << " outside space " << game.space(i).ToString();
      throw DomainError(out.str());
    }
  }
}

std::vector<double> EvaluateUtility(const Game& game,
                                    std::span<const double> profile) {
  ValidateProfile(game, profile);
  std::vector<double> payoffs = game.RawUtilities(profile);
  CheckFinite(game, profile, payoffs);
  return payoffs;
}

FiniteGame::FiniteGame(std::string name, std::vector<int> action_counts,
                       std::vector<double> payoffs)
    : name_(std::move(name)),
      action_counts_(std::move(action_counts)),
      payoffs_(std::move(payoffs)) {
  if (action_counts_.empty()) {
    throw ParameterError("finite game needs at least one player");
  }
  const int k = num_players();
  strides_.assign(k, 1);
  num_cells_ = 1;
  for (int i = k - 1; i >= 0; --i) {
    if (action_counts_[i] < 1) {
      throw ParameterError("player " + std::to_string(i) +
                           " needs at least one action");
    }
    strides_[i] = num_cells_;
    num_cells_ *= action_counts_[i];
  }
  if (static_cast<int64_t>(payoffs_.size()) != num_cells_ * k) {
    throw ParameterError("payoff tensor has " +
                         std::to_string(payoffs_.size()) + " entries, expected " +
                         std::to_string(num_cells_ * k));
  }
  for (double v : payoffs_) {
    if (!std::isfinite(v)) throw ParameterError("payoff tensor not finite");
  }
}

FiniteGame FiniteGame::FromBimatrix(
    std::string name, const std::vector<std::vector<double>>& row,
    const std::vector<std::vector<double>>& col) {
  const int m = static_cast<int>(row.size());
  const int n = m > 0 ? static_cast<int>(row[0].size()) : 0;
  if (m == 0 || n == 0 || static_cast<int>(col.size()) != m) {
    throw ParameterError("bimatrix shapes do not match");
  }
  std::vector<double> payoffs;
  payoffs.reserve(2 * m * n);
  for (int a = 0; a < m; ++a) {
    if (static_cast<int>(row[a].size()) != n ||
        static_cast<int>(col[a].size()) != n) {
      throw ParameterError("bimatrix rows are ragged");
    }
    for (int b = 0; b < n; ++b) {
      payoffs.push_back(row[a][b]);
      payoffs.push_back(col[a][b]);
    }
  }
  return FiniteGame(std::move(name), {m, n}, std::move(payoffs));
}

int64_t FiniteGame::CellIndex(std::span<const int> actions) const {
  if (static_cast<int>(actions.size()) != num_players()) {
    throw DomainError("action profile has wrong length");
  }
  int64_t cell = 0;
  for (int i = 0; i < num_players(); ++i) {
    if (actions[i] < 0 || actions[i] >= action_counts_[i]) {
      throw DomainError("player " + std::to_string(i) + ": action " +
                        std::to_string(actions[i]) + " out of range");
    }
    cell += actions[i] * strides_[i];
  }
  return cell;
}

std::vector<int> FiniteGame::ActionsOf(int64_t cell) const {
  std::vector<int> actions(num_players());
  for (int i = 0; i < num_players(); ++i) {
    actions[i] = static_cast<int>((cell / strides_[i]) % action_counts_[i]);
  }
  return actions;
}

StrategyProfile FiniteGame::GridProfile(int64_t cell) const {
  const std::vector<int> actions = ActionsOf(cell);
  StrategyProfile profile(num_players());
  for (int i = 0; i < num_players(); ++i) {
    profile[i] = grid_.empty() ? actions[i] : grid_[i][actions[i]];
  }
  return profile;
}

Game FiniteGame::AsGame() const {
  auto self = std::make_shared<const FiniteGame>(*this);
  std::vector<StrategySpace> spaces;
  for (int n : action_counts_) spaces.push_back(StrategySpace::MakeFinite(n));
  Game game(name_, std::move(spaces),
            [self](std::span<const double> profile) {
              const std::vector<int> actions = ToActions(profile);
              std::span<const double> p = self->Payoffs(self->CellIndex(actions));
              return std::vector<double>(p.begin(), p.end());
            });
  game.finite_ = self;
  return game;
}

std::vector<int> ToActions(std::span<const double> profile) {
  std::vector<int> actions(profile.size());
  for (size_t i = 0; i < profile.size(); ++i) {
    actions[i] = static_cast<int>(std::lround(profile[i]));
  }
  return actions;
}

StrategyProfile FromActions(std::span<const int> actions) {
  return StrategyProfile(actions.begin(), actions.end());
}

MixedProfile MixedProfile::Uniform(const FiniteGame& game) {
  MixedProfile mix;
  for (int n : game.action_counts()) {
    mix.distributions.emplace_back(n, 1.0 / n);
  }
  return mix;
}

MixedProfile MixedProfile::PointMass(const FiniteGame& game,
                                     std::span<const int> actions) {
  MixedProfile mix;
  for (int i = 0; i < game.num_players(); ++i) {
    std::vector<double> q(game.action_counts()[i], 0.0);
    q.at(actions[i]) = 1.0;
    mix.distributions.push_back(std::move(q));
  }
  return mix;
}

void ValidateMixedProfile(const FiniteGame& game, const MixedProfile& mix) {
  if (static_cast<int>(mix.distributions.size()) != game.num_players()) {
    throw DomainError("mixed profile has wrong number of players");
  }
  for (int i = 0; i < game.num_players(); ++i) {
    if (static_cast<int>(mix.distributions[i].size()) !=
        game.action_counts()[i]) {
      throw DomainError("player " + std::to_string(i) +
                        ": distribution length does not match action count");
    }
    ValidateDistribution(mix.distributions[i],
                         "player " + std::to_string(i) + " distribution");
  }
}

JointDistribution JointDistribution::Product(const FiniteGame& game,
                                             const MixedProfile& mix) {
  ValidateMixedProfile(game, mix);
  JointDistribution dist{game.action_counts(),
                         std::vector<double>(game.num_cells(), 1.0)};
  for (int64_t cell = 0; cell < game.num_cells(); ++cell) {
    const std::vector<int> actions = game.ActionsOf(cell);
    for (int i = 0; i < game.num_players(); ++i) {
      dist.probabilities[cell] *= mix.distributions[i][actions[i]];
    }
  }
  return dist;
}

JointDistribution JointDistribution::PointMass(const FiniteGame& game,
                                               std::span<const int> actions) {
  JointDistribution dist{game.action_counts(),
                         std::vector<double>(game.num_cells(), 0.0)};
  dist.probabilities[game.CellIndex(actions)] = 1.0;
  return dist;
}

void ValidateJointDistribution(const FiniteGame& game,
                               const JointDistribution& dist) {
  if (dist.action_counts != game.action_counts() ||
      static_cast<int64_t>(dist.probabilities.size()) != game.num_cells()) {
    throw DomainError("joint distribution dimensions do not match the game");
  }
  ValidateDistribution(dist.probabilities, "joint distribution");
}

std::vector<double> ExpectedUtility(const FiniteGame& game,
                                    const MixedProfile& mix) {
  ValidateMixedProfile(game, mix);
  const int k = game.num_players();
  std::vector<double> expected(k, 0.0);
  for (int64_t cell = 0; cell < game.num_cells(); ++cell) {
    const std::vector<int> actions = game.ActionsOf(cell);
    double weight = 1.0;
    for (int i = 0; i < k && weight != 0.0; ++i) {
      weight *= mix.distributions[i][actions[i]];
    }
    if (weight == 0.0) continue;
    for (int i = 0; i < k; ++i) expected[i] += weight * game.Payoff(cell, i);
  }
  return expected;
}

std::vector<double> UniformGrid(const Interval& interval, int points) {
  if (points < 2) throw ParameterError("grid needs at least 2 points");
  std::vector<double> grid(points);
  for (int k = 0; k < points; ++k) {
    grid[k] = interval.lower + interval.width() * k / (points - 1);
  }
  grid.back() = interval.upper;
  return grid;
}

FiniteGame Discretize(const Game& game, int points_per_player) {
  if (!game.all_intervals()) {
    throw DomainError("discretize requires interval strategy spaces");
  }
  if (points_per_player < 2) {
    throw ParameterError("discretize needs at least 2 points per player");
  }
  const int k = game.num_players();
  std::vector<std::vector<double>> grid;
  for (int i = 0; i < k; ++i) {
    grid.push_back(UniformGrid(game.space(i).interval(), points_per_player));
  }
  int64_t cells = 1;
  for (int i = 0; i < k; ++i) cells *= points_per_player;
  std::vector<double> payoffs;
  payoffs.reserve(cells * k);
  std::vector<int> actions(k, 0);
  StrategyProfile profile(k);
  for (int64_t cell = 0; cell < cells; ++cell) {
    int64_t rest = cell;
    for (int i = k - 1; i >= 0; --i) {
      actions[i] = static_cast<int>(rest % points_per_player);
      rest /= points_per_player;
      profile[i] = grid[i][actions[i]];
    }
    std::vector<double> u = EvaluateUtility(game, profile);
    payoffs.insert(payoffs.end(), u.begin(), u.end());
  }
  FiniteGame fg(game.name() + "/grid" + std::to_string(points_per_player),
                std::vector<int>(k, points_per_player), std::move(payoffs));
  fg.grid_ = std::move(grid);
  return fg;
}

double BestResponseGrid(const Game& game, int player,
                        std::span<const double> profile, int points) {
  const Interval& iv = game.space(player).interval();
  if (points < 2) throw ParameterError("best response needs >= 2 grid points");
  std::vector<double> scratch(profile.begin(), profile.end());
  scratch.at(player) = iv.lower;
  ValidateProfile(game, scratch);
  const std::vector<double> grid = UniformGrid(iv, points);

  int best = 0;
  double best_value = PlayerUtility(game, player, scratch, grid[0]);
  for (int k = 1; k < points; ++k) {
    const double v = PlayerUtility(game, player, scratch, grid[k]);
    if (v > best_value) {
      best = k;
      best_value = v;
    }
  }

  // Golden-section refinement on the cell bracketing the grid argmax.
  double lo = grid[std::max(best - 1, 0)];
  double hi = grid[std::min(best + 1, points - 1)];
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = PlayerUtility(game, player, scratch, x1);
  double f2 = PlayerUtility(game, player, scratch, x2);
  const double stop = 1e-13 * std::max(iv.width(), 1.0);
  for (int iter = 0; iter < 200 && hi - lo > stop; ++iter) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = PlayerUtility(game, player, scratch, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = PlayerUtility(game, player, scratch, x2);
    }
  }
  const double candidate = f1 >= f2 ? x1 : x2;
  const double candidate_value = std::max(f1, f2);
  if (candidate_value > best_value) return candidate;
  return grid[best];
}

int BestResponseFinite(const FiniteGame& game, int player,
                       std::span<const int> actions) {
  std::vector<int> probe(actions.begin(), actions.end());
  probe[player] = 0;
  const int64_t base = game.CellIndex(probe);
  int best = 0;
  double best_value = game.Payoff(base, player);
  for (int a = 1; a < game.action_counts()[player]; ++a) {
    const double v = game.Payoff(base + a * game.stride(player), player);
    if (v > best_value) {
      best = a;
      best_value = v;
    }
  }
  return best;
}

}  // namespace eqkit
