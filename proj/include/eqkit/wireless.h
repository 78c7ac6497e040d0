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

// Built-in games: uplink power control, MAC rate allocation, two-band power
// allocation, slotted ALOHA, Cournot, quadratic test games, and the classic
// 2x2 matrix games.

#ifndef EQKIT_WIRELESS_H_
#define EQKIT_WIRELESS_H_

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "eqkit/game.h"
#include "eqkit/structural.h"

namespace eqkit {

struct ChannelParams {
  std::vector<double> gains;       // |h_i|^2
  double noise = 1.0;              // sigma^2
  std::vector<double> max_powers;  // P_i^max
  // decoding_order[0] is decoded first. Empty means reverse index order,
  // so user i is interfered by users j < i.
  std::vector<int> decoding_order;

  int num_players() const { return static_cast<int>(gains.size()); }
  void Validate() const;
  std::vector<int> ResolvedOrder() const;
  // Users still present when `user` is decoded under SIC.
  std::vector<std::vector<int>> SicInterferers() const;

  // Two users, gains (0.1, 1), noise 0.01, unit power budgets. The
  // closed-form fixed point is interior.
  static ChannelParams DefaultTwoUser();
};

// f(x) = (1 - e^{-x})^M.
class EfficiencyFunction {
 public:
  explicit EfficiencyFunction(int steepness = 100);

  int steepness() const { return steepness_; }
  double operator()(double x) const;
  double Derivative(double x) const;
  // Unique positive root of f'(x) x = f(x). Throws ParameterError when no
  // sign change can be bracketed (M too small).
  double BetaStar() const;

 private:
  int steepness_;
};

// u_i(p) = f(SINR_i) / p_i with u_i = 0 at p_i = 0.
class EnergyEfficientPc {
 public:
  EnergyEfficientPc(ChannelParams params, EfficiencyFunction f, bool sic);

  const Game& game() const { return game_; }
  const ChannelParams& params() const { return model_->params; }
  const EfficiencyFunction& efficiency() const { return model_->f; }
  bool sic() const { return model_->sic; }
  double beta_star() const { return beta_star_; }

  double Interference(int user, std::span<const double> powers) const;
  std::vector<double> Sinr(std::span<const double> powers) const;
  // min(beta* (sigma^2 + I_i) / |h_i|^2, P_i^max).
  double ClosedFormBestResponse(int user, std::span<const double> powers) const;
  // Stacked closed-form best responses on the nonnegative orthant.
  std::vector<double> BestResponseVector(std::span<const double> powers) const;
  // Solves p_i |h_i|^2 = beta* (sigma^2 + I_i) jointly; empty when the
  // solution is not inside the power box.
  std::optional<StrategyProfile> InteriorEquilibrium() const;

 private:
  struct Model {
    ChannelParams params;
    EfficiencyFunction f;
    bool sic;
    std::vector<std::vector<int>> interferers;
    double Interference(int user, std::span<const double> powers) const;
  };
  std::shared_ptr<const Model> model_;
  double beta_star_;
  Game game_;
};

struct PricingOptions {
  // Utility is u_i + alpha p_i; alpha < 0 is a linear price on power.
  double alpha = -0.1;
  // Raise the lower power bound of every interfered user so its worst-case
  // SINR stays above the inflection point ln M of f, where the game is
  // supermodular. Users without interference keep [0, P_i^max].
  bool restrict_to_concave_region = true;
};

std::vector<double> ConcaveRegionLowerBounds(const EnergyEfficientPc& base);

Game MakePricingPc(const EnergyEfficientPc& base,
                   const PricingOptions& options = {});

// Constrained power minimization with cost u_i = log p_i and the potential
// phi(p) = sum_i log p_i.
struct PotentialPc {
  Game game;
  PotentialFunction phi;
  std::vector<double> targets;
  // f(SINR_i) >= gamma_i for each user, reported rather than enforced.
  std::vector<bool> Feasible(std::span<const double> powers) const;

  std::shared_ptr<const EnergyEfficientPc> power_model;
};

PotentialPc MakePotentialPc(std::vector<double> gamma_targets,
                            ChannelParams params,
                            std::vector<double> min_powers,
                            EfficiencyFunction f = EfficiencyFunction());

// Two-user MAC with SIC: u_i = log2(1 + SINR_i). `time_sharing` is the
// fraction of time the configured decoding order is used; the reversed
// order is used otherwise.
struct MacRateGame {
  Game game;
  double sum_rate = 0.0;  // log2(1 + sum_i |h_i|^2 P_i^max / sigma^2)
  double time_sharing = 1.0;
};

MacRateGame MakeMacRateGame(const ChannelParams& params,
                            double time_sharing = 1.0);

// theta_i is the fraction of user i's power in band 0; the rest goes to
// band 1. u_i = sum_b log(1 + theta_i^b g_{i,b} / (sigma^2 + theta_j^b c_{i,b}))
// with g the direct and c the cross (interference) gains at receiver i.
struct TwoBandGains {
  std::array<std::array<double, 2>, 2> direct{};
  std::array<std::array<double, 2>, 2> cross{};
  double noise = 0.1;

  void Validate() const;
  // Exhibits three pure equilibria on a 101-point grid.
  static TwoBandGains Asymmetric();
  // direct = 1, cross = 2: equilibria (0, 1), (1/2, 1/2), (1, 0).
  static TwoBandGains Symmetric();
};

Game MakeTwoBandPa(const TwoBandGains& gains);

// Actions: 0 = transmit, 1 = wait.
FiniteGame MakeAloha(double transmit_gain = 1.0, double collision_cost = 1.0,
                     double energy_cost = 0.1);
inline constexpr int kAlohaTransmit = 0;
inline constexpr int kAlohaWait = 1;
// Probability mass on both users transmitting.
double CollisionFrequency(const JointDistribution& dist);

// u_i = (a - b (q_1 + q_2) - c) q_i on [0, a / b].
struct Cournot {
  Game game;
  double a = 10.0, b = 1.0, c = 1.0;
  StrategyProfile AnalyticEquilibrium() const;
  double BestResponse(int player, std::span<const double> q) const;
};

Cournot MakeCournot(double a = 10.0, double b = 1.0, double c = 1.0);

// u_i = -a_i s_i^2 + b_i s_i + sum_{j != i} C_ij s_i s_j on [lower_i, upper_i].
// The cross-partial d2u_i/ds_i ds_j is C_ij everywhere.
struct QuadraticSpec {
  std::vector<double> curvature;
  std::vector<double> linear;
  std::vector<std::vector<double>> coupling;
  std::vector<double> lower;
  std::vector<double> upper;
};

Game MakeQuadratic(const QuadraticSpec& spec);

// Row player 0, column player 1. Action 0 is listed first in each name.
FiniteGame PrisonersDilemma();  // {cooperate, defect}
FiniteGame MatchingPennies();   // {heads, tails}
FiniteGame BattleOfTheSexes();  // {opera, football}
FiniteGame Chicken();           // {dare, yield}

}  // namespace eqkit

#endif  // EQKIT_WIRELESS_H_
