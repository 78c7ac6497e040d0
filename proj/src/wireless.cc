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

#include "eqkit/wireless.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace eqkit {
namespace {

std::vector<std::vector<int>> InterferersFor(const std::vector<int>& order) {
  std::vector<std::vector<int>> out(order.size());
  for (size_t pos = 0; pos < order.size(); ++pos) {
    for (size_t later = pos + 1; later < order.size(); ++later) {
      out[order[pos]].push_back(order[later]);
    }
  }
  return out;
}

std::vector<std::vector<int>> AllOthers(int k) {
  std::vector<std::vector<int>> out(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (j != i) out[i].push_back(j);
    }
  }
  return out;
}

double Received(const ChannelParams& params, const std::vector<int>& users,
                std::span<const double> powers) {
  double total = 0.0;
  for (int j : users) total += params.gains[j] * powers[j];
  return total;
}

}  // namespace

void ChannelParams::Validate() const {
  const int k = num_players();
  if (k < 1) throw ParameterError("channel needs at least one user");
  if (static_cast<int>(max_powers.size()) != k) {
    throw ParameterError("max_powers must have one entry per user");
  }
  for (int i = 0; i < k; ++i) {
    if (!(gains[i] > 0.0) || !std::isfinite(gains[i])) {
      throw ParameterError("channel gains must be positive");
    }
    if (!(max_powers[i] > 0.0) || !std::isfinite(max_powers[i])) {
      throw ParameterError("max powers must be positive");
    }
  }
  if (!(noise > 0.0) || !std::isfinite(noise)) {
    throw ParameterError("noise variance must be positive");
  }
  if (!decoding_order.empty()) {
    std::vector<int> sorted = decoding_order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expected(k);
    std::iota(expected.begin(), expected.end(), 0);
    if (sorted != expected) {
      throw ParameterError("decoding order must be a permutation of users");
    }
  }
}

std::vector<int> ChannelParams::ResolvedOrder() const {
  if (!decoding_order.empty()) return decoding_order;
  std::vector<int> order(num_players());
  std::iota(order.rbegin(), order.rend(), 0);
  return order;
}

std::vector<std::vector<int>> ChannelParams::SicInterferers() const {
  return InterferersFor(ResolvedOrder());
}

ChannelParams ChannelParams::DefaultTwoUser() {
  ChannelParams p;
  p.gains = {0.1, 1.0};
  p.noise = 0.01;
  p.max_powers = {1.0, 1.0};
  return p;
}

EfficiencyFunction::EfficiencyFunction(int steepness) : steepness_(steepness) {
  if (steepness < 1) throw ParameterError("efficiency steepness M must be >= 1");
}

double EfficiencyFunction::operator()(double x) const {
  if (x <= 0.0) return 0.0;
  return std::pow(-std::expm1(-x), steepness_);
}

double EfficiencyFunction::Derivative(double x) const {
  if (x < 0.0) return 0.0;
  return steepness_ * std::exp(-x) * std::pow(-std::expm1(-x), steepness_ - 1);
}

double EfficiencyFunction::BetaStar() const {
  // f'(x) x - f(x) = (1 - e^{-x})^{M-1} (M x e^{-x} - (1 - e^{-x})); the
  // bracket alone decides the sign for x > 0.
  const double m = steepness_;
  auto g = [m](double x) { return m * x * std::exp(-x) + std::expm1(-x); };
  double lo = 1e-6;
  if (!(g(lo) > 0.0)) {
    throw ParameterError("no positive root of f'(x) x = f(x) for M = " +
                         std::to_string(steepness_));
  }
  double hi = 1.0;
  while (g(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e4) throw ParameterError("could not bracket beta*");
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double EnergyEfficientPc::Model::Interference(
    int user, std::span<const double> powers) const {
  return Received(params, interferers[user], powers);
}

EnergyEfficientPc::EnergyEfficientPc(ChannelParams params, EfficiencyFunction f,
                                     bool sic)
    : model_([&] {
        params.Validate();
        auto interferers =
            sic ? params.SicInterferers() : AllOthers(params.num_players());
        return std::make_shared<const Model>(
            Model{std::move(params), f, sic, std::move(interferers)});
      }()),
      beta_star_(model_->f.BetaStar()),
      game_([this] {
        std::vector<StrategySpace> spaces;
        for (double pmax : model_->params.max_powers) {
          spaces.push_back(StrategySpace::MakeInterval(0.0, pmax));
        }
        std::shared_ptr<const Model> model = model_;
        return Game(model->sic ? "energy_efficient_sic" : "energy_efficient",
                    std::move(spaces),
                    [model](std::span<const double> p) {
                      const int k = model->params.num_players();
                      std::vector<double> u(k, 0.0);
                      for (int i = 0; i < k; ++i) {
                        if (p[i] <= 0.0) continue;
                        const double sinr =
                            model->params.gains[i] * p[i] /
                            (model->params.noise + model->Interference(i, p));
                        u[i] = model->f(sinr) / p[i];
                      }
                      return u;
                    });
      }()) {}

double EnergyEfficientPc::Interference(int user,
                                       std::span<const double> powers) const {
  return model_->Interference(user, powers);
}

std::vector<double> EnergyEfficientPc::Sinr(
    std::span<const double> powers) const {
  const int k = params().num_players();
  std::vector<double> sinr(k);
  for (int i = 0; i < k; ++i) {
    sinr[i] = params().gains[i] * powers[i] /
              (params().noise + Interference(i, powers));
  }
  return sinr;
}

double EnergyEfficientPc::ClosedFormBestResponse(
    int user, std::span<const double> powers) const {
  const double unconstrained = beta_star_ *
                               (params().noise + Interference(user, powers)) /
                               params().gains[user];
  return std::min(unconstrained, params().max_powers[user]);
}

std::vector<double> EnergyEfficientPc::BestResponseVector(
    std::span<const double> powers) const {
  std::vector<double> out(powers.size());
  for (size_t i = 0; i < powers.size(); ++i) {
    out[i] = ClosedFormBestResponse(static_cast<int>(i), powers);
  }
  return out;
}

std::optional<StrategyProfile> EnergyEfficientPc::InteriorEquilibrium() const {
  const int k = params().num_players();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd b = Eigen::VectorXd::Constant(k, beta_star_ * params().noise);
  for (int i = 0; i < k; ++i) {
    a(i, i) = params().gains[i];
    for (int j : model_->interferers[i]) {
      a(i, j) -= beta_star_ * params().gains[j];
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) return std::nullopt;
  const Eigen::VectorXd p = lu.solve(b);
  StrategyProfile out(k);
  for (int i = 0; i < k; ++i) {
    if (!(p(i) > 0.0) || p(i) > params().max_powers[i]) return std::nullopt;
    out[i] = p(i);
  }
  return out;
}

std::vector<double> ConcaveRegionLowerBounds(const EnergyEfficientPc& base) {
  const ChannelParams& params = base.params();
  const int k = params.num_players();
  const double inflection = std::log(static_cast<double>(base.efficiency().steepness()));
  std::vector<double> lower(k, 0.0);
  for (int i = 0; i < k; ++i) {
    const double worst = base.Interference(i, params.max_powers);
    if (worst == 0.0) continue;
    lower[i] = inflection * (params.noise + worst) / params.gains[i];
    if (lower[i] >= params.max_powers[i]) {
      throw ParameterError("user " + std::to_string(i) +
                           " cannot reach the concave region of f within its "
                           "power budget");
    }
  }
  return lower;
}

Game MakePricingPc(const EnergyEfficientPc& base,
                   const PricingOptions& options) {
  if (!std::isfinite(options.alpha)) throw ParameterError("alpha must be finite");
  const ChannelParams& params = base.params();
  std::vector<double> lower(params.num_players(), 0.0);
  if (options.restrict_to_concave_region) lower = ConcaveRegionLowerBounds(base);
  std::vector<StrategySpace> spaces;
  for (int i = 0; i < params.num_players(); ++i) {
    spaces.push_back(StrategySpace::MakeInterval(lower[i], params.max_powers[i]));
  }
  const Game inner = base.game();
  const double alpha = options.alpha;
  return Game("pricing_pc", std::move(spaces),
              [inner, alpha](std::span<const double> p) {
                std::vector<double> u = inner.RawUtilities(p);
                for (size_t i = 0; i < u.size(); ++i) u[i] += alpha * p[i];
                return u;
              });
}

std::vector<bool> PotentialPc::Feasible(std::span<const double> powers) const {
  const std::vector<double> sinr = power_model->Sinr(powers);
  std::vector<bool> ok(sinr.size());
  for (size_t i = 0; i < sinr.size(); ++i) {
    ok[i] = power_model->efficiency()(sinr[i]) >= targets[i];
  }
  return ok;
}

PotentialPc MakePotentialPc(std::vector<double> gamma_targets,
                            ChannelParams params,
                            std::vector<double> min_powers,
                            EfficiencyFunction f) {
  params.Validate();
  const int k = params.num_players();
  if (static_cast<int>(gamma_targets.size()) != k ||
      static_cast<int>(min_powers.size()) != k) {
    throw ParameterError("targets and min powers need one entry per user");
  }
  std::vector<StrategySpace> spaces;
  for (int i = 0; i < k; ++i) {
    if (!(min_powers[i] > 0.0)) {
      throw ParameterError("power lower bounds must be positive (log cost)");
    }
    spaces.push_back(StrategySpace::MakeInterval(min_powers[i],
                                                 params.max_powers[i]));
  }
  PotentialPc out{
      Game("potential_pc", std::move(spaces),
           [k](std::span<const double> p) {
             std::vector<double> u(k);
             for (int i = 0; i < k; ++i) u[i] = std::log(p[i]);
             return u;
           }),
      [](std::span<const double> p) {
        double phi = 0.0;
        for (double x : p) phi += std::log(x);
        return phi;
      },
      std::move(gamma_targets),
      std::make_shared<const EnergyEfficientPc>(params, f, true)};
  return out;
}

MacRateGame MakeMacRateGame(const ChannelParams& params, double time_sharing) {
  params.Validate();
  if (params.num_players() != 2) throw ParameterError("MAC rate game is 2-user");
  if (!(time_sharing >= 0.0 && time_sharing <= 1.0)) {
    throw ParameterError("time sharing must lie in [0, 1]");
  }
  const std::vector<int> order = params.ResolvedOrder();
  const std::vector<int> reversed(order.rbegin(), order.rend());
  auto primary = InterferersFor(order);
  auto secondary = InterferersFor(reversed);
  std::vector<StrategySpace> spaces;
  for (double pmax : params.max_powers) {
    spaces.push_back(StrategySpace::MakeInterval(0.0, pmax));
  }
  MacRateGame out{
      Game("mac_rate", std::move(spaces),
           [params, primary, secondary, time_sharing](std::span<const double> p) {
             std::vector<double> u(2);
             for (int i = 0; i < 2; ++i) {
               const double s = params.gains[i] * p[i];
               const double r1 = std::log2(
                   1.0 + s / (params.noise + Received(params, primary[i], p)));
               const double r2 = std::log2(
                   1.0 + s / (params.noise + Received(params, secondary[i], p)));
               u[i] = time_sharing * r1 + (1.0 - time_sharing) * r2;
             }
             return u;
           }),
      0.0, time_sharing};
  out.sum_rate = std::log2(1.0 + Received(params, {0, 1}, params.max_powers) /
                                     params.noise);
  return out;
}

void TwoBandGains::Validate() const {
  for (const auto& row : direct) {
    for (double g : row) {
      if (!(g > 0.0)) throw ParameterError("direct gains must be positive");
    }
  }
  for (const auto& row : cross) {
    for (double g : row) {
      if (!(g >= 0.0)) throw ParameterError("cross gains must be nonnegative");
    }
  }
  if (!(noise > 0.0)) throw ParameterError("noise must be positive");
}

TwoBandGains TwoBandGains::Asymmetric() {
  TwoBandGains g;
  g.direct = {{{1.0, 0.8}, {0.9, 1.0}}};
  g.cross = {{{1.5, 1.2}, {1.3, 1.6}}};
  g.noise = 0.1;
  return g;
}

TwoBandGains TwoBandGains::Symmetric() {
  TwoBandGains g;
  g.direct = {{{1.0, 1.0}, {1.0, 1.0}}};
  g.cross = {{{2.0, 2.0}, {2.0, 2.0}}};
  g.noise = 0.1;
  return g;
}

Game MakeTwoBandPa(const TwoBandGains& gains) {
  gains.Validate();
  std::vector<StrategySpace> spaces = {StrategySpace::MakeInterval(0.0, 1.0),
                                       StrategySpace::MakeInterval(0.0, 1.0)};
  return Game("two_band_pa", std::move(spaces),
              [gains](std::span<const double> theta) {
                std::vector<double> u(2, 0.0);
                for (int i = 0; i < 2; ++i) {
                  const int j = 1 - i;
                  const double own[2] = {theta[i], 1.0 - theta[i]};
                  const double other[2] = {theta[j], 1.0 - theta[j]};
                  for (int b = 0; b < 2; ++b) {
                    u[i] += std::log1p(own[b] * gains.direct[i][b] /
                                       (gains.noise + other[b] * gains.cross[i][b]));
                  }
                }
                return u;
              });
}

FiniteGame MakeAloha(double transmit_gain, double collision_cost,
                     double energy_cost) {
  const double success = transmit_gain - energy_cost;
  const double collision = -collision_cost - energy_cost;
  return FiniteGame::FromBimatrix("aloha", {{collision, success}, {0.0, 0.0}},
                                  {{collision, 0.0}, {success, 0.0}});
}

double CollisionFrequency(const JointDistribution& dist) {
  if (dist.action_counts.size() != 2 || dist.action_counts[1] < 1) {
    throw DomainError("collision frequency needs a two-user distribution");
  }
  return dist.probabilities[kAlohaTransmit * dist.action_counts[1] +
                            kAlohaTransmit];
}

StrategyProfile Cournot::AnalyticEquilibrium() const {
  const double q = (a - c) / (3.0 * b);
  return {q, q};
}

double Cournot::BestResponse(int player, std::span<const double> q) const {
  const double other = q[1 - player];
  return std::clamp((a - c - b * other) / (2.0 * b), 0.0, a / b);
}

Cournot MakeCournot(double a, double b, double c) {
  if (!(b > 0.0) || !(c >= 0.0) || !(a > c)) {
    throw ParameterError("Cournot needs a > c >= 0 and b > 0");
  }
  std::vector<StrategySpace> spaces = {StrategySpace::MakeInterval(0.0, a / b),
                                       StrategySpace::MakeInterval(0.0, a / b)};
  return Cournot{Game("cournot", std::move(spaces),
                      [a, b, c](std::span<const double> q) {
                        const double margin = a - b * (q[0] + q[1]) - c;
                        return std::vector<double>{margin * q[0], margin * q[1]};
                      }),
                 a, b, c};
}

Game MakeQuadratic(const QuadraticSpec& spec) {
  const int k = static_cast<int>(spec.curvature.size());
  if (k < 1 || static_cast<int>(spec.linear.size()) != k ||
      static_cast<int>(spec.coupling.size()) != k ||
      static_cast<int>(spec.lower.size()) != k ||
      static_cast<int>(spec.upper.size()) != k) {
    throw ParameterError("quadratic game arrays must all have K entries");
  }
  std::vector<StrategySpace> spaces;
  for (int i = 0; i < k; ++i) {
    if (static_cast<int>(spec.coupling[i].size()) != k) {
      throw ParameterError("coupling matrix must be K x K");
    }
    spaces.push_back(StrategySpace::MakeInterval(spec.lower[i], spec.upper[i]));
  }
  return Game("quadratic", std::move(spaces),
              [spec, k](std::span<const double> s) {
                std::vector<double> u(k);
                for (int i = 0; i < k; ++i) {
                  double v = -spec.curvature[i] * s[i] * s[i] +
                             spec.linear[i] * s[i];
                  for (int j = 0; j < k; ++j) {
                    if (j != i) v += spec.coupling[i][j] * s[i] * s[j];
                  }
                  u[i] = v;
                }
                return u;
              });
}

FiniteGame PrisonersDilemma() {
  return FiniteGame::FromBimatrix("prisoners_dilemma", {{3, 0}, {5, 1}},
                                  {{3, 5}, {0, 1}});
}

FiniteGame MatchingPennies() {
  return FiniteGame::FromBimatrix("matching_pennies", {{1, -1}, {-1, 1}},
                                  {{-1, 1}, {1, -1}});
}

FiniteGame BattleOfTheSexes() {
  return FiniteGame::FromBimatrix("battle_of_the_sexes", {{2, 0}, {0, 1}},
                                  {{1, 0}, {0, 2}});
}

FiniteGame Chicken() {
  return FiniteGame::FromBimatrix("chicken", {{0, 7}, {2, 6}}, {{0, 2}, {7, 6}});
}

}  // namespace eqkit
