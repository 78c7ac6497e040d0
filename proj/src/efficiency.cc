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

#include "eqkit/efficiency.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace eqkit {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Central difference of a scalar function along one coordinate, one-sided
// when the step leaves the interval.
double AxisDerivative(const std::function<double(std::span<const double>)>& fn,
                      const Interval& iv, std::span<const double> point,
                      int axis, double h) {
  StrategyProfile p(point.begin(), point.end());
  const double x = point[axis];
  auto at = [&](double v) {
    p[axis] = v;
    return fn(p);
  };
  if (x - h >= iv.lower && x + h <= iv.upper) {
    return (at(x + h) - at(x - h)) / (2.0 * h);
  }
  if (x + h <= iv.upper) return (at(x + h) - at(x)) / h;
  return (at(x) - at(x - h)) / h;
}

}  // namespace

double SocialWelfare(const Game& game, std::span<const double> profile) {
  const std::vector<double> u = EvaluateUtility(game, profile);
  return std::accumulate(u.begin(), u.end(), 0.0);
}

double SocialWelfare(const FiniteGame& game, int64_t cell) {
  const auto u = game.Payoffs(cell);
  return std::accumulate(u.begin(), u.end(), 0.0);
}

double VirtualMimoMetric(std::span<const double> efficiencies,
                         std::span<const double> powers) {
  if (efficiencies.size() != powers.size()) {
    throw DomainError("efficiency and power vectors differ in length");
  }
  const double total_power = std::accumulate(powers.begin(), powers.end(), 0.0);
  if (!(total_power > 0.0)) {
    throw DomainError("virtual MIMO metric undefined when all powers are zero");
  }
  return std::accumulate(efficiencies.begin(), efficiencies.end(), 0.0) /
         total_power;
}

double VirtualMimoMetric(const EnergyEfficientPc& game,
                         std::span<const double> powers) {
  ValidateProfile(game.game(), powers);
  const std::vector<double> sinr = game.Sinr(powers);
  std::vector<double> eff(sinr.size());
  for (size_t i = 0; i < sinr.size(); ++i) eff[i] = game.efficiency()(sinr[i]);
  return VirtualMimoMetric(eff, powers);
}

ParetoResult IsParetoOptimal(const FiniteGame& game,
                             std::span<const double> utilities,
                             int64_t skip_cell) {
  const int k = game.num_players();
  if (static_cast<int>(utilities.size()) != k) {
    throw DomainError("utility vector length must equal the player count");
  }
  for (int64_t other = 0; other < game.num_cells(); ++other) {
    if (other == skip_cell) continue;
    const auto u = game.Payoffs(other);
    bool weak = true, strict = false;
    for (int i = 0; i < k && weak; ++i) {
      if (u[i] < utilities[i]) weak = false;
      if (u[i] > utilities[i]) strict = true;
    }
    if (weak && strict) return {false, other};
  }
  return {};
}

ParetoResult IsParetoOptimal(const FiniteGame& game, int64_t cell) {
  if (cell < 0 || cell >= game.num_cells()) {
    throw DomainError("cell index out of range");
  }
  return IsParetoOptimal(game, game.Payoffs(cell), cell);
}

int64_t WeightedSumPo(const FiniteGame& game, std::span<const double> alpha) {
  if (static_cast<int>(alpha.size()) != game.num_players()) {
    throw ParameterError("one weight per player required");
  }
  for (double a : alpha) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw ParameterError("weights must be positive and finite");
    }
  }
  int64_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int64_t cell = 0; cell < game.num_cells(); ++cell) {
    const auto u = game.Payoffs(cell);
    double v = 0.0;
    for (size_t i = 0; i < alpha.size(); ++i) v += alpha[i] * u[i];
    if (v > best_value) {
      best_value = v;
      best = cell;
    }
  }
  return best;
}

PoaResult PoaPos(const FiniteGame& game, const std::vector<NashResult>& ne_set,
                 const Game* continuous) {
  if (ne_set.empty()) throw DomainError("PoA needs a nonempty NE set");
  PoaResult out;
  out.max_welfare = -std::numeric_limits<double>::infinity();
  for (int64_t cell = 0; cell < game.num_cells(); ++cell) {
    const double w = SocialWelfare(game, cell);
    if (w > out.max_welfare) {
      out.max_welfare = w;
      out.max_welfare_cell = cell;
    }
  }
  const Game as_game = game.AsGame();
  const Game& evaluator = continuous != nullptr ? *continuous : as_game;
  out.worst_ne_welfare = std::numeric_limits<double>::infinity();
  out.best_ne_welfare = -std::numeric_limits<double>::infinity();
  for (const NashResult& ne : ne_set) {
    const double w = SocialWelfare(evaluator, ne.profile);
    out.worst_ne_welfare = std::min(out.worst_ne_welfare, w);
    out.best_ne_welfare = std::max(out.best_ne_welfare, w);
  }
  // An off-grid equilibrium can beat every grid cell.
  if (out.best_ne_welfare > out.max_welfare) {
    out.max_welfare = out.best_ne_welfare;
    out.max_welfare_cell = -1;
  }
  out.worst_gap = out.max_welfare - out.worst_ne_welfare;
  out.best_gap = out.max_welfare - out.best_ne_welfare;
  out.ratio_defined = out.worst_ne_welfare > 0.0;
  if (out.ratio_defined) {
    out.poa = out.max_welfare / out.worst_ne_welfare;
    out.pos = out.max_welfare / out.best_ne_welfare;
  } else {
    out.poa = out.pos = kNan;
  }
  return out;
}

NormalizedEqVerdict NormalizedEqCheck(const Game& game,
                                      std::span<const double> profile,
                                      const ConstraintSpec& constraint,
                                      const FDConfig& cfg) {
  cfg.Validate();
  if (!game.all_intervals()) {
    throw DomainError("normalized equilibrium check needs interval strategies");
  }
  const int k = game.num_players();
  if (static_cast<int>(constraint.r.size()) != k) {
    throw ParameterError("constraint weights r need one entry per player");
  }
  for (double r : constraint.r) {
    if (!(r > 0.0)) throw ParameterError("constraint weights must be positive");
  }
  if (!constraint.h) throw ParameterError("constraint function missing");

  const std::vector<double> u = EvaluateUtility(game, profile);
  NormalizedEqVerdict out;
  out.min_utility = *std::min_element(u.begin(), u.end());
  out.sum_log_utility = 0.0;
  for (double v : u) {
    out.sum_log_utility += v > 0.0 ? std::log(v)
                                   : -std::numeric_limits<double>::infinity();
  }
  out.constraint_value = constraint.h(profile);
  out.multipliers.assign(k, 0.0);
  out.scaled.assign(k, 0.0);
  const double tol = cfg.tolerance;

  if (out.constraint_value < -tol) {
    out.note = "profile violates the shared constraint";
    return out;
  }
  out.active = std::abs(out.constraint_value) <= tol;
  if (!out.active) {
    double scale = 1.0;
    for (double v : u) scale = std::max(scale, std::abs(v));
    out.epsilon = NeVerify(game, profile);
    out.holds = out.epsilon <= tol * scale;
    out.note = out.holds ? "constraint slack; profile is an unconstrained NE"
                         : "constraint slack but profile is not an NE";
    return out;
  }

  for (int i = 0; i < k; ++i) {
    const Interval& iv = game.space(i).interval();
    const double h = cfg.step_fraction * iv.width();
    const double du = OwnPartial(game, i, profile, h);
    const double dh = AxisDerivative(constraint.h, iv, profile, i, h);
    if (std::abs(dh) <= tol) {
      out.unidentifiable.push_back(i);
      continue;
    }
    out.multipliers[i] = -du / dh;
    out.scaled[i] = out.multipliers[i] * constraint.r[i];
  }
  if (!out.unidentifiable.empty()) {
    out.note = "multiplier unidentifiable: constraint gradient vanishes";
    return out;
  }
  bool nonneg = true;
  for (double lambda : out.multipliers) nonneg = nonneg && lambda >= -tol;
  const auto [lo, hi] = std::minmax_element(out.scaled.begin(), out.scaled.end());
  const double spread = *hi - *lo;
  const double magnitude = std::max(std::abs(*hi), std::abs(*lo));
  const bool equal =
      spread <= kMultiplierRelativeTolerance * std::max(magnitude, tol);
  out.holds = nonneg && equal;
  if (!nonneg) {
    out.note = "negative multiplier";
  } else if (!equal) {
    out.note = "lambda_i r_i differ across players";
  } else {
    out.note = "KKT multipliers consistent with weights r";
  }
  return out;
}

}  // namespace eqkit
