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

#include "eqkit/structural.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace eqkit {
namespace {

constexpr int64_t kMaxGridSamples = 4096;
constexpr int kRandomPointSamples = 1024;

// Distinct salts keep each check's random stream independent of the order
// in which checks run.
enum Salt : uint64_t {
  kSaltPoints = 0x9e3779b97f4a7c15ULL,
  kSaltOpponents = 0xbf58476d1ce4e5b9ULL,
  kSaltPotential = 0x94d049bb133111ebULL,
  kSaltDsc = 0x2545f4914f6cdd1dULL,
  kSaltMonotone = 0xd6e8feb86659fd93ULL,
  kSaltScalable = 0xa0761d6478bd642fULL,
};

std::mt19937_64 MakeRng(const FDConfig& cfg, Salt salt) {
  return std::mt19937_64(cfg.seed ^ salt);
}

void RequireIntervals(const Game& game, const char* check) {
  if (!game.all_intervals()) {
    throw DomainError(std::string(check) +
                      " requires interval strategy spaces (game '" +
                      game.name() + "')");
  }
}

double Uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double RandomStrategy(const StrategySpace& space, std::mt19937_64& rng) {
  if (space.is_interval()) {
    return Uniform(rng, space.interval().lower, space.interval().upper);
  }
  return std::uniform_int_distribution<int>(0, space.action_count() - 1)(rng);
}

double AxisStep(const Interval& iv, double x, double fraction) {
  double h = fraction * iv.width();
  h = std::min({h, x - iv.lower, iv.upper - x});
  if (!(h > 0.0)) {
    throw DomainError("finite-difference step does not fit inside the interval");
  }
  return h;
}

double PlayerValue(const Game& game, std::span<const double> profile,
                   int player) {
  return EvaluateUtility(game, profile)[player];
}

// Cartesian product of per-axis candidate values, or a seeded random
// sample when the product is too large.
std::vector<StrategyProfile> Product(
    const std::vector<std::vector<double>>& axes, const Game& game,
    std::mt19937_64& rng) {
  int64_t total = 1;
  for (const auto& axis : axes) {
    total *= static_cast<int64_t>(axis.size());
    if (total > kMaxGridSamples) break;
  }
  std::vector<StrategyProfile> points;
  const int k = static_cast<int>(axes.size());
  if (total <= kMaxGridSamples) {
    points.reserve(total);
    for (int64_t idx = 0; idx < total; ++idx) {
      StrategyProfile p(k);
      int64_t rest = idx;
      for (int i = k - 1; i >= 0; --i) {
        const int64_t n = static_cast<int64_t>(axes[i].size());
        p[i] = axes[i][rest % n];
        rest /= n;
      }
      points.push_back(std::move(p));
    }
    return points;
  }
  for (int s = 0; s < kRandomPointSamples; ++s) {
    StrategyProfile p(k);
    for (int i = 0; i < k; ++i) {
      // Single-valued axes are fixed coordinates.
      if (axes[i].size() == 1) {
        p[i] = axes[i][0];
      } else {
        p[i] = RandomStrategy(game.space(i), rng);
      }
    }
    points.push_back(std::move(p));
  }
  return points;
}

std::vector<double> InteriorAxis(const Interval& iv, int n) {
  std::vector<double> axis(n);
  for (int k = 0; k < n; ++k) {
    axis[k] = iv.lower + iv.width() * (k + 1) / (n + 1);
  }
  return axis;
}

std::vector<StrategyProfile> InteriorPoints(const Game& game,
                                            const FDConfig& cfg) {
  std::vector<std::vector<double>> axes;
  for (int i = 0; i < game.num_players(); ++i) {
    axes.push_back(InteriorAxis(game.space(i).interval(), cfg.grid_points));
  }
  std::mt19937_64 rng = MakeRng(cfg, kSaltPoints);
  std::vector<StrategyProfile> points = Product(axes, game, rng);
  // Random fallback draws from the closed box; pull those inside.
  for (auto& p : points) {
    for (int i = 0; i < game.num_players(); ++i) {
      const Interval& iv = game.space(i).interval();
      const double pad = iv.width() / (cfg.grid_points + 1);
      p[i] = std::clamp(p[i], iv.lower + pad, iv.upper - pad);
    }
  }
  return points;
}

double Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double SModularValue(const Game& game, const Witness& w) {
  return CrossPartial(game, w.player, w.player, w.other_player, w.profiles[0],
                      w.steps[0], w.steps[1]);
}

double PotentialConditionValue(const Game& game, const Witness& w) {
  const int i = w.player;
  const int j = w.other_player;
  return CrossPartial(game, i, i, j, w.profiles[0], w.steps[0], w.steps[1]) -
         CrossPartial(game, j, i, j, w.profiles[0], w.steps[0], w.steps[1]);
}

std::vector<double> Pseudogradient(const Game& game,
                                   std::span<const double> point,
                                   std::span<const double> weights,
                                   double fraction) {
  std::vector<double> g(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    const double h = fraction * game.space(i).interval().width();
    g[i] = weights[i] * OwnPartial(game, i, point, h);
  }
  return g;
}

// Returns (q, normalized margin) for a DSC pair.
std::pair<double, double> DscQuantity(const Game& game,
                                      std::span<const double> s,
                                      std::span<const double> t,
                                      std::span<const double> weights,
                                      double fraction) {
  const std::vector<double> gs = Pseudogradient(game, s, weights, fraction);
  const std::vector<double> gt = Pseudogradient(game, t, weights, fraction);
  const int k = game.num_players();
  std::vector<double> ds(k), dg(k);
  double q = 0.0;
  for (int i = 0; i < k; ++i) {
    ds[i] = s[i] - t[i];
    dg[i] = gs[i] - gt[i];
    q += ds[i] * dg[i];
  }
  const double denom = Norm(ds) * Norm(dg);
  return {q, denom > 0.0 ? q / denom : 0.0};
}

bool DscViolated(double normalized, DscConvention convention, double tol) {
  return convention == DscConvention::kNegative ? normalized >= -tol
                                                : normalized <= tol;
}

bool PotentialViolated(double du, double dphi, PotentialMode mode,
                       double tol) {
  const double scale = std::max({1.0, std::abs(du), std::abs(dphi)});
  if (mode == PotentialMode::kExact) {
    return std::abs(du - dphi) > tol * scale;
  }
  auto sign = [&](double v) { return v > tol * scale ? 1 : (v < -tol * scale ? -1 : 0); };
  return sign(du) != sign(dphi);
}

std::vector<double> CheckedBr(const BestResponseMap& br,
                              std::span<const double> x) {
  std::vector<double> g = br(x);
  if (g.size() != x.size()) {
    throw DomainError("best-response map changed dimension");
  }
  for (size_t k = 0; k < g.size(); ++k) {
    if (!(g[k] >= 0.0)) {
      throw DomainError("best-response map returned a negative component " +
                        std::to_string(g[k]) + " for player " +
                        std::to_string(k));
    }
  }
  return g;
}

bool MonotonicityViolated(double gx, double gy, double tol) {
  return gx > gy + tol * std::max(1.0, std::abs(gy));
}

bool ScalabilityViolated(double g_scaled, double alpha_g, double tol) {
  return alpha_g - g_scaled <= tol * std::abs(alpha_g);
}

}  // namespace

std::string ToString(CheckStatus status) {
  return status == CheckStatus::kHoldsOnSamples ? "HOLDS_ON_SAMPLES"
                                                : "COUNTEREXAMPLE";
}

std::string ToString(CheckKind kind) {
  switch (kind) {
    case CheckKind::kQuasiConcavity: return "quasi_concavity";
    case CheckKind::kSupermodular: return "supermodular";
    case CheckKind::kSubmodular: return "submodular";
    case CheckKind::kPotentialCondition: return "potential_condition";
    case CheckKind::kExactPotential: return "exact_potential";
    case CheckKind::kOrdinalPotential: return "ordinal_potential";
    case CheckKind::kDsc: return "dsc";
    case CheckKind::kStandardMonotonicity: return "standard_monotonicity";
    case CheckKind::kStandardScalability: return "standard_scalability";
  }
  return "unknown";
}

std::string ToString(ExistenceConclusion conclusion) {
  switch (conclusion) {
    case ExistenceConclusion::kPureNeGuaranteed: return "PURE_NE_GUARANTEED";
    case ExistenceConclusion::kMixedNeGuaranteed: return "MIXED_NE_GUARANTEED";
    case ExistenceConclusion::kUnknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

void FDConfig::Validate() const {
  if (!(step_fraction > 0.0)) throw ParameterError("FD step must be > 0");
  if (grid_points < 3) throw ParameterError("grid resolution must be >= 3");
  if (line_points < 3) throw ParameterError("line resolution must be >= 3");
  if (sample_pairs < 1 || potential_samples < 1 || monotonicity_samples < 1 ||
      scalability_samples < 1) {
    throw ParameterError("sample counts must be positive");
  }
  if (!(alpha_max > 1.0)) throw ParameterError("alpha_max must exceed 1");
  if (!(tolerance >= 0.0)) throw ParameterError("tolerance must be >= 0");
}

double CrossPartial(const Game& game, int utility_index, int i, int j,
                    std::span<const double> point, double h_i, double h_j) {
  if (i == j) throw ParameterError("cross-partial needs distinct axes");
  StrategyProfile p(point.begin(), point.end());
  auto at = [&](double di, double dj) {
    p[i] = point[i] + di;
    p[j] = point[j] + dj;
    return PlayerValue(game, p, utility_index);
  };
  const double pp = at(h_i, h_j);
  const double pm = at(h_i, -h_j);
  const double mp = at(-h_i, h_j);
  const double mm = at(-h_i, -h_j);
  return (pp - pm - mp + mm) / (4.0 * h_i * h_j);
}

double OwnPartial(const Game& game, int player, std::span<const double> point,
                  double h) {
  const Interval& iv = game.space(player).interval();
  StrategyProfile p(point.begin(), point.end());
  const double x = point[player];
  auto at = [&](double v) {
    p[player] = v;
    return PlayerValue(game, p, player);
  };
  if (x - h >= iv.lower && x + h <= iv.upper) {
    return (at(x + h) - at(x - h)) / (2.0 * h);
  }
  if (x + h <= iv.upper) return (at(x + h) - at(x)) / h;
  return (at(x) - at(x - h)) / h;
}

CheckVerdict CheckQuasiConcavity(const Game& game, int player,
                                 const FDConfig& cfg) {
  cfg.Validate();
  const StrategySpace& own = game.space(player);
  if (!own.is_interval()) {
    throw DomainError("quasi-concavity check needs an interval space for player " +
                      std::to_string(player));
  }
  std::vector<std::vector<double>> axes;
  for (int j = 0; j < game.num_players(); ++j) {
    if (j == player) {
      axes.push_back({own.interval().lower});
    } else if (game.space(j).is_interval()) {
      axes.push_back(UniformGrid(game.space(j).interval(), cfg.grid_points));
    } else {
      std::vector<double> acts(game.space(j).action_count());
      for (size_t a = 0; a < acts.size(); ++a) acts[a] = static_cast<double>(a);
      axes.push_back(std::move(acts));
    }
  }
  std::mt19937_64 rng = MakeRng(cfg, kSaltOpponents);
  const std::vector<StrategyProfile> opponents = Product(axes, game, rng);
  const std::vector<double> line = UniformGrid(own.interval(), cfg.line_points);
  const int n = cfg.line_points;

  CheckVerdict verdict;
  verdict.kind = CheckKind::kQuasiConcavity;
  verdict.tolerance = cfg.tolerance;
  verdict.worst_margin = std::numeric_limits<double>::infinity();
  std::vector<double> u(n), left(n), right(n);
  std::vector<int> left_arg(n), right_arg(n);
  double worst_dip = 0.0;
  for (const StrategyProfile& base : opponents) {
    StrategyProfile p = base;
    double scale = 1.0;
    for (int k = 0; k < n; ++k) {
      p[player] = line[k];
      u[k] = PlayerValue(game, p, player);
      scale = std::max(scale, std::abs(u[k]));
    }
    left[0] = u[0];
    left_arg[0] = 0;
    for (int k = 1; k < n; ++k) {
      left[k] = u[k] > left[k - 1] ? u[k] : left[k - 1];
      left_arg[k] = u[k] > left[k - 1] ? k : left_arg[k - 1];
    }
    right[n - 1] = u[n - 1];
    right_arg[n - 1] = n - 1;
    for (int k = n - 2; k >= 0; --k) {
      right[k] = u[k] > right[k + 1] ? u[k] : right[k + 1];
      right_arg[k] = u[k] > right[k + 1] ? k : right_arg[k + 1];
    }
    for (int b = 1; b < n - 1; ++b) {
      const double floor_value = std::min(left[b - 1], right[b + 1]);
      const double margin = (u[b] - floor_value) / scale;
      verdict.worst_margin = std::min(verdict.worst_margin, margin);
      const double dip = floor_value - u[b];
      if (dip > cfg.tolerance * scale && dip / scale > worst_dip) {
        worst_dip = dip / scale;
        Witness w;
        w.player = player;
        const int a = left_arg[b - 1];
        const int c = right_arg[b + 1];
        for (int idx : {a, b, c}) {
          p[player] = line[idx];
          w.profiles.push_back(p);
        }
        w.values = {u[a], u[b], u[c], scale};
        w.description = "interior dip: u(b) below min(u(a), u(c))";
        verdict.witness = std::move(w);
      }
    }
    ++verdict.samples_used;
  }
  verdict.status = verdict.witness ? CheckStatus::kCounterexample
                                   : CheckStatus::kHoldsOnSamples;
  return verdict;
}

SModularVerdict CheckSModular(const Game& game, const FDConfig& cfg) {
  cfg.Validate();
  RequireIntervals(game, "S-modularity check");
  const int k = game.num_players();
  struct Sample {
    int i, j;
    size_t point;
    double hi, hj, value;
  };
  const std::vector<StrategyProfile> points = InteriorPoints(game, cfg);
  std::vector<Sample> samples;
  double scale = 1.0;
  for (size_t p = 0; p < points.size(); ++p) {
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        if (i == j) continue;
        const double hi = AxisStep(game.space(i).interval(), points[p][i],
                                   cfg.step_fraction);
        const double hj = AxisStep(game.space(j).interval(), points[p][j],
                                   cfg.step_fraction);
        const double v = CrossPartial(game, i, i, j, points[p], hi, hj);
        samples.push_back({i, j, p, hi, hj, v});
        scale = std::max(scale, std::abs(v));
      }
    }
  }
  SModularVerdict out;
  out.supermodular.kind = CheckKind::kSupermodular;
  out.submodular.kind = CheckKind::kSubmodular;
  for (CheckVerdict* v : {&out.supermodular, &out.submodular}) {
    v->tolerance = cfg.tolerance;
    v->samples_used = static_cast<int>(samples.size());
    v->worst_margin = std::numeric_limits<double>::infinity();
  }
  const Sample* worst_super = nullptr;
  const Sample* worst_sub = nullptr;
  for (const Sample& s : samples) {
    const double super_margin = s.value / scale;
    const double sub_margin = -s.value / scale;
    if (super_margin < out.supermodular.worst_margin) {
      out.supermodular.worst_margin = super_margin;
      worst_super = &s;
    }
    if (sub_margin < out.submodular.worst_margin) {
      out.submodular.worst_margin = sub_margin;
      worst_sub = &s;
    }
  }
  auto finish = [&](CheckVerdict& v, const Sample* s) {
    if (s == nullptr || v.worst_margin >= -cfg.tolerance) {
      v.status = CheckStatus::kHoldsOnSamples;
      return;
    }
    v.status = CheckStatus::kCounterexample;
    Witness w;
    w.player = s->i;
    w.other_player = s->j;
    w.profiles = {points[s->point]};
    w.steps = {s->hi, s->hj};
    w.values = {s->value, scale};
    w.description = "cross-partial d2u_i/ds_i ds_j has the wrong sign";
    v.witness = std::move(w);
  };
  finish(out.supermodular, worst_super);
  finish(out.submodular, worst_sub);
  return out;
}

CheckVerdict CheckPotentialCondition(const Game& game, const FDConfig& cfg) {
  cfg.Validate();
  RequireIntervals(game, "potential condition check");
  const int k = game.num_players();
  const std::vector<StrategyProfile> points = InteriorPoints(game, cfg);
  struct Sample {
    int i, j;
    size_t point;
    double hi, hj, diff;
  };
  std::vector<Sample> samples;
  double scale = 1.0;
  for (size_t p = 0; p < points.size(); ++p) {
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        const double hi = AxisStep(game.space(i).interval(), points[p][i],
                                   cfg.step_fraction);
        const double hj = AxisStep(game.space(j).interval(), points[p][j],
                                   cfg.step_fraction);
        const double ci = CrossPartial(game, i, i, j, points[p], hi, hj);
        const double cj = CrossPartial(game, j, i, j, points[p], hi, hj);
        scale = std::max({scale, std::abs(ci), std::abs(cj)});
        samples.push_back({i, j, p, hi, hj, ci - cj});
      }
    }
  }
  CheckVerdict v;
  v.kind = CheckKind::kPotentialCondition;
  v.tolerance = cfg.tolerance;
  v.samples_used = static_cast<int>(samples.size());
  v.worst_margin = std::numeric_limits<double>::infinity();
  const Sample* worst = nullptr;
  for (const Sample& s : samples) {
    const double margin = cfg.tolerance - std::abs(s.diff) / scale;
    if (margin < v.worst_margin) {
      v.worst_margin = margin;
      worst = &s;
    }
  }
  if (worst != nullptr && v.worst_margin < 0.0) {
    v.status = CheckStatus::kCounterexample;
    Witness w;
    w.player = worst->i;
    w.other_player = worst->j;
    w.profiles = {points[worst->point]};
    w.steps = {worst->hi, worst->hj};
    w.values = {worst->diff, scale};
    w.description = "d2(u_i - u_j)/ds_i ds_j is nonzero";
    v.witness = std::move(w);
  }
  return v;
}

CheckVerdict VerifyPotential(const Game& game, const PotentialFunction& phi,
                             const FDConfig& cfg, PotentialMode mode) {
  cfg.Validate();
  if (!phi) throw ParameterError("potential verification needs a function");
  CheckVerdict v;
  v.kind = mode == PotentialMode::kExact ? CheckKind::kExactPotential
                                         : CheckKind::kOrdinalPotential;
  v.tolerance = cfg.tolerance;
  v.worst_margin = std::numeric_limits<double>::infinity();
  double worst_gap = -1.0;

  auto consider = [&](const StrategyProfile& s, const StrategyProfile& t,
                      int player) {
    const double du = PlayerValue(game, s, player) - PlayerValue(game, t, player);
    const double dphi = phi(s) - phi(t);
    if (!std::isfinite(dphi)) {
      throw EvaluationError("potential function returned a non-finite value");
    }
    const double scale = std::max({1.0, std::abs(du), std::abs(dphi)});
    const double gap = std::abs(du - dphi) / scale;
    v.worst_margin = std::min(v.worst_margin, cfg.tolerance - gap);
    ++v.samples_used;
    if (PotentialViolated(du, dphi, mode, cfg.tolerance) && gap > worst_gap) {
      worst_gap = gap;
      Witness w;
      w.player = player;
      w.profiles = {s, t};
      w.values = {du, dphi};
      w.description = "unilateral deviation differences of u_i and phi disagree";
      v.witness = std::move(w);
    }
  };

  if (game.all_finite()) {
    std::vector<int> counts;
    int64_t cells = 1;
    for (const auto& sp : game.spaces()) {
      counts.push_back(sp.action_count());
      cells *= sp.action_count();
    }
    const int k = game.num_players();
    StrategyProfile s(k);
    for (int64_t cell = 0; cell < cells; ++cell) {
      int64_t rest = cell;
      for (int i = k - 1; i >= 0; --i) {
        s[i] = static_cast<double>(rest % counts[i]);
        rest /= counts[i];
      }
      for (int i = 0; i < k; ++i) {
        for (int a = 0; a < counts[i]; ++a) {
          if (a == static_cast<int>(s[i])) continue;
          StrategyProfile t = s;
          t[i] = a;
          consider(s, t, i);
        }
      }
    }
  } else {
    std::mt19937_64 rng = MakeRng(cfg, kSaltPotential);
    const int k = game.num_players();
    for (int n = 0; n < cfg.potential_samples; ++n) {
      StrategyProfile s(k);
      for (int i = 0; i < k; ++i) s[i] = RandomStrategy(game.space(i), rng);
      const int player = std::uniform_int_distribution<int>(0, k - 1)(rng);
      StrategyProfile t = s;
      t[player] = RandomStrategy(game.space(player), rng);
      consider(s, t, player);
    }
  }
  v.status = v.witness ? CheckStatus::kCounterexample
                       : CheckStatus::kHoldsOnSamples;
  return v;
}

CheckVerdict CheckDsc(const Game& game, std::span<const double> weights,
                      const FDConfig& cfg) {
  cfg.Validate();
  RequireIntervals(game, "DSC check");
  const int k = game.num_players();
  if (static_cast<int>(weights.size()) != k) {
    throw ParameterError("DSC weights must have one entry per player");
  }
  for (double r : weights) {
    if (!(r > 0.0)) throw ParameterError("DSC weights must be positive");
  }
  std::mt19937_64 rng = MakeRng(cfg, kSaltDsc);
  double min_step = std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i) {
    min_step = std::min(min_step,
                        cfg.step_fraction * game.space(i).interval().width());
  }

  CheckVerdict v;
  v.kind = CheckKind::kDsc;
  v.tolerance = cfg.tolerance;
  v.worst_margin = std::numeric_limits<double>::infinity();
  for (int n = 0; n < cfg.sample_pairs; ++n) {
    StrategyProfile s(k), t(k);
    for (int i = 0; i < k; ++i) s[i] = RandomStrategy(game.space(i), rng);
    for (int i = 0; i < k; ++i) t[i] = RandomStrategy(game.space(i), rng);
    std::vector<double> d(k);
    for (int i = 0; i < k; ++i) d[i] = s[i] - t[i];
    if (Norm(d) < min_step) continue;  // degenerate pair
    const auto [q, normalized] =
        DscQuantity(game, s, t, weights, cfg.step_fraction);
    const double margin = cfg.dsc_convention == DscConvention::kNegative
                              ? -normalized
                              : normalized;
    ++v.samples_used;
    if (margin < v.worst_margin) {
      v.worst_margin = margin;
      if (DscViolated(normalized, cfg.dsc_convention, cfg.tolerance)) {
        Witness w;
        w.profiles = {s, t};
        w.values = {q, normalized,
                    cfg.dsc_convention == DscConvention::kNegative ? 0.0 : 1.0};
        w.steps.assign(weights.begin(), weights.end());
        w.alpha = cfg.step_fraction;
        w.description = "(s - s').(gamma(s) - gamma(s')) has the wrong sign";
        v.witness = std::move(w);
      }
    }
  }
  v.status = v.witness ? CheckStatus::kCounterexample
                       : CheckStatus::kHoldsOnSamples;
  return v;
}

StandardBrVerdict CheckStandardBr(const BestResponseMap& br,
                                  std::span<const double> box_upper,
                                  const FDConfig& cfg) {
  cfg.Validate();
  const int k = static_cast<int>(box_upper.size());
  if (k == 0) throw ParameterError("standard-BR box needs a dimension");
  for (double b : box_upper) {
    if (!(b > 0.0)) throw ParameterError("standard-BR box must be positive");
  }
  StandardBrVerdict out;
  CheckVerdict& mono = out.monotonicity;
  CheckVerdict& scal = out.scalability;
  mono.kind = CheckKind::kStandardMonotonicity;
  scal.kind = CheckKind::kStandardScalability;
  mono.tolerance = scal.tolerance = cfg.tolerance;
  mono.worst_margin = scal.worst_margin =
      std::numeric_limits<double>::infinity();

  std::mt19937_64 mono_rng = MakeRng(cfg, kSaltMonotone);
  for (int n = 0; n < cfg.monotonicity_samples; ++n) {
    std::vector<double> x(k), y(k);
    for (int i = 0; i < k; ++i) {
      x[i] = Uniform(mono_rng, 0.0, box_upper[i]);
      y[i] = x[i] + Uniform(mono_rng, 0.0, box_upper[i] - x[i]);
    }
    const std::vector<double> gx = CheckedBr(br, x);
    const std::vector<double> gy = CheckedBr(br, y);
    ++mono.samples_used;
    for (int i = 0; i < k; ++i) {
      const double margin = (gy[i] - gx[i]) / std::max(1.0, std::abs(gy[i]));
      if (margin < mono.worst_margin) {
        mono.worst_margin = margin;
        if (MonotonicityViolated(gx[i], gy[i], cfg.tolerance)) {
          Witness w;
          w.player = i;
          w.profiles = {x, y};
          w.values = {gx[i], gy[i]};
          w.description = "x <= x' but g_i(x) > g_i(x')";
          mono.witness = std::move(w);
        }
      }
    }
  }

  std::mt19937_64 scal_rng = MakeRng(cfg, kSaltScalable);
  for (int n = 0; n < cfg.scalability_samples; ++n) {
    std::vector<double> x(k);
    for (int i = 0; i < k; ++i) x[i] = Uniform(scal_rng, 0.0, box_upper[i]);
    double alpha = Uniform(scal_rng, 1.0, cfg.alpha_max);
    if (alpha <= 1.0) alpha = std::nextafter(1.0, 2.0);
    std::vector<double> ax(k);
    for (int i = 0; i < k; ++i) ax[i] = alpha * x[i];
    const std::vector<double> gx = CheckedBr(br, x);
    const std::vector<double> gax = CheckedBr(br, ax);
    ++scal.samples_used;
    for (int i = 0; i < k; ++i) {
      const double alpha_g = alpha * gx[i];
      const double margin =
          (alpha_g - gax[i]) / std::max(std::abs(alpha_g), 1e-300);
      if (margin < scal.worst_margin) {
        scal.worst_margin = margin;
        if (ScalabilityViolated(gax[i], alpha_g, cfg.tolerance)) {
          Witness w;
          w.player = i;
          w.profiles = {x};
          w.alpha = alpha;
          w.values = {gax[i], alpha_g};
          w.description = "g_i(alpha x) >= alpha g_i(x)";
          scal.witness = std::move(w);
        }
      }
    }
  }
  mono.status = mono.witness ? CheckStatus::kCounterexample
                             : CheckStatus::kHoldsOnSamples;
  scal.status = scal.witness ? CheckStatus::kCounterexample
                             : CheckStatus::kHoldsOnSamples;
  return out;
}

bool ReplayWitness(const Game& game, const CheckVerdict& verdict,
                   const PotentialFunction& phi) {
  if (!verdict.witness) return false;
  const Witness& w = *verdict.witness;
  const double tol = verdict.tolerance;
  switch (verdict.kind) {
    case CheckKind::kQuasiConcavity: {
      const double ua = PlayerValue(game, w.profiles[0], w.player);
      const double ub = PlayerValue(game, w.profiles[1], w.player);
      const double uc = PlayerValue(game, w.profiles[2], w.player);
      return ub < std::min(ua, uc) - tol * w.values[3];
    }
    case CheckKind::kSupermodular:
      return SModularValue(game, w) < -tol * w.values[1];
    case CheckKind::kSubmodular:
      return SModularValue(game, w) > tol * w.values[1];
    case CheckKind::kPotentialCondition:
      return std::abs(PotentialConditionValue(game, w)) > tol * w.values[1];
    case CheckKind::kExactPotential:
    case CheckKind::kOrdinalPotential: {
      if (!phi) return false;
      const double du = PlayerValue(game, w.profiles[0], w.player) -
                        PlayerValue(game, w.profiles[1], w.player);
      const double dphi = phi(w.profiles[0]) - phi(w.profiles[1]);
      return PotentialViolated(du, dphi,
                               verdict.kind == CheckKind::kExactPotential
                                   ? PotentialMode::kExact
                                   : PotentialMode::kOrdinal,
                               tol);
    }
    case CheckKind::kDsc: {
      const auto [q, normalized] =
          DscQuantity(game, w.profiles[0], w.profiles[1], w.steps, w.alpha);
      (void)q;
      const DscConvention convention = w.values[2] == 0.0
                                           ? DscConvention::kNegative
                                           : DscConvention::kPositive;
      return DscViolated(normalized, convention, tol);
    }
    default:
      return false;
  }
}

bool ReplayWitness(const BestResponseMap& br, const CheckVerdict& verdict) {
  if (!verdict.witness) return false;
  const Witness& w = *verdict.witness;
  if (verdict.kind == CheckKind::kStandardMonotonicity) {
    const double gx = CheckedBr(br, w.profiles[0])[w.player];
    const double gy = CheckedBr(br, w.profiles[1])[w.player];
    return MonotonicityViolated(gx, gy, verdict.tolerance);
  }
  if (verdict.kind == CheckKind::kStandardScalability) {
    std::vector<double> ax = w.profiles[0];
    for (double& v : ax) v *= w.alpha;
    const double gax = CheckedBr(br, ax)[w.player];
    const double alpha_g = w.alpha * CheckedBr(br, w.profiles[0])[w.player];
    return ScalabilityViolated(gax, alpha_g, verdict.tolerance);
  }
  return false;
}

ExistenceReport BuildExistenceReport(const Game& game, const FDConfig& cfg,
                                     const PotentialFunction& phi) {
  cfg.Validate();
  ExistenceReport report;
  report.finite_game = game.all_finite();
  if (report.finite_game) {
    if (phi) report.potential = VerifyPotential(game, phi, cfg);
    if (report.potential && report.potential->holds()) {
      report.conclusion = ExistenceConclusion::kPureNeGuaranteed;
      report.theorem = "Monderer-Shapley";
    } else {
      report.conclusion = ExistenceConclusion::kMixedNeGuaranteed;
      report.theorem = "Nash";
    }
    report.note = "finite game: potential verdict is exhaustive";
    return report;
  }
  if (!game.all_intervals()) {
    if (phi) report.potential = VerifyPotential(game, phi, cfg);
    if (report.potential && report.potential->holds()) {
      report.conclusion = ExistenceConclusion::kPureNeGuaranteed;
      report.theorem = "Monderer-Shapley";
    }
    report.note = "mixed interval/finite game: only the potential test applies";
    return report;
  }

  bool quasi_concave = true;
  for (int i = 0; i < game.num_players(); ++i) {
    report.quasi_concavity.push_back(CheckQuasiConcavity(game, i, cfg));
    quasi_concave = quasi_concave && report.quasi_concavity.back().holds();
  }
  SModularVerdict smod = CheckSModular(game, cfg);
  report.supermodular = smod.supermodular;
  report.submodular = smod.submodular;
  report.potential =
      phi ? VerifyPotential(game, phi, cfg) : CheckPotentialCondition(game, cfg);

  report.note = "sampled evidence, not a proof";
  if (quasi_concave) {
    report.conclusion = ExistenceConclusion::kPureNeGuaranteed;
    report.theorem = "Debreu-Fan-Glicksberg";
  } else if (report.supermodular->holds() || report.submodular->holds()) {
    report.conclusion = ExistenceConclusion::kPureNeGuaranteed;
    report.theorem = "Topkis";
  } else if (report.potential->holds()) {
    report.conclusion = ExistenceConclusion::kPureNeGuaranteed;
    report.theorem = "Monderer-Shapley";
  }
  return report;
}

}  // namespace eqkit
