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

#include "eqkit/equilibrium.h"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

namespace eqkit {
namespace {

double Deviate(const Game& game, int player, StrategyProfile& profile,
               double value) {
  const double saved = profile[player];
  profile[player] = value;
  const double u = EvaluateUtility(game, profile)[player];
  profile[player] = saved;
  return u;
}

double MaxNormDistance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::vector<int> Subset(unsigned mask, int n) {
  std::vector<int> s;
  for (int i = 0; i < n; ++i) {
    if (mask & (1u << i)) s.push_back(i);
  }
  return s;
}

// Solves for the opponent's mix on `cols` making the owner indifferent over
// `rows`: sum_j payoff(r, j) y_j = v for r in rows, sum_j y_j = 1.
std::optional<std::vector<double>> IndifferenceMix(
    const std::vector<std::vector<double>>& payoff, const std::vector<int>& rows,
    const std::vector<int>& cols) {
  const int k = static_cast<int>(rows.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k + 1, k + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) m(r, c) = payoff[rows[r]][cols[c]];
    m(r, k) = -1.0;
  }
  for (int c = 0; c < k; ++c) m(k, c) = 1.0;
  rhs(k) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible()) return std::nullopt;
  const Eigen::VectorXd sol = lu.solve(rhs);
  return std::vector<double>(sol.data(), sol.data() + k);
}

// Stationary distribution of the switching chain built from positive
// regrets: q_k sum_j R(k, j) = sum_j q_j R(j, k).
std::vector<double> SwitchingStationary(const std::vector<double>& regret,
                                        int m) {
  std::vector<double> q(m, 1.0 / m);
  bool any_positive = false;
  for (double r : regret) any_positive = any_positive || r > 0.0;
  if (!any_positive) return q;
  auto pos = [&](int j, int k) { return std::max(regret[j * m + k], 0.0); };
  if (m == 2) {
    const double r01 = pos(0, 1);
    const double r10 = pos(1, 0);
    q[0] = r10 / (r01 + r10);
    q[1] = r01 / (r01 + r10);
    return q;
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m + 1, m);
  for (int k = 0; k < m; ++k) {
    double out = 0.0;
    for (int j = 0; j < m; ++j) {
      if (j == k) continue;
      out += pos(k, j);
      a(k, j) = pos(j, k);
    }
    a(k, k) = -out;
  }
  for (int j = 0; j < m; ++j) a(m, j) = 1.0;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m + 1);
  b(m) = 1.0;
  const Eigen::VectorXd sol = a.completeOrthogonalDecomposition().solve(b);
  double total = 0.0;
  for (int j = 0; j < m; ++j) {
    q[j] = std::max(sol(j), 0.0);
    total += q[j];
  }
  for (double& v : q) v = total > 0.0 ? v / total : 1.0 / m;
  return q;
}

int Sample(const std::vector<double>& q, std::mt19937_64& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (size_t a = 0; a + 1 < q.size(); ++a) {
    acc += q[a];
    if (u < acc) return static_cast<int>(a);
  }
  return static_cast<int>(q.size()) - 1;
}

}  // namespace

double NeVerify(const Game& game, std::span<const double> profile,
                int deviation_points) {
  StrategyProfile s(profile.begin(), profile.end());
  const std::vector<double> base = EvaluateUtility(game, s);
  double epsilon = 0.0;
  if (const FiniteGame* fg = game.finite()) {
    const std::vector<int> actions = ToActions(s);
    const int64_t cell = fg->CellIndex(actions);
    for (int i = 0; i < fg->num_players(); ++i) {
      const int64_t base_cell = cell - actions[i] * fg->stride(i);
      for (int a = 0; a < fg->action_counts()[i]; ++a) {
        const double gain =
            fg->Payoff(base_cell + a * fg->stride(i), i) - base[i];
        epsilon = std::max(epsilon, gain);
      }
    }
    return epsilon;
  }
  for (int i = 0; i < game.num_players(); ++i) {
    const StrategySpace& space = game.space(i);
    if (space.is_finite()) {
      for (int a = 0; a < space.action_count(); ++a) {
        epsilon = std::max(epsilon, Deviate(game, i, s, a) - base[i]);
      }
    } else {
      const double br = BestResponseGrid(game, i, s, deviation_points);
      epsilon = std::max(epsilon, Deviate(game, i, s, br) - base[i]);
    }
  }
  return epsilon;
}

std::vector<NashResult> PureNeSearch(const FiniteGame& game) {
  const int k = game.num_players();
  const int64_t cells = game.num_cells();
  // best[i][cell]: player i's best payoff against cell's other components.
  std::vector<std::vector<double>> best(k, std::vector<double>(cells));
  for (int i = 0; i < k; ++i) {
    const int64_t stride = game.stride(i);
    const int n = game.action_counts()[i];
    for (int64_t cell = 0; cell < cells; ++cell) {
      const int own = static_cast<int>((cell / stride) % n);
      if (own != 0) {
        best[i][cell] = best[i][cell - own * stride];
        continue;
      }
      double m = game.Payoff(cell, i);
      for (int a = 1; a < n; ++a) m = std::max(m, game.Payoff(cell + a * stride, i));
      best[i][cell] = m;
    }
  }
  std::vector<NashResult> out;
  for (int64_t cell = 0; cell < cells; ++cell) {
    bool stable = true;
    for (int i = 0; i < k && stable; ++i) {
      stable = game.Payoff(cell, i) >= best[i][cell];
    }
    if (!stable) continue;
    std::span<const double> u = game.Payoffs(cell);
    out.push_back({FromActions(game.ActionsOf(cell)), 0.0,
                   std::vector<double>(u.begin(), u.end())});
  }
  return out;
}

BrTrace BrDynamics(const Game& game, std::span<const double> start,
                   const BrDynamicsOptions& options) {
  ValidateProfile(game, start);
  if (options.max_sweeps < 1) throw ParameterError("max_sweeps must be >= 1");
  if (!(options.tol >= 0.0)) throw ParameterError("tol must be >= 0");
  const int k = game.num_players();
  BrTrace trace;
  trace.sweep_order = options.order;
  if (trace.sweep_order.empty()) {
    trace.sweep_order.resize(k);
    std::iota(trace.sweep_order.begin(), trace.sweep_order.end(), 0);
  }
  {
    std::vector<int> sorted = trace.sweep_order;
    std::sort(sorted.begin(), sorted.end());
    bool permutation = static_cast<int>(sorted.size()) == k;
    for (int i = 0; i < k && permutation; ++i) permutation = sorted[i] == i;
    if (!permutation) {
      throw ParameterError("sweep order must be a permutation of players");
    }
  }

  const FiniteGame* fg = game.finite();
  auto respond = [&](int player, const StrategyProfile& s) -> double {
    if (options.best_response) return options.best_response(player, s);
    if (fg != nullptr) {
      return BestResponseFinite(*fg, player, ToActions(s));
    }
    return BestResponseGrid(game, player, s, options.br_points);
  };

  StrategyProfile current(start.begin(), start.end());
  trace.iterates.push_back(current);
  trace.updated_player.push_back(-1);
  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    double moved = 0.0;
    if (options.mode == UpdateMode::kSequential) {
      for (int player : trace.sweep_order) {
        const double next = respond(player, current);
        moved = std::max(moved, std::abs(next - current[player]));
        current[player] = next;
        trace.iterates.push_back(current);
        trace.updated_player.push_back(player);
      }
    } else {
      StrategyProfile next = current;
      for (int player = 0; player < k; ++player) {
        next[player] = respond(player, current);
      }
      moved = MaxNormDistance(next, current);
      current = std::move(next);
      trace.iterates.push_back(current);
      trace.updated_player.push_back(-1);
    }
    trace.sweeps = sweep + 1;
    if (moved <= options.tol) {
      trace.converged = true;
      break;
    }
  }
  if (trace.converged) {
    trace.limit = current;
    trace.limit_epsilon = NeVerify(game, current, options.deviation_points);
  }
  return trace;
}

BasinMap ComputeBasinMap(const Game& game, int resolution,
                         const BrDynamicsOptions& options) {
  if (game.num_players() != 2 || !game.all_intervals()) {
    throw DomainError("basin map needs a two-player interval game");
  }
  if (resolution < 2) throw ParameterError("basin resolution must be >= 2");
  BasinMap map;
  map.resolution = resolution;
  map.axis0 = UniformGrid(game.space(0).interval(), resolution);
  map.axis1 = UniformGrid(game.space(1).interval(), resolution);
  map.cluster_radius = 10.0 * options.tol;
  map.labels.assign(static_cast<size_t>(resolution) * resolution,
                    BasinMap::kDiverged);
  for (int a = 0; a < resolution; ++a) {
    for (int b = 0; b < resolution; ++b) {
      const StrategyProfile start = {map.axis0[a], map.axis1[b]};
      const BrTrace trace = BrDynamics(game, start, options);
      if (!trace.converged) continue;
      int label = BasinMap::kDiverged;
      for (size_t e = 0; e < map.equilibria.size(); ++e) {
        if (MaxNormDistance(map.equilibria[e], *trace.limit) <=
            map.cluster_radius) {
          label = static_cast<int>(e);
          break;
        }
      }
      if (label == BasinMap::kDiverged) {
        label = static_cast<int>(map.equilibria.size());
        map.equilibria.push_back(*trace.limit);
      }
      map.labels[a * resolution + b] = label;
    }
  }
  return map;
}

int CountBasinComponents(const BasinMap& map, int label) {
  const int n = map.resolution;
  std::vector<char> seen(map.labels.size(), 0);
  int components = 0;
  std::vector<int> stack;
  for (int start = 0; start < n * n; ++start) {
    if (map.labels[start] != label || seen[start]) continue;
    ++components;
    stack.push_back(start);
    seen[start] = 1;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      const int a = c / n;
      const int b = c % n;
      const int nbrs[4][2] = {{a - 1, b}, {a + 1, b}, {a, b - 1}, {a, b + 1}};
      for (const auto& nb : nbrs) {
        if (nb[0] < 0 || nb[0] >= n || nb[1] < 0 || nb[1] >= n) continue;
        const int idx = nb[0] * n + nb[1];
        if (map.labels[idx] == label && !seen[idx]) {
          seen[idx] = 1;
          stack.push_back(idx);
        }
      }
    }
  }
  return components;
}

double MixedNeGap(const FiniteGame& game, const MixedProfile& mix) {
  const std::vector<double> value = ExpectedUtility(game, mix);
  double gap = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    for (int a = 0; a < game.action_counts()[i]; ++a) {
      MixedProfile dev = mix;
      dev.distributions[i].assign(game.action_counts()[i], 0.0);
      dev.distributions[i][a] = 1.0;
      gap = std::max(gap, ExpectedUtility(game, dev)[i] - value[i]);
    }
  }
  return gap;
}

SupportEnumerationResult SupportEnumeration(const FiniteGame& game) {
  if (game.num_players() != 2) {
    throw DomainError("support enumeration needs a two-player game");
  }
  const int m = game.action_counts()[0];
  const int n = game.action_counts()[1];
  if (m > kMaxSupportActions || n > kMaxSupportActions) {
    throw ParameterError("support enumeration is capped at " +
                         std::to_string(kMaxSupportActions) +
                         " actions per player");
  }
  std::vector<std::vector<double>> row(m, std::vector<double>(n));
  std::vector<std::vector<double>> col_t(n, std::vector<double>(m));
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < n; ++b) {
      const int64_t cell = game.CellIndex(std::vector<int>{a, b});
      row[a][b] = game.Payoff(cell, 0);
      col_t[b][a] = game.Payoff(cell, 1);
    }
  }
  constexpr double kNegativeSlack = 1e-12;
  constexpr double kNashTolerance = 1e-8;
  SupportEnumerationResult result;
  for (int size = 1; size <= std::min(m, n); ++size) {
    for (unsigned rmask = 1; rmask < (1u << m); ++rmask) {
      if (std::popcount(rmask) != size) continue;
      const std::vector<int> rows = Subset(rmask, m);
      for (unsigned cmask = 1; cmask < (1u << n); ++cmask) {
        if (std::popcount(cmask) != size) continue;
        const std::vector<int> cols = Subset(cmask, n);
        // Column mix makes the row player indifferent, and vice versa.
        const auto y = IndifferenceMix(row, rows, cols);
        const auto x = IndifferenceMix(col_t, cols, rows);
        if (!x || !y) {
          ++result.singular_systems;
          continue;
        }
        MixedProfile mix;
        mix.distributions = {std::vector<double>(m, 0.0),
                             std::vector<double>(n, 0.0)};
        bool valid = true;
        for (int r = 0; r < size && valid; ++r) {
          valid = (*x)[r] >= -kNegativeSlack && (*y)[r] >= -kNegativeSlack;
          mix.distributions[0][rows[r]] = std::max((*x)[r], 0.0);
          mix.distributions[1][cols[r]] = std::max((*y)[r], 0.0);
        }
        if (!valid) continue;
        for (auto& q : mix.distributions) {
          const double total = std::accumulate(q.begin(), q.end(), 0.0);
          for (double& v : q) v /= total;
        }
        if (MixedNeGap(game, mix) > kNashTolerance) continue;
        bool duplicate = false;
        for (const MixedProfile& seen : result.equilibria) {
          double d = 0.0;
          for (int p = 0; p < 2; ++p) {
            d = std::max(d, MaxNormDistance(seen.distributions[p],
                                            mix.distributions[p]));
          }
          duplicate = duplicate || d <= kProbabilityTolerance;
        }
        if (!duplicate) result.equilibria.push_back(std::move(mix));
      }
    }
  }
  return result;
}

CorrelatedResult RegretMatchingCe(const FiniteGame& game, int iterations,
                                  uint64_t seed) {
  if (iterations < 1) throw ParameterError("iterations must be >= 1");
  const int k = game.num_players();
  const std::vector<int>& counts = game.action_counts();
  std::vector<std::vector<double>> regret(k);
  for (int i = 0; i < k; ++i) regret[i].assign(counts[i] * counts[i], 0.0);
  std::vector<int64_t> visits(game.num_cells(), 0);
  std::mt19937_64 rng(seed);
  std::vector<int> actions(k);
  for (int t = 0; t < iterations; ++t) {
    for (int i = 0; i < k; ++i) {
      actions[i] = Sample(SwitchingStationary(regret[i], counts[i]), rng);
    }
    const int64_t cell = game.CellIndex(actions);
    ++visits[cell];
    for (int i = 0; i < k; ++i) {
      const int64_t base = cell - actions[i] * game.stride(i);
      const double u = game.Payoff(cell, i);
      for (int alt = 0; alt < counts[i]; ++alt) {
        regret[i][actions[i] * counts[i] + alt] +=
            game.Payoff(base + alt * game.stride(i), i) - u;
      }
    }
  }
  CorrelatedResult result;
  result.seed = seed;
  result.iterations = iterations;
  result.distribution.action_counts = counts;
  result.distribution.probabilities.resize(game.num_cells());
  for (int64_t c = 0; c < game.num_cells(); ++c) {
    result.distribution.probabilities[c] =
        static_cast<double>(visits[c]) / iterations;
  }
  for (int i = 0; i < k; ++i) {
    for (double r : regret[i]) {
      result.max_average_regret =
          std::max(result.max_average_regret, r / iterations);
    }
  }
  result.max_violation = CeVerify(game, result.distribution);
  return result;
}

double CeVerify(const FiniteGame& game, const JointDistribution& dist) {
  ValidateJointDistribution(game, dist);
  double worst = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    const int n = game.action_counts()[i];
    std::vector<double> gain(n * n, 0.0);
    for (int64_t cell = 0; cell < game.num_cells(); ++cell) {
      const double p = dist.probabilities[cell];
      if (p == 0.0) continue;
      const int a = static_cast<int>((cell / game.stride(i)) % n);
      const int64_t base = cell - a * game.stride(i);
      const double u = game.Payoff(cell, i);
      for (int alt = 0; alt < n; ++alt) {
        gain[a * n + alt] += p * (game.Payoff(base + alt * game.stride(i), i) - u);
      }
    }
    for (double g : gain) worst = std::max(worst, g);
  }
  return worst;
}

}  // namespace eqkit
