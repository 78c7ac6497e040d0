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

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "doctest.h"
#include "eqkit/game.h"
#include "eqkit/wireless.h"

using namespace eqkit;

namespace {

Game OneDim(std::function<double(double)> u, double lo = 0.0, double hi = 1.0) {
  return Game("one_dim", {StrategySpace::MakeInterval(lo, hi)},
              [u](std::span<const double> s) { return std::vector<double>{u(s[0])}; });
}

ChannelParams MacChannel() {
  ChannelParams c;
  c.gains = {1.0, 1.0};
  c.noise = 1.0;
  c.max_powers = {1.0, 1.0};
  return c;
}

}  // namespace

TEST_CASE("strategy spaces reject invalid shapes") {
  CHECK_THROWS_AS(StrategySpace::MakeInterval(1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(StrategySpace::MakeInterval(0.0, INFINITY), ParameterError);
  CHECK_THROWS_AS(StrategySpace::MakeFinite(0), ParameterError);
  const StrategySpace s = StrategySpace::MakeFinite(3);
  CHECK(s.Contains(2.0));
  CHECK_FALSE(s.Contains(3.0));
  CHECK_FALSE(s.Contains(0.5));
  CHECK(StrategySpace::MakeInterval(-1.0, 2.0).Contains(2.0));
}

TEST_CASE("evaluate_utility on zero-power and hand-evaluated profiles") {
  const MacRateGame mac = MakeMacRateGame(MacChannel());
  const std::vector<double> u0 = EvaluateUtility(mac.game, std::vector<double>{0, 0});
  CHECK(u0[0] == 0.0);
  CHECK(u0[1] == 0.0);

  EnergyEfficientPc ee(ChannelParams::DefaultTwoUser(), EfficiencyFunction(), true);
  const std::vector<double> ue = EvaluateUtility(ee.game(), std::vector<double>{0.0, 0.5});
  CHECK(ue[0] == 0.0);
  CHECK(ue[1] > 0.0);

  // (10 - 6 - 1) * 3
  const Cournot c = MakeCournot(10, 1, 1);
  const std::vector<double> uc = EvaluateUtility(c.game, std::vector<double>{3, 3});
  CHECK(uc[0] == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(uc[1] == doctest::Approx(9.0).epsilon(1e-15));
}

TEST_CASE("evaluate_utility names the offending player") {
  const Cournot c = MakeCournot(10, 1, 1);
  try {
    EvaluateUtility(c.game, std::vector<double>{3, 11});
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("player 1") != std::string::npos);
  }
  CHECK_THROWS_AS(EvaluateUtility(c.game, std::vector<double>{3}), DomainError);
}

TEST_CASE("evaluate_utility rejects non-finite oracle output") {
  const Game g = OneDim([](double x) { return 1.0 / x; });
  CHECK_THROWS_AS(EvaluateUtility(g, std::vector<double>{0.0}), EvaluationError);
}

TEST_CASE("expected utility: symmetric and degenerate lotteries") {
  const FiniteGame mp = MatchingPennies();
  const std::vector<double> u = ExpectedUtility(mp, MixedProfile::Uniform(mp));
  CHECK(u[0] == doctest::Approx(0.0));
  CHECK(u[1] == doctest::Approx(0.0));

  for (const FiniteGame& g : {PrisonersDilemma(), Chicken(), BattleOfTheSexes(),
                              MakeAloha()}) {
    for (int64_t cell = 0; cell < g.num_cells(); ++cell) {
      const std::vector<int> a = g.ActionsOf(cell);
      const std::vector<double> e = ExpectedUtility(g, MixedProfile::PointMass(g, a));
      for (int i = 0; i < g.num_players(); ++i) CHECK(e[i] == g.Payoff(cell, i));
    }
  }
}

TEST_CASE("expected utility matches a brute-force outcome sum") {
  const double u1[2][2] = {{3, 0}, {5, 1}};
  double sum = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) sum += 0.25 * u1[a][b];
  }
  const FiniteGame pd = PrisonersDilemma();
  MixedProfile half{{{0.5, 0.5}, {0.5, 0.5}}};
  CHECK(ExpectedUtility(pd, half)[0] == doctest::Approx(sum).epsilon(1e-15));
  CHECK(sum == 2.25);
}

TEST_CASE("expected utility is affine in each player's lottery") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // 3x2x2 game with random payoffs.
  std::vector<double> payoffs(12 * 3);
  for (double& p : payoffs) p = unit(rng) * 10 - 5;
  const FiniteGame g("random", {3, 2, 2}, payoffs);
  auto random_dist = [&](int n) {
    std::vector<double> d(n);
    double total = 0;
    for (double& x : d) total += (x = unit(rng) + 0.01);
    for (double& x : d) x /= total;
    return d;
  };
  for (int trial = 0; trial < 50; ++trial) {
    const int player = trial % 3;
    MixedProfile base{{random_dist(3), random_dist(2), random_dist(2)}};
    MixedProfile q = base, q2 = base, mixed = base;
    q.distributions[player] = random_dist(g.action_counts()[player]);
    q2.distributions[player] = random_dist(g.action_counts()[player]);
    const double lambda = unit(rng);
    for (size_t a = 0; a < q.distributions[player].size(); ++a) {
      mixed.distributions[player][a] = lambda * q.distributions[player][a] +
                                       (1 - lambda) * q2.distributions[player][a];
    }
    const auto uq = ExpectedUtility(g, q), uq2 = ExpectedUtility(g, q2),
               um = ExpectedUtility(g, mixed);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(um[i] - (lambda * uq[i] + (1 - lambda) * uq2[i])) <= 1e-9);
    }
  }
}

TEST_CASE("mixed profiles and joint distributions are validated") {
  const FiniteGame pd = PrisonersDilemma();
  CHECK_THROWS_AS(ExpectedUtility(pd, MixedProfile{{{0.5, 0.6}, {0.5, 0.5}}}),
                  DomainError);
  CHECK_THROWS_AS(ExpectedUtility(pd, MixedProfile{{{1.5, -0.5}, {0.5, 0.5}}}),
                  DomainError);
  CHECK_THROWS_AS(ExpectedUtility(pd, MixedProfile{{{1.0}, {0.5, 0.5}}}),
                  DomainError);
  JointDistribution bad{{2, 2}, {0.5, 0.5, 0.5, -0.5}};
  CHECK_THROWS_AS(ValidateJointDistribution(pd, bad), DomainError);
  const JointDistribution prod =
      JointDistribution::Product(pd, MixedProfile{{{0.25, 0.75}, {0.5, 0.5}}});
  CHECK_NOTHROW(ValidateJointDistribution(pd, prod));
  CHECK(prod.probabilities[pd.CellIndex(std::vector<int>{1, 0})] ==
        doctest::Approx(0.375));
}

TEST_CASE("discretize builds endpoint-inclusive grids") {
  const Game g = OneDim([](double x) { return x; });
  const FiniteGame fg = Discretize(g, 3);
  REQUIRE(fg.grid().size() == 1);
  CHECK(fg.grid()[0] == std::vector<double>{0.0, 0.5, 1.0});
  CHECK_THROWS_AS(Discretize(g, 1), ParameterError);
  CHECK_THROWS_AS(Discretize(PrisonersDilemma().AsGame(), 3), DomainError);
}

TEST_CASE("discretized MAC game: last-decoded user at full power") {
  const MacRateGame mac = MakeMacRateGame(MacChannel());
  const FiniteGame fg = Discretize(mac.game, 2);
  CHECK(fg.num_cells() == 4);
  // Default order decodes user 1 first, so user 0 is decoded last and sees
  // no interference: log2(1 + 1/1) = 1.
  const int64_t full = fg.CellIndex(std::vector<int>{1, 1});
  CHECK(fg.Payoff(full, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fg.Payoff(full, 1) == doctest::Approx(std::log2(1.5)).epsilon(1e-15));
}

TEST_CASE("discretize agrees bit-for-bit with the oracle") {
  const Game tb = MakeTwoBandPa(TwoBandGains::Asymmetric());
  const FiniteGame fg = Discretize(tb, 11);
  for (int64_t cell = 0; cell < fg.num_cells(); ++cell) {
    const StrategyProfile s = fg.GridProfile(cell);
    const std::vector<double> u = EvaluateUtility(tb, s);
    CHECK(fg.Payoff(cell, 0) == u[0]);
    CHECK(fg.Payoff(cell, 1) == u[1]);
  }
}

TEST_CASE("discretize reports the profile of a non-finite payoff") {
  const Game g = OneDim([](double x) { return std::log(x); });
  try {
    Discretize(g, 3);
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(std::string(e.what()).find("0") != std::string::npos);
  }
}

TEST_CASE("best_response_grid: quadratic maximizer, ties, determinism") {
  const Game q = OneDim([](double x) { return -(x - 0.3) * (x - 0.3); });
  const std::vector<double> start{0.0};
  CHECK(BestResponseGrid(q, 0, start, 11) == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(BestResponseGrid(q, 0, start, 201) == BestResponseGrid(q, 0, start, 201));

  const Game flat = OneDim([](double) { return 1.0; }, -2.0, 5.0);
  CHECK(BestResponseGrid(flat, 0, std::vector<double>{3.0}, 51) == -2.0);
}

TEST_CASE("best_response_grid matches the energy-efficient closed form") {
  EnergyEfficientPc ee(ChannelParams::DefaultTwoUser(), EfficiencyFunction(), true);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    StrategyProfile p{unit(rng), unit(rng)};
    for (int i = 0; i < 2; ++i) {
      const double grid = BestResponseGrid(ee.game(), i, p, 201);
      const double closed = ee.ClosedFormBestResponse(i, p);
      CHECK(std::abs(grid - closed) <= 1e-3 * closed);
    }
  }
}

TEST_CASE("finite best response breaks ties to the lowest index") {
  const FiniteGame g = FiniteGame::FromBimatrix("tie", {{1, 1}, {1, 1}},
                                                {{0, 0}, {0, 0}});
  CHECK(BestResponseFinite(g, 0, std::vector<int>{1, 1}) == 0);
  CHECK(BestResponseFinite(PrisonersDilemma(), 0, std::vector<int>{0, 0}) == 1);
}
