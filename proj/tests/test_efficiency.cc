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
#include <numeric>
#include <random>

#include "doctest.h"
#include "eqkit/efficiency.h"
#include "oracles.h"

using namespace eqkit;

namespace {

oracle::Table TableOf(const FiniteGame& g) {
  return {g.action_counts(), [&g](const std::vector<int>& a, int i) {
            return g.Payoff(g.CellIndex(a), i);
          }};
}

std::vector<FiniteGame> BuiltInFinite() {
  return {PrisonersDilemma(), MatchingPennies(), BattleOfTheSexes(), Chicken(),
          MakeAloha()};
}

ChannelParams Mac11() {
  ChannelParams c;
  c.gains = {1.0, 1.0};
  c.noise = 1.0;
  c.max_powers = {1.0, 1.0};
  return c;
}

// -(s_i - 1)^2 on [0, 2]; shared constraint s_1 + s_2 <= 1.
Game Decoupled() {
  QuadraticSpec q{{1, 1}, {2, 2}, {{0, 0}, {0, 0}}, {0, 0}, {2, 2}};
  return MakeQuadratic(q);
}

ConstraintSpec SumConstraint(double bound, std::vector<double> r) {
  return {[bound](std::span<const double> s) { return bound - s[0] - s[1]; },
          std::move(r)};
}

}  // namespace

TEST_CASE("social welfare") {
  const FiniteGame pd = PrisonersDilemma();
  CHECK(SocialWelfare(pd, pd.CellIndex(std::vector<int>{0, 0})) == 6.0);
  CHECK(SocialWelfare(pd, pd.CellIndex(std::vector<int>{1, 1})) == 2.0);
  const Game zero("zero", {StrategySpace::MakeInterval(0, 1)},
                  [](std::span<const double>) { return std::vector<double>{0.0}; });
  CHECK(SocialWelfare(zero, std::vector<double>{0.5}) == 0.0);
  for (double tau : {0.0, 0.3, 1.0}) {
    const MacRateGame mac = MakeMacRateGame(Mac11(), tau);
    CHECK(std::abs(SocialWelfare(mac.game, std::vector<double>{1, 1}) -
                   std::log2(3.0)) <= 1e-12);
  }
}

TEST_CASE("virtual MIMO metric") {
  ChannelParams one;
  one.gains = {0.4};
  one.noise = 0.01;
  one.max_powers = {1.0};
  const EnergyEfficientPc single(one, EfficiencyFunction(), true);
  const std::vector<double> p1{0.3};
  CHECK(VirtualMimoMetric(single, p1) ==
        doctest::Approx(EvaluateUtility(single.game(), p1)[0]).epsilon(1e-14));

  ChannelParams twin;
  twin.gains = {0.5, 0.5};
  twin.noise = 0.01;
  twin.max_powers = {1.0, 1.0};
  const EnergyEfficientPc sym(twin, EfficiencyFunction(), false);
  const std::vector<double> p2{0.4, 0.4};
  const auto u = EvaluateUtility(sym.game(), p2);
  CHECK(VirtualMimoMetric(sym, p2) == doctest::Approx(u[0]).epsilon(1e-14));
  CHECK(u[0] == doctest::Approx(u[1]).epsilon(1e-14));

  // Asymmetric: sum f(SINR_i) / sum p_i by hand.
  const EnergyEfficientPc ee(ChannelParams::DefaultTwoUser(), EfficiencyFunction(),
                             true);
  const std::vector<double> p{0.6, 0.45};
  const double s0 = 0.1 * 0.6 / 0.01;
  const double s1 = 1.0 * 0.45 / (0.01 + 0.1 * 0.6);
  const double f0 = std::pow(1 - std::exp(-s0), 100);
  const double f1 = std::pow(1 - std::exp(-s1), 100);
  CHECK(VirtualMimoMetric(ee, p) == doctest::Approx((f0 + f1) / 1.05).epsilon(1e-12));
  CHECK_THROWS_AS(VirtualMimoMetric(ee, std::vector<double>{0, 0}), DomainError);
}

TEST_CASE("Pareto optimality") {
  const FiniteGame pd = PrisonersDilemma();
  const ParetoResult dd = IsParetoOptimal(pd, pd.CellIndex(std::vector<int>{1, 1}));
  CHECK_FALSE(dd.pareto_optimal);
  REQUIRE(dd.dominating_cell.has_value());
  CHECK(pd.ActionsOf(*dd.dominating_cell) == std::vector<int>{0, 0});
  CHECK(IsParetoOptimal(pd, pd.CellIndex(std::vector<int>{0, 0})).pareto_optimal);

  const FiniteGame single("single", {1, 1}, {3.0, -2.0});
  CHECK(IsParetoOptimal(single, 0).pareto_optimal);
}

TEST_CASE("Pareto scan agrees with a brute-force domination oracle") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> small(0, 4);
  for (const auto& shape : std::vector<std::vector<int>>{{2, 2}, {4, 4}, {8, 8},
                                                         {4, 4, 4}, {2, 3, 2}}) {
    for (int trial = 0; trial < 20; ++trial) {
      int64_t cells = 1;
      for (int c : shape) cells *= c;
      std::vector<double> payoffs(cells * shape.size());
      for (double& p : payoffs) p = small(rng);
      const FiniteGame g("random", shape, payoffs);
      const oracle::Table t = TableOf(g);
      for (int64_t cell = 0; cell < cells; ++cell) {
        CHECK(IsParetoOptimal(g, cell).pareto_optimal ==
              !oracle::Dominated(t, g.ActionsOf(cell)));
      }
    }
  }
}

TEST_CASE("discretized MAC: full-power profiles are Pareto-optimal") {
  for (double tau : {0.0, 0.5, 1.0}) {
    const FiniteGame fg = Discretize(MakeMacRateGame(Mac11(), tau).game, 11);
    const int64_t full = fg.CellIndex(std::vector<int>{10, 10});
    CHECK(std::abs(SocialWelfare(fg, full) - std::log2(3.0)) <= 1e-9);
    CHECK(IsParetoOptimal(fg, full).pareto_optimal);
  }
}

TEST_CASE("weighted-sum maximizers") {
  const FiniteGame pd = PrisonersDilemma();
  CHECK(pd.ActionsOf(WeightedSumPo(pd, std::vector<double>{1, 1})) ==
        std::vector<int>{0, 0});
  const FiniteGame bos = BattleOfTheSexes();
  CHECK(bos.ActionsOf(WeightedSumPo(bos, std::vector<double>{10, 1})) ==
        std::vector<int>{0, 0});
  CHECK(bos.ActionsOf(WeightedSumPo(bos, std::vector<double>{1, 10})) ==
        std::vector<int>{1, 1});
  CHECK_THROWS_AS(WeightedSumPo(pd, std::vector<double>{1, 0}), ParameterError);
  CHECK_THROWS_AS(WeightedSumPo(pd, std::vector<double>{1, -2}), ParameterError);

  // Equal weights give a welfare maximizer.
  for (const FiniteGame& g : BuiltInFinite()) {
    const int64_t cell = WeightedSumPo(g, std::vector<double>{1, 1});
    for (int64_t other = 0; other < g.num_cells(); ++other) {
      CHECK(SocialWelfare(g, cell) >= SocialWelfare(g, other));
    }
  }
}

TEST_CASE("weighted-sum output is Pareto-optimal for positive weights") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> w(0.01, 10.0);
  for (const FiniteGame& g : BuiltInFinite()) {
    for (int trial = 0; trial < 50; ++trial) {
      const std::vector<double> alpha{w(rng), w(rng)};
      CHECK(IsParetoOptimal(g, WeightedSumPo(g, alpha)).pareto_optimal);
    }
  }
}

TEST_CASE("price of anarchy and stability") {
  const FiniteGame pd = PrisonersDilemma();
  const PoaResult r = PoaPos(pd, PureNeSearch(pd));
  CHECK(r.ratio_defined);
  CHECK(r.poa == 3.0);
  CHECK(r.pos == 3.0);

  // Unique NE at the welfare maximum.
  const FiniteGame coord = FiniteGame::FromBimatrix("coord", {{4, 0}, {0, 1}},
                                                    {{4, 0}, {0, 1}});
  std::vector<NashResult> top = {PureNeSearch(coord)[0]};
  CHECK(PoaPos(coord, top).poa == 1.0);
  CHECK(PoaPos(coord, top).pos == 1.0);

  const PoaResult both = PoaPos(coord, PureNeSearch(coord));
  CHECK(both.poa == 4.0);
  CHECK(both.pos == 1.0);
  CHECK(both.pos <= both.poa);
  CHECK_THROWS(PoaPos(coord, {}));
}

TEST_CASE("nonpositive equilibrium welfare reports gaps") {
  const FiniteGame g =
      FiniteGame::FromBimatrix("neg", {{-1, 2}, {0, 1}}, {{-1, 0}, {2, 1}});
  std::vector<NashResult> ne = {{FromActions(std::vector<int>{0, 0}), 0.0, {}}};
  const PoaResult r = PoaPos(g, ne);
  CHECK_FALSE(r.ratio_defined);
  CHECK(std::isnan(r.poa));
  CHECK(r.worst_gap == doctest::Approx(2.0 - (-2.0)));
}

TEST_CASE("PoA is invariant to a positive rescaling of utilities") {
  const FiniteGame pd = PrisonersDilemma();
  for (double c : {0.5, 7.0}) {
    std::vector<double> scaled;
    for (int64_t cell = 0; cell < pd.num_cells(); ++cell) {
      for (double u : pd.Payoffs(cell)) scaled.push_back(c * u);
    }
    const FiniteGame g("scaled", {2, 2}, scaled);
    const PoaResult r = PoaPos(g, PureNeSearch(g));
    CHECK(r.poa == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(r.max_welfare == doctest::Approx(6.0 * c));
  }
}

TEST_CASE("PoA on a discretized continuous game uses the continuous NE") {
  const Cournot c = MakeCournot(10, 1, 1);
  const FiniteGame grid = Discretize(c.game, 51);
  std::vector<NashResult> ne = {{c.AnalyticEquilibrium(), 0.0, {}}};
  const PoaResult r = PoaPos(grid, ne, &c.game);
  // Grid step 0.2: best joint output 4.4 gives 4.6 * 4.4 = 20.24 vs 18 at
  // the NE.
  CHECK(r.worst_ne_welfare == doctest::Approx(18.0));
  CHECK(r.max_welfare == doctest::Approx(20.24));
  CHECK(r.poa >= 1.0);
}

TEST_CASE("normalized equilibrium: symmetric weights") {
  const Game g = Decoupled();
  const NormalizedEqVerdict v = NormalizedEqCheck(
      g, std::vector<double>{0.5, 0.5}, SumConstraint(1.0, {1.0, 1.0}));
  CHECK(v.active);
  CHECK(v.holds);
  CHECK(v.multipliers[0] == doctest::Approx(v.multipliers[1]).epsilon(1e-6));
  CHECK(v.multipliers[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("normalized equilibrium: weights (2, 1) shift the point") {
  // Stationarity 2(1 - s_i) = lambda_i with 2 lambda_1 = lambda_2 and
  // s_1 + s_2 = 1.
  const std::vector<double> s = oracle::Solve2x2(4, -2, 1, 1, 2, 1);
  CHECK(s[0] == doctest::Approx(2.0 / 3.0));
  const Game g = Decoupled();
  const NormalizedEqVerdict v = NormalizedEqCheck(g, s, SumConstraint(1.0, {2.0, 1.0}));
  CHECK(v.active);
  CHECK(v.holds);
  CHECK(v.multipliers[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
  CHECK(v.multipliers[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-6));
  CHECK(v.scaled[0] == doctest::Approx(v.scaled[1]).epsilon(1e-6));

  // The symmetric point is not normalized for r = (2, 1).
  CHECK_FALSE(NormalizedEqCheck(g, std::vector<double>{0.5, 0.5},
                                SumConstraint(1.0, {2.0, 1.0}))
                  .holds);
}

TEST_CASE("normalized equilibrium: slack constraint needs a plain NE") {
  const Game g = Decoupled();
  const NormalizedEqVerdict v = NormalizedEqCheck(
      g, std::vector<double>{1.0, 1.0}, SumConstraint(3.0, {1.0, 1.0}));
  CHECK_FALSE(v.active);
  CHECK(v.holds);
  CHECK(v.multipliers == std::vector<double>{0.0, 0.0});
  CHECK(v.min_utility == doctest::Approx(1.0));
  CHECK(v.sum_log_utility == doctest::Approx(0.0));

  CHECK_FALSE(NormalizedEqCheck(g, std::vector<double>{0.5, 1.0},
                                SumConstraint(3.0, {1.0, 1.0}))
                  .holds);
}

TEST_CASE("normalized equilibrium: flat constraint is unidentifiable") {
  const Game g = Decoupled();
  ConstraintSpec only_first{[](std::span<const double> s) { return 0.5 - s[0]; },
                            {1.0, 1.0}};
  const NormalizedEqVerdict v =
      NormalizedEqCheck(g, std::vector<double>{0.5, 1.0}, only_first);
  CHECK(v.active);
  CHECK_FALSE(v.holds);
  CHECK(v.unidentifiable == std::vector<int>{1});
  CHECK_THROWS_AS(NormalizedEqCheck(g, std::vector<double>{0.5, 0.5},
                                    SumConstraint(1.0, {1.0, 0.0})),
                  ParameterError);
}
