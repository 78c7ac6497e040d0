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

// Acceptance runner: one PASS/FAIL line per criterion, exit status 0 only
// when every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "eqkit/efficiency.h"
#include "eqkit/equilibrium.h"
#include "eqkit/game.h"
#include "eqkit/report.h"
#include "eqkit/structural.h"
#include "eqkit/wireless.h"
#include "oracles.h"

using namespace eqkit;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a sub-check; the detail keeps only failing or summary notes.
  void Require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " FAILED[" << what << "]";
    }
  }
};

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double RelErr(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

BuiltGame BuildDefault(const std::string& name) {
  const RunConfig c =
      ParseConfig("{\"game\": \"" + name + "\", \"analyses\": [\"solve\"]}");
  return BuildGame(c.game, c.game_params);
}

oracle::Table TableOf(const FiniteGame& fg) {
  return {fg.action_counts(), [&fg](const std::vector<int>& a, int i) {
            return fg.Payoff(fg.CellIndex(a), i);
          }};
}

double Seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// ---------------------------------------------------------------------------

void ExistenceFlowchart(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  FDConfig cfg;

  const BuiltGame ee = BuildDefault("energy_efficient");
  const ExistenceReport er = BuildExistenceReport(ee.game, cfg, ee.phi);
  bool qc = true;
  for (const CheckVerdict& v : er.quasi_concavity) qc = qc && v.holds();
  o.Require(qc, "energy-efficient quasi-concavity");
  o.Require(er.theorem == "Debreu-Fan-Glicksberg", "energy-efficient theorem");

  const BuiltGame pr = BuildDefault("pricing");
  const ExistenceReport prr = BuildExistenceReport(pr.game, cfg, pr.phi);
  int cex = -1;
  for (size_t i = 0; i < prr.quasi_concavity.size(); ++i) {
    if (!prr.quasi_concavity[i].holds() && cex < 0) cex = static_cast<int>(i);
  }
  o.Require(cex >= 0, "pricing quasi-concavity counterexample");
  if (cex >= 0) {
    o.Require(ReplayWitness(pr.game, prr.quasi_concavity[cex]),
              "pricing witness replay");
  }
  o.Require(prr.supermodular && prr.supermodular->holds(), "pricing supermodular");
  o.Require(prr.theorem == "Topkis", "pricing theorem");

  const BuiltGame pot = BuildDefault("potential_pc");
  FDConfig pcfg;
  pcfg.potential_samples = 1000;
  pcfg.tolerance = 1e-6;
  const CheckVerdict pv = VerifyPotential(pot.game, pot.phi, pcfg);
  o.Require(pv.holds() && pv.samples_used == 1000, "exact potential");

  const double secs = Seconds(t0);
  o.Require(secs < 10.0, "runtime");
  o.detail << " ee=" << er.theorem << " pricing_qc_cex_player=" << cex
           << " pricing=" << prr.theorem << " potential_samples=" << pv.samples_used
           << " potential_worst_margin=" << Fmt(pv.worst_margin)
           << " runtime_s=" << Fmt(secs);
}

void UniquenessEvidence(Outcome& o) {
  const BuiltGame ee = BuildDefault("energy_efficient");
  FDConfig cfg;
  cfg.monotonicity_samples = 100;
  cfg.scalability_samples = 100;
  const StandardBrVerdict sb = CheckStandardBr(ee.br_map, ee.br_box, cfg);
  o.Require(sb.monotonicity.holds() && sb.monotonicity.samples_used == 100,
            "monotonicity");
  o.Require(sb.scalability.holds() && sb.scalability.samples_used == 100,
            "scalability");

  BrDynamicsOptions br;
  br.best_response = ee.best_response;
  const BasinMap map = ComputeBasinMap(ee.game, 50, br);
  o.Require(map.equilibria.size() == 1, "one NE cluster");

  const double beta_oracle = oracle::BetaStarFixedPoint(100);
  const double beta = ee.power_model->beta_star();
  o.Require(RelErr(beta, beta_oracle) <= 1e-9, "beta* root");
  double worst = 0.0;
  for (const StrategyProfile& ne : map.equilibria) {
    for (double s : ee.power_model->Sinr(ne)) {
      worst = std::max(worst, std::abs(s - beta_oracle) / beta_oracle);
    }
  }
  o.Require(!map.equilibria.empty() && worst <= 1e-3, "limit SINR");
  const long diverged =
      std::count(map.labels.begin(), map.labels.end(), BasinMap::kDiverged);
  o.detail << " clusters=" << map.equilibria.size() << " diverged=" << diverged
           << " beta*=" << Fmt(beta) << " max_sinr_rel_err=" << Fmt(worst);
}

// Labels agree when both diverged or both map to equilibria equal up to the
// coordinate swap.
bool SwapMatch(const BasinMap& x, int la, const BasinMap& y, int lb, double r) {
  if (la < 0 || lb < 0) return la == lb;
  const StrategyProfile& p = x.equilibria[la];
  const StrategyProfile& q = y.equilibria[lb];
  return std::abs(p[0] - q[1]) <= r && std::abs(p[1] - q[0]) <= r;
}

void MultiplicityAndSelection(Outcome& o) {
  const Game asym = MakeTwoBandPa(TwoBandGains::Asymmetric());
  const FiniteGame grid = Discretize(asym, 101);
  const std::vector<NashResult> ne = PureNeSearch(grid);
  o.Require(ne.size() >= 2, "grid NE count");

  const BasinMap map = ComputeBasinMap(asym, 50, {});
  int contiguous = 0;
  for (size_t l = 0; l < map.equilibria.size(); ++l) {
    if (CountBasinComponents(map, static_cast<int>(l)) == 1) ++contiguous;
  }
  o.Require(contiguous >= 2, "contiguous basins");

  const Game sym = MakeTwoBandPa(TwoBandGains::Symmetric());
  BrDynamicsOptions fwd, rev, sim;
  fwd.order = {0, 1};
  rev.order = {1, 0};
  sim.mode = UpdateMode::kSimultaneous;
  sim.max_sweeps = 100;  // off-diagonal starts settle into 2-cycles
  const int res = 41;
  const BasinMap mf = ComputeBasinMap(sym, res, fwd);
  const BasinMap mr = ComputeBasinMap(sym, res, rev);
  const BasinMap ms = ComputeBasinMap(sym, res, sim);
  o.Require(mf.axis0 == mf.axis1, "symmetric axes");
  const double r = mf.cluster_radius;
  int order_mismatch = 0, sim_mismatch = 0;
  for (int a = 0; a < res; ++a) {
    for (int b = 0; b < res; ++b) {
      if (!SwapMatch(mf, mf.label(a, b), mr, mr.label(b, a), r)) ++order_mismatch;
      if (!SwapMatch(ms, ms.label(a, b), ms, ms.label(b, a), r)) ++sim_mismatch;
    }
  }
  o.Require(order_mismatch == 0, "order-swapped basin symmetry");
  o.Require(sim_mismatch == 0, "simultaneous basin symmetry");
  o.detail << " grid_ne=" << ne.size() << " basins=" << map.equilibria.size()
           << " contiguous=" << contiguous << " sym_cells=" << res * res
           << " order_mismatch=" << order_mismatch
           << " simultaneous_mismatch=" << sim_mismatch;
}

void Efficiency(Outcome& o) {
  ChannelParams ch;
  ch.gains = {1.0, 1.0};
  ch.noise = 1.0;
  ch.max_powers = {1.0, 1.0};
  const double target = std::log2(3.0);
  double worst = 0.0;
  int dominated = 0;
  for (double tau : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const MacRateGame mac = MakeMacRateGame(ch, tau);
    const FiniteGame fg = Discretize(mac.game, 11);
    const std::vector<int> full = {10, 10};
    const int64_t cell = fg.CellIndex(full);
    worst = std::max(worst, std::abs(SocialWelfare(fg, cell) - target));
    const StrategyProfile p = {1.0, 1.0};
    worst = std::max(worst, std::abs(SocialWelfare(mac.game, p) - target));
    worst = std::max(worst, std::abs(mac.sum_rate - target));
    if (!IsParetoOptimal(fg, cell).pareto_optimal) ++dominated;
    if (oracle::Dominated(TableOf(fg), full)) ++dominated;
  }
  o.Require(worst <= 1e-9, "full-power welfare");
  o.Require(dominated == 0, "full-power Pareto");

  const FiniteGame pd = PrisonersDilemma();
  const PoaResult poa = PoaPos(pd, PureNeSearch(pd));
  o.Require(poa.poa == 3.0 && poa.pos == 3.0, "PD PoA/PoS");

  const std::vector<FiniteGame> finite = {PrisonersDilemma(), MatchingPennies(),
                                          BattleOfTheSexes(), Chicken(), MakeAloha()};
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int bad = 0, checked = 0;
  for (const FiniteGame& fg : finite) {
    const oracle::Table t = TableOf(fg);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> w(fg.num_players());
      for (double& x : w) x = 1e-3 + unit(rng);
      const int64_t cell = WeightedSumPo(fg, w);
      if (!IsParetoOptimal(fg, cell).pareto_optimal) ++bad;
      if (oracle::Dominated(t, fg.ActionsOf(cell))) ++bad;
      ++checked;
    }
  }
  o.Require(bad == 0, "weighted-sum PO");
  o.detail << " max_welfare_err=" << Fmt(worst) << " pd_poa=" << Fmt(poa.poa)
           << " pd_pos=" << Fmt(poa.pos) << " weighted_checks=" << checked;
}

void MixedAndCorrelated(Outcome& o) {
  const SupportEnumerationResult mp = SupportEnumeration(MatchingPennies());
  o.Require(mp.equilibria.size() == 1, "matching pennies count");
  if (mp.equilibria.size() == 1) {
    for (const auto& d : mp.equilibria[0].distributions) {
      for (double x : d) o.Require(std::abs(x - 0.5) <= 1e-9, "matching pennies mix");
    }
  }

  const SupportEnumerationResult bos = SupportEnumeration(BattleOfTheSexes());
  bool found = false;
  for (const MixedProfile& m : bos.equilibria) {
    const auto& r = m.distributions[0];
    const auto& c = m.distributions[1];
    found = found || (std::abs(r[0] - 2.0 / 3.0) <= 1e-9 &&
                      std::abs(r[1] - 1.0 / 3.0) <= 1e-9 &&
                      std::abs(c[0] - 1.0 / 3.0) <= 1e-9 &&
                      std::abs(c[1] - 2.0 / 3.0) <= 1e-9);
  }
  o.Require(found, "battle-of-sexes mixed NE");

  const FiniteGame aloha = MakeAloha();
  const CorrelatedResult ce = RegretMatchingCe(aloha, 100000, 7);
  const double violation = CeVerify(aloha, ce.distribution);
  o.Require(violation <= 5e-2, "CE violation");
  double mixed_collision = -1.0;
  for (const MixedProfile& m : SupportEnumeration(aloha).equilibria) {
    const double q0 = m.distributions[0][kAlohaTransmit];
    const double q1 = m.distributions[1][kAlohaTransmit];
    if (q0 > 0.0 && q0 < 1.0 && std::abs(q0 - q1) <= 1e-9) mixed_collision = q0 * q1;
  }
  o.Require(mixed_collision >= 0.0, "symmetric mixed ALOHA NE");
  const double collision = CollisionFrequency(ce.distribution);
  o.Require(collision <= mixed_collision, "collision frequency");
  o.detail << " bos_equilibria=" << bos.equilibria.size()
           << " ce_violation=" << Fmt(violation) << " ce_collision=" << Fmt(collision)
           << " mixed_ne_collision=" << Fmt(mixed_collision);
}

void NumericalHygiene(Outcome& o) {
  // Quadratics: second-order FD is exact up to rounding.
  std::vector<QuadraticSpec> specs;
  specs.push_back({{1, 1}, {2, 2}, {{0, 0.5}, {0.5, 0}}, {0, 0}, {2, 2}});
  specs.push_back({{1, 2, 0.5},
                   {1, 0, -1},
                   {{0, 0.3, -0.7}, {1.2, 0, 0.4}, {-0.2, 0.9, 0}},
                   {-1, -1, -1},
                   {1, 1, 1}});
  std::mt19937_64 rng(11);
  double quad_err = 0.0;
  for (const QuadraticSpec& spec : specs) {
    const Game g = MakeQuadratic(spec);
    const int k = g.num_players();
    for (int trial = 0; trial < 20; ++trial) {
      StrategyProfile x(k);
      for (int i = 0; i < k; ++i) {
        std::uniform_real_distribution<double> u(spec.lower[i] + 0.1,
                                                 spec.upper[i] - 0.1);
        x[i] = u(rng);
      }
      for (int u = 0; u < k; ++u) {
        for (int i = 0; i < k; ++i) {
          for (int j = 0; j < k; ++j) {
            if (i == j) continue;
            double want = 0.0;
            if (i == u) want = spec.coupling[u][j];
            if (j == u) want = spec.coupling[u][i];
            for (double h : {1e-2, 5e-3}) {
              quad_err = std::max(quad_err,
                                  RelErr(CrossPartial(g, u, i, j, x, h, h), want));
            }
          }
        }
      }
    }
  }
  o.Require(quad_err <= 1e-6, "quadratic cross-partials");

  // Halving ratio on a smooth non-polynomial utility, where truncation error
  // is visible: the MAC rate of the user that sees the other as interference.
  ChannelParams ch;
  ch.gains = {0.8, 1.3};
  ch.noise = 0.5;
  ch.max_powers = {1.0, 1.0};
  const Game mac = MakeMacRateGame(ch, 1.0).game;
  const int victim = 1;
  double lo = 1e300, hi = 0.0;
  for (const StrategyProfile& x :
       {StrategyProfile{0.3, 0.6}, StrategyProfile{0.5, 0.5},
        StrategyProfile{0.7, 0.2}}) {
    const double s = ch.noise + ch.gains[0] * x[0] + ch.gains[1] * x[1];
    const double want = -ch.gains[0] * ch.gains[1] / (std::log(2.0) * s * s);
    std::vector<double> errs;
    for (double h : {2e-2, 1e-2, 5e-3}) {
      errs.push_back(std::abs(CrossPartial(mac, victim, 0, 1, x, h, h) - want));
    }
    for (size_t k = 0; k + 1 < errs.size(); ++k) {
      const double ratio = errs[k] / errs[k + 1];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  o.Require(lo >= 3.0 && hi <= 5.0, "halving ratio");

  const Game decoupled = MakeQuadratic({{1, 1}, {2, 2}, {{0, 0}, {0, 0}}, {0, 0}, {2, 2}});
  FDConfig cfg;
  cfg.sample_pairs = 200;
  const std::vector<double> w = {1.0, 1.0};
  const CheckVerdict dsc = CheckDsc(decoupled, w, cfg);
  o.Require(dsc.holds() && dsc.samples_used == 200, "DSC");
  o.detail << " quadratic_max_rel_err=" << Fmt(quad_err) << " halving_ratio=["
           << Fmt(lo) << "," << Fmt(hi) << "] dsc_pairs=" << dsc.samples_used
           << " dsc_worst_margin=" << Fmt(dsc.worst_margin);
}

std::set<std::vector<int>> LibraryNe(const FiniteGame& fg) {
  std::set<std::vector<int>> out;
  for (const NashResult& ne : PureNeSearch(fg)) out.insert(ToActions(ne.profile));
  return out;
}

void OracleEquivalence(Outcome& o) {
  std::vector<FiniteGame> games = {PrisonersDilemma(), MatchingPennies(),
                                   BattleOfTheSexes(), Chicken(), MakeAloha()};
  for (const std::string& name : {"energy_efficient", "pricing", "potential_pc",
                                  "mac_rate", "two_band", "cournot", "quadratic"}) {
    games.push_back(Discretize(BuildDefault(name).game, 8));
  }
  // Random tables of every shape up to 64 cells, small integer payoffs so
  // ties are common.
  std::mt19937_64 rng(64);
  std::uniform_int_distribution<int> pay(0, 3);
  const std::vector<std::vector<int>> shapes = {
      {1, 1}, {1, 5},    {2, 2},    {3, 2},    {4, 4},    {8, 8},
      {2, 32}, {2, 2, 2}, {3, 3, 3}, {4, 4, 4}, {2, 2, 2, 2}, {2, 2, 2, 2, 2, 2}};
  for (const auto& shape : shapes) {
    int64_t cells = 1;
    for (int c : shape) cells *= c;
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> payoffs(cells * shape.size());
      for (double& p : payoffs) p = pay(rng);
      games.emplace_back("random", shape, payoffs);
    }
  }
  int compared = 0, mismatched = 0;
  for (const FiniteGame& fg : games) {
    if (fg.num_cells() > 64) continue;
    ++compared;
    if (LibraryNe(fg) != oracle::BruteForcePureNe(TableOf(fg))) ++mismatched;
  }
  o.Require(mismatched == 0, "NE set equality");
  o.detail << " games=" << compared << " mismatched=" << mismatched;
}

void Determinism(Outcome& o) {
  std::vector<std::filesystem::path> configs;
  for (const auto& e : std::filesystem::directory_iterator(EQKIT_CONFIG_DIR)) {
    if (e.path().extension() == ".json") configs.push_back(e.path());
  }
  std::sort(configs.begin(), configs.end());
  int differing = 0;
  for (const auto& path : configs) {
    std::ifstream f(path);
    std::stringstream text;
    text << f.rdbuf();
    const RunConfig c = ParseConfig(text.str());
    const RunReport a = Run(c);
    const RunReport b = Run(c);
    bool same = WriteJson(StripTiming(a.document)) == WriteJson(StripTiming(b.document));
    same = same && a.tables.size() == b.tables.size();
    for (const auto& [kind, table] : a.tables) {
      same = same && b.tables.count(kind) && CsvText(table) == CsvText(b.tables.at(kind));
    }
    if (!same) {
      ++differing;
      o.detail << " differs:" << path.filename().string();
    }
  }
  o.Require(!configs.empty() && differing == 0, "identical reruns");
  o.detail << " configs=" << configs.size();
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "existence flowchart", ExistenceFlowchart},
      {2, "uniqueness evidence", UniquenessEvidence},
      {3, "multiplicity and selection", MultiplicityAndSelection},
      {4, "efficiency", Efficiency},
      {5, "mixed and correlated equilibria", MixedAndCorrelated},
      {6, "numerical hygiene", NumericalHygiene},
      {7, "oracle equivalence", OracleEquivalence},
      {8, "determinism", Determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d (%s):%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
