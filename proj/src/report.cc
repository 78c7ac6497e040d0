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

#include "eqkit/report.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "eqkit/efficiency.h"

namespace eqkit {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Typed reads with path diagnostics.

std::string Child(const std::string& path, const std::string& key) {
  return path + "/" + key;
}

double ReadDouble(const Json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "number must be finite");
  return x;
}

int64_t ReadInteger(const Json& v, const std::string& path) {
  const double x = ReadDouble(v, path);
  if (x != std::floor(x) || std::abs(x) > 9.0e15) {
    throw ConfigError(path, "expected an integer");
  }
  return static_cast<int64_t>(x);
}

void Read(const Json& v, const std::string& path, double& out) {
  out = ReadDouble(v, path);
}

void Read(const Json& v, const std::string& path, int& out) {
  const int64_t x = ReadInteger(v, path);
  if (x < std::numeric_limits<int>::min() ||
      x > std::numeric_limits<int>::max()) {
    throw ConfigError(path, "integer out of range");
  }
  out = static_cast<int>(x);
}

void Read(const Json& v, const std::string& path, std::string& out) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  out = v.get<std::string>();
}

template <class T>
void Read(const Json& v, const std::string& path, std::vector<T>& out) {
  if (!v.is_array()) throw ConfigError(path, "expected an array");
  out.clear();
  for (size_t k = 0; k < v.size(); ++k) {
    T item{};
    Read(v[k], path + "/" + std::to_string(k), item);
    out.push_back(item);
  }
}

// Applies `fn(key, member)` to every settings field, in echo order.
template <class S, class F>
void ForEachSetting(S& s, F&& fn) {
  fn("step_fraction", s.step_fraction);
  fn("grid_points", s.grid_points);
  fn("line_points", s.line_points);
  fn("sample_pairs", s.sample_pairs);
  fn("potential_samples", s.potential_samples);
  fn("monotonicity_samples", s.monotonicity_samples);
  fn("scalability_samples", s.scalability_samples);
  fn("alpha_max", s.alpha_max);
  fn("tolerance", s.tolerance);
  fn("dsc_convention", s.dsc_convention);
  fn("dsc_weights", s.dsc_weights);
  fn("br_points", s.br_points);
  fn("deviation_points", s.deviation_points);
  fn("max_sweeps", s.max_sweeps);
  fn("br_tol", s.br_tol);
  fn("update_mode", s.update_mode);
  fn("order", s.order);
  fn("solve_starts", s.solve_starts);
  fn("basin_resolution", s.basin_resolution);
  fn("efficiency_points", s.efficiency_points);
  fn("ce_iterations", s.ce_iterations);
  fn("constraint_bound", s.constraint_bound);
  fn("constraint_weights", s.constraint_weights);
  fn("constraint_profile", s.constraint_profile);
}

// Numbers are stored as doubles so the echo re-parses to the same document.
Json NormalizeNumbers(const Json& v) {
  if (v.is_number()) return Json(v.get<double>());
  if (v.is_array()) {
    Json out = Json::array();
    for (const Json& x : v) out.push_back(NormalizeNumbers(x));
    return out;
  }
  return v;
}

// `value` must have the JSON shape of `reference`. Empty reference arrays
// accept numbers.
void CheckShape(const Json& value, const Json& reference,
                const std::string& path) {
  if (reference.is_number()) {
    ReadDouble(value, path);
  } else if (reference.is_boolean()) {
    if (!value.is_boolean()) throw ConfigError(path, "expected true or false");
  } else if (reference.is_string()) {
    if (!value.is_string()) throw ConfigError(path, "expected a string");
  } else if (reference.is_array()) {
    if (!value.is_array()) throw ConfigError(path, "expected an array");
    const Json element = reference.empty() ? Json(0.0) : reference[0];
    for (size_t k = 0; k < value.size(); ++k) {
      CheckShape(value[k], element, path + "/" + std::to_string(k));
    }
  }
}

std::string LineColumn(const std::string& text, size_t byte) {
  size_t line = 1, col = 1;
  for (size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ":" + std::to_string(col);
}

// ---------------------------------------------------------------------------
// Registry helpers.

std::vector<double> Doubles(const Json& p, const char* key) {
  std::vector<double> out;
  Read(p.at(key), std::string("/game/") + key, out);
  return out;
}

double Number(const Json& p, const char* key) {
  return ReadDouble(p.at(key), std::string("/game/") + key);
}

ChannelParams Channel(const Json& p) {
  ChannelParams c;
  c.gains = Doubles(p, "gains");
  c.noise = Number(p, "noise");
  c.max_powers = Doubles(p, "max_powers");
  for (double x : Doubles(p, "decoding_order")) {
    if (x != std::floor(x)) {
      throw ConfigError("/game/decoding_order", "expected integer user indices");
    }
    c.decoding_order.push_back(static_cast<int>(x));
  }
  c.Validate();
  return c;
}

EfficiencyFunction Efficiency(const Json& p) {
  const double m = Number(p, "steepness");
  if (m != std::floor(m)) throw ConfigError("/game/steepness", "expected an integer");
  return EfficiencyFunction(static_cast<int>(m));
}

std::array<std::array<double, 2>, 2> Matrix2(const Json& p, const char* key) {
  const std::string path = std::string("/game/") + key;
  const Json& v = p.at(key);
  if (!v.is_array() || v.size() != 2) throw ConfigError(path, "expected a 2x2 array");
  std::array<std::array<double, 2>, 2> out{};
  for (int i = 0; i < 2; ++i) {
    if (!v[i].is_array() || v[i].size() != 2) {
      throw ConfigError(path, "expected a 2x2 array");
    }
    for (int b = 0; b < 2; ++b) {
      out[i][b] = ReadDouble(v[i][b], path + "/" + std::to_string(i) + "/" +
                                          std::to_string(b));
    }
  }
  return out;
}

Json ChannelDefaults(const ChannelParams& c) {
  return Json{{"gains", c.gains},
              {"noise", c.noise},
              {"max_powers", c.max_powers},
              {"decoding_order", Json::array()}};
}

BuiltGame FromFinite(const FiniteGame& fg) {
  return BuiltGame{.game = fg.AsGame()};
}

std::vector<GameEntry> MakeRegistry() {
  std::vector<GameEntry> r;
  const ChannelParams base = ChannelParams::DefaultTwoUser();

  {
    Json d = ChannelDefaults(base);
    d["steepness"] = 100.0;
    d["sic"] = true;
    r.push_back({"energy_efficient",
                 "Uplink energy-efficient power control: u_i = f(SINR_i) / p_i "
                 "with f(x) = (1 - e^-x)^M; closed-form best responses",
                 false, d, [](const Json& p) {
                   auto model = std::make_shared<const EnergyEfficientPc>(
                       Channel(p), Efficiency(p), p.at("sic").get<bool>());
                   BuiltGame b{.game = model->game()};
                   b.best_response = [model](int i, std::span<const double> s) {
                     return model->ClosedFormBestResponse(i, s);
                   };
                   b.br_map = [model](std::span<const double> s) {
                     return model->BestResponseVector(s);
                   };
                   b.br_box = model->params().max_powers;
                   b.power_model = model;
                   b.analytic_ne = model->InteriorEquilibrium();
                   return b;
                 }});
  }
  {
    Json d = ChannelDefaults(base);
    d["steepness"] = 100.0;
    d["sic"] = true;
    d["alpha"] = -0.1;
    d["restrict_to_concave_region"] = true;
    r.push_back({"pricing",
                 "Energy-efficient power control with a linear price: "
                 "u_i + alpha p_i",
                 false, d, [](const Json& p) {
                   auto model = std::make_shared<const EnergyEfficientPc>(
                       Channel(p), Efficiency(p), p.at("sic").get<bool>());
                   PricingOptions opts;
                   opts.alpha = Number(p, "alpha");
                   opts.restrict_to_concave_region =
                       p.at("restrict_to_concave_region").get<bool>();
                   BuiltGame b{.game = MakePricingPc(*model, opts)};
                   b.power_model = model;
                   return b;
                 }});
  }
  {
    Json d = ChannelDefaults(base);
    d["steepness"] = 100.0;
    d["targets"] = std::vector<double>{0.5, 0.5};
    d["min_powers"] = std::vector<double>{0.01, 0.01};
    r.push_back({"potential_pc",
                 "Power minimization with log-power cost u_i = log p_i; exact "
                 "potential phi = sum_i log p_i",
                 false, d, [](const Json& p) {
                   PotentialPc pc = MakePotentialPc(
                       Doubles(p, "targets"), Channel(p),
                       Doubles(p, "min_powers"), Efficiency(p));
                   BuiltGame b{.game = pc.game};
                   b.phi = pc.phi;
                   return b;
                 }});
  }
  {
    ChannelParams mac;
    mac.gains = {1.0, 1.0};
    mac.noise = 1.0;
    mac.max_powers = {1.0, 1.0};
    Json d = ChannelDefaults(mac);
    d["time_sharing"] = 1.0;
    r.push_back({"mac_rate",
                 "Two-user Gaussian MAC with SIC: u_i = log2(1 + SINR_i), "
                 "time-shared between the two decoding orders",
                 false, d, [](const Json& p) {
                   MacRateGame m =
                       MakeMacRateGame(Channel(p), Number(p, "time_sharing"));
                   BuiltGame b{.game = m.game};
                   b.sum_rate = m.sum_rate;
                   return b;
                 }});
  }
  {
    const TwoBandGains g = TwoBandGains::Asymmetric();
    Json d{{"direct", g.direct}, {"cross", g.cross}, {"noise", g.noise}};
    r.push_back({"two_band",
                 "Two users split power across two bands (theta_i in band 0); "
                 "log rates with cross-band interference. Symmetric preset: "
                 "direct 1, cross 2, noise 0.1",
                 false, d, [](const Json& p) {
                   TwoBandGains g;
                   g.direct = Matrix2(p, "direct");
                   g.cross = Matrix2(p, "cross");
                   g.noise = Number(p, "noise");
                   return BuiltGame{.game = MakeTwoBandPa(g)};
                 }});
  }
  r.push_back({"aloha",
               "Slotted ALOHA, actions {transmit, wait}",
               true,
               Json{{"transmit_gain", 1.0},
                    {"collision_cost", 1.0},
                    {"energy_cost", 0.1}},
               [](const Json& p) {
                 BuiltGame b = FromFinite(MakeAloha(Number(p, "transmit_gain"),
                                                    Number(p, "collision_cost"),
                                                    Number(p, "energy_cost")));
                 b.is_aloha = true;
                 return b;
               }});
  r.push_back({"cournot", "Cournot duopoly u_i = (a - b(q_1 + q_2) - c) q_i",
               false, Json{{"a", 10.0}, {"b", 1.0}, {"c", 1.0}},
               [](const Json& p) {
                 auto c = std::make_shared<const Cournot>(
                     MakeCournot(Number(p, "a"), Number(p, "b"), Number(p, "c")));
                 BuiltGame b{.game = c->game};
                 b.best_response = [c](int i, std::span<const double> q) {
                   return c->BestResponse(i, q);
                 };
                 b.analytic_ne = c->AnalyticEquilibrium();
                 return b;
               }});
  r.push_back({"prisoners_dilemma", "Prisoner's dilemma {cooperate, defect}",
               true, Json::object(),
               [](const Json&) { return FromFinite(PrisonersDilemma()); }});
  r.push_back({"matching_pennies", "Matching pennies {heads, tails}", true,
               Json::object(),
               [](const Json&) { return FromFinite(MatchingPennies()); }});
  r.push_back({"battle_of_sexes", "Battle of the sexes {opera, football}",
               true, Json::object(),
               [](const Json&) { return FromFinite(BattleOfTheSexes()); }});
  r.push_back({"chicken", "Game of chicken {dare, yield}", true,
               Json::object(),
               [](const Json&) { return FromFinite(Chicken()); }});
  r.push_back({"quadratic",
               "u_i = -a_i s_i^2 + b_i s_i + sum_j C_ij s_i s_j on boxes",
               false,
               Json{{"curvature", std::vector<double>{1.0, 1.0}},
                    {"linear", std::vector<double>{2.0, 2.0}},
                    {"coupling", std::vector<std::vector<double>>{{0.0, 0.5},
                                                                  {0.5, 0.0}}},
                    {"lower", std::vector<double>{0.0, 0.0}},
                    {"upper", std::vector<double>{2.0, 2.0}}},
               [](const Json& p) {
                 QuadraticSpec s;
                 s.curvature = Doubles(p, "curvature");
                 s.linear = Doubles(p, "linear");
                 Read(p.at("coupling"), "/game/coupling", s.coupling);
                 s.lower = Doubles(p, "lower");
                 s.upper = Doubles(p, "upper");
                 return BuiltGame{.game = MakeQuadratic(s)};
               }});
  return r;
}

// ---------------------------------------------------------------------------
// Report fragments.

Json WitnessJson(const Witness& w) {
  return Json{{"profiles", w.profiles}, {"values", w.values},
              {"player", w.player},     {"other_player", w.other_player},
              {"steps", w.steps},       {"alpha", w.alpha},
              {"description", w.description}};
}

Json VerdictJson(const CheckVerdict& v) {
  return Json{{"check", ToString(v.kind)},
              {"status", ToString(v.status)},
              {"samples_used", v.samples_used},
              {"tolerance", v.tolerance},
              {"worst_margin", v.worst_margin},
              {"witness", v.witness ? WitnessJson(*v.witness) : Json(nullptr)}};
}

Json NashJson(const NashResult& ne) {
  return Json{{"profile", ne.profile},
              {"epsilon", ne.epsilon},
              {"utilities", ne.utilities}};
}

Json Spaces(const Game& game) {
  Json out = Json::array();
  for (const StrategySpace& s : game.spaces()) out.push_back(s.ToString());
  return out;
}

struct Context {
  const RunConfig& config;
  const BuiltGame& built;
  FDConfig fd;
  BrDynamicsOptions br;
  std::optional<std::vector<NashResult>> ne_set;
  RunReport& report;
};

// Thrown to mark an analysis as skipped rather than failed.
struct Skip {
  std::string reason;
};

const FiniteGame& RequireFinite(const Context& ctx, const char* analysis) {
  const FiniteGame* fg = ctx.built.game.finite();
  if (fg == nullptr) {
    throw DomainError(std::string(analysis) + " requires a finite game");
  }
  return *fg;
}

void RequireTwoPlayerIntervals(const Game& game, const char* analysis) {
  if (game.num_players() != 2 || !game.all_intervals()) {
    throw DomainError(std::string(analysis) +
                      " requires a two-player game with interval strategies");
  }
}

std::vector<double> WeightsOrOnes(const std::vector<double>& w, int k,
                                  const char* key) {
  if (w.empty()) return std::vector<double>(k, 1.0);
  if (static_cast<int>(w.size()) != k) {
    throw ParameterError(std::string("settings.") + key +
                         " needs one entry per player");
  }
  return w;
}

Json BasinSummary(const BasinMap& map) {
  Json eq = Json::array();
  for (size_t l = 0; l < map.equilibria.size(); ++l) {
    const int cells = static_cast<int>(
        std::count(map.labels.begin(), map.labels.end(), static_cast<int>(l)));
    eq.push_back(Json{{"label", l},
                      {"profile", map.equilibria[l]},
                      {"cells", cells},
                      {"components", CountBasinComponents(map, static_cast<int>(l))}});
  }
  return Json{{"resolution", map.resolution},
              {"cluster_radius", map.cluster_radius},
              {"equilibria", eq},
              {"diverged_cells",
               std::count(map.labels.begin(), map.labels.end(),
                          BasinMap::kDiverged)}};
}

Json RunExistence(Context& ctx) {
  const ExistenceReport rep =
      BuildExistenceReport(ctx.built.game, ctx.fd, ctx.built.phi);
  Json qc = Json::array();
  for (const CheckVerdict& v : rep.quasi_concavity) qc.push_back(VerdictJson(v));
  auto opt = [](const std::optional<CheckVerdict>& v) {
    return v ? VerdictJson(*v) : Json(nullptr);
  };
  return Json{{"conclusion", ToString(rep.conclusion)},
              {"theorem", rep.theorem},
              {"note", rep.note},
              {"finite_game", rep.finite_game},
              {"quasi_concavity", qc},
              {"supermodular", opt(rep.supermodular)},
              {"submodular", opt(rep.submodular)},
              {"potential", opt(rep.potential)}};
}

Json RunUniqueness(Context& ctx) {
  const Game& game = ctx.built.game;
  if (const FiniteGame* fg = game.finite()) {
    const auto pure = PureNeSearch(*fg);
    Json out{{"pure_equilibria", pure.size()}};
    if (fg->num_players() == 2) {
      out["mixed_equilibria"] = SupportEnumeration(*fg).equilibria.size();
    }
    out["unique"] = pure.size() == 1 && (!out.contains("mixed_equilibria") ||
                                         out["mixed_equilibria"] == 1);
    return out;
  }
  if (!game.all_intervals()) {
    throw DomainError("uniqueness evidence needs interval or finite strategies");
  }
  const std::vector<double> r =
      WeightsOrOnes(ctx.config.settings.dsc_weights, game.num_players(),
                    "dsc_weights");
  const CheckVerdict dsc = CheckDsc(game, r, ctx.fd);
  Json out{{"dsc", VerdictJson(dsc)}, {"dsc_weights", r}};
  bool standard = false;
  if (ctx.built.br_map) {
    const StandardBrVerdict sb =
        CheckStandardBr(ctx.built.br_map, ctx.built.br_box, ctx.fd);
    standard = sb.holds();
    out["standard_br"] = Json{{"monotonicity", VerdictJson(sb.monotonicity)},
                              {"scalability", VerdictJson(sb.scalability)}};
  } else {
    out["standard_br"] = Json{{"status", "not_applicable"},
                              {"reason", "no closed-form best-response map"}};
  }
  std::optional<size_t> clusters;
  if (game.num_players() == 2) {
    const BasinMap map = ComputeBasinMap(
        game, ctx.config.settings.basin_resolution, ctx.br);
    clusters = map.equilibria.size();
    out["basins"] = BasinSummary(map);
  }
  out["unique_evidence"] =
      (dsc.holds() || standard) && (!clusters || *clusters == 1);
  return out;
}

Json RunSolve(Context& ctx) {
  const Game& game = ctx.built.game;
  if (const FiniteGame* fg = game.finite()) {
    ctx.ne_set = PureNeSearch(*fg);
    Json eq = Json::array();
    for (const NashResult& ne : *ctx.ne_set) eq.push_back(NashJson(ne));
    return Json{{"method", "pure_ne_search"}, {"equilibria", eq}};
  }
  if (!game.all_intervals()) throw DomainError("solve needs interval strategies");
  const int k = game.num_players();
  const int n = ctx.config.settings.solve_starts;
  std::vector<std::vector<double>> axes;
  int64_t total = 1;
  for (int i = 0; i < k; ++i) {
    axes.push_back(UniformGrid(game.space(i).interval(), n));
    total *= n;
    if (total > 4096) throw ParameterError("too many solve starts (> 4096)");
  }
  const double radius = 10.0 * ctx.br.tol;
  std::vector<NashResult> found;
  std::vector<int> hits;
  int diverged = 0;
  CsvTable trace_table;
  trace_table.header = {"iteration", "player"};
  for (int i = 0; i < k; ++i) trace_table.header.push_back("s_" + std::to_string(i + 1));
  for (int64_t idx = 0; idx < total; ++idx) {
    StrategyProfile start(k);
    int64_t rem = idx;
    for (int i = k - 1; i >= 0; --i) {
      start[i] = axes[i][rem % n];
      rem /= n;
    }
    const BrTrace trace = BrDynamics(game, start, ctx.br);
    if (idx == 0) {
      for (size_t t = 0; t < trace.iterates.size(); ++t) {
        std::vector<std::string> row = {std::to_string(t),
                                        std::to_string(trace.updated_player[t])};
        for (double v : trace.iterates[t]) row.push_back(FormatDouble(v));
        trace_table.rows.push_back(std::move(row));
      }
    }
    if (!trace.limit) {
      ++diverged;
      continue;
    }
    const StrategyProfile& lim = *trace.limit;
    size_t c = 0;
    for (; c < found.size(); ++c) {
      double dist = 0.0;
      for (int i = 0; i < k; ++i) {
        dist = std::max(dist, std::abs(found[c].profile[i] - lim[i]));
      }
      if (dist <= radius) break;
    }
    if (c == found.size()) {
      found.push_back({lim, trace.limit_epsilon, EvaluateUtility(game, lim)});
      hits.push_back(0);
    }
    ++hits[c];
  }
  ctx.report.tables["trace"] = std::move(trace_table);
  Json eq = Json::array();
  for (size_t c = 0; c < found.size(); ++c) {
    Json e = NashJson(found[c]);
    e["starts_reaching"] = hits[c];
    if (ctx.built.power_model) {
      e["sinr"] = ctx.built.power_model->Sinr(found[c].profile);
    }
    eq.push_back(e);
  }
  Json out{{"method", "best_response_dynamics"},
           {"starts", total},
           {"diverged_starts", diverged},
           {"cluster_radius", radius},
           {"equilibria", eq}};
  if (ctx.built.analytic_ne) {
    out["analytic_equilibrium"] = *ctx.built.analytic_ne;
    double err = found.empty() ? kNan : 0.0;
    for (const NashResult& ne : found) {
      for (int i = 0; i < k; ++i) {
        err = std::max(err, std::abs(ne.profile[i] - (*ctx.built.analytic_ne)[i]));
      }
    }
    out["max_abs_error_vs_analytic"] = err;
  }
  if (ctx.built.power_model) out["beta_star"] = ctx.built.power_model->beta_star();
  ctx.ne_set = std::move(found);
  return out;
}

Json RunBasins(Context& ctx) {
  const Game& game = ctx.built.game;
  RequireTwoPlayerIntervals(game, "basins");
  const BasinMap map =
      ComputeBasinMap(game, ctx.config.settings.basin_resolution, ctx.br);
  CsvTable table;
  table.header = {"start_1", "start_2", "ne_label", "ne_coord_1", "ne_coord_2"};
  for (int a = 0; a < map.resolution; ++a) {
    for (int b = 0; b < map.resolution; ++b) {
      const int label = map.label(a, b);
      const double c1 = label >= 0 ? map.equilibria[label][0] : kNan;
      const double c2 = label >= 0 ? map.equilibria[label][1] : kNan;
      table.rows.push_back({FormatDouble(map.axis0[a]), FormatDouble(map.axis1[b]),
                            std::to_string(label), FormatDouble(c1),
                            FormatDouble(c2)});
    }
  }
  ctx.report.tables["basins"] = std::move(table);
  return BasinSummary(map);
}

Json MixedJson(const FiniteGame& fg, const MixedProfile& m) {
  return Json{{"distributions", m.distributions},
              {"expected_utilities", ExpectedUtility(fg, m)},
              {"gap", MixedNeGap(fg, m)}};
}

Json RunMixed(Context& ctx) {
  const FiniteGame& fg = RequireFinite(ctx, "mixed");
  const SupportEnumerationResult res = SupportEnumeration(fg);
  Json eq = Json::array();
  for (const MixedProfile& m : res.equilibria) eq.push_back(MixedJson(fg, m));
  return Json{{"equilibria", eq}, {"singular_systems", res.singular_systems}};
}

Json RunCorrelated(Context& ctx) {
  const FiniteGame& fg = RequireFinite(ctx, "correlated");
  const CorrelatedResult res = RegretMatchingCe(
      fg, ctx.config.settings.ce_iterations, ctx.config.seed);
  CsvTable table;
  for (int i = 0; i < fg.num_players(); ++i) {
    table.header.push_back("a_" + std::to_string(i + 1));
  }
  table.header.push_back("probability");
  for (int64_t cell = 0; cell < fg.num_cells(); ++cell) {
    std::vector<std::string> row;
    for (int a : fg.ActionsOf(cell)) row.push_back(std::to_string(a));
    row.push_back(FormatDouble(res.distribution.probabilities[cell]));
    table.rows.push_back(std::move(row));
  }
  ctx.report.tables["ce"] = std::move(table);
  Json out{{"iterations", res.iterations},
           {"seed", res.seed},
           {"max_violation", res.max_violation},
           {"max_average_regret", res.max_average_regret},
           {"distribution", res.distribution.probabilities}};
  if (ctx.built.is_aloha) {
    out["collision_frequency"] = CollisionFrequency(res.distribution);
    // Symmetric fully mixed equilibrium, if any.
    for (const MixedProfile& m : SupportEnumeration(fg).equilibria) {
      const double q0 = m.distributions[0][kAlohaTransmit];
      const double q1 = m.distributions[1][kAlohaTransmit];
      if (q0 > 0.0 && q0 < 1.0 && std::abs(q0 - q1) <= 1e-9) {
        out["mixed_ne_transmit_probability"] = q0;
        out["mixed_ne_collision_frequency"] = q0 * q1;
      }
    }
  }
  return out;
}

Json RunEfficiency(Context& ctx) {
  if (!ctx.ne_set) throw Skip{"needs a successful 'solve' earlier in the list"};
  if (ctx.ne_set->empty()) throw DomainError("solve found no pure equilibrium");
  const Game& game = ctx.built.game;
  const FiniteGame* fg = game.finite();
  std::optional<FiniteGame> grid;
  if (fg == nullptr) {
    grid.emplace(Discretize(game, ctx.config.settings.efficiency_points));
    fg = &*grid;
  }
  const PoaResult poa = PoaPos(*fg, *ctx.ne_set, grid ? &game : nullptr);
  Json ne_json = Json::array();
  for (const NashResult& ne : *ctx.ne_set) {
    Json e = NashJson(ne);
    const std::vector<double> u = EvaluateUtility(game, ne.profile);
    e["welfare"] = std::accumulate(u.begin(), u.end(), 0.0);
    const ParetoResult po =
        grid ? IsParetoOptimal(*fg, u)
             : IsParetoOptimal(*fg, fg->CellIndex(ToActions(ne.profile)));
    e["pareto_optimal"] = po.pareto_optimal;
    e["dominating_profile"] =
        po.dominating_cell ? Json(fg->GridProfile(*po.dominating_cell))
                           : Json(nullptr);
    if (ctx.built.power_model) {
      double total = 0.0;
      for (double p : ne.profile) total += p;
      e["virtual_mimo"] = total > 0.0
                              ? Json(VirtualMimoMetric(*ctx.built.power_model,
                                                       ne.profile))
                              : Json(nullptr);
    }
    ne_json.push_back(e);
  }
  const std::vector<double> ones(fg->num_players(), 1.0);
  const int64_t po_cell = WeightedSumPo(*fg, ones);
  Json out{{"grid_points", grid ? ctx.config.settings.efficiency_points : 0},
           {"max_welfare", poa.max_welfare},
           {"max_welfare_profile",
            poa.max_welfare_cell >= 0 ? Json(fg->GridProfile(poa.max_welfare_cell))
                                      : Json(nullptr)},
           {"worst_ne_welfare", poa.worst_ne_welfare},
           {"best_ne_welfare", poa.best_ne_welfare},
           {"ratio_defined", poa.ratio_defined},
           {"poa", poa.poa},
           {"pos", poa.pos},
           {"worst_gap", poa.worst_gap},
           {"best_gap", poa.best_gap},
           {"equilibria", ne_json},
           {"weighted_sum_po",
            Json{{"weights", ones},
                 {"profile", fg->GridProfile(po_cell)},
                 {"welfare", SocialWelfare(*fg, po_cell)}}}};
  if (ctx.built.sum_rate) out["sum_rate"] = *ctx.built.sum_rate;
  if (!poa.ratio_defined) {
    out["note"] = "an equilibrium has nonpositive welfare; gaps reported";
  }
  if (fg->num_cells() <= 10000) {
    CsvTable table;
    table.header = {"cell"};
    const int k = fg->num_players();
    for (int i = 0; i < k; ++i) table.header.push_back("s_" + std::to_string(i + 1));
    for (int i = 0; i < k; ++i) table.header.push_back("u_" + std::to_string(i + 1));
    table.header.push_back("welfare");
    table.header.push_back("pareto_optimal");
    for (int64_t cell = 0; cell < fg->num_cells(); ++cell) {
      std::vector<std::string> row = {std::to_string(cell)};
      for (double s : fg->GridProfile(cell)) row.push_back(FormatDouble(s));
      for (double u : fg->Payoffs(cell)) row.push_back(FormatDouble(u));
      row.push_back(FormatDouble(SocialWelfare(*fg, cell)));
      row.push_back(IsParetoOptimal(*fg, cell).pareto_optimal ? "1" : "0");
      table.rows.push_back(std::move(row));
    }
    ctx.report.tables["pareto"] = std::move(table);
  }
  return out;
}

Json RunNormalizedEq(Context& ctx) {
  const Game& game = ctx.built.game;
  if (!game.all_intervals()) {
    throw DomainError("normalized_eq requires interval strategies");
  }
  const Settings& s = ctx.config.settings;
  const int k = game.num_players();
  StrategyProfile profile = s.constraint_profile;
  if (profile.empty()) {
    if (!ctx.ne_set) {
      throw Skip{"needs settings.constraint_profile or an earlier 'solve'"};
    }
    if (ctx.ne_set->empty()) throw DomainError("solve found no equilibrium");
    profile = ctx.ne_set->front().profile;
  }
  ValidateProfile(game, profile);
  const double bound = s.constraint_bound;
  ConstraintSpec constraint{
      [bound](std::span<const double> x) {
        return bound - std::accumulate(x.begin(), x.end(), 0.0);
      },
      WeightsOrOnes(s.constraint_weights, k, "constraint_weights")};
  const NormalizedEqVerdict v = NormalizedEqCheck(game, profile, constraint, ctx.fd);
  return Json{{"profile", profile},
              {"constraint", "sum_i s_i <= " + FormatDouble(bound)},
              {"weights", constraint.r},
              {"holds", v.holds},
              {"active", v.active},
              {"constraint_value", v.constraint_value},
              {"multipliers", v.multipliers},
              {"scaled_multipliers", v.scaled},
              {"unidentifiable_players", v.unidentifiable},
              {"epsilon", v.epsilon},
              {"min_utility", v.min_utility},
              {"sum_log_utility", v.sum_log_utility},
              {"note", v.note}};
}

void WriteJsonImpl(const Json& v, int indent, int depth, std::string& out) {
  const std::string pad(indent > 0 ? indent * (depth + 1) : 0, ' ');
  const std::string close_pad(indent > 0 ? indent * depth : 0, ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad + Json(it.key()).dump() + (indent > 0 ? ": " : ":");
        WriteJsonImpl(it.value(), indent, depth + 1, out);
      }
      out += nl + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Flat numeric arrays stay on one line.
      const bool flat = std::all_of(v.begin(), v.end(), [](const Json& x) {
        return x.is_primitive();
      });
      out += "[";
      for (size_t k = 0; k < v.size(); ++k) {
        if (k > 0) out += flat ? ", " : ",";
        if (!flat) out += nl + pad;
        WriteJsonImpl(v[k], indent, depth + 1, out);
      }
      if (!flat) out += nl + close_pad;
      out += "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = v.get<double>();
      out += std::isfinite(x) ? FormatDouble(x) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

// ---------------------------------------------------------------------------

FDConfig Settings::ToFd(uint64_t seed) const {
  FDConfig c;
  c.step_fraction = step_fraction;
  c.grid_points = grid_points;
  c.line_points = line_points;
  c.sample_pairs = sample_pairs;
  c.potential_samples = potential_samples;
  c.monotonicity_samples = monotonicity_samples;
  c.scalability_samples = scalability_samples;
  c.alpha_max = alpha_max;
  c.tolerance = tolerance;
  c.seed = seed;
  c.dsc_convention = dsc_convention == "positive" ? DscConvention::kPositive
                                                  : DscConvention::kNegative;
  return c;
}

BrDynamicsOptions Settings::ToBr() const {
  BrDynamicsOptions o;
  o.max_sweeps = max_sweeps;
  o.tol = br_tol;
  o.br_points = br_points;
  o.deviation_points = deviation_points;
  o.mode = update_mode == "simultaneous" ? UpdateMode::kSimultaneous
                                         : UpdateMode::kSequential;
  o.order = order;
  return o;
}

const std::vector<std::string>& KnownAnalyses() {
  static const std::vector<std::string> names = {
      "existence", "uniqueness_evidence", "solve",      "basins",
      "mixed",     "correlated",          "efficiency", "normalized_eq"};
  return names;
}

const std::vector<GameEntry>& GameRegistry() {
  static const std::vector<GameEntry> registry = MakeRegistry();
  return registry;
}

const GameEntry& FindGame(const std::string& name) {
  for (const GameEntry& e : GameRegistry()) {
    if (e.name == name) return e;
  }
  throw ConfigError("/game/name", "unknown game '" + name +
                                      "' (see 'eqkit list-games')");
}

BuiltGame BuildGame(const std::string& name, const Json& params) {
  return FindGame(name).build(params);
}

RunConfig ParseConfig(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::string msg = e.what();
    if (const size_t pos = msg.find("parse error"); pos != std::string::npos) {
      msg = msg.substr(pos);
    }
    throw ConfigError(LineColumn(text, e.byte), msg);
  }
  if (!root.is_object()) throw ConfigError("/", "config must be a JSON object");
  static const std::set<std::string> top = {"game", "analyses", "settings",
                                            "seed", "output_dir"};
  for (auto it = root.begin(); it != root.end(); ++it) {
    if (!top.count(it.key())) throw ConfigError("/" + it.key(), "unknown key");
  }

  RunConfig config;
  if (!root.contains("game")) throw ConfigError("/game", "missing");
  const Json& game = root["game"];
  Json given = Json::object();
  if (game.is_string()) {
    config.game = game.get<std::string>();
  } else if (game.is_object()) {
    if (!game.contains("name")) throw ConfigError("/game/name", "missing");
    Read(game["name"], "/game/name", config.game);
    given = game;
    given.erase("name");
  } else {
    throw ConfigError("/game", "expected a name or an object with \"name\"");
  }
  const GameEntry& entry = FindGame(config.game);
  config.game_params = Json::object();
  for (auto it = entry.defaults.begin(); it != entry.defaults.end(); ++it) {
    config.game_params[it.key()] = NormalizeNumbers(it.value());
  }
  for (auto it = given.begin(); it != given.end(); ++it) {
    const std::string path = Child("/game", it.key());
    if (!entry.defaults.contains(it.key())) {
      throw ConfigError(path, "unknown parameter for game '" + config.game + "'");
    }
    CheckShape(it.value(), entry.defaults[it.key()], path);
    config.game_params[it.key()] = NormalizeNumbers(it.value());
  }

  if (!root.contains("analyses")) throw ConfigError("/analyses", "missing");
  Read(root["analyses"], "/analyses", config.analyses);
  if (config.analyses.empty()) throw ConfigError("/analyses", "list is empty");
  for (size_t k = 0; k < config.analyses.size(); ++k) {
    const auto& known = KnownAnalyses();
    if (std::find(known.begin(), known.end(), config.analyses[k]) == known.end()) {
      throw ConfigError("/analyses/" + std::to_string(k),
                        "unknown analysis '" + config.analyses[k] + "'");
    }
  }

  if (root.contains("settings")) {
    const Json& s = root["settings"];
    if (!s.is_object()) throw ConfigError("/settings", "expected an object");
    std::set<std::string> known;
    ForEachSetting(config.settings, [&](const char* key, auto&) { known.insert(key); });
    for (auto it = s.begin(); it != s.end(); ++it) {
      if (!known.count(it.key())) {
        throw ConfigError(Child("/settings", it.key()), "unknown setting");
      }
    }
    ForEachSetting(config.settings, [&](const char* key, auto& member) {
      if (s.contains(key)) Read(s[key], Child("/settings", key), member);
    });
  }
  const Settings& st = config.settings;
  if (st.dsc_convention != "negative" && st.dsc_convention != "positive") {
    throw ConfigError("/settings/dsc_convention", "expected negative or positive");
  }
  if (st.update_mode != "sequential" && st.update_mode != "simultaneous") {
    throw ConfigError("/settings/update_mode", "expected sequential or simultaneous");
  }
  auto positive = [](int v, const char* key) {
    if (v < 1) throw ConfigError(Child("/settings", key), "must be >= 1");
  };
  positive(st.br_points, "br_points");
  positive(st.deviation_points, "deviation_points");
  positive(st.max_sweeps, "max_sweeps");
  positive(st.ce_iterations, "ce_iterations");
  if (st.solve_starts < 2) throw ConfigError("/settings/solve_starts", "must be >= 2");
  if (st.basin_resolution < 2) {
    throw ConfigError("/settings/basin_resolution", "must be >= 2");
  }
  if (st.efficiency_points < 2) {
    throw ConfigError("/settings/efficiency_points", "must be >= 2");
  }
  if (!(st.br_tol > 0.0)) throw ConfigError("/settings/br_tol", "must be > 0");
  try {
    st.ToFd(0).Validate();
  } catch (const Error& e) {
    throw ConfigError("/settings", e.what());
  }

  if (root.contains("seed")) {
    const int64_t seed = ReadInteger(root["seed"], "/seed");
    if (seed < 0) throw ConfigError("/seed", "must be nonnegative");
    config.seed = static_cast<uint64_t>(seed);
  }
  if (root.contains("output_dir")) {
    Read(root["output_dir"], "/output_dir", config.output_dir);
  }

  try {
    BuildGame(config.game, config.game_params);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("/game", e.what());
  }
  return config;
}

Json ConfigToJson(const RunConfig& config) {
  Json game{{"name", config.game}};
  for (auto it = config.game_params.begin(); it != config.game_params.end(); ++it) {
    game[it.key()] = it.value();
  }
  Json settings = Json::object();
  ForEachSetting(config.settings,
                 [&](const char* key, const auto& member) { settings[key] = member; });
  return Json{{"game", game},
              {"analyses", config.analyses},
              {"settings", settings},
              {"seed", config.seed},
              {"output_dir", config.output_dir}};
}

std::string ListGames() {
  std::ostringstream os;
  for (const GameEntry& e : GameRegistry()) {
    os << e.name << (e.finite ? "  [finite]  " : "  [continuous]  ")
       << e.description << "\n";
  }
  return os.str();
}

std::string Describe(const std::string& name) {
  const GameEntry& e = FindGame(name);
  const BuiltGame b = e.build(NormalizeNumbers(e.defaults));
  std::ostringstream os;
  os << e.name << ": " << e.description << "\n";
  os << "players: " << b.game.num_players() << "\n";
  for (int i = 0; i < b.game.num_players(); ++i) {
    os << "  space " << i + 1 << ": " << b.game.space(i).ToString() << "\n";
  }
  os << "parameters (defaults):\n" << WriteJson(e.defaults) << "\n";
  return os.str();
}

RunReport Run(const RunConfig& config) {
  RunReport report;
  const BuiltGame built = BuildGame(config.game, config.game_params);
  Context ctx{config, built, config.settings.ToFd(config.seed),
              config.settings.ToBr(), std::nullopt, report};
  if (built.best_response) ctx.br.best_response = built.best_response;

  Json analyses = Json::array();
  for (const std::string& name : config.analyses) {
    Json entry{{"name", name}};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      Json result;
      if (name == "existence") result = RunExistence(ctx);
      else if (name == "uniqueness_evidence") result = RunUniqueness(ctx);
      else if (name == "solve") result = RunSolve(ctx);
      else if (name == "basins") result = RunBasins(ctx);
      else if (name == "mixed") result = RunMixed(ctx);
      else if (name == "correlated") result = RunCorrelated(ctx);
      else if (name == "efficiency") result = RunEfficiency(ctx);
      else result = RunNormalizedEq(ctx);
      entry["status"] = "completed";
      entry["result"] = std::move(result);
    } catch (const Skip& s) {
      entry["status"] = "skipped";
      entry["reason"] = s.reason;
      report.all_completed = false;
    } catch (const std::exception& e) {
      entry["status"] = "error";
      entry["reason"] = e.what();
      report.all_completed = false;
    }
    entry["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    analyses.push_back(std::move(entry));
  }

  const GameEntry& g = FindGame(config.game);
  report.document = Json{
      {"schema_version", kReportSchemaVersion},
      {"toolkit", Json{{"name", "eqkit"}, {"version", kToolkitVersion}}},
      {"config", ConfigToJson(config)},
      {"game", Json{{"name", g.name},
                    {"description", g.description},
                    {"players", built.game.num_players()},
                    {"spaces", Spaces(built.game)}}},
      {"analyses", analyses},
      {"all_completed", report.all_completed}};
  return report;
}

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string WriteJson(const Json& value, int indent) {
  std::string out;
  WriteJsonImpl(value, indent, 0, out);
  return out;
}

Json StripTiming(const Json& document) {
  if (document.is_object()) {
    Json out = Json::object();
    for (auto it = document.begin(); it != document.end(); ++it) {
      if (it.key() == "wall_clock_seconds") continue;
      out[it.key()] = StripTiming(it.value());
    }
    return out;
  }
  if (document.is_array()) {
    Json out = Json::array();
    for (const Json& x : document) out.push_back(StripTiming(x));
    return out;
  }
  return document;
}

std::string CsvText(const CsvTable& table) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (size_t k = 0; k < cells.size(); ++k) {
      if (k > 0) out += ",";
      out += cells[k];
    }
    out += "\n";
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return out;
}

std::string EmitCsv(const RunReport& report, const std::string& which,
                    const std::string& dir) {
  static const std::map<std::string, std::string> producer = {
      {"basins", "basins"}, {"trace", "solve"},
      {"ce", "correlated"}, {"pareto", "efficiency"}};
  const auto p = producer.find(which);
  if (p == producer.end()) throw Error("unknown CSV kind '" + which + "'");
  const auto t = report.tables.find(which);
  if (t == report.tables.end()) {
    throw Error("no '" + which + "' table: the '" + p->second +
                "' analysis did not produce one");
  }
  std::filesystem::create_directories(dir);
  const std::string path = (std::filesystem::path(dir) / (which + ".csv")).string();
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << CsvText(t->second);
  return path;
}

}  // namespace eqkit
