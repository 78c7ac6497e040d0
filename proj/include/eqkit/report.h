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

// Config-driven runs: JSON config in, JSON report and CSV tables out.

#ifndef EQKIT_REPORT_H_
#define EQKIT_REPORT_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "eqkit/equilibrium.h"
#include "eqkit/game.h"
#include "eqkit/structural.h"
#include "eqkit/wireless.h"

namespace eqkit {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolkitVersion = "0.1.0";

// Malformed or invalid configuration. `where` is a JSON pointer or
// "line:col" for syntax errors.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : Error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

struct Settings {
  // Finite-difference and sampling knobs (seed comes from RunConfig).
  double step_fraction = 1e-4;
  int grid_points = 9;
  int line_points = 201;
  int sample_pairs = 200;
  int potential_samples = 1000;
  int monotonicity_samples = 100;
  int scalability_samples = 100;
  double alpha_max = 4.0;
  double tolerance = 1e-6;
  std::string dsc_convention = "negative";  // or "positive"
  std::vector<double> dsc_weights;          // empty means all ones
  // Best-response dynamics.
  int br_points = 201;
  int deviation_points = 201;
  int max_sweeps = 500;
  double br_tol = 1e-6;
  std::string update_mode = "sequential";  // or "simultaneous"
  std::vector<int> order;
  int solve_starts = 5;  // per axis
  int basin_resolution = 50;
  int efficiency_points = 51;
  int ce_iterations = 100000;
  // Shared constraint sum_i s_i <= constraint_bound for normalized_eq.
  double constraint_bound = 1.0;
  std::vector<double> constraint_weights;  // empty means all ones
  std::vector<double> constraint_profile;  // empty means first solve NE

  FDConfig ToFd(uint64_t seed) const;
  BrDynamicsOptions ToBr() const;
};

struct RunConfig {
  std::string game;
  Json game_params;  // every parameter, defaults filled
  std::vector<std::string> analyses;
  Settings settings;
  uint64_t seed = 0;
  std::string output_dir = "eqkit_out";
};

const std::vector<std::string>& KnownAnalyses();

// Strict parse: unknown keys, unknown names and wrong types are rejected.
RunConfig ParseConfig(const std::string& text);
// Fully populated echo; ParseConfig(ConfigToJson(c).dump()) reproduces c.
Json ConfigToJson(const RunConfig& config);

// A constructed built-in plus the extras some analyses use.
struct BuiltGame {
  Game game;
  PotentialFunction phi{};
  BestResponseOverride best_response{};
  BestResponseMap br_map{};
  std::vector<double> br_box{};
  std::shared_ptr<const EnergyEfficientPc> power_model{};
  std::optional<StrategyProfile> analytic_ne{};
  bool is_aloha = false;
  std::optional<double> sum_rate{};
};

struct GameEntry {
  std::string name;
  std::string description;
  bool finite = false;
  Json defaults;
  std::function<BuiltGame(const Json& params)> build;
};

const std::vector<GameEntry>& GameRegistry();
const GameEntry& FindGame(const std::string& name);
BuiltGame BuildGame(const std::string& name, const Json& params);

std::string ListGames();
std::string Describe(const std::string& name);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct RunReport {
  Json document;
  std::map<std::string, CsvTable> tables;  // basins, trace, ce, pareto
  bool all_completed = true;
};

RunReport Run(const RunConfig& config);

// 17 significant digits; NaN and infinities as null.
std::string WriteJson(const Json& value, int indent = 2);
// Copy of a report document without wall-clock fields.
Json StripTiming(const Json& document);

inline const std::vector<std::string>& CsvKinds() {
  static const std::vector<std::string> kinds = {"basins", "trace", "ce",
                                                 "pareto"};
  return kinds;
}

// Writes <dir>/<which>.csv and returns the path. Throws Error naming the
// analysis that would have produced a missing table.
std::string EmitCsv(const RunReport& report, const std::string& which,
                    const std::string& dir);
std::string CsvText(const CsvTable& table);
std::string FormatDouble(double value);

}  // namespace eqkit

#endif  // EQKIT_REPORT_H_
