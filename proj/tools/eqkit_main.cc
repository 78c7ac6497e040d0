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

// eqkit run <config> [--out DIR] [--seed N]
// eqkit list-games
// eqkit describe <game>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "eqkit/report.h"

namespace {

int RunCommand(const std::string& config_path,
               const std::optional<std::string>& out_dir,
               const std::optional<uint64_t>& seed) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "eqkit: cannot read " << config_path << "\n";
    return 2;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  eqkit::RunConfig config;
  try {
    config = eqkit::ParseConfig(buffer.str());
  } catch (const eqkit::ConfigError& e) {
    std::cerr << "eqkit: config error at " << e.what() << "\n";
    return 2;
  }
  if (out_dir) config.output_dir = *out_dir;
  if (seed) config.seed = *seed;

  const eqkit::RunReport report = eqkit::Run(config);
  std::filesystem::create_directories(config.output_dir);
  const std::filesystem::path report_path =
      std::filesystem::path(config.output_dir) / "report.json";
  std::ofstream(report_path) << eqkit::WriteJson(report.document) << "\n";
  std::cout << "report: " << report_path.string() << "\n";
  for (const auto& [kind, table] : report.tables) {
    std::cout << "csv: " << eqkit::EmitCsv(report, kind, config.output_dir)
              << " (" << table.rows.size() << " rows)\n";
  }
  for (const auto& a : report.document["analyses"]) {
    std::cout << a["name"].get<std::string>() << ": "
              << a["status"].get<std::string>();
    if (a.contains("reason")) std::cout << " (" << a["reason"].get<std::string>() << ")";
    std::cout << "\n";
  }
  return report.all_completed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eqkit: equilibrium analysis of strategic-form games"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<uint64_t> seed;
  CLI::App* run = app.add_subcommand("run", "Run the analyses listed in a config");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  run->add_option("--seed", seed, "Seed (overrides seed)");

  CLI::App* list = app.add_subcommand("list-games", "List built-in games");

  std::string game_name;
  CLI::App* describe = app.add_subcommand("describe", "Show a game's parameters");
  describe->add_option("game", game_name, "Registered game name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return RunCommand(config_path, out_dir, seed);
    if (*list) {
      std::cout << eqkit::ListGames();
      return 0;
    }
    if (*describe) {
      std::cout << eqkit::Describe(game_name);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "eqkit: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
