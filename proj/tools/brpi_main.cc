// Copyright 2026 The brpi Authors.
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

// Command line front end: runs experiment configs, derives plot data from
// their artifacts, and evaluates checkpoints with meta-game tables and
// sampled-response exploitability bounds.
//
// Exit codes: 0 success, 1 bad usage or config, 2 runtime failure.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "brpi/dynamics.h"
#include "brpi/experiment.h"
#include "brpi/game.h"
#include "brpi/metagame.h"
#include "brpi/metrics.h"
#include "brpi/serialization.h"
#include "brpi/strategy.h"

namespace {

namespace fs = std::filesystem;

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int DoRun(const std::string& config_path) {
  const brpi::ExperimentConfig config =
      brpi::ExperimentConfigFromJson(brpi::Json::parse(Slurp(config_path)));
  const brpi::ExperimentReport report = brpi::RunExperiment(config);
  std::printf("experiment %s\n", report.root.string().c_str());
  for (const brpi::RunArtifacts& run : report.runs) {
    const char* status =
        run.skipped ? "skipped" : (run.resumed ? "resumed" : "done");
    std::printf("  %s: %s digest=%s", run.dir.filename().string().c_str(),
                status, run.digest.c_str());
    if (!run.result.trace.rows.empty()) {
      const brpi::TraceRow& last = run.result.trace.rows.back();
      std::printf(" nashconv=%.6g ccedist=%.6g (%s)", last.nashconv,
                  last.ccedist, last.policy_kind.c_str());
    }
    std::printf("\n");
  }
  return 0;
}

int DoPlot(const std::string& dir, const std::string& kind_name, double tau) {
  const brpi::PlotKind kind = brpi::PlotKindFromString(kind_name);
  const std::vector<fs::path> written =
      brpi::EmitPlotData(fs::path(dir), kind, tau);
  for (const fs::path& path : written) {
    std::printf("%s\n", path.string().c_str());
  }
  return 0;
}

int DoMetagame(const std::string& run_dir, double tau, bool monte_carlo,
               int episodes, uint64_t seed) {
  const brpi::Game game = brpi::GameFromMeta(run_dir);
  const brpi::RunCheckpoints cps = brpi::LoadCheckpoints(run_dir, game);
  const std::vector<brpi::MixedStrategy> policies =
      brpi::SeatAveraged(game, cps.profiles);

  brpi::OneVsRestOptions options;
  if (monte_carlo) {
    options.mode = brpi::TableMode::kMonteCarlo;
    options.episodes = episodes;
    options.seed = seed;
  }
  const brpi::MetaGameTable table =
      brpi::BuildOneVsRestTable(game, policies, options);

  std::printf("one-vs-rest table on %s (%s), checkpoint r vs field of c\n",
              game.name().c_str(), monte_carlo ? "monte carlo" : "exact");
  std::printf("%10s", "");
  for (int t : cps.iterations) std::printf(" %10d", t);
  std::printf("\n");
  for (size_t r = 0; r < table.cells.size(); ++r) {
    std::printf("%10d", cps.iterations[r]);
    for (const brpi::CellEstimate& cell : table.cells[r]) {
      std::printf(" %10.4f", cell.value);
    }
    std::printf("\n");
  }

  brpi::QreConfig qre;
  qre.tau = tau;
  const brpi::LeagueResult league = brpi::NashLeague(game, policies, qre);
  const brpi::LeagueEntry& full = league.entries.back();
  std::printf("league weights over all %d checkpoints (tau=%g):\n",
              full.prefix, tau);
  for (int c = 0; c < full.prefix; ++c) {
    std::printf("  checkpoint %d: %.4f\n", cps.iterations[c],
                full.weights[c]);
  }
  return 0;
}

int DoExploit(const std::string& run_dir, int checkpoint, int episodes,
              int num_bases, int num_candidates, uint64_t seed,
              double confidence) {
  const brpi::Game game = brpi::GameFromMeta(run_dir);
  if (checkpoint < 0) {
    const brpi::RunCheckpoints cps = brpi::LoadCheckpoints(run_dir, game);
    checkpoint = cps.iterations.back();
  }
  const std::string path =
      (fs::path(run_dir) / ("checkpoint-" + std::to_string(checkpoint) +
                            ".json"))
          .string();
  const brpi::ProductProfile target =
      brpi::ProfileFromJson(brpi::Json::parse(Slurp(path)), game);

  brpi::SBRConfig cfg;
  cfg.num_base_profiles = num_bases;
  cfg.num_candidates = num_candidates;
  const brpi::ExploitReport report = brpi::SbrExploitLowerBound(
      game, target, cfg, episodes, seed, confidence);

  std::printf("sampled-response exploitability of checkpoint %d on %s\n",
              checkpoint, game.name().c_str());
  std::printf("episodes=%d B=%d C=%d seed=%llu confidence=%g\n", episodes,
              num_bases, num_candidates,
              static_cast<unsigned long long>(seed), confidence);
  for (size_t i = 0; i < report.per_player_margin.size(); ++i) {
    const brpi::Interval& ci = report.per_player_interval[i];
    std::printf(
        "  player %zu: margin=%.6f ci=[%.6f, %.6f] exact_gain=%.6f\n", i,
        report.per_player_margin[i], ci.lower, ci.upper,
        report.exact_gain[i]);
  }
  std::printf("aggregate lower bound: %.6f (exact nashconv %.6f)\n",
              report.aggregate, report.exact_nashconv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "game dynamics laboratory: run experiments, derive plot data, and "
      "evaluate checkpoints"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* run = app.add_subcommand(
      "run", "execute every run in an experiment config json");
  run->add_option("config", config_path, "experiment config json path")
      ->required();

  std::string plot_dir;
  std::string plot_kind = "convergence";
  double plot_tau = 0.0;
  CLI::App* plot = app.add_subcommand(
      "plot", "write plot-ready csv files from experiment artifacts");
  plot->add_option("dir", plot_dir, "experiment directory")->required();
  plot->add_option("--kind", plot_kind,
                   "convergence, bars, heatmap or league");
  plot->add_option("--tau", plot_tau, "league solver temperature");

  std::string meta_dir;
  double meta_tau = 0.0;
  bool meta_mc = false;
  int meta_episodes = 1000;
  uint64_t meta_seed = 0;
  CLI::App* metagame = app.add_subcommand(
      "metagame", "one-vs-rest table and league weights for a run's "
                  "checkpoints");
  metagame->add_option("run_dir", meta_dir, "run directory")->required();
  metagame->add_option("--tau", meta_tau, "league solver temperature");
  metagame->add_flag("--mc", meta_mc,
                     "estimate cells by monte carlo instead of exactly");
  metagame->add_option("--episodes", meta_episodes,
                       "episodes per cell (monte carlo)");
  metagame->add_option("--seed", meta_seed, "monte carlo seed");

  std::string exploit_dir;
  int exploit_checkpoint = -1;
  int exploit_episodes = 200;
  int exploit_bases = 10;
  int exploit_candidates = 50;
  uint64_t exploit_seed = 0;
  double exploit_confidence = 0.95;
  CLI::App* exploit = app.add_subcommand(
      "exploit",
      "sampled-response exploitability lower bound for a checkpoint");
  exploit->add_option("run_dir", exploit_dir, "run directory")->required();
  exploit->add_option("--checkpoint", exploit_checkpoint,
                      "checkpoint iteration (default: latest)");
  exploit->add_option("--episodes", exploit_episodes,
                      "sampled responses per player");
  exploit->add_option("--B", exploit_bases, "base profiles per response");
  exploit->add_option("--C", exploit_candidates, "candidates per response");
  exploit->add_option("--seed", exploit_seed, "episode stream seed");
  exploit->add_option("--confidence", exploit_confidence,
                      "wilson interval confidence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return DoRun(config_path);
    if (plot->parsed()) return DoPlot(plot_dir, plot_kind, plot_tau);
    if (metagame->parsed()) {
      return DoMetagame(meta_dir, meta_tau, meta_mc, meta_episodes,
                        meta_seed);
    }
    if (exploit->parsed()) {
      return DoExploit(exploit_dir, exploit_checkpoint, exploit_episodes,
                       exploit_bases, exploit_candidates, exploit_seed,
                       exploit_confidence);
    }
  } catch (const brpi::Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
