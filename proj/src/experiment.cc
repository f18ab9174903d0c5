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

#include "brpi/experiment.h"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "brpi/metagame.h"
#include "brpi/metrics.h"

namespace brpi {
namespace fs = std::filesystem;

namespace {

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Write-to-temp plus rename, so readers never observe a half-written file.
void WriteFileAtomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string Trimmed(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' ||
                        s.back() == ' ' || s.back() == '\t')) {
    s.pop_back();
  }
  return s;
}

// The usable prefix of a history file: consecutive iterations from 1, each a
// parseable line ending in a newline. An interrupted writer can leave a torn
// tail; that tail is dropped from the file so later appends continue the
// valid prefix.
std::vector<HistoryLine> LoadHistoryPrefix(const fs::path& path,
                                           const Game& game) {
  const std::string raw = ReadFile(path);
  std::vector<HistoryLine> lines;
  size_t good_end = 0;
  size_t start = 0;
  int expected = 1;
  while (start < raw.size()) {
    const size_t nl = raw.find('\n', start);
    if (nl == std::string::npos) break;
    const std::string line = raw.substr(start, nl - start);
    try {
      HistoryLine parsed = HistoryLineFromJson(Json::parse(line), game);
      if (parsed.iteration != expected) break;
      lines.push_back(std::move(parsed));
    } catch (const std::exception&) {
      break;
    }
    ++expected;
    start = nl + 1;
    good_end = start;
  }
  if (good_end != raw.size()) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    out << raw.substr(0, good_end);
  }
  return lines;
}

Json MetaJson(const GameSpec& spec, const DynamicsConfig& cfg, int index) {
  Json meta;
  meta["index"] = index;
  meta["game"] = ToJson(spec);
  meta["dynamics"] = ToJson(cfg);
  return meta;
}

RunArtifacts RunOne(const Game& game, const GameSpec& spec,
                    const DynamicsConfig& cfg, int index,
                    const fs::path& root) {
  RunArtifacts art;
  art.dir = root / ("run-" + std::to_string(index) + "-" +
                    ToString(cfg.algorithm));
  const fs::path trace_csv = art.dir / "trace.csv";
  const fs::path trace_partial = art.dir / "trace.csv.partial";
  const fs::path digest_path = art.dir / "trace.digest";
  const fs::path history_path = art.dir / "history.jsonl";
  const fs::path marker = art.dir / ".incomplete";

  if (fs::exists(trace_csv) && !fs::exists(marker)) {
    art.skipped = true;
    const std::string csv = ReadFile(trace_csv);
    art.result.algorithm = cfg.algorithm;
    art.result.trace.rows = TraceRowsFromCsv(csv);
    art.result.trace.metric_cadence = ResolveMetricCadence(game, cfg);
    art.digest = fs::exists(digest_path) ? Trimmed(ReadFile(digest_path))
                                         : TraceDigestHex(csv);
    return art;
  }

  fs::create_directories(art.dir);
  WriteFileAtomic(art.dir / "meta.json",
                  MetaJson(spec, cfg, index).dump(2) + "\n");
  WriteFileAtomic(marker, "");

  const bool is_brpi = cfg.algorithm == Algorithm::kBrpi;
  RunResult partial;
  partial.algorithm = cfg.algorithm;
  int boundary = 0;
  if (fs::exists(history_path)) {
    std::vector<HistoryLine> lines = LoadHistoryPrefix(history_path, game);
    // A config rerun with fewer iterations keeps the matching prefix.
    if (static_cast<int>(lines.size()) > cfg.iterations) {
      lines.resize(cfg.iterations);
    }
    if (!lines.empty()) {
      boundary = static_cast<int>(lines.size());
      art.resumed = true;
      if (is_brpi) {
        partial.devices.push_back(
            CorrelationDevice::FromProfile(ProductProfile::Uniform(game)));
        for (HistoryLine& line : lines) {
          if (!line.is_device) {
            throw std::runtime_error(history_path.string() +
                                     ": expected joint-sample lines");
          }
          partial.devices.push_back(
              CorrelationDevice::FromJointSamples(std::move(line.joint_samples)));
        }
      } else {
        partial.history.Append(ProductProfile::Uniform(game));
        for (HistoryLine& line : lines) {
          if (line.is_device) {
            throw std::runtime_error(history_path.string() +
                                     ": expected product-form lines");
          }
          partial.history.Append(std::move(line.profile));
        }
      }
    }
  }

  std::ofstream trace_out(trace_partial, std::ios::trunc | std::ios::binary);
  trace_out << TraceCsvHeader(game.num_players()) << '\n';
  std::ofstream hist_out(
      history_path,
      (boundary > 0 ? std::ios::app : std::ios::trunc) | std::ios::binary);
  size_t rows_written = 0;
  const IterationCallback callback = [&](int t, const TraceRow* /*row*/,
                                         const RunResult& state) {
    if (t > boundary) {
      const Json line = is_brpi
                            ? HistoryLineToJson(t, state.devices.at(t))
                            : HistoryLineToJson(t, state.history.checkpoint(t));
      hist_out << line.dump() << '\n';
      hist_out.flush();
    }
    // An iteration can emit more than one row (brpi traces the newest device
    // and the running mixture), so drain everything new.
    const std::vector<TraceRow>& rows = state.trace.rows;
    if (rows_written < rows.size()) {
      for (; rows_written < rows.size(); ++rows_written) {
        trace_out << TraceRowToCsv(rows[rows_written]) << '\n';
      }
      trace_out.flush();
    }
  };
  art.result = boundary > 0
                   ? ResumeDynamics(game, cfg, std::move(partial), callback)
                   : RunDynamics(game, cfg, callback);
  hist_out.close();
  trace_out.close();
  if (!trace_out) {
    throw std::runtime_error("failed writing " + trace_partial.string());
  }

  for (int t : CheckpointSchedule(cfg.iterations)) {
    const ProductProfile deployed = DeployedPolicy(game, art.result, t);
    WriteFileAtomic(art.dir / ("checkpoint-" + std::to_string(t) + ".json"),
                    ProfileToJson(t, deployed).dump() + "\n");
  }

  const std::string csv = ReadFile(trace_partial);
  art.digest = TraceDigestHex(csv);
  WriteFileAtomic(digest_path, art.digest + "\n");
  fs::rename(trace_partial, trace_csv);
  fs::remove(marker);
  return art;
}

struct RunDirInfo {
  int index = 0;
  std::string algorithm;
  fs::path dir;
};

std::vector<RunDirInfo> ListRunDirs(const fs::path& root) {
  std::vector<RunDirInfo> out;
  if (!fs::is_directory(root)) {
    throw std::runtime_error(root.string() + " is not a directory");
  }
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    if (name.rfind("run-", 0) != 0) continue;
    const size_t dash = name.find('-', 4);
    if (dash == std::string::npos) continue;
    try {
      RunDirInfo info;
      info.index = std::stoi(name.substr(4, dash - 4));
      info.algorithm = name.substr(dash + 1);
      info.dir = entry.path();
      out.push_back(std::move(info));
    } catch (const std::exception&) {
      continue;
    }
  }
  std::sort(out.begin(), out.end(),
            [](const RunDirInfo& a, const RunDirInfo& b) {
              return a.index < b.index;
            });
  return out;
}

}  // namespace

std::string ExperimentName(const ExperimentConfig& config) {
  if (!config.name.empty()) return config.name;
  return "exp-" + ToHex64(Fnv1a64(ToJson(config).dump()));
}

std::vector<int> CheckpointSchedule(int iterations) {
  if (iterations <= 0) return {0};
  std::vector<int> schedule;
  for (int t = 1; t < iterations; t *= 2) schedule.push_back(t);
  schedule.push_back(iterations);
  return schedule;
}

std::string CanonicalTraceBody(std::string_view csv) {
  std::string out;
  out.reserve(csv.size());
  size_t start = 0;
  while (start <= csv.size()) {
    const size_t nl = csv.find('\n', start);
    const size_t end = nl == std::string_view::npos ? csv.size() : nl;
    const std::string_view line = csv.substr(start, end - start);
    const size_t first = line.find(',');
    const size_t second =
        first == std::string_view::npos ? first : line.find(',', first + 1);
    if (second == std::string_view::npos) {
      out.append(line);
    } else {
      out.append(line.substr(0, first + 1));
      out.append(line.substr(second));
    }
    if (nl == std::string_view::npos) break;
    out.push_back('\n');
    start = nl + 1;
  }
  return out;
}

std::string TraceDigestHex(std::string_view csv) {
  return ToHex64(Fnv1a64(CanonicalTraceBody(csv)));
}

ExperimentReport RunExperiment(const ExperimentConfig& config) {
  if (config.runs.empty()) {
    throw std::invalid_argument("experiment: no runs configured");
  }
  const Game game = BuildGame(config.game);
  ExperimentReport report;
  report.root = fs::path(config.output_dir) / ExperimentName(config);
  fs::create_directories(report.root);
  WriteFileAtomic(report.root / "config.json", ToJson(config).dump(2) + "\n");
  for (size_t i = 0; i < config.runs.size(); ++i) {
    report.runs.push_back(RunOne(game, config.game, config.runs[i],
                                 static_cast<int>(i), report.root));
  }
  return report;
}

Game GameFromMeta(const fs::path& run_dir) {
  const Json meta = Json::parse(ReadFile(run_dir / "meta.json"));
  if (!meta.contains("game")) {
    throw std::invalid_argument("meta.json: missing field 'game'");
  }
  return BuildGame(GameSpecFromJson(meta.at("game")));
}

RunCheckpoints LoadCheckpoints(const fs::path& run_dir, const Game& game) {
  std::vector<std::pair<int, fs::path>> found;
  for (const auto& entry : fs::directory_iterator(run_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("checkpoint-", 0) != 0) continue;
    if (name.size() < 16 || name.substr(name.size() - 5) != ".json") continue;
    try {
      found.emplace_back(std::stoi(name.substr(11)), entry.path());
    } catch (const std::exception&) {
      continue;
    }
  }
  std::sort(found.begin(), found.end());
  RunCheckpoints out;
  for (const auto& [t, path] : found) {
    out.iterations.push_back(t);
    out.profiles.push_back(ProfileFromJson(Json::parse(ReadFile(path)), game));
  }
  if (out.profiles.empty()) {
    throw std::runtime_error("no checkpoints under " + run_dir.string());
  }
  return out;
}

std::vector<MixedStrategy> SeatAveraged(
    const Game& game, std::span<const ProductProfile> profiles) {
  const int n = game.num_players();
  const int k = game.num_actions(0);
  for (int i = 1; i < n; ++i) {
    if (game.num_actions(i) != k) {
      throw std::invalid_argument(
          "seat averaging requires equal action counts");
    }
  }
  std::vector<MixedStrategy> out;
  out.reserve(profiles.size());
  for (const ProductProfile& profile : profiles) {
    std::vector<double> avg(k, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < k; ++a) avg[a] += profile[i].prob(a) / n;
    }
    out.push_back(MixedStrategy(std::move(avg)));
  }
  return out;
}

std::string ToString(PlotKind kind) {
  switch (kind) {
    case PlotKind::kConvergence:
      return "convergence";
    case PlotKind::kBars:
      return "bars";
    case PlotKind::kHeatmap:
      return "heatmap";
    case PlotKind::kLeague:
      return "league";
  }
  throw std::logic_error("unhandled plot kind");
}

PlotKind PlotKindFromString(const std::string& s) {
  if (s == "convergence") return PlotKind::kConvergence;
  if (s == "bars") return PlotKind::kBars;
  if (s == "heatmap") return PlotKind::kHeatmap;
  if (s == "league") return PlotKind::kLeague;
  throw std::invalid_argument("unknown plot kind '" + s + "'");
}

std::vector<fs::path> EmitPlotData(const fs::path& experiment_dir,
                                   PlotKind kind, double tau) {
  const std::vector<RunDirInfo> runs = ListRunDirs(experiment_dir);
  if (runs.empty()) {
    throw std::runtime_error("no run directories under " +
                             experiment_dir.string());
  }
  const fs::path plots = experiment_dir / "plots";
  fs::create_directories(plots);
  std::vector<fs::path> written;
  switch (kind) {
    case PlotKind::kConvergence: {
      std::string csv = "run,algorithm,policy_kind,iteration,nashconv,ccedist\n";
      for (const RunDirInfo& run : runs) {
        const std::vector<TraceRow> rows =
            TraceRowsFromCsv(ReadFile(run.dir / "trace.csv"));
        for (const TraceRow& row : rows) {
          csv += std::to_string(run.index) + ',' + run.algorithm + ',' +
                 row.policy_kind + ',' + std::to_string(row.iteration) + ',' +
                 FormatDouble(row.nashconv) + ',' + FormatDouble(row.ccedist) +
                 '\n';
        }
      }
      const fs::path path = plots / "convergence.csv";
      WriteFileAtomic(path, csv);
      written.push_back(path);
      break;
    }
    case PlotKind::kBars: {
      // One bar per run and policy kind (brpi traces carry two kinds).
      std::string csv =
          "run,algorithm,policy_kind,window,mean_nashconv,mean_ccedist\n";
      for (const RunDirInfo& run : runs) {
        const std::vector<TraceRow> all =
            TraceRowsFromCsv(ReadFile(run.dir / "trace.csv"));
        for (const char* kind : {"current", "average"}) {
          std::vector<const TraceRow*> rows;
          for (const TraceRow& row : all) {
            if (row.policy_kind == kind) rows.push_back(&row);
          }
          if (rows.empty()) continue;
          // Trailing 20% of rows, at least 50, to smooth plateau noise.
          size_t window = std::max<size_t>(rows.size() / 5, 50);
          window = std::min(window, rows.size());
          double nash_sum = 0;
          double cce_sum = 0;
          for (size_t k = rows.size() - window; k < rows.size(); ++k) {
            nash_sum += rows[k]->nashconv;
            cce_sum += rows[k]->ccedist;
          }
          csv += std::to_string(run.index) + ',' + run.algorithm + ',' +
                 kind + ',' + std::to_string(window) + ',' +
                 FormatDouble(nash_sum / static_cast<double>(window)) + ',' +
                 FormatDouble(cce_sum / static_cast<double>(window)) + '\n';
        }
      }
      const fs::path path = plots / "bars.csv";
      WriteFileAtomic(path, csv);
      written.push_back(path);
      break;
    }
    case PlotKind::kHeatmap: {
      for (const RunDirInfo& run : runs) {
        const Game game = GameFromMeta(run.dir);
        const RunCheckpoints cps = LoadCheckpoints(run.dir, game);
        const std::vector<MixedStrategy> policies =
            SeatAveraged(game, cps.profiles);
        const MetaGameTable table = BuildOneVsRestTable(game, policies);
        std::string csv = "checkpoint";
        for (int t : cps.iterations) csv += ',' + std::to_string(t);
        csv += '\n';
        for (size_t r = 0; r < table.cells.size(); ++r) {
          csv += std::to_string(cps.iterations[r]);
          for (const CellEstimate& cell : table.cells[r]) {
            csv += ',' + FormatDouble(cell.value);
          }
          csv += '\n';
        }
        const fs::path path =
            plots / ("heatmap-run-" + std::to_string(run.index) + ".csv");
        WriteFileAtomic(path, csv);
        written.push_back(path);
      }
      break;
    }
    case PlotKind::kLeague: {
      std::string csv = "run,prefix,checkpoint,weight,objective\n";
      for (const RunDirInfo& run : runs) {
        const Game game = GameFromMeta(run.dir);
        const RunCheckpoints cps = LoadCheckpoints(run.dir, game);
        const std::vector<MixedStrategy> policies =
            SeatAveraged(game, cps.profiles);
        QreConfig qre;
        qre.tau = tau;
        const LeagueResult league = NashLeague(game, policies, qre);
        for (const LeagueEntry& entry : league.entries) {
          for (int c = 0; c < entry.prefix; ++c) {
            csv += std::to_string(run.index) + ',' +
                   std::to_string(entry.prefix) + ',' +
                   std::to_string(cps.iterations[c]) + ',' +
                   FormatDouble(entry.weights[c]) + ',' +
                   FormatDouble(entry.objective) + '\n';
          }
        }
      }
      const fs::path path = plots / "league.csv";
      WriteFileAtomic(path, csv);
      written.push_back(path);
      break;
    }
  }
  return written;
}

}  // namespace brpi
