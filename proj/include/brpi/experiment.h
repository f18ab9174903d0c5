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

#ifndef BRPI_EXPERIMENT_H_
#define BRPI_EXPERIMENT_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "brpi/dynamics.h"
#include "brpi/serialization.h"

namespace brpi {

// Directory name for an experiment: the configured name, or a stable
// "exp-<16 hex>" tag hashed from the fully resolved config so the same
// config always lands in the same place.
std::string ExperimentName(const ExperimentConfig& config);

// Deployed-policy snapshots are written at iterations 1, 2, 4, ... plus the
// final iteration (just {0} when the run has no iterations).
std::vector<int> CheckpointSchedule(int iterations);

// The trace with every wall_ms column blanked, header included. Two runs of
// the same config produce byte-identical canonical bodies; wall clock is the
// only column allowed to differ.
std::string CanonicalTraceBody(std::string_view csv);

// 16-hex FNV-1a digest of CanonicalTraceBody(csv).
std::string TraceDigestHex(std::string_view csv);

struct RunArtifacts {
  std::filesystem::path dir;
  bool skipped = false;  // run was already complete; nothing recomputed
  bool resumed = false;  // continued from a partial history.jsonl
  std::string digest;    // canonical trace digest (16 hex chars)
  RunResult result;
};

struct ExperimentReport {
  std::filesystem::path root;
  std::vector<RunArtifacts> runs;
};

// Executes every run in the config under output_dir/<experiment name>/.
// Each run owns run-<index>-<algorithm>/ with:
//   meta.json          resolved game + dynamics config for this run
//   history.jsonl      one raw checkpoint per iteration (resume source)
//   trace.csv          metric rows (written via trace.csv.partial + rename)
//   trace.digest       canonical trace digest
//   checkpoint-<t>.json  deployed policy at the scheduled iterations
// A `.incomplete` marker guards the run while it executes. Runs whose
// trace.csv already exists without the marker are skipped; runs with the
// marker and a usable history.jsonl resume from the last parseable line and
// reproduce the uninterrupted trajectory exactly.
ExperimentReport RunExperiment(const ExperimentConfig& config);

// Deployed checkpoints of a completed run, sorted by iteration.
struct RunCheckpoints {
  std::vector<int> iterations;
  std::vector<ProductProfile> profiles;
};

// Rebuilds the game a run was produced on from its meta.json.
Game GameFromMeta(const std::filesystem::path& run_dir);

RunCheckpoints LoadCheckpoints(const std::filesystem::path& run_dir,
                               const Game& game);

// One strategy per checkpoint with the seat strategies averaged; requires
// every seat to share an action count.
std::vector<MixedStrategy> SeatAveraged(
    const Game& game, std::span<const ProductProfile> profiles);

enum class PlotKind { kConvergence, kBars, kHeatmap, kLeague };

std::string ToString(PlotKind kind);
PlotKind PlotKindFromString(const std::string& s);

// Writes plot-ready CSVs under <experiment_dir>/plots/ and returns the
// written paths. Kinds:
//   convergence  run,algorithm,iteration,nashconv,ccedist (all trace rows)
//   bars         run,algorithm,window,mean_nashconv,mean_ccedist over the
//                trailing 20% of rows (at least 50)
//   heatmap      per run: exact one-vs-rest table of the deployed
//                checkpoints, seat-averaged (symmetric games only)
//   league       per run: equilibrium league weights per checkpoint prefix
std::vector<std::filesystem::path> EmitPlotData(
    const std::filesystem::path& experiment_dir, PlotKind kind,
    double tau = 0.0);

}  // namespace brpi

#endif  // BRPI_EXPERIMENT_H_
