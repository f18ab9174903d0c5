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

#ifndef BRPI_SERIALIZATION_H_
#define BRPI_SERIALIZATION_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "brpi/dynamics.h"
#include "brpi/game.h"
#include "brpi/responses.h"
#include "brpi/strategy.h"
#include "json.hpp"

namespace brpi {

using Json = nlohmann::json;

// Shortest decimal form that parses back to the identical double.
std::string FormatDouble(double value);

// Game specs.
//   {"kind":"blotto","num_players":2,"coins":10,"fields":3}
//   {"kind":"builtin","name":"rps"}
//   {"kind":"dense","action_counts":[...],"tensor":[[...],...],"name":...}
// FromJson throws std::invalid_argument naming the offending field.
Json ToJson(const GameSpec& spec);
GameSpec GameSpecFromJson(const Json& j);

// Sampled-response configs. Keys: "B", "C", "candidates", "base",
// "tie_tolerance", "randomized_ties", "exact_mode", "share_base_profiles";
// all optional with the struct defaults.
Json ToJson(const SBRConfig& cfg);
SBRConfig SBRConfigFromJson(const Json& j);

// Dynamics configs. "algorithm" and "iterations" are required; "seed",
// "beta", "tie_tolerance", "sbr", "samples_per_iteration", "metric_cadence"
// fall back to the struct defaults.
Json ToJson(const DynamicsConfig& cfg);
DynamicsConfig DynamicsConfigFromJson(const Json& j);

struct ExperimentConfig {
  std::string name;  // optional; empty means "derive from the config hash"
  GameSpec game;
  std::vector<DynamicsConfig> runs;
  uint64_t seed = 0;
  int metric_cadence = 0;
  std::string output_dir = "runs";
};

// Experiment configs. "game" and "dynamics" (object or array of objects) are
// required. Parsing resolves per-run fields: a run without its own "seed"
// gets one derived from (experiment seed, run index), and a run without its
// own "metric_cadence" inherits the experiment-level one. ToJson therefore
// emits the fully resolved, reproducible form.
Json ToJson(const ExperimentConfig& config);
ExperimentConfig ExperimentConfigFromJson(const Json& j);

// Deployed-policy checkpoints: {"iteration":t,"players":[[probs...],...]}.
Json ProfileToJson(int iteration, const ProductProfile& profile);
ProductProfile ProfileFromJson(const Json& j, const Game& game);

// Raw per-iteration history lines (the resume source). Product checkpoints
// collapse to {"iteration":t,"actions":[...]} when every seat is pure;
// brpi device checkpoints persist their samples as
// {"iteration":t,"joint_samples":[[...],...]}.
Json HistoryLineToJson(int iteration, const ProductProfile& profile);
Json HistoryLineToJson(int iteration, const CorrelationDevice& device);

struct HistoryLine {
  int iteration = 0;
  bool is_device = false;
  ProductProfile profile;                  // when !is_device
  std::vector<JointAction> joint_samples;  // when is_device
};
HistoryLine HistoryLineFromJson(const Json& j, const Game& game);

// Trace CSV: "iteration,wall_ms,nashconv,ccedist,eps_0..eps_{n-1},policy_kind"
// with one row per trace entry, doubles in shortest round-trip form.
std::string TraceCsvHeader(int num_players);
std::string TraceRowToCsv(const TraceRow& row);
std::vector<TraceRow> TraceRowsFromCsv(const std::string& csv);

// FNV-1a 64-bit, for content digests and directory names.
uint64_t Fnv1a64(std::string_view bytes);
std::string ToHex64(uint64_t value);

}  // namespace brpi

#endif  // BRPI_SERIALIZATION_H_
