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

#ifndef BRPI_DYNAMICS_H_
#define BRPI_DYNAMICS_H_

#include <functional>
#include <string>
#include <vector>

#include "brpi/game.h"
#include "brpi/responses.h"
#include "brpi/strategy.h"

namespace brpi {

// Iterated response dynamics. All variants share one loop shape: at
// iteration t every player computes a response against the opponents'
// iteration t-1 policy view (simultaneous updates), and the new responses
// become checkpoint t. They differ in the response operator and in what the
// deployed policy is:
//   fp          exact best response to the running average; deploys the average
//   sfp         logit response to the running average; deploys the average
//   ibr         exact best response to the last checkpoint; deploys the latest
//   maxent_ibr  uniform-over-ties best response; deploys the latest
//   fp_sbr      sampled best response, bases drawn from the running average,
//               candidates uniform; deploys the average
//   brpi        per-player sampled best responses, N joint samples per
//               iteration kept as an empirical joint policy; deploys the latest
enum class Algorithm { kFp, kIbr, kMaxEntIbr, kSfp, kFpSbr, kBrpi };

enum class ResponseKind { kExact, kMaxEnt, kLogit };

std::string ToString(Algorithm algorithm);
Algorithm AlgorithmFromString(const std::string& s);

struct DynamicsConfig {
  Algorithm algorithm = Algorithm::kFp;
  int iterations = 100;
  uint64_t seed = 0;
  double beta = 1.0;              // sfp inverse temperature
  double tie_tolerance = 1e-12;   // exact/maxent response ties
  SBRConfig sbr;                  // fp_sbr and brpi
  int samples_per_iteration = 1;  // brpi: joint samples per checkpoint
  // Trace rows every this many iterations (the final iteration always gets
  // one). 0 = auto: every iteration for games up to 1e6 joint actions,
  // every 10 beyond.
  int metric_cadence = 0;
};

struct TraceRow {
  int iteration = 0;    // 1-based
  double wall_ms = 0;   // elapsed wall clock since the run started
  // NashConv reduces the rated policy to a product of per-player marginals;
  // ccedist/eps evaluate the rated joint policy itself, where eps entries are
  // the unclipped per-player deviation gains.
  double nashconv = 0;
  double ccedist = 0;
  std::vector<double> eps_per_player;
  // "current" rates the newest checkpoint, "average" the running average:
  // the mixture over all checkpoints so far for ccedist/eps, the product of
  // average marginals for nashconv. Averaging product algorithms emit only
  // "average" rows, ibr variants only "current"; brpi emits both per cadence
  // point, in that order.
  std::string policy_kind;
};

struct RunTrace {
  std::vector<TraceRow> rows;
  int metric_cadence = 1;
};

struct RunResult {
  Algorithm algorithm = Algorithm::kFp;
  // Product-form checkpoints, index 0 = initial uniform policy. Filled for
  // every algorithm except brpi.
  PolicyHistory history;
  // brpi only: device checkpoints (index 0 = initial uniform product).
  std::vector<CorrelationDevice> devices;
  RunTrace trace;
};

// Invoked after every iteration t >= 1 with the newest state appended to
// `partial`; `row` points at the first trace row when this iteration produced
// any (cadence boundary or final iteration), else is null. brpi iterations
// produce two rows per boundary, a "current" one for the newest device and an
// "average" one for the mixture over checkpoints; all of them are in
// `partial.trace.rows`. Lets callers persist incrementally without owning the
// loop.
using IterationCallback =
    std::function<void(int iteration, const TraceRow* row,
                       const RunResult& partial)>;

RunResult RunDynamics(const Game& game, const DynamicsConfig& config,
                      const IterationCallback& callback = {});

// Continues a run from previously produced raw checkpoints: `partial.history`
// for product-form algorithms (index 0 = the initial uniform policy),
// `partial.devices` for brpi. Replays the preloaded iterations without
// consuming randomness, regenerating their trace rows, then iterates to
// config.iterations. Because response streams are derived from
// (seed, iteration, player, sample) counters rather than generator state, the
// continued trajectory and recomputed metrics match an uninterrupted run
// exactly (wall_ms aside). The callback fires for replayed iterations too.
RunResult ResumeDynamics(const Game& game, const DynamicsConfig& config,
                         RunResult partial,
                         const IterationCallback& callback = {});

// Convenience entry points, thin wrappers over RunDynamics.
RunResult RunFp(const Game& game, int iterations,
                ResponseKind response = ResponseKind::kExact, double beta = 1.0,
                int metric_cadence = 0);
RunResult RunIbr(const Game& game, int iterations,
                 ResponseKind response = ResponseKind::kExact,
                 int metric_cadence = 0);
RunResult RunFpSbr(const Game& game, int iterations, int num_base_profiles,
                   int num_candidates, uint64_t seed, int metric_cadence = 0);
RunResult RunBrpi(const Game& game, const DynamicsConfig& config);

// The policy the run deploys after `iteration` (0 = the initial policy):
// marginal average over checkpoints 0..iteration for averaging algorithms,
// the checkpoint itself for ibr variants, the device's marginals for brpi.
ProductProfile DeployedPolicy(const Game& game, const RunResult& result,
                              int iteration);

int ResolveMetricCadence(const Game& game, const DynamicsConfig& config);

}  // namespace brpi

#endif  // BRPI_DYNAMICS_H_
