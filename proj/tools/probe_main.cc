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

// Scratch driver for plateau measurements. Not installed; used to pick
// iteration counts and windows for the slow acceptance checks.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "brpi/dynamics.h"
#include "brpi/game.h"
#include "brpi/metrics.h"
#include "brpi/responses.h"
#include "brpi/rng.h"
#include "brpi/strategy.h"

using namespace brpi;

namespace {

// BRPI variant where each response call first picks one past iteration and
// draws the whole candidate pool from that checkpoint's marginal, instead of
// drawing candidates independently from the average of past marginals.
void RunClusteredBrpi(const Game& game, int iterations, int samples, int bases,
                      int candidates, int cadence, uint64_t seed) {
  const int n = game.num_players();
  std::vector<CorrelationDevice> devices;
  std::vector<MixedStrategy> uniform_joint;
  for (int i = 0; i < n; ++i) {
    uniform_joint.push_back(MixedStrategy::Uniform(game.num_actions(i)));
  }
  devices.push_back(CorrelationDevice::FromProfile(
      ProductProfile(uniform_joint)));

  constexpr uint64_t kResponseTag = 0x5245;
  for (int t = 1; t <= iterations; ++t) {
    std::vector<JointAction> joint_samples;
    joint_samples.reserve(samples);
    for (int s = 0; s < samples; ++s) {
      JointAction joint(n);
      for (int i = 0; i < n; ++i) {
        RngStream rng = DeriveStream(
            seed, {kResponseTag, static_cast<uint64_t>(t),
                   static_cast<uint64_t>(i), static_cast<uint64_t>(s)});
        const int pool_d = rng.NextBelow(t);
        std::vector<CandidatePool> pools = {
            {candidates, devices[pool_d].Marginal(i, game.num_actions(i))}};
        std::vector<JointAction> base_profiles;
        base_profiles.reserve(bases);
        for (int k = 0; k < bases; ++k) {
          const int d = rng.NextBelow(t);
          base_profiles.push_back(SampleJoint(devices[d], rng));
        }
        SBRConfig cfg;
        cfg.num_base_profiles = bases;
        cfg.num_candidates = candidates;
        ResponseResult res = SampledBestResponseWithBases(
            game, i, base_profiles, pools, cfg, rng);
        for (int a = 0; a < res.strategy.num_actions(); ++a) {
          if (res.strategy.prob(a) == 1.0) joint[i] = a;
        }
      }
      joint_samples.push_back(std::move(joint));
    }
    devices.push_back(
        CorrelationDevice::FromJointSamples(std::move(joint_samples)));
    if (t % cadence == 0 || t == iterations) {
      DeviationReport report = CCEDist(game, devices.back());
      std::printf("%d %.6f %.6f\n", t, report.aggregate, report.aggregate);
      std::fflush(stdout);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  int players = 3, coins = 10, fields = 3;
  int iterations = 4000, samples = 1000, bases = 2, candidates = 16;
  int cadence = 50;
  int clustered = 0;
  uint64_t seed = 1;
  std::string cand_source = "uniform_past";
  for (int i = 1; i + 1 < argc; i += 2) {
    if (!std::strcmp(argv[i], "--clustered")) clustered = std::atoi(argv[i + 1]);
    if (!std::strcmp(argv[i], "--players")) players = std::atoi(argv[i + 1]);
    if (!std::strcmp(argv[i], "--coins")) coins = std::atoi(argv[i + 1]);
    if (!std::strcmp(argv[i], "--fields")) fields = std::atoi(argv[i + 1]);
    if (!std::strcmp(argv[i], "--iters")) iterations = std::atoi(argv[i + 1]);
    if (!std::strcmp(argv[i], "--samples")) samples = std::atoi(argv[i + 1]);
    if (!std::strcmp(argv[i], "--B")) bases = std::atoi(argv[i + 1]);
    if (!std::strcmp(argv[i], "--C")) candidates = std::atoi(argv[i + 1]);
    if (!std::strcmp(argv[i], "--cadence")) cadence = std::atoi(argv[i + 1]);
    if (!std::strcmp(argv[i], "--seed")) seed = std::atoll(argv[i + 1]);
    if (!std::strcmp(argv[i], "--candidates"))
      cand_source = argv[i + 1];
  }

  const Game game = BuildBlotto({players, coins, fields});
  if (clustered) {
    RunClusteredBrpi(game, iterations, samples, bases, candidates, cadence,
                     seed);
    return 0;
  }
  DynamicsConfig config;
  config.algorithm = Algorithm::kBrpi;
  config.iterations = iterations;
  config.samples_per_iteration = samples;
  config.metric_cadence = cadence;
  config.seed = seed;
  config.sbr.num_base_profiles = bases;
  config.sbr.num_candidates = candidates;
  config.sbr.candidate_source = CandidateSourceFromString(cand_source);
  config.sbr.base_source = BaseSource::kUniformPast;

  // Accumulates deviation and on-path payoff means across all devices to
  // report the CCEDist of the uniform mixture over iterates 1..t alongside
  // the current iterate's.
  const int n = game.num_players();
  std::vector<std::vector<double>> dev_sum(n);
  std::vector<double> onpath_sum(n, 0.0);
  for (int i = 0; i < n; ++i) dev_sum[i].assign(game.num_actions(i), 0.0);

  IterationCallback callback = [&](int t, const TraceRow* row,
                                   const RunResult& partial) {
    if (partial.devices.empty()) return;
    const CorrelationDevice& device = partial.devices.back();
    std::vector<int> scratch(n);
    for (const auto& comp : device.components()) {
      const JointAction* joint = std::get_if<JointAction>(&comp.policy);
      if (joint == nullptr) return;
      for (int i = 0; i < n; ++i) scratch[i] = (*joint)[i];
      for (int i = 0; i < n; ++i) {
        onpath_sum[i] += comp.weight * game.Reward(i, scratch);
        const int own = scratch[i];
        for (int a = 0; a < game.num_actions(i); ++a) {
          scratch[i] = a;
          dev_sum[i][a] += comp.weight * game.Reward(i, scratch);
        }
        scratch[i] = own;
      }
    }
    if (row != nullptr) {
      double avg_ccedist = 0;
      for (int i = 0; i < n; ++i) {
        const double best =
            *std::max_element(dev_sum[i].begin(), dev_sum[i].end());
        avg_ccedist += std::max(0.0, (best - onpath_sum[i]) / t);
      }
      std::printf("%d %.6f %.6f %.6f\n", row->iteration, row->nashconv,
                  row->ccedist, avg_ccedist);
      std::fflush(stdout);
    }
  };
  RunDynamics(game, config, callback);
  return 0;
}
