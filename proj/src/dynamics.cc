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

#include "brpi/dynamics.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "brpi/game.h"
#include "brpi/metrics.h"
#include "brpi/responses.h"
#include "brpi/rng.h"
#include "brpi/strategy.h"

namespace brpi {
namespace {

// Stream tag namespaces. Every stochastic response at iteration t gets its
// own counter-derived stream keyed by (tag, t, player, sample), so runs are
// reproducible from (config, seed) alone and resumable from any checkpoint
// boundary without carrying generator state.
constexpr uint64_t kResponseTag = 0x5245;
constexpr uint64_t kSharedBaseTag = 0x4241;

bool IsAveraging(Algorithm a) {
  return a == Algorithm::kFp || a == Algorithm::kSfp || a == Algorithm::kFpSbr;
}

double ElapsedMs(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Lowest action index whose value ties the maximum within tol. Matches the
// tie rule of the exact response operator so fp and ibr break ties the same
// way.
int BestWithinTol(std::span<const double> values, double tol) {
  double best = values[0];
  for (double v : values) best = std::max(best, v);
  for (size_t a = 0; a < values.size(); ++a) {
    if (values[a] >= best - tol) return static_cast<int>(a);
  }
  return 0;
}

// Max-shifted softmax of beta * values, identical to the logit response
// operator applied to a precomputed value vector.
MixedStrategy Softmax(std::span<const double> values, double beta) {
  double best = values[0];
  for (double v : values) best = std::max(best, v);
  std::vector<double> probs(values.size());
  double total = 0;
  for (size_t a = 0; a < values.size(); ++a) {
    probs[a] = std::exp(beta * (values[a] - best));
    total += probs[a];
  }
  for (double& p : probs) p /= total;
  return MixedStrategy(std::move(probs));
}

int PureAction(const MixedStrategy& strategy) {
  for (int a = 0; a < strategy.num_actions(); ++a) {
    if (strategy.prob(a) > 0.5) return a;
  }
  throw std::logic_error("PureAction: sampled response was not pure");
}

// Exact cumulative sums over checkpoints, updated once per appended
// checkpoint. With P checkpoints accumulated:
//   dev_cumsum[i][a] / P  = E[r_i(a, others)] under the uniform mixture
//   joint_cumsum[i] / P   = E[r_i] when everyone follows the mixture
//   strat_sum[i][a] / P   = player i's average (marginal) strategy
// This turns every per-iteration response and metric over the running
// average into O(|A|) work instead of an O(t) re-contraction.
struct MetricState {
  std::vector<std::vector<double>> dev_cumsum;
  std::vector<double> joint_cumsum;
  std::vector<std::vector<double>> strat_sum;
  int terms = 0;

  void Init(const Game& game) {
    int n = game.num_players();
    dev_cumsum.resize(n);
    strat_sum.resize(n);
    joint_cumsum.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      dev_cumsum[i].assign(game.num_actions(i), 0.0);
      strat_sum[i].assign(game.num_actions(i), 0.0);
    }
  }

  void Accumulate(const Game& game, const ProductProfile& checkpoint) {
    CorrelationDevice device = CorrelationDevice::FromProfile(checkpoint);
    for (int i = 0; i < game.num_players(); ++i) {
      std::vector<double> vec = ExpectedRewardVector(game, i, device);
      joint_cumsum[i] += Dot(checkpoint[i].probs(), vec);
      for (size_t a = 0; a < vec.size(); ++a) dev_cumsum[i][a] += vec[a];
      for (int a = 0; a < checkpoint[i].num_actions(); ++a) {
        strat_sum[i][a] += checkpoint[i].prob(a);
      }
    }
    ++terms;
  }

  // Same sums for a device checkpoint. The on-path term uses the joint
  // device, so dev/joint averages give the CCE gains of the uniform mixture
  // over all accumulated devices, not of a product reduction.
  void Accumulate(const Game& game, const CorrelationDevice& device) {
    std::vector<double> joint = ExpectedJointRewards(game, device);
    for (int i = 0; i < game.num_players(); ++i) {
      joint_cumsum[i] += joint[i];
      std::vector<double> vec = ExpectedRewardVector(game, i, device);
      for (size_t a = 0; a < vec.size(); ++a) dev_cumsum[i][a] += vec[a];
      MixedStrategy marginal = device.Marginal(i, game.num_actions(i));
      for (int a = 0; a < marginal.num_actions(); ++a) {
        strat_sum[i][a] += marginal.prob(a);
      }
    }
    ++terms;
  }

  std::vector<double> AverageValueVector(int player) const {
    std::vector<double> vec = dev_cumsum[player];
    for (double& v : vec) v /= terms;
    return vec;
  }

  MixedStrategy AverageStrategy(int player) const {
    std::vector<double> probs = strat_sum[player];
    for (double& p : probs) p /= terms;
    return MixedStrategy(std::move(probs));
  }
};

// Metrics of the running average (mixture) policy, entirely from the
// cumulative sums: eps_i is the gain of the best fixed action over following
// the mixture. NashConv evaluates the product of average marginals; for two
// players the mixture an opponent faces equals that product, so the same
// sums give it exactly, while three or more players need one fresh
// contraction against the product.
TraceRow AveragedRow(const Game& game, const MetricState& st, int iteration) {
  TraceRow row;
  row.iteration = iteration;
  row.policy_kind = "average";
  int n = game.num_players();
  int P = st.terms;
  for (int i = 0; i < n; ++i) {
    double best = *std::max_element(st.dev_cumsum[i].begin(),
                                    st.dev_cumsum[i].end());
    double eps = best / P - st.joint_cumsum[i] / P;
    row.eps_per_player.push_back(eps);
    row.ccedist += std::max(0.0, eps);
  }
  if (n == 2) {
    for (int i = 0; i < n; ++i) {
      double best = *std::max_element(st.dev_cumsum[i].begin(),
                                      st.dev_cumsum[i].end());
      double value = Dot(st.strat_sum[i], st.dev_cumsum[i]) / (1.0 * P * P);
      row.nashconv += best / P - value;
    }
  } else {
    std::vector<MixedStrategy> marginals;
    marginals.reserve(n);
    for (int i = 0; i < n; ++i) marginals.push_back(st.AverageStrategy(i));
    row.nashconv =
        NashConv(game, ProductProfile{std::move(marginals)}).aggregate;
  }
  return row;
}

// Metrics of one product-form checkpoint. Against a product policy the CCE
// deviation gains coincide with the NashConv gains, so one report covers
// both columns.
TraceRow CurrentProductRow(const Game& game, const ProductProfile& checkpoint,
                           int iteration) {
  TraceRow row;
  row.iteration = iteration;
  row.policy_kind = "current";
  DeviationReport report = NashConv(game, checkpoint);
  row.nashconv = report.aggregate;
  row.eps_per_player = report.per_player_gain;
  for (double eps : report.per_player_gain) row.ccedist += std::max(0.0, eps);
  return row;
}

// Metrics of one device checkpoint: ccedist/eps against the joint device,
// nashconv against the product of its marginals.
TraceRow DeviceRow(const Game& game, const CorrelationDevice& device,
                   int iteration) {
  TraceRow row;
  row.iteration = iteration;
  row.policy_kind = "current";
  std::vector<MixedStrategy> marginals;
  marginals.reserve(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    marginals.push_back(device.Marginal(i, game.num_actions(i)));
  }
  row.nashconv = NashConv(game, ProductProfile{std::move(marginals)}).aggregate;
  DeviationReport cce = CCEDist(game, device);
  row.eps_per_player = cce.per_player_gain;
  row.ccedist = cce.aggregate;
  return row;
}

std::vector<CandidatePool> SplitPools(int num_candidates, MixedStrategy first,
                                      MixedStrategy second) {
  std::vector<CandidatePool> pools;
  int c1 = (num_candidates + 1) / 2;
  int c2 = num_candidates / 2;
  pools.push_back({c1, std::move(first)});
  if (c2 > 0) pools.push_back({c2, std::move(second)});
  return pools;
}

// Candidate pools for one player at iteration t. `latest` and `past_avg` are
// that player's newest-checkpoint strategy and running average strategy; each
// may be unused depending on the source. Mixed sources put the initial
// (uniform) half first.
std::vector<CandidatePool> MakePools(CandidateSource source,
                                     int num_candidates,
                                     const MixedStrategy& uniform,
                                     const MixedStrategy& latest,
                                     const MixedStrategy& past_avg) {
  switch (source) {
    case CandidateSource::kInitial:
      return {{num_candidates, uniform}};
    case CandidateSource::kLatest:
      return {{num_candidates, latest}};
    case CandidateSource::kUniformPast:
      return {{num_candidates, past_avg}};
    case CandidateSource::kInitialPlusLatest:
      return SplitPools(num_candidates, uniform, latest);
    case CandidateSource::kInitialPlusUniformPast:
      return SplitPools(num_candidates, uniform, past_avg);
  }
  throw std::logic_error("MakePools: unknown candidate source");
}

// Draws joint base profiles from a product-checkpoint history prefix. Each
// draw picks one checkpoint (uniform over the prefix, or the newest), then
// samples every player's action from it, so opponents stay correlated
// through the shared checkpoint index.
std::vector<JointAction> DrawBasesFromHistory(const PolicyHistory& history,
                                              int prefix, const SBRConfig& cfg,
                                              RngStream& rng) {
  std::vector<JointAction> bases(cfg.num_base_profiles);
  for (JointAction& joint : bases) {
    int d = cfg.base_source == BaseSource::kUniformPast ? rng.NextBelow(prefix)
                                                        : prefix - 1;
    const ProductProfile& checkpoint = history.checkpoint(d);
    joint.resize(checkpoint.num_players());
    for (int p = 0; p < checkpoint.num_players(); ++p) {
      joint[p] = rng.NextIndex(checkpoint[p].probs());
    }
  }
  return bases;
}

// Same contract over device checkpoints.
std::vector<JointAction> DrawBasesFromDevices(
    const std::vector<CorrelationDevice>& devices, int prefix,
    const SBRConfig& cfg, RngStream& rng) {
  std::vector<JointAction> bases;
  bases.reserve(cfg.num_base_profiles);
  for (int k = 0; k < cfg.num_base_profiles; ++k) {
    int d = cfg.base_source == BaseSource::kUniformPast ? rng.NextBelow(prefix)
                                                        : prefix - 1;
    bases.push_back(SampleJoint(devices[d], rng));
  }
  return bases;
}

// Exact-mode base device: the newest checkpoint, or the uniform mixture of
// all of them flattened into one device.
CorrelationDevice ExactBaseDevice(const std::vector<CorrelationDevice>& devices,
                                  int prefix, const SBRConfig& cfg) {
  if (cfg.base_source == BaseSource::kLatest) return devices[prefix - 1];
  std::vector<CorrelationDevice::Component> components;
  for (int d = 0; d < prefix; ++d) {
    for (const auto& comp : devices[d].components()) {
      components.push_back(comp);
    }
  }
  return CorrelationDevice(std::move(components));
}

void Validate(const Game& game, const DynamicsConfig& config) {
  (void)game;
  if (config.iterations < 0) {
    throw std::invalid_argument("DynamicsConfig: iterations must be >= 0");
  }
  if (config.metric_cadence < 0) {
    throw std::invalid_argument("DynamicsConfig: metric_cadence must be >= 0");
  }
  if (config.tie_tolerance < 0) {
    throw std::invalid_argument("DynamicsConfig: tie_tolerance must be >= 0");
  }
  if (config.algorithm == Algorithm::kSfp &&
      !(std::isfinite(config.beta) && config.beta >= 0)) {
    throw std::invalid_argument("DynamicsConfig: beta must be finite and >= 0");
  }
  if (config.algorithm == Algorithm::kFpSbr ||
      config.algorithm == Algorithm::kBrpi) {
    if (config.sbr.num_base_profiles < 1) {
      throw std::invalid_argument(
          "DynamicsConfig: sbr.num_base_profiles must be >= 1");
    }
    if (config.sbr.num_candidates < 1) {
      throw std::invalid_argument(
          "DynamicsConfig: sbr.num_candidates must be >= 1");
    }
    if (config.sbr.exact_mode && config.sbr.share_base_profiles) {
      throw std::invalid_argument(
          "DynamicsConfig: exact_mode and share_base_profiles are exclusive");
    }
  }
  if (config.algorithm == Algorithm::kBrpi &&
      config.samples_per_iteration < 1) {
    throw std::invalid_argument(
        "DynamicsConfig: samples_per_iteration must be >= 1");
  }
}

RunResult RunProductDynamics(const Game& game, const DynamicsConfig& config,
                             int cadence,
                             std::chrono::steady_clock::time_point t0,
                             PolicyHistory preloaded,
                             const IterationCallback& callback) {
  const int n = game.num_players();
  const Algorithm alg = config.algorithm;
  const bool averaging = IsAveraging(alg);

  RunResult result;
  result.algorithm = alg;
  result.trace.metric_cadence = cadence;
  PolicyHistory& history = result.history;
  if (preloaded.size() == 0) {
    history.Append(ProductProfile::Uniform(game));
  } else {
    history = std::move(preloaded);
  }

  MetricState st;
  st.Init(game);
  if (averaging) st.Accumulate(game, history.checkpoint(0));

  std::vector<MixedStrategy> uniforms;
  uniforms.reserve(n);
  for (int i = 0; i < n; ++i) {
    uniforms.push_back(MixedStrategy::Uniform(game.num_actions(i)));
  }

  // Replay preloaded iterations: rebuild the running sums and regenerate
  // their trace rows without consuming any randomness.
  for (int t = 1; t < history.size(); ++t) {
    if (averaging) st.Accumulate(game, history.checkpoint(t));
    const TraceRow* emitted = nullptr;
    if (t % cadence == 0 || t == config.iterations) {
      TraceRow row = averaging
                         ? AveragedRow(game, st, t)
                         : CurrentProductRow(game, history.checkpoint(t), t);
      row.wall_ms = ElapsedMs(t0);
      result.trace.rows.push_back(std::move(row));
      emitted = &result.trace.rows.back();
    }
    if (callback) callback(t, emitted, result);
  }

  for (int t = history.size(); t <= config.iterations; ++t) {
    std::vector<MixedStrategy> responses;
    responses.reserve(n);
    switch (alg) {
      case Algorithm::kFp:
      case Algorithm::kSfp: {
        for (int i = 0; i < n; ++i) {
          std::vector<double> vec = st.AverageValueVector(i);
          if (alg == Algorithm::kFp) {
            responses.push_back(MixedStrategy::Pure(
                game.num_actions(i), BestWithinTol(vec, config.tie_tolerance)));
          } else {
            responses.push_back(Softmax(vec, config.beta));
          }
        }
        break;
      }
      case Algorithm::kIbr:
      case Algorithm::kMaxEntIbr: {
        CorrelationDevice last =
            CorrelationDevice::FromProfile(history.checkpoint(t - 1));
        for (int i = 0; i < n; ++i) {
          ResponseResult res =
              alg == Algorithm::kIbr
                  ? ExactBestResponse(game, i, last, config.tie_tolerance)
                  : MaxEntBestResponse(game, i, last, config.tie_tolerance);
          responses.push_back(std::move(res.strategy));
        }
        break;
      }
      case Algorithm::kFpSbr: {
        std::vector<JointAction> shared;
        if (config.sbr.share_base_profiles) {
          RngStream rng = DeriveStream(
              config.seed, {kSharedBaseTag, static_cast<uint64_t>(t), 0});
          shared = DrawBasesFromHistory(history, t, config.sbr, rng);
        }
        for (int i = 0; i < n; ++i) {
          RngStream rng =
              DeriveStream(config.seed, {kResponseTag, static_cast<uint64_t>(t),
                                         static_cast<uint64_t>(i), 0});
          std::vector<CandidatePool> pools = MakePools(
              config.sbr.candidate_source, config.sbr.num_candidates,
              uniforms[i], history.checkpoint(t - 1)[i], st.AverageStrategy(i));
          ResponseResult res = [&] {
            if (config.sbr.share_base_profiles) {
              return SampledBestResponseWithBases(game, i, shared, pools,
                                                  config.sbr, rng);
            }
            if (config.sbr.exact_mode) {
              CorrelationDevice base =
                  config.sbr.base_source == BaseSource::kUniformPast
                      ? AverageHistory(history, t)
                      : CorrelationDevice::FromProfile(
                            history.checkpoint(t - 1));
              return SampledBestResponse(game, i, base, pools, config.sbr,
                                         rng);
            }
            std::vector<JointAction> bases =
                DrawBasesFromHistory(history, t, config.sbr, rng);
            return SampledBestResponseWithBases(game, i, bases, pools,
                                                config.sbr, rng);
          }();
          responses.push_back(std::move(res.strategy));
        }
        break;
      }
      case Algorithm::kBrpi:
        throw std::logic_error("RunProductDynamics: brpi not handled here");
    }

    history.Append(ProductProfile{std::move(responses)});
    if (averaging) st.Accumulate(game, history.checkpoint(t));

    const TraceRow* emitted = nullptr;
    if (t % cadence == 0 || t == config.iterations) {
      TraceRow row = averaging
                         ? AveragedRow(game, st, t)
                         : CurrentProductRow(game, history.checkpoint(t), t);
      row.wall_ms = ElapsedMs(t0);
      result.trace.rows.push_back(std::move(row));
      emitted = &result.trace.rows.back();
    }
    if (callback) callback(t, emitted, result);
  }
  return result;
}

RunResult RunBrpiDynamics(const Game& game, const DynamicsConfig& config,
                          int cadence,
                          std::chrono::steady_clock::time_point t0,
                          std::vector<CorrelationDevice> preloaded,
                          const IterationCallback& callback) {
  const int n = game.num_players();
  const SBRConfig& sbr = config.sbr;

  RunResult result;
  result.algorithm = Algorithm::kBrpi;
  result.trace.metric_cadence = cadence;
  if (preloaded.empty()) {
    result.devices.push_back(
        CorrelationDevice::FromProfile(ProductProfile::Uniform(game)));
  } else {
    result.devices = std::move(preloaded);
  }

  std::vector<MixedStrategy> uniforms;
  uniforms.reserve(n);
  for (int i = 0; i < n; ++i) {
    uniforms.push_back(MixedStrategy::Uniform(game.num_actions(i)));
  }

  // Running sums over device checkpoints 0..t-1: the marginal average feeds
  // the past_avg candidate pools, the dev/joint averages give exact metrics
  // of the uniform mixture over checkpoints.
  MetricState st;
  st.Init(game);
  st.Accumulate(game, result.devices[0]);

  const bool need_latest =
      sbr.candidate_source == CandidateSource::kLatest ||
      sbr.candidate_source == CandidateSource::kInitialPlusLatest;
  const bool need_past =
      sbr.candidate_source == CandidateSource::kUniformPast ||
      sbr.candidate_source == CandidateSource::kInitialPlusUniformPast;

  // Both metric views of checkpoint t: the newest device alone, then the
  // uniform mixture over checkpoints 0..t. Returns the first pushed row.
  const auto emit_rows = [&](int t) -> const TraceRow* {
    TraceRow current = DeviceRow(game, result.devices[t], t);
    current.wall_ms = ElapsedMs(t0);
    TraceRow average = AveragedRow(game, st, t);
    average.wall_ms = current.wall_ms;
    result.trace.rows.push_back(std::move(current));
    result.trace.rows.push_back(std::move(average));
    return &result.trace.rows[result.trace.rows.size() - 2];
  };

  // Replay preloaded device checkpoints.
  for (int t = 1; t < static_cast<int>(result.devices.size()); ++t) {
    st.Accumulate(game, result.devices[t]);
    const TraceRow* emitted = nullptr;
    if (t % cadence == 0 || t == config.iterations) emitted = emit_rows(t);
    if (callback) callback(t, emitted, result);
  }

  for (int t = static_cast<int>(result.devices.size());
       t <= config.iterations; ++t) {
    // Per-iteration candidate distributions.
    std::vector<MixedStrategy> latest;
    std::vector<MixedStrategy> past_avg;
    for (int i = 0; i < n; ++i) {
      latest.push_back(need_latest
                           ? result.devices[t - 1].Marginal(
                                 i, game.num_actions(i))
                           : uniforms[i]);
      past_avg.push_back(need_past ? st.AverageStrategy(i) : uniforms[i]);
    }

    std::vector<JointAction> samples;
    samples.reserve(config.samples_per_iteration);
    for (int s = 0; s < config.samples_per_iteration; ++s) {
      std::vector<JointAction> shared;
      if (sbr.share_base_profiles) {
        RngStream rng = DeriveStream(
            config.seed, {kSharedBaseTag, static_cast<uint64_t>(t),
                          static_cast<uint64_t>(s)});
        shared = DrawBasesFromDevices(result.devices, t, sbr, rng);
      }
      JointAction joint(n);
      for (int i = 0; i < n; ++i) {
        RngStream rng = DeriveStream(
            config.seed, {kResponseTag, static_cast<uint64_t>(t),
                          static_cast<uint64_t>(i), static_cast<uint64_t>(s)});
        std::vector<CandidatePool> pools =
            MakePools(sbr.candidate_source, sbr.num_candidates, uniforms[i],
                      latest[i], past_avg[i]);
        ResponseResult res = [&] {
          if (sbr.share_base_profiles) {
            return SampledBestResponseWithBases(game, i, shared, pools, sbr,
                                                rng);
          }
          if (sbr.exact_mode) {
            CorrelationDevice base = ExactBaseDevice(result.devices, t, sbr);
            return SampledBestResponse(game, i, base, pools, sbr, rng);
          }
          std::vector<JointAction> bases =
              DrawBasesFromDevices(result.devices, t, sbr, rng);
          return SampledBestResponseWithBases(game, i, bases, pools, sbr, rng);
        }();
        joint[i] = PureAction(res.strategy);
      }
      samples.push_back(std::move(joint));
    }

    result.devices.push_back(
        CorrelationDevice::FromJointSamples(std::move(samples)));
    st.Accumulate(game, result.devices[t]);

    const TraceRow* emitted = nullptr;
    if (t % cadence == 0 || t == config.iterations) emitted = emit_rows(t);
    if (callback) callback(t, emitted, result);
  }
  return result;
}

}  // namespace

std::string ToString(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kFp:
      return "fp";
    case Algorithm::kIbr:
      return "ibr";
    case Algorithm::kMaxEntIbr:
      return "maxent_ibr";
    case Algorithm::kSfp:
      return "sfp";
    case Algorithm::kFpSbr:
      return "fp_sbr";
    case Algorithm::kBrpi:
      return "brpi";
  }
  throw std::logic_error("ToString: unknown algorithm");
}

Algorithm AlgorithmFromString(const std::string& s) {
  if (s == "fp") return Algorithm::kFp;
  if (s == "ibr") return Algorithm::kIbr;
  if (s == "maxent_ibr") return Algorithm::kMaxEntIbr;
  if (s == "sfp") return Algorithm::kSfp;
  if (s == "fp_sbr") return Algorithm::kFpSbr;
  if (s == "brpi") return Algorithm::kBrpi;
  throw std::invalid_argument("AlgorithmFromString: unknown algorithm '" + s +
                              "'");
}

int ResolveMetricCadence(const Game& game, const DynamicsConfig& config) {
  if (config.metric_cadence > 0) return config.metric_cadence;
  return game.num_joint_actions() <= 1000000 ? 1 : 10;
}

RunResult RunDynamics(const Game& game, const DynamicsConfig& config,
                      const IterationCallback& callback) {
  Validate(game, config);
  const auto t0 = std::chrono::steady_clock::now();
  const int cadence = ResolveMetricCadence(game, config);
  if (config.algorithm == Algorithm::kBrpi) {
    return RunBrpiDynamics(game, config, cadence, t0, {}, callback);
  }
  return RunProductDynamics(game, config, cadence, t0, {}, callback);
}

RunResult ResumeDynamics(const Game& game, const DynamicsConfig& config,
                         RunResult partial,
                         const IterationCallback& callback) {
  Validate(game, config);
  const auto t0 = std::chrono::steady_clock::now();
  const int cadence = ResolveMetricCadence(game, config);
  if (config.algorithm == Algorithm::kBrpi) {
    if (partial.devices.empty()) {
      throw std::invalid_argument(
          "ResumeDynamics: brpi needs at least the initial device checkpoint");
    }
    if (static_cast<int>(partial.devices.size()) > config.iterations + 1) {
      throw std::invalid_argument(
          "ResumeDynamics: more checkpoints than configured iterations");
    }
    return RunBrpiDynamics(game, config, cadence, t0,
                           std::move(partial.devices), callback);
  }
  if (partial.history.size() == 0) {
    throw std::invalid_argument(
        "ResumeDynamics: need at least the initial checkpoint");
  }
  if (partial.history.size() > config.iterations + 1) {
    throw std::invalid_argument(
        "ResumeDynamics: more checkpoints than configured iterations");
  }
  for (const ProductProfile& checkpoint : partial.history.checkpoints()) {
    if (checkpoint.num_players() != game.num_players()) {
      throw std::invalid_argument(
          "ResumeDynamics: checkpoint does not match the game");
    }
    for (int i = 0; i < game.num_players(); ++i) {
      if (checkpoint[i].num_actions() != game.num_actions(i)) {
        throw std::invalid_argument(
            "ResumeDynamics: checkpoint does not match the game");
      }
    }
  }
  return RunProductDynamics(game, config, cadence, t0,
                            std::move(partial.history), callback);
}

RunResult RunFp(const Game& game, int iterations, ResponseKind response,
                double beta, int metric_cadence) {
  DynamicsConfig config;
  config.iterations = iterations;
  config.metric_cadence = metric_cadence;
  switch (response) {
    case ResponseKind::kExact:
      config.algorithm = Algorithm::kFp;
      break;
    case ResponseKind::kLogit:
      config.algorithm = Algorithm::kSfp;
      config.beta = beta;
      break;
    case ResponseKind::kMaxEnt:
      throw std::invalid_argument(
          "RunFp: maxent averaging is not supported; use exact or logit");
  }
  return RunDynamics(game, config);
}

RunResult RunIbr(const Game& game, int iterations, ResponseKind response,
                 int metric_cadence) {
  DynamicsConfig config;
  config.iterations = iterations;
  config.metric_cadence = metric_cadence;
  switch (response) {
    case ResponseKind::kExact:
      config.algorithm = Algorithm::kIbr;
      break;
    case ResponseKind::kMaxEnt:
      config.algorithm = Algorithm::kMaxEntIbr;
      break;
    case ResponseKind::kLogit:
      throw std::invalid_argument(
          "RunIbr: logit iteration is not supported; use exact or maxent");
  }
  return RunDynamics(game, config);
}

RunResult RunFpSbr(const Game& game, int iterations, int num_base_profiles,
                   int num_candidates, uint64_t seed, int metric_cadence) {
  DynamicsConfig config;
  config.algorithm = Algorithm::kFpSbr;
  config.iterations = iterations;
  config.seed = seed;
  config.metric_cadence = metric_cadence;
  config.sbr.num_base_profiles = num_base_profiles;
  config.sbr.num_candidates = num_candidates;
  config.sbr.candidate_source = CandidateSource::kInitial;
  config.sbr.base_source = BaseSource::kUniformPast;
  return RunDynamics(game, config);
}

RunResult RunBrpi(const Game& game, const DynamicsConfig& config) {
  DynamicsConfig copy = config;
  copy.algorithm = Algorithm::kBrpi;
  return RunDynamics(game, copy);
}

ProductProfile DeployedPolicy(const Game& game, const RunResult& result,
                              int iteration) {
  if (result.algorithm == Algorithm::kBrpi) {
    const CorrelationDevice& device = result.devices.at(iteration);
    std::vector<MixedStrategy> marginals;
    marginals.reserve(game.num_players());
    for (int i = 0; i < game.num_players(); ++i) {
      marginals.push_back(device.Marginal(i, game.num_actions(i)));
    }
    return ProductProfile{std::move(marginals)};
  }
  if (!IsAveraging(result.algorithm)) {
    return result.history.checkpoint(iteration);
  }
  if (iteration < 0 || iteration >= result.history.size()) {
    throw std::out_of_range("DeployedPolicy: iteration out of range");
  }
  std::vector<MixedStrategy> marginals;
  for (int i = 0; i < game.num_players(); ++i) {
    std::vector<double> probs(game.num_actions(i), 0.0);
    for (int d = 0; d <= iteration; ++d) {
      const MixedStrategy& s = result.history.checkpoint(d)[i];
      for (int a = 0; a < s.num_actions(); ++a) probs[a] += s.prob(a);
    }
    for (double& p : probs) p /= iteration + 1;
    marginals.push_back(MixedStrategy(std::move(probs)));
  }
  return ProductProfile{std::move(marginals)};
}

}  // namespace brpi
