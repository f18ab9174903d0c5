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

#include "brpi/responses.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace brpi {
namespace {

int ArgmaxLowestIndex(std::span<const double> values) {
  int best = 0;
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = static_cast<int>(i);
  }
  return best;
}

std::vector<int> TiedIndices(std::span<const double> values, double best,
                             double tol) {
  std::vector<int> tied;
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= best - tol) tied.push_back(static_cast<int>(i));
  }
  return tied;
}

}  // namespace

std::string ToString(CandidateSource source) {
  switch (source) {
    case CandidateSource::kInitial: return "initial";
    case CandidateSource::kLatest: return "latest";
    case CandidateSource::kUniformPast: return "uniform_past";
    case CandidateSource::kInitialPlusLatest: return "initial+latest";
    case CandidateSource::kInitialPlusUniformPast: return "initial+uniform_past";
  }
  throw std::invalid_argument("unknown CandidateSource");
}

std::string ToString(BaseSource source) {
  switch (source) {
    case BaseSource::kLatest: return "latest";
    case BaseSource::kUniformPast: return "uniform_past";
  }
  throw std::invalid_argument("unknown BaseSource");
}

CandidateSource CandidateSourceFromString(const std::string& s) {
  if (s == "initial") return CandidateSource::kInitial;
  if (s == "latest") return CandidateSource::kLatest;
  if (s == "uniform_past") return CandidateSource::kUniformPast;
  if (s == "initial+latest") return CandidateSource::kInitialPlusLatest;
  if (s == "initial+uniform_past") return CandidateSource::kInitialPlusUniformPast;
  throw std::invalid_argument("unknown candidate source: " + s);
}

BaseSource BaseSourceFromString(const std::string& s) {
  if (s == "latest") return BaseSource::kLatest;
  if (s == "uniform_past") return BaseSource::kUniformPast;
  throw std::invalid_argument("unknown base source: " + s);
}

ResponseResult ExactBestResponse(const Game& game, int player,
                                 const CorrelationDevice& opponents,
                                 double tie_tolerance) {
  const std::vector<double> values =
      ExpectedRewardVector(game, player, opponents);
  const int argmax = ArgmaxLowestIndex(values);
  const int action = TiedIndices(values, values[argmax], tie_tolerance).front();
  return {MixedStrategy::Pure(game.num_actions(player), action),
          values[action]};
}

ResponseResult MaxEntBestResponse(const Game& game, int player,
                                  const CorrelationDevice& opponents,
                                  double tie_tolerance) {
  const std::vector<double> values =
      ExpectedRewardVector(game, player, opponents);
  const int argmax = ArgmaxLowestIndex(values);
  const std::vector<int> tied =
      TiedIndices(values, values[argmax], tie_tolerance);
  std::vector<double> probs(values.size(), 0.0);
  double value = 0;
  for (int a : tied) {
    probs[a] = 1.0 / tied.size();
    value += values[a] / tied.size();
  }
  return {MixedStrategy(std::move(probs)), value};
}

ResponseResult LogitResponse(const Game& game, int player,
                             const CorrelationDevice& opponents, double beta) {
  if (!std::isfinite(beta) || beta < 0) {
    throw std::invalid_argument("LogitResponse: beta must be finite and >= 0");
  }
  const std::vector<double> values =
      ExpectedRewardVector(game, player, opponents);
  const double shift = *std::max_element(values.begin(), values.end());
  std::vector<double> probs(values.size());
  double total = 0;
  for (size_t a = 0; a < values.size(); ++a) {
    probs[a] = std::exp(beta * (values[a] - shift));
    total += probs[a];
  }
  double value = 0;
  for (size_t a = 0; a < values.size(); ++a) {
    probs[a] /= total;
    value += probs[a] * values[a];
  }
  return {MixedStrategy(std::move(probs)), value};
}

// -- Sampled best response ---------------------------------------------------

namespace {

void ValidateSbrInputs(const Game& game, int player,
                       std::span<const CandidatePool> candidates,
                       const SBRConfig& cfg, bool need_bases) {
  if (player < 0 || player >= game.num_players()) {
    throw std::invalid_argument("SampledBestResponse: bad player index");
  }
  if (need_bases && cfg.num_base_profiles < 1) {
    throw std::invalid_argument("SampledBestResponse: need at least one base profile");
  }
  int total_draws = 0;
  for (const CandidatePool& pool : candidates) {
    if (pool.draws < 0) {
      throw std::invalid_argument("SampledBestResponse: negative candidate draws");
    }
    if (pool.dist.num_actions() != game.num_actions(player)) {
      throw std::invalid_argument("SampledBestResponse: candidate arity mismatch");
    }
    total_draws += pool.draws;
  }
  if (total_draws < 1) {
    throw std::invalid_argument("SampledBestResponse: need at least one candidate");
  }
}

// Draws from every pool in order, then returns the distinct actions sorted
// ascending, so the later argmax scan breaks ties toward the lowest index.
std::vector<int> DrawDistinctCandidates(std::span<const CandidatePool> pools,
                                        RngStream& rng) {
  std::vector<int> drawn;
  for (const CandidatePool& pool : pools) {
    for (int j = 0; j < pool.draws; ++j) {
      drawn.push_back(rng.NextIndex(pool.dist.probs()));
    }
  }
  std::sort(drawn.begin(), drawn.end());
  drawn.erase(std::unique(drawn.begin(), drawn.end()), drawn.end());
  return drawn;
}

ResponseResult PickBest(const Game& game, int player,
                        const std::vector<int>& actions,
                        const std::vector<double>& scores,
                        const SBRConfig& cfg, RngStream& rng) {
  const int argmax = ArgmaxLowestIndex(scores);
  std::vector<int> tied_slots;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] >= scores[argmax] - cfg.tie_tolerance) {
      tied_slots.push_back(static_cast<int>(i));
    }
  }
  int slot = tied_slots.front();
  if (cfg.randomized_ties && tied_slots.size() > 1) {
    slot = tied_slots[rng.NextBelow(static_cast<int>(tied_slots.size()))];
  }
  return {MixedStrategy::Pure(game.num_actions(player), actions[slot]),
          scores[slot]};
}

}  // namespace

ResponseResult SampledBestResponse(const Game& game, int player,
                                   const CorrelationDevice& base,
                                   std::span<const CandidatePool> candidates,
                                   const SBRConfig& cfg, RngStream& rng) {
  ValidateSbrInputs(game, player, candidates, cfg, !cfg.exact_mode);
  const int n = game.num_players();

  if (cfg.exact_mode) {
    const std::vector<double> values = ExpectedRewardVector(game, player, base);
    const std::vector<int> actions = DrawDistinctCandidates(candidates, rng);
    std::vector<double> scores;
    scores.reserve(actions.size());
    for (int a : actions) scores.push_back(values[a]);
    return PickBest(game, player, actions, scores, cfg, rng);
  }

  std::vector<JointAction> bases;
  bases.reserve(cfg.num_base_profiles);
  for (int k = 0; k < cfg.num_base_profiles; ++k) {
    bases.push_back(SampleJoint(base, rng));
  }
  for (const JointAction& b : bases) {
    if (static_cast<int>(b.size()) != n) {
      throw std::invalid_argument("SampledBestResponse: base arity mismatch");
    }
  }
  const std::vector<int> actions = DrawDistinctCandidates(candidates, rng);

  // Common random numbers: every candidate is scored against the same base
  // profiles, so score differences reflect the candidates, not base noise.
  std::vector<double> scores;
  scores.reserve(actions.size());
  JointAction joint(n);
  for (int a : actions) {
    double total = 0;
    for (const JointAction& b : bases) {
      joint = b;
      joint[player] = a;
      total += game.Reward(player, joint);
    }
    scores.push_back(total / cfg.num_base_profiles);
  }
  return PickBest(game, player, actions, scores, cfg, rng);
}

ResponseResult SampledBestResponse(const Game& game, int player,
                                   const CorrelationDevice& base,
                                   const MixedStrategy& candidates,
                                   const SBRConfig& cfg, RngStream& rng) {
  const CandidatePool pool{cfg.num_candidates, candidates};
  return SampledBestResponse(game, player, base,
                             std::span<const CandidatePool>(&pool, 1), cfg, rng);
}

ResponseResult SampledBestResponseWithBases(
    const Game& game, int player, std::span<const JointAction> base_profiles,
    std::span<const CandidatePool> candidates, const SBRConfig& cfg,
    RngStream& rng) {
  ValidateSbrInputs(game, player, candidates, cfg, false);
  if (base_profiles.empty()) {
    throw std::invalid_argument("SampledBestResponseWithBases: no base profiles");
  }
  const int n = game.num_players();
  const std::vector<int> actions = DrawDistinctCandidates(candidates, rng);
  std::vector<double> scores;
  scores.reserve(actions.size());
  JointAction joint(n);
  for (int a : actions) {
    double total = 0;
    for (const JointAction& b : base_profiles) {
      joint = b;
      joint[player] = a;
      total += game.Reward(player, joint);
    }
    scores.push_back(total / static_cast<double>(base_profiles.size()));
  }
  return PickBest(game, player, actions, scores, cfg, rng);
}

}  // namespace brpi
