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

#ifndef BRPI_RESPONSES_H_
#define BRPI_RESPONSES_H_

#include <span>
#include <string>
#include <vector>

#include "brpi/game.h"
#include "brpi/rng.h"
#include "brpi/strategy.h"

namespace brpi {

// Where response candidates come from, relative to a policy history. The
// mixed sources split the candidate budget ceil(C/2)/floor(C/2) between
// their first and second parts.
enum class CandidateSource {
  kInitial,             // the iteration-0 policy (uniform)
  kLatest,              // the newest checkpoint
  kUniformPast,         // a uniformly drawn past checkpoint per draw
  kInitialPlusLatest,
  kInitialPlusUniformPast,
};

// Where base (opponent) profiles come from.
enum class BaseSource {
  kLatest,
  kUniformPast,  // one checkpoint index per base draw, shared by all
                 // opponents in that draw so their correlation survives
};

struct SBRConfig {
  int num_base_profiles = 1;  // B: opponent profiles scored per candidate
  int num_candidates = 1;     // C: candidate actions drawn (with replacement)
  CandidateSource candidate_source = CandidateSource::kUniformPast;
  BaseSource base_source = BaseSource::kUniformPast;
  // Candidates within this of the best score tie; ties go to the lowest
  // action index unless randomized_ties picks uniformly among them.
  double tie_tolerance = 1e-12;
  bool randomized_ties = false;
  // Score candidates by exact expectation against the base device instead of
  // Monte-Carlo base profiles; the result is then a deterministic function
  // of the sampled candidate set.
  bool exact_mode = false;
  // Draw one shared set of joint base profiles per iteration and let every
  // player score against the others' components of those joints.
  bool share_base_profiles = false;
};

std::string ToString(CandidateSource source);
std::string ToString(BaseSource source);
CandidateSource CandidateSourceFromString(const std::string& s);
BaseSource BaseSourceFromString(const std::string& s);

struct ResponseResult {
  MixedStrategy strategy;
  // Expected reward of `strategy` against the inputs that produced it: the
  // exact device for the exact/maxent/logit operators, the sampled base
  // profiles (or base device in exact_mode) for the sampled operator.
  double value = 0;
};

// Pure best response to the device; ties within tie_tolerance of the best
// value break to the lowest action index.
ResponseResult ExactBestResponse(const Game& game, int player,
                                 const CorrelationDevice& opponents,
                                 double tie_tolerance = 1e-12);

// Uniform mixture over all actions whose value ties the best within
// tie_tolerance (the maximum-entropy best response).
ResponseResult MaxEntBestResponse(const Game& game, int player,
                                  const CorrelationDevice& opponents,
                                  double tie_tolerance = 1e-12);

// Softmax response: probabilities proportional to exp(beta * value). beta is
// an inverse temperature: beta = 0 is uniform, beta -> inf approaches the
// best response. Values are max-shifted before exponentiation, so the result
// is invariant to payoff translation and numerically safe for large beta.
ResponseResult LogitResponse(const Game& game, int player,
                             const CorrelationDevice& opponents, double beta);

// One pool of candidate draws: `draws` actions sampled (with replacement)
// from `dist`.
struct CandidatePool {
  int draws = 0;
  MixedStrategy dist;
};

// Sampled best response. Draws cfg.num_base_profiles joint base profiles
// from `base` (each draw: one component of the mixture, then every
// opponent's action from it; the player's own coordinate is ignored), draws
// the candidate actions from the pools, scores every distinct candidate
// action against the same base profiles (common random numbers), and returns
// the best scoring action. Duplicate candidate draws cannot change the
// argmax, so scoring runs once per distinct action. RNG order: all base
// draws first, then candidate draws pool by pool.
ResponseResult SampledBestResponse(const Game& game, int player,
                                   const CorrelationDevice& base,
                                   std::span<const CandidatePool> candidates,
                                   const SBRConfig& cfg, RngStream& rng);

// Single-pool convenience: cfg.num_candidates draws from `candidates`.
ResponseResult SampledBestResponse(const Game& game, int player,
                                   const CorrelationDevice& base,
                                   const MixedStrategy& candidates,
                                   const SBRConfig& cfg, RngStream& rng);

// Variant that takes pre-drawn base profiles (used when the caller shares
// base profiles across players). Each entry is a full joint action; the
// player's own coordinate is ignored.
ResponseResult SampledBestResponseWithBases(
    const Game& game, int player, std::span<const JointAction> base_profiles,
    std::span<const CandidatePool> candidates, const SBRConfig& cfg,
    RngStream& rng);

}  // namespace brpi

#endif  // BRPI_RESPONSES_H_
