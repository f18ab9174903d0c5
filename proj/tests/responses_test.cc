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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "brpi/game.h"
#include "brpi/responses.h"
#include "brpi/rng.h"
#include "brpi/strategy.h"
#include "doctest.h"

namespace brpi {
namespace {

CorrelationDevice PureOpponentDevice(const Game& game, int opponent_action) {
  ProductProfile profile;
  for (int p = 0; p < game.num_players(); ++p) {
    profile.strategies.push_back(
        MixedStrategy::Pure(game.num_actions(p), opponent_action));
  }
  return CorrelationDevice::FromProfile(std::move(profile));
}

// Two actions for player 0, payoffs (1, 0) against a single-action opponent.
Game TwoActionBandit() {
  GameSpec spec;
  spec.kind = "dense";
  spec.name = "bandit";
  spec.action_counts = {2, 1};
  spec.tensor = {{1, 0}, {0, 0}};
  return BuildGame(spec);
}

TEST_CASE("exact best response exploits an all-in Blotto allocation") {
  const Game game = BuildBlotto({2, 10, 3});
  const auto& actions = *game.allocations();
  const int all_in =
      static_cast<int>(std::find(actions.begin(), actions.end(),
                                 AllocationAction{10, 0, 0}) -
                       actions.begin());
  const auto device = PureOpponentDevice(game, all_in);
  const ResponseResult r = ExactBestResponse(game, 0, device);
  CHECK(r.value == doctest::Approx(1.0));
  // Ties break to the lowest action index: [0,1,9] is the first allocation
  // that concedes field 0 and claims both others.
  CHECK(r.strategy.prob(1) == 1.0);
  CHECK(actions[1] == AllocationAction{0, 1, 9});
}

TEST_CASE("response value matches a recomputed expectation") {
  const Game game = BuildBlotto({2, 6, 3});
  RngStream rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> p(game.num_actions(1));
    double total = 0;
    for (double& v : p) total += (v = rng.NextDouble());
    for (double& v : p) v /= total;
    ProductProfile opp{{MixedStrategy::Uniform(game.num_actions(0)),
                        MixedStrategy(std::move(p))}};
    const auto device = CorrelationDevice::FromProfile(opp);
    const auto values = ExpectedRewardVector(game, 0, device);
    for (auto result : {ExactBestResponse(game, 0, device),
                        MaxEntBestResponse(game, 0, device),
                        LogitResponse(game, 0, device, 3.0)}) {
      double recomputed = 0;
      for (int a = 0; a < game.num_actions(0); ++a) {
        recomputed += result.strategy.prob(a) * values[a];
      }
      CHECK(result.value == doctest::Approx(recomputed).epsilon(1e-9));
    }
  }
}

TEST_CASE("maxent response to a uniform rps opponent is uniform") {
  const Game rps = BuildBuiltin("rps");
  const auto device = CorrelationDevice::FromProfile(ProductProfile::Uniform(rps));
  const ResponseResult r = MaxEntBestResponse(rps, 0, device);
  for (int a = 0; a < 3; ++a) CHECK(r.strategy.prob(a) == doctest::Approx(1.0 / 3));
  CHECK(r.value == doctest::Approx(0.0));
  // The pure variant falls back to the lowest index.
  CHECK(ExactBestResponse(rps, 0, device).strategy.prob(0) == 1.0);
}

TEST_CASE("logit response follows the documented temperature convention") {
  const Game game = TwoActionBandit();
  const auto device = PureOpponentDevice(game, 0);
  const ResponseResult r = LogitResponse(game, 0, device, std::log(3.0));
  CHECK(r.strategy.prob(0) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(r.strategy.prob(1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(r.value == doctest::Approx(0.75).epsilon(1e-12));

  const ResponseResult flat = LogitResponse(game, 0, device, 0.0);
  CHECK(flat.strategy.prob(0) == doctest::Approx(0.5));

  // Large beta approaches the best response without overflowing.
  const ResponseResult sharp = LogitResponse(game, 0, device, 1e6);
  CHECK(sharp.strategy.prob(0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(LogitResponse(game, 0, device, -1.0), std::invalid_argument);
}

TEST_CASE("logit response is invariant to payoff translation") {
  GameSpec spec;
  spec.kind = "dense";
  spec.name = "shifted";
  spec.action_counts = {3, 2};
  spec.tensor = {{0.3, 0.3, -1.0, -1.0, 0.8, 0.8}, {0, 0, 0, 0, 0, 0}};
  const Game base_game = BuildGame(spec);
  for (auto& row : spec.tensor[0]) row += 17.0;
  const Game shifted_game = BuildGame(spec);
  const auto device = PureOpponentDevice(base_game, 0);
  const auto a = LogitResponse(base_game, 0, device, 2.5);
  const auto b = LogitResponse(shifted_game, 0, device, 2.5);
  for (int i = 0; i < 3; ++i) {
    CHECK(a.strategy.prob(i) == doctest::Approx(b.strategy.prob(i)).epsilon(1e-12));
  }
}

// -- Sampled best response ---------------------------------------------------

TEST_CASE("a single candidate is returned regardless of its score") {
  const Game mp = BuildBuiltin("matching_pennies");
  const auto base = PureOpponentDevice(mp, 0);  // opponent plays heads
  SBRConfig cfg;
  cfg.num_base_profiles = 4;
  cfg.num_candidates = 1;
  RngStream rng = DeriveStream(9, {0});
  // Candidate distribution is pure tails, the losing reply for player 0.
  const ResponseResult r =
      SampledBestResponse(mp, 0, base, MixedStrategy::Pure(2, 1), cfg, rng);
  CHECK(r.strategy.prob(1) == 1.0);
  CHECK(r.value == doctest::Approx(-1.0));
}

TEST_CASE("sampled best response is deterministic per stream") {
  const Game game = BuildBlotto({2, 10, 3});
  const auto base = CorrelationDevice::FromProfile(ProductProfile::Uniform(game));
  SBRConfig cfg;
  cfg.num_base_profiles = 8;
  cfg.num_candidates = 16;
  for (uint64_t key : {1ull, 2ull, 3ull}) {
    RngStream a = DeriveStream(key, {7});
    RngStream b = DeriveStream(key, {7});
    const auto ra = SampledBestResponse(
        game, 0, base, MixedStrategy::Uniform(game.num_actions(0)), cfg, a);
    const auto rb = SampledBestResponse(
        game, 0, base, MixedStrategy::Uniform(game.num_actions(0)), cfg, b);
    CHECK(ra.value == rb.value);
    for (int i = 0; i < game.num_actions(0); ++i) {
      CHECK(ra.strategy.prob(i) == rb.strategy.prob(i));
    }
  }
}

TEST_CASE("exact mode with covering candidates equals the exact best response") {
  const Game game = BuildBlotto({2, 8, 3});
  ProductProfile opp = ProductProfile::Uniform(game);
  const auto device = CorrelationDevice::FromProfile(opp);
  SBRConfig cfg;
  cfg.exact_mode = true;
  cfg.num_candidates = 2000;  // covers all 45 actions with high probability
  RngStream rng = DeriveStream(31, {0});
  const auto sampled = SampledBestResponse(
      game, 0, device, MixedStrategy::Uniform(game.num_actions(0)), cfg, rng);
  const auto exact = ExactBestResponse(game, 0, device);
  CHECK(sampled.value == doctest::Approx(exact.value).epsilon(1e-9));
  for (int a = 0; a < game.num_actions(0); ++a) {
    CHECK(sampled.strategy.prob(a) == exact.strategy.prob(a));
  }
}

TEST_CASE("candidate pools are drawn in order and merged") {
  const Game rps = BuildBuiltin("rps");
  const auto base = PureOpponentDevice(rps, 0);  // opponent plays rock
  SBRConfig cfg;
  cfg.num_base_profiles = 1;
  const std::vector<CandidatePool> pools = {
      {2, MixedStrategy::Pure(3, 2)},  // scissors: loses to rock
      {1, MixedStrategy::Pure(3, 1)},  // paper: beats rock
  };
  RngStream rng = DeriveStream(12, {0});
  const auto r = SampledBestResponse(rps, 0, base, pools, cfg, rng);
  CHECK(r.strategy.prob(1) == 1.0);
  CHECK(r.value == doctest::Approx(1.0));
}

TEST_CASE("ties break to the lowest action index unless randomized") {
  // Both actions pay the same against the only opponent action.
  GameSpec spec;
  spec.kind = "dense";
  spec.name = "flat";
  spec.action_counts = {3, 1};
  spec.tensor = {{0.5, 0.5, 0.5}, {0, 0, 0}};
  const Game game = BuildGame(spec);
  const auto base = CorrelationDevice::FromProfile(
      ProductProfile{{MixedStrategy::Uniform(3), MixedStrategy::Pure(1, 0)}});
  SBRConfig cfg;
  cfg.num_base_profiles = 2;
  cfg.num_candidates = 12;
  RngStream rng = DeriveStream(77, {0});
  const auto lowest = SampledBestResponse(
      game, 0, base, MixedStrategy::Uniform(3), cfg, rng);
  CHECK(lowest.strategy.prob(0) == 1.0);

  cfg.randomized_ties = true;
  int hits[3] = {0, 0, 0};
  for (int trial = 0; trial < 3000; ++trial) {
    RngStream trial_rng = DeriveStream(99, {static_cast<uint64_t>(trial)});
    const auto r = SampledBestResponse(game, 0, base, MixedStrategy::Uniform(3),
                                       cfg, trial_rng);
    for (int a = 0; a < 3; ++a) {
      if (r.strategy.prob(a) == 1.0) ++hits[a];
    }
  }
  // All three actions tie every time; the randomized rule should spread mass.
  for (int a = 0; a < 3; ++a) CHECK(hits[a] > 700);
}

TEST_CASE("error rate against the exact response shrinks as B grows") {
  const Game game = BuildBlotto({2, 10, 3});
  // A deliberately non-uniform mixed opponent: softmax response to uniform.
  const auto uniform_device =
      CorrelationDevice::FromProfile(ProductProfile::Uniform(game));
  const MixedStrategy opponent =
      LogitResponse(game, 1, uniform_device, 25.0).strategy;
  const auto base = CorrelationDevice::FromProfile(
      ProductProfile{{MixedStrategy::Uniform(game.num_actions(0)), opponent}});
  const auto values = ExpectedRewardVector(game, 0, base);
  const double best = *std::max_element(values.begin(), values.end());

  const int trials = 500;
  std::vector<double> error_rates;
  for (int B : {1, 4, 64}) {
    SBRConfig cfg;
    cfg.num_base_profiles = B;
    cfg.num_candidates = 200;  // covers the 66 actions with high probability
    int errors = 0;
    for (int trial = 0; trial < trials; ++trial) {
      RngStream rng = DeriveStream(2026, {static_cast<uint64_t>(B),
                                          static_cast<uint64_t>(trial)});
      const auto r = SampledBestResponse(
          game, 0, base, MixedStrategy::Uniform(game.num_actions(0)), cfg, rng);
      double chosen_value = 0;
      for (int a = 0; a < game.num_actions(0); ++a) {
        chosen_value += r.strategy.prob(a) * values[a];
      }
      if (chosen_value < best - 1e-9) ++errors;
    }
    error_rates.push_back(static_cast<double>(errors) / trials);
  }
  for (size_t i = 0; i + 1 < error_rates.size(); ++i) {
    const double p = error_rates[i + 1];
    const double sigma = std::sqrt(std::max(p * (1 - p), 1e-4) / trials);
    CHECK(error_rates[i] >= error_rates[i + 1] - 3 * sigma);
  }
  // B=64 with wide candidate coverage should rarely miss.
  CHECK(error_rates.back() < 0.5);
}

TEST_CASE("pre-drawn base profiles score candidates by their average") {
  const Game mp = BuildBuiltin("matching_pennies");
  const std::vector<JointAction> bases = {{0, 0}, {0, 0}, {0, 5}, {1, 9}};
  // Player 1's own coordinate (including the nonsense 5 and 9) is ignored.
  SBRConfig cfg;
  const std::vector<CandidatePool> pools = {{4, MixedStrategy::Uniform(2)}};
  RngStream rng = DeriveStream(5, {1});
  const auto r = SampledBestResponseWithBases(mp, 1, bases, pools, cfg, rng);
  // Player 0 shows heads 3/4 of the time; player 1's best reply is heads
  // (match means player 1 loses... payoffs: r1(H,H) = -1). Scores:
  // heads: (-1-1-1+1)/4 = -0.5, tails: (1+1+1-1)/4 = 0.5. Tails wins.
  CHECK(r.strategy.prob(1) == 1.0);
  CHECK(r.value == doctest::Approx(0.5));
}

TEST_CASE("config strings round-trip") {
  for (auto source :
       {CandidateSource::kInitial, CandidateSource::kLatest,
        CandidateSource::kUniformPast, CandidateSource::kInitialPlusLatest,
        CandidateSource::kInitialPlusUniformPast}) {
    CHECK(CandidateSourceFromString(ToString(source)) == source);
  }
  for (auto source : {BaseSource::kLatest, BaseSource::kUniformPast}) {
    CHECK(BaseSourceFromString(ToString(source)) == source);
  }
  CHECK_THROWS_AS(CandidateSourceFromString("newest"), std::invalid_argument);
  CHECK_THROWS_AS(BaseSourceFromString(""), std::invalid_argument);
}

}  // namespace
}  // namespace brpi
