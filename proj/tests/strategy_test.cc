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
#include "brpi/rng.h"
#include "brpi/strategy.h"
#include "doctest.h"

namespace brpi {
namespace {

// Exhaustive oracle: loop over every joint action, weight by the device's
// probability of that joint action. Quadratic in the joint space; only for
// tiny games.
double DeviceJointProb(const CorrelationDevice& device,
                       const std::vector<int>& joint) {
  double prob = 0;
  for (const auto& comp : device.components()) {
    if (const auto* pure = std::get_if<JointAction>(&comp.policy)) {
      if (*pure == joint) prob += comp.weight;
    } else {
      const auto& profile = std::get<ProductProfile>(comp.policy);
      double p = comp.weight;
      for (int i = 0; i < profile.num_players(); ++i) {
        p *= profile[i].prob(joint[i]);
      }
      prob += p;
    }
  }
  return prob;
}

template <typename Fn>
void ForEachJoint(const Game& game, Fn&& fn) {
  std::vector<int> joint(game.num_players(), 0);
  while (true) {
    fn(joint);
    int p = game.num_players() - 1;
    while (p >= 0) {
      if (++joint[p] < game.num_actions(p)) break;
      joint[p] = 0;
      --p;
    }
    if (p < 0) return;
  }
}

std::vector<double> OracleRewardVector(const Game& game, int player,
                                       const CorrelationDevice& device) {
  // For each joint recommendation (probability p), the player deviates to a
  // fixed action a and collects r(a, others). Summing over all joints
  // marginalizes the player's own recommendation away.
  std::vector<double> out(game.num_actions(player), 0.0);
  ForEachJoint(game, [&](const std::vector<int>& joint) {
    const double p = DeviceJointProb(device, joint);
    if (p == 0) return;
    std::vector<int> deviated = joint;
    for (int a = 0; a < game.num_actions(player); ++a) {
      deviated[player] = a;
      out[a] += p * game.Reward(player, deviated);
    }
  });
  return out;
}

std::vector<double> OracleJointRewards(const Game& game,
                                       const CorrelationDevice& device) {
  std::vector<double> out(game.num_players(), 0.0);
  ForEachJoint(game, [&](const std::vector<int>& joint) {
    const double p = DeviceJointProb(device, joint);
    if (p == 0) return;
    const auto r = game.Rewards(joint);
    for (int i = 0; i < game.num_players(); ++i) out[i] += p * r[i];
  });
  return out;
}

Game RandomDenseGame(RngStream& rng, std::vector<int> counts) {
  GameSpec spec;
  spec.kind = "dense";
  spec.name = "random";
  spec.action_counts = counts;
  uint64_t joint = 1;
  for (int c : counts) joint *= c;
  for (size_t p = 0; p < counts.size(); ++p) {
    std::vector<double> t(joint);
    for (double& v : t) v = rng.NextDouble() * 4.0 - 2.0;
    spec.tensor.push_back(std::move(t));
  }
  return BuildGame(spec);
}

MixedStrategy RandomStrategy(RngStream& rng, int n) {
  std::vector<double> p(n);
  double total = 0;
  for (double& v : p) {
    v = rng.NextDouble() + 1e-3;
    total += v;
  }
  for (double& v : p) v /= total;
  return MixedStrategy(std::move(p));
}

CorrelationDevice RandomDevice(RngStream& rng, const Game& game) {
  std::vector<CorrelationDevice::Component> comps;
  const int num_comps = 1 + rng.NextBelow(4);
  for (int k = 0; k < num_comps; ++k) {
    const double w = rng.NextDouble() + 0.1;
    if (rng.NextBelow(2) == 0) {
      JointAction joint;
      for (int p = 0; p < game.num_players(); ++p) {
        joint.push_back(rng.NextBelow(game.num_actions(p)));
      }
      comps.push_back({w, std::move(joint)});
    } else {
      ProductProfile profile;
      for (int p = 0; p < game.num_players(); ++p) {
        profile.strategies.push_back(RandomStrategy(rng, game.num_actions(p)));
      }
      comps.push_back({w, std::move(profile)});
    }
  }
  return CorrelationDevice(std::move(comps));
}

// -- MixedStrategy -----------------------------------------------------------

TEST_CASE("strategies are validated and renormalized") {
  CHECK_THROWS_AS(MixedStrategy({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(MixedStrategy({1.2, -0.2}), std::invalid_argument);
  CHECK_THROWS_AS(MixedStrategy(std::vector<double>{}), std::invalid_argument);
  const MixedStrategy s({0.25 + 4e-7, 0.75});  // within tolerance, rescaled
  CHECK(s.prob(0) + s.prob(1) == doctest::Approx(1.0).epsilon(1e-15));
  const MixedStrategy pure = MixedStrategy::Pure(4, 2);
  CHECK(pure.prob(2) == 1.0);
  CHECK(pure.prob(0) == 0.0);
  const MixedStrategy uniform = MixedStrategy::Uniform(5);
  CHECK(uniform.prob(3) == doctest::Approx(0.2));
}

// -- Expectations against the exhaustive oracle ------------------------------

TEST_CASE("expected reward vector matches exhaustive enumeration") {
  RngStream rng(314);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.NextBelow(2));
    std::vector<int> counts;
    for (int p = 0; p < n; ++p) counts.push_back(2 + rng.NextBelow(3));
    const Game game = RandomDenseGame(rng, counts);
    const CorrelationDevice device = RandomDevice(rng, game);
    for (int player = 0; player < n; ++player) {
      const auto fast = ExpectedRewardVector(game, player, device);
      const auto slow = OracleRewardVector(game, player, device);
      REQUIRE(fast.size() == slow.size());
      for (size_t a = 0; a < fast.size(); ++a) {
        CHECK(fast[a] == doctest::Approx(slow[a]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("expected joint rewards match exhaustive enumeration") {
  RngStream rng(159);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.NextBelow(2));
    std::vector<int> counts;
    for (int p = 0; p < n; ++p) counts.push_back(2 + rng.NextBelow(3));
    const Game game = RandomDenseGame(rng, counts);
    const CorrelationDevice device = RandomDevice(rng, game);
    const auto fast = ExpectedJointRewards(game, device);
    const auto slow = OracleJointRewards(game, device);
    for (int p = 0; p < n; ++p) {
      CHECK(fast[p] == doctest::Approx(slow[p]).epsilon(1e-12));
    }
  }
}

TEST_CASE("reward vector against a pure opponent reads the payoff column") {
  const Game rps = BuildBuiltin("rps");
  const auto device = CorrelationDevice::FromProfile(
      ProductProfile{{MixedStrategy::Uniform(3), MixedStrategy::Pure(3, 0)}});
  const auto v = ExpectedRewardVector(rps, 0, device);
  CHECK(v[0] == doctest::Approx(0.0));   // rock draws rock
  CHECK(v[1] == doctest::Approx(1.0));   // paper beats rock
  CHECK(v[2] == doctest::Approx(-1.0));  // scissors loses to rock
}

TEST_CASE("the evaluated player's own device component is ignored") {
  const Game mp = BuildBuiltin("matching_pennies");
  // Device recommends (H, H) always; player 0's deviation values must read
  // the opponent's H only, not player 0's recommendation.
  const auto device =
      CorrelationDevice::FromJointSamples({JointAction{0, 0}});
  const auto v = ExpectedRewardVector(mp, 0, device);
  CHECK(v[0] == doctest::Approx(1.0));
  CHECK(v[1] == doctest::Approx(-1.0));
}

TEST_CASE("correlated device differs from its product of marginals") {
  const Game mp = BuildBuiltin("matching_pennies");
  // Uniform over (H,H) and (T,T): perfectly correlated play.
  const auto device = CorrelationDevice::FromJointSamples(
      {JointAction{0, 0}, JointAction{1, 1}});
  const auto joint_value = ExpectedJointRewards(mp, device);
  CHECK(joint_value[0] == doctest::Approx(1.0));
  CHECK(joint_value[1] == doctest::Approx(-1.0));
  // Marginals are uniform; the independent product pays 0 to both.
  const MixedStrategy m0 = device.Marginal(0, 2);
  const MixedStrategy m1 = device.Marginal(1, 2);
  CHECK(m0.prob(0) == doctest::Approx(0.5));
  CHECK(m1.prob(0) == doctest::Approx(0.5));
  const auto product_value = ExpectedProfileRewards(
      mp, ProductProfile{{m0, m1}});
  CHECK(product_value[0] == doctest::Approx(0.0));
  CHECK(product_value[1] == doctest::Approx(0.0));
}

// -- History averaging -------------------------------------------------------

TEST_CASE("history averages weight checkpoints uniformly") {
  const Game mp = BuildBuiltin("matching_pennies");
  PolicyHistory history;
  history.Append(ProductProfile::Uniform(mp));
  history.Append(ProductProfile{{MixedStrategy::Pure(2, 0), MixedStrategy::Pure(2, 0)}});
  history.Append(ProductProfile{{MixedStrategy::Pure(2, 0), MixedStrategy::Pure(2, 1)}});

  const CorrelationDevice avg2 = AverageHistory(history, 2);
  CHECK(avg2.size() == 2);
  CHECK(avg2.components()[0].weight == doctest::Approx(0.5));
  const MixedStrategy m = avg2.Marginal(0, 2);
  CHECK(m.prob(0) == doctest::Approx(0.75));  // (1/2 + 1) / 2

  const CorrelationDevice avg3 = AverageHistory(history, 3);
  const MixedStrategy m0 = avg3.Marginal(0, 2);
  const MixedStrategy m1 = avg3.Marginal(1, 2);
  CHECK(m0.prob(0) == doctest::Approx((0.5 + 1 + 1) / 3));
  CHECK(m1.prob(1) == doctest::Approx((0.5 + 0 + 1) / 3));

  CHECK_THROWS_AS(AverageHistory(history, 0), std::invalid_argument);
  CHECK_THROWS_AS(AverageHistory(history, 4), std::invalid_argument);
}

// -- Sampling ----------------------------------------------------------------

TEST_CASE("joint sampling is deterministic per stream and follows weights") {
  const Game rps = BuildBuiltin("rps");
  const auto device = CorrelationDevice(std::vector<CorrelationDevice::Component>{
      {3.0, JointAction{0, 1}},
      {1.0, ProductProfile{{MixedStrategy::Pure(3, 2), MixedStrategy::Uniform(3)}}},
  });

  RngStream a = DeriveStream(42, {1});
  RngStream b = DeriveStream(42, {1});
  for (int i = 0; i < 50; ++i) CHECK(SampleJoint(device, a) == SampleJoint(device, b));

  RngStream rng = DeriveStream(42, {2});
  int pure_hits = 0;
  const int trials = 20000;
  std::vector<int> second_counts(3, 0);
  for (int i = 0; i < trials; ++i) {
    const JointAction j = SampleJoint(device, rng);
    if (j[0] == 0) {
      ++pure_hits;
      CHECK(j[1] == 1);
    } else {
      CHECK(j[0] == 2);
      ++second_counts[j[1]];
    }
  }
  CHECK(pure_hits > trials * 3 / 4 - 400);
  CHECK(pure_hits < trials * 3 / 4 + 400);
  for (int c : second_counts) CHECK(c > trials / 4 / 3 - 300);
}

}  // namespace
}  // namespace brpi
