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

#ifndef BRPI_STRATEGY_H_
#define BRPI_STRATEGY_H_

#include <span>
#include <variant>
#include <vector>

#include "brpi/game.h"
#include "brpi/rng.h"

namespace brpi {

using JointAction = std::vector<int>;

// Probability vector over one player's actions. Construction validates
// non-negativity and total mass within 1e-6 of 1, then renormalizes exactly.
class MixedStrategy {
 public:
  explicit MixedStrategy(std::vector<double> probs);
  static MixedStrategy Uniform(int num_actions);
  static MixedStrategy Pure(int num_actions, int action);

  int num_actions() const { return static_cast<int>(probs_.size()); }
  double prob(int action) const { return probs_.at(action); }
  std::span<const double> probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

// One independent strategy per player.
struct ProductProfile {
  std::vector<MixedStrategy> strategies;

  int num_players() const { return static_cast<int>(strategies.size()); }
  const MixedStrategy& operator[](int player) const {
    return strategies.at(player);
  }

  static ProductProfile Uniform(const Game& game);
};

// Weighted mixture of joint policies: each component is either a full product
// profile or one pure joint action. Weights are validated non-negative and
// normalized to sum to 1. Unlike a product of marginals, the mixture keeps
// the correlation between opponents' actions, which is what deviation
// metrics over a policy history need.
class CorrelationDevice {
 public:
  struct Component {
    double weight;
    std::variant<ProductProfile, JointAction> policy;
  };

  explicit CorrelationDevice(std::vector<Component> components);
  static CorrelationDevice FromProfile(ProductProfile profile);
  static CorrelationDevice FromJointSamples(std::vector<JointAction> samples);

  std::span<const Component> components() const { return components_; }
  int size() const { return static_cast<int>(components_.size()); }

  // Component weights, normalized, aligned with components(). Kept
  // contiguous so samplers avoid a gather per draw.
  std::span<const double> weights() const { return weights_; }

  // Marginal action distribution of one player under the mixture.
  MixedStrategy Marginal(int player, int num_actions) const;

 private:
  std::vector<Component> components_;
  std::vector<double> weights_;
};

// Product-profile checkpoints appended once per iteration; index 0 holds the
// initial policy.
class PolicyHistory {
 public:
  void Append(ProductProfile profile) {
    checkpoints_.push_back(std::move(profile));
  }
  int size() const { return static_cast<int>(checkpoints_.size()); }
  const ProductProfile& checkpoint(int index) const {
    return checkpoints_.at(index);
  }
  std::span<const ProductProfile> checkpoints() const { return checkpoints_; }

 private:
  std::vector<ProductProfile> checkpoints_;
};

// Uniform mixture over the first prefix_len checkpoints, as a device (one
// component per checkpoint, correlations preserved).
CorrelationDevice AverageHistory(const PolicyHistory& history, int prefix_len);

// Per-action expected reward for `player` against the device: entry a is
// E[r_player(a, others)] with the other players drawn jointly from the
// device. Player's own component of each device sample is ignored. Exact
// contraction; summation order is fixed (components in order, opponents by
// ascending player then action), so results are bit-reproducible.
std::vector<double> ExpectedRewardVector(const Game& game, int player,
                                         const CorrelationDevice& device);

// Expected reward of every player when all actions are drawn from the device.
std::vector<double> ExpectedJointRewards(const Game& game,
                                         const CorrelationDevice& device);

// Expected reward of every player under an independent product profile.
std::vector<double> ExpectedProfileRewards(const Game& game,
                                           const ProductProfile& profile);

// Draws one joint action: component by weight, then each player's action
// (players in ascending order) for product components.
JointAction SampleJoint(const CorrelationDevice& device, RngStream& rng);

}  // namespace brpi

#endif  // BRPI_STRATEGY_H_
