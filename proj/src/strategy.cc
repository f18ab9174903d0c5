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

#include "brpi/strategy.h"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace brpi {

MixedStrategy::MixedStrategy(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw std::invalid_argument("MixedStrategy: empty probability vector");
  }
  double total = 0;
  for (double& p : probs_) {
    if (!std::isfinite(p) || p < -1e-9) {
      throw std::invalid_argument("MixedStrategy: negative probability");
    }
    if (p < 0) p = 0;
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw std::invalid_argument("MixedStrategy: probabilities must sum to 1");
  }
  for (double& p : probs_) p /= total;
}

MixedStrategy MixedStrategy::Uniform(int num_actions) {
  if (num_actions < 1) throw std::invalid_argument("MixedStrategy: no actions");
  return MixedStrategy(std::vector<double>(num_actions, 1.0 / num_actions));
}

MixedStrategy MixedStrategy::Pure(int num_actions, int action) {
  if (action < 0 || action >= num_actions) {
    throw std::invalid_argument("MixedStrategy: pure action out of range");
  }
  std::vector<double> p(num_actions, 0.0);
  p[action] = 1.0;
  return MixedStrategy(std::move(p));
}

ProductProfile ProductProfile::Uniform(const Game& game) {
  ProductProfile profile;
  profile.strategies.reserve(game.num_players());
  for (int p = 0; p < game.num_players(); ++p) {
    profile.strategies.push_back(MixedStrategy::Uniform(game.num_actions(p)));
  }
  return profile;
}

CorrelationDevice::CorrelationDevice(std::vector<Component> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw std::invalid_argument("CorrelationDevice: no components");
  }
  double total = 0;
  for (const Component& c : components_) {
    if (!std::isfinite(c.weight) || c.weight < 0) {
      throw std::invalid_argument("CorrelationDevice: weights must be >= 0");
    }
    total += c.weight;
  }
  if (!(total > 0)) {
    throw std::invalid_argument("CorrelationDevice: weight total must be > 0");
  }
  weights_.reserve(components_.size());
  for (Component& c : components_) {
    c.weight /= total;
    weights_.push_back(c.weight);
  }
}

CorrelationDevice CorrelationDevice::FromProfile(ProductProfile profile) {
  std::vector<Component> comps;
  comps.push_back(Component{1.0, std::move(profile)});
  return CorrelationDevice(std::move(comps));
}

CorrelationDevice CorrelationDevice::FromJointSamples(
    std::vector<JointAction> samples) {
  std::vector<Component> comps;
  comps.reserve(samples.size());
  for (JointAction& s : samples) comps.push_back(Component{1.0, std::move(s)});
  return CorrelationDevice(std::move(comps));
}

MixedStrategy CorrelationDevice::Marginal(int player, int num_actions) const {
  std::vector<double> probs(num_actions, 0.0);
  for (const Component& c : components_) {
    if (c.weight == 0) continue;
    if (const auto* joint = std::get_if<JointAction>(&c.policy)) {
      probs.at(joint->at(player)) += c.weight;
    } else {
      const auto& strat = std::get<ProductProfile>(c.policy)[player];
      if (strat.num_actions() != num_actions) {
        throw std::invalid_argument("CorrelationDevice::Marginal: arity mismatch");
      }
      for (int a = 0; a < num_actions; ++a) {
        probs[a] += c.weight * strat.prob(a);
      }
    }
  }
  return MixedStrategy(std::move(probs));
}

CorrelationDevice AverageHistory(const PolicyHistory& history, int prefix_len) {
  if (prefix_len < 1 || prefix_len > history.size()) {
    throw std::invalid_argument("AverageHistory: prefix length out of range");
  }
  std::vector<CorrelationDevice::Component> comps;
  comps.reserve(prefix_len);
  for (int d = 0; d < prefix_len; ++d) {
    comps.push_back({1.0, history.checkpoint(d)});
  }
  return CorrelationDevice(std::move(comps));
}

namespace {

// Depth-first walk over the positive-probability assignments of `profile`
// restricted to `axes` (ascending player order), accumulating the probability
// product. fn(weight) runs at each leaf with `joint` filled in on the axes.
template <typename Fn>
void WalkSupport(const ProductProfile& profile, const std::vector<int>& axes,
                 size_t depth, double weight, JointAction& joint, Fn&& fn) {
  if (depth == axes.size()) {
    fn(weight);
    return;
  }
  const int player = axes[depth];
  const MixedStrategy& strat = profile[player];
  for (int a = 0; a < strat.num_actions(); ++a) {
    const double p = strat.prob(a);
    if (p == 0) continue;
    joint[player] = a;
    WalkSupport(profile, axes, depth + 1, weight * p, joint, fn);
  }
}

void CheckProfileArity(const Game& game, const ProductProfile& profile) {
  if (profile.num_players() != game.num_players()) {
    throw std::invalid_argument("profile arity does not match the game");
  }
  for (int p = 0; p < game.num_players(); ++p) {
    if (profile[p].num_actions() != game.num_actions(p)) {
      throw std::invalid_argument("strategy arity does not match the game");
    }
  }
}

}  // namespace

std::vector<double> ExpectedRewardVector(const Game& game, int player,
                                         const CorrelationDevice& device) {
  if (player < 0 || player >= game.num_players()) {
    throw std::invalid_argument("ExpectedRewardVector: bad player index");
  }
  const int num_actions = game.num_actions(player);
  const int n = game.num_players();
  std::vector<double> out(num_actions, 0.0);

  std::vector<int> opponent_axes;
  opponent_axes.reserve(n - 1);
  for (int p = 0; p < n; ++p) {
    if (p != player) opponent_axes.push_back(p);
  }
  const std::vector<double>* tensor = game.dense_tensor(player);
  const uint64_t stride = tensor ? game.stride(player) : 0;

  JointAction joint(n, 0);
  for (const auto& comp : device.components()) {
    if (comp.weight == 0) continue;
    auto accumulate = [&](double w) {
      if (tensor) {
        joint[player] = 0;
        uint64_t flat = 0;
        for (int p = 0; p < n; ++p) {
          flat += static_cast<uint64_t>(joint[p]) * game.stride(p);
        }
        for (int a = 0; a < num_actions; ++a) {
          out[a] += w * (*tensor)[flat + static_cast<uint64_t>(a) * stride];
        }
      } else {
        for (int a = 0; a < num_actions; ++a) {
          joint[player] = a;
          out[a] += w * game.Reward(player, joint);
        }
      }
    };
    if (const auto* pure = std::get_if<JointAction>(&comp.policy)) {
      if (static_cast<int>(pure->size()) != n) {
        throw std::invalid_argument("ExpectedRewardVector: joint arity mismatch");
      }
      joint = *pure;
      accumulate(comp.weight);
    } else {
      const auto& profile = std::get<ProductProfile>(comp.policy);
      CheckProfileArity(game, profile);
      WalkSupport(profile, opponent_axes, 0, comp.weight, joint, accumulate);
    }
  }
  return out;
}

std::vector<double> ExpectedJointRewards(const Game& game,
                                         const CorrelationDevice& device) {
  const int n = game.num_players();
  std::vector<double> out(n, 0.0);
  std::vector<double> r(n);
  std::vector<int> all_axes(n);
  std::iota(all_axes.begin(), all_axes.end(), 0);
  JointAction joint(n, 0);
  for (const auto& comp : device.components()) {
    if (comp.weight == 0) continue;
    auto accumulate = [&](double w) {
      game.RewardsInto(joint, r);
      for (int p = 0; p < n; ++p) out[p] += w * r[p];
    };
    if (const auto* pure = std::get_if<JointAction>(&comp.policy)) {
      joint = *pure;
      accumulate(comp.weight);
    } else {
      const auto& profile = std::get<ProductProfile>(comp.policy);
      CheckProfileArity(game, profile);
      WalkSupport(profile, all_axes, 0, comp.weight, joint, accumulate);
    }
  }
  return out;
}

std::vector<double> ExpectedProfileRewards(const Game& game,
                                           const ProductProfile& profile) {
  return ExpectedJointRewards(game, CorrelationDevice::FromProfile(profile));
}

JointAction SampleJoint(const CorrelationDevice& device, RngStream& rng) {
  const int index = rng.NextIndex(device.weights());
  const auto& comp = device.components()[index];
  if (const auto* pure = std::get_if<JointAction>(&comp.policy)) return *pure;
  const auto& profile = std::get<ProductProfile>(comp.policy);
  JointAction joint(profile.num_players());
  for (int p = 0; p < profile.num_players(); ++p) {
    joint[p] = rng.NextIndex(profile[p].probs());
  }
  return joint;
}

}  // namespace brpi
