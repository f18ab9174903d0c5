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

#include "brpi/game.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace brpi {
namespace {

uint64_t CheckedMul(uint64_t a, uint64_t b, const char* what) {
  if (a != 0 && b > std::numeric_limits<uint64_t>::max() / a) {
    throw std::overflow_error(what);
  }
  return a * b;
}

}  // namespace

uint64_t CompositionCount(int coins, int fields) {
  if (coins < 0 || fields < 1) {
    throw std::invalid_argument("CompositionCount: need coins >= 0, fields >= 1");
  }
  // binomial(coins + fields - 1, fields - 1), product form; every partial
  // product result * (n - k + i) is divisible by i.
  const uint64_t n = static_cast<uint64_t>(coins) + fields - 1;
  const uint64_t k = std::min<uint64_t>(fields - 1, n - (fields - 1));
  uint64_t result = 1;
  for (uint64_t i = 1; i <= k; ++i) {
    result = CheckedMul(result, n - k + i, "CompositionCount: overflow");
    result /= i;
  }
  return result;
}

std::vector<AllocationAction> EnumerateAllocations(int coins, int fields,
                                                   uint64_t cap) {
  const uint64_t count = CompositionCount(coins, fields);
  if (count > cap) {
    throw std::invalid_argument("EnumerateAllocations: action space too large");
  }
  std::vector<AllocationAction> out;
  out.reserve(count);
  AllocationAction current(fields, 0);
  // Depth-first over prefixes yields lexicographic ascending order.
  auto recurse = [&](auto&& self, int field, int remaining) -> void {
    if (field == fields - 1) {
      current[field] = remaining;
      out.push_back(current);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      current[field] = v;
      self(self, field + 1, remaining - v);
    }
  };
  recurse(recurse, 0, coins);
  return out;
}

std::vector<double> BlottoRewards(const BlottoParams& params,
                                  std::span<const AllocationAction> profile) {
  const int n = params.num_players;
  if (static_cast<int>(profile.size()) != n) {
    throw std::invalid_argument("BlottoRewards: profile arity mismatch");
  }
  std::vector<int> fields_won(n, 0);
  for (int field = 0; field < params.fields; ++field) {
    int best = -1;
    int best_player = -1;
    bool drawn = false;
    for (int p = 0; p < n; ++p) {
      const int bid = profile[p][field];
      if (bid > best) {
        best = bid;
        best_player = p;
        drawn = false;
      } else if (bid == best) {
        drawn = true;
      }
    }
    if (!drawn) ++fields_won[best_player];
  }
  const int most = *std::max_element(fields_won.begin(), fields_won.end());
  const int num_winners =
      static_cast<int>(std::count(fields_won.begin(), fields_won.end(), most));
  std::vector<double> rewards(n, 0.0);
  if (num_winners == n) return rewards;
  for (int p = 0; p < n; ++p) {
    rewards[p] = fields_won[p] == most ? 1.0 / num_winners
                                       : -1.0 / (n - num_winners);
  }
  return rewards;
}

// -- Game internals ----------------------------------------------------------

struct Game::Impl {
  std::string name;
  GameBackend backend = GameBackend::kDense;
  int num_players = 0;
  std::vector<int> action_counts;
  std::vector<uint64_t> strides;
  uint64_t num_joint_actions = 0;
  bool symmetric = false;
  double min_reward = 0;
  double max_reward = 0;

  std::vector<std::vector<double>> tensors;  // dense backend

  bool is_blotto = false;
  BlottoParams blotto;
  std::vector<AllocationAction> allocation_table;

  bool memoize = false;
  mutable std::mutex memo_mutex;
  mutable std::unordered_map<uint64_t, std::vector<double>> memo;

  uint64_t FlatIndex(std::span<const int> joint) const {
    uint64_t flat = 0;
    for (int p = 0; p < num_players; ++p) {
      const int a = joint[p];
      if (a < 0 || a >= action_counts[p]) {
        throw std::out_of_range("Game: action index out of range");
      }
      flat += static_cast<uint64_t>(a) * strides[p];
    }
    return flat;
  }

  void LazyBlottoRewards(std::span<const int> joint,
                         std::span<double> out) const {
    std::vector<AllocationAction> profile(num_players);
    for (int p = 0; p < num_players; ++p) profile[p] = allocation_table[joint[p]];
    const std::vector<double> r = BlottoRewards(blotto, profile);
    std::copy(r.begin(), r.end(), out.begin());
  }
};

int Game::num_players() const { return impl_->num_players; }

int Game::num_actions(int player) const {
  return impl_->action_counts.at(player);
}

uint64_t Game::num_joint_actions() const { return impl_->num_joint_actions; }

GameBackend Game::backend() const { return impl_->backend; }

const std::string& Game::name() const { return impl_->name; }

bool Game::symmetric() const { return impl_->symmetric; }

double Game::min_reward() const { return impl_->min_reward; }

double Game::max_reward() const { return impl_->max_reward; }

void Game::RewardsInto(std::span<const int> joint, std::span<double> out) const {
  const Impl& impl = *impl_;
  if (static_cast<int>(joint.size()) != impl.num_players ||
      static_cast<int>(out.size()) < impl.num_players) {
    throw std::invalid_argument("Game::RewardsInto: arity mismatch");
  }
  const uint64_t flat = impl.FlatIndex(joint);
  if (impl.backend == GameBackend::kDense) {
    for (int p = 0; p < impl.num_players; ++p) out[p] = impl.tensors[p][flat];
    return;
  }
  if (impl.memoize) {
    std::lock_guard<std::mutex> lock(impl.memo_mutex);
    auto it = impl.memo.find(flat);
    if (it == impl.memo.end()) {
      std::vector<double> r(impl.num_players);
      impl.LazyBlottoRewards(joint, r);
      it = impl.memo.emplace(flat, std::move(r)).first;
    }
    std::copy(it->second.begin(), it->second.end(), out.begin());
    return;
  }
  impl.LazyBlottoRewards(joint, out);
}

std::vector<double> Game::Rewards(std::span<const int> joint) const {
  std::vector<double> out(impl_->num_players);
  RewardsInto(joint, out);
  return out;
}

double Game::Reward(int player, std::span<const int> joint) const {
  const Impl& impl = *impl_;
  if (impl.backend == GameBackend::kDense) {
    return impl.tensors.at(player)[impl.FlatIndex(joint)];
  }
  std::vector<double> out(impl.num_players);
  RewardsInto(joint, out);
  return out.at(player);
}

const std::vector<AllocationAction>* Game::allocations() const {
  return impl_->is_blotto ? &impl_->allocation_table : nullptr;
}

const std::vector<double>* Game::dense_tensor(int player) const {
  if (impl_->backend != GameBackend::kDense) return nullptr;
  return &impl_->tensors.at(player);
}

uint64_t Game::stride(int player) const { return impl_->strides.at(player); }

// -- Construction ------------------------------------------------------------

namespace {

std::vector<uint64_t> ComputeStrides(const std::vector<int>& counts) {
  std::vector<uint64_t> strides(counts.size());
  uint64_t s = 1;
  for (int p = static_cast<int>(counts.size()) - 1; p >= 0; --p) {
    strides[p] = s;
    s = CheckedMul(s, counts[p], "Game: joint action space overflows");
  }
  return strides;
}

uint64_t JointCount(const std::vector<int>& counts) {
  uint64_t joint = 1;
  for (int c : counts) joint = CheckedMul(joint, c, "Game: joint space overflow");
  return joint;
}

// Exchangeability under adjacent transpositions (they generate the full
// permutation group). Only called for small dense games.
bool DenseSymmetric(const std::vector<int>& counts,
                    const std::vector<std::vector<double>>& tensors,
                    const std::vector<uint64_t>& strides) {
  const int n = static_cast<int>(counts.size());
  for (int p = 1; p < n; ++p) {
    if (counts[p] != counts[0]) return false;
  }
  const uint64_t joint = JointCount(counts);
  std::vector<int> a(n);
  for (uint64_t flat = 0; flat < joint; ++flat) {
    uint64_t rem = flat;
    for (int p = 0; p < n; ++p) {
      a[p] = static_cast<int>(rem / strides[p]);
      rem %= strides[p];
    }
    for (int k = 0; k + 1 < n; ++k) {
      const uint64_t swapped = flat +
          (static_cast<uint64_t>(a[k + 1]) - a[k]) * strides[k] +
          (static_cast<uint64_t>(a[k]) - a[k + 1]) * strides[k + 1];
      for (int i = 0; i < n; ++i) {
        const int si = i == k ? k + 1 : i == k + 1 ? k : i;
        if (tensors[si][swapped] != tensors[i][flat]) return false;
      }
    }
  }
  return true;
}

constexpr uint64_t kSymmetryCheckCap = uint64_t{1} << 20;

std::shared_ptr<Game::Impl> MakeDenseImpl(const std::string& name,
                                          std::vector<int> counts,
                                          std::vector<std::vector<double>> tensors) {
  auto impl = std::make_shared<Game::Impl>();
  impl->name = name;
  impl->backend = GameBackend::kDense;
  impl->num_players = static_cast<int>(counts.size());
  impl->strides = ComputeStrides(counts);
  impl->num_joint_actions = JointCount(counts);
  impl->action_counts = std::move(counts);
  impl->tensors = std::move(tensors);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& t : impl->tensors) {
    for (double v : t) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("Game: payoff entries must be finite");
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  impl->min_reward = lo;
  impl->max_reward = hi;
  impl->symmetric =
      impl->num_joint_actions <= kSymmetryCheckCap &&
      DenseSymmetric(impl->action_counts, impl->tensors, impl->strides);
  return impl;
}

std::shared_ptr<Game::Impl> MakeBlottoImpl(const BlottoParams& params,
                                           const BuildOptions& options) {
  if (params.num_players < 2) {
    throw std::invalid_argument("Blotto: num_players must be >= 2");
  }
  if (params.coins < 1 || params.fields < 1) {
    throw std::invalid_argument("Blotto: coins and fields must be >= 1");
  }
  auto impl = std::make_shared<Game::Impl>();
  impl->is_blotto = true;
  impl->blotto = params;
  impl->allocation_table =
      EnumerateAllocations(params.coins, params.fields, options.action_cap);
  const int num_actions = static_cast<int>(impl->allocation_table.size());
  impl->num_players = params.num_players;
  impl->action_counts.assign(params.num_players, num_actions);
  impl->strides = ComputeStrides(impl->action_counts);
  impl->num_joint_actions = JointCount(impl->action_counts);
  impl->name = "blotto_" + std::to_string(params.num_players) + "p_" +
               std::to_string(params.coins) + "c_" +
               std::to_string(params.fields) + "f";
  impl->symmetric = true;  // the rule never looks at seat identity
  impl->min_reward = -1.0;
  impl->max_reward = 1.0;

  const bool dense = options.backend
                         ? *options.backend == GameBackend::kDense
                         : impl->num_joint_actions <= options.dense_cap;
  if (!dense) {
    impl->backend = GameBackend::kLazyBlotto;
    impl->memoize = options.memoize;
    return impl;
  }
  impl->backend = GameBackend::kDense;
  impl->tensors.assign(params.num_players,
                       std::vector<double>(impl->num_joint_actions));
  std::vector<int> joint(params.num_players, 0);
  std::vector<AllocationAction> profile(params.num_players,
                                        impl->allocation_table[0]);
  std::vector<double> r;
  for (uint64_t flat = 0; flat < impl->num_joint_actions; ++flat) {
    r = BlottoRewards(params, profile);
    for (int p = 0; p < params.num_players; ++p) impl->tensors[p][flat] = r[p];
    // Odometer increment, last player fastest (matches stride layout).
    for (int p = params.num_players - 1; p >= 0; --p) {
      if (++joint[p] < num_actions) {
        profile[p] = impl->allocation_table[joint[p]];
        break;
      }
      joint[p] = 0;
      profile[p] = impl->allocation_table[0];
    }
  }
  return impl;
}

std::shared_ptr<Game::Impl> MakeBuiltinImpl(const std::string& name) {
  if (name == "rps") {
    // Row beats column cyclically: rock < paper < scissors < rock.
    std::vector<double> r0 = {0, -1, 1, 1, 0, -1, -1, 1, 0};
    std::vector<double> r1(9);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) r1[a * 3 + b] = r0[b * 3 + a];
    return MakeDenseImpl("rps", {3, 3}, {std::move(r0), std::move(r1)});
  }
  if (name == "matching_pennies") {
    // Player 0 wins on a match, actions ordered (heads, tails).
    std::vector<double> r0 = {1, -1, -1, 1};
    std::vector<double> r1 = {-1, 1, 1, -1};
    return MakeDenseImpl("matching_pennies", {2, 2},
                         {std::move(r0), std::move(r1)});
  }
  throw std::invalid_argument("BuildGame: unknown builtin game: " + name);
}

}  // namespace

Game BuildGame(const GameSpec& spec, const BuildOptions& options) {
  if (spec.kind == "blotto") return Game(MakeBlottoImpl(spec.blotto, options));
  if (spec.kind == "builtin") return Game(MakeBuiltinImpl(spec.name));
  if (spec.kind == "dense") {
    if (spec.action_counts.empty() || spec.action_counts.size() < 2) {
      throw std::invalid_argument("BuildGame: dense game needs >= 2 players");
    }
    for (int c : spec.action_counts) {
      if (c < 1) throw std::invalid_argument("BuildGame: action_counts must be >= 1");
    }
    if (spec.tensor.size() != spec.action_counts.size()) {
      throw std::invalid_argument(
          "BuildGame: dense game needs one payoff tensor per player");
    }
    const uint64_t joint = JointCount(spec.action_counts);
    for (const auto& t : spec.tensor) {
      if (t.size() != joint) {
        throw std::invalid_argument("BuildGame: tensor size must equal joint size");
      }
    }
    return Game(MakeDenseImpl(spec.name.empty() ? "dense" : spec.name,
                              spec.action_counts, spec.tensor));
  }
  throw std::invalid_argument("BuildGame: unknown game kind: " + spec.kind);
}

Game BuildBlotto(const BlottoParams& params, const BuildOptions& options) {
  return Game(MakeBlottoImpl(params, options));
}

Game BuildBuiltin(const std::string& name) {
  return Game(MakeBuiltinImpl(name));
}

TensorStats PayoffTensorStats(const Game& game) {
  TensorStats stats;
  stats.action_counts.reserve(game.num_players());
  for (int p = 0; p < game.num_players(); ++p) {
    stats.action_counts.push_back(game.num_actions(p));
  }
  stats.num_joint_actions = game.num_joint_actions();
  stats.dense_bytes = CheckedMul(
      CheckedMul(stats.num_joint_actions, game.num_players(),
                 "TensorStats: overflow"),
      sizeof(double), "TensorStats: overflow");
  return stats;
}

}  // namespace brpi
