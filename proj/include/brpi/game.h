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

#ifndef BRPI_GAME_H_
#define BRPI_GAME_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace brpi {

// One Blotto action: coins allocated to each field. Entries are non-negative
// and sum to the coin budget.
using AllocationAction = std::vector<int>;

struct BlottoParams {
  int num_players = 2;
  int coins = 10;
  int fields = 3;
};

// Number of ways to split `coins` over `fields` ordered non-negative parts,
// i.e. binomial(coins + fields - 1, fields - 1). Throws on uint64 overflow.
uint64_t CompositionCount(int coins, int fields);

// All allocations of `coins` over `fields`, lexicographically ascending:
// first [0, ..., 0, coins], last [coins, 0, ..., 0]. Throws "action space too
// large" when the count exceeds `cap`.
std::vector<AllocationAction> EnumerateAllocations(
    int coins, int fields, uint64_t cap = uint64_t{1} << 24);

// Per-player rewards for one joint Blotto profile. Each field goes to the
// unique highest bidder (drawn on a tie for the highest bid). Players tied
// for the most fields won split +1 equally; everyone else splits -1 equally;
// if all players tie, every reward is 0. Rewards sum to 0 unless all tie.
std::vector<double> BlottoRewards(
    const BlottoParams& params,
    std::span<const AllocationAction> profile);

// Declarative description of a game, JSON round-trippable (serialization.h).
struct GameSpec {
  std::string kind;  // "blotto" | "dense" | "builtin"

  // kind == "blotto"
  BlottoParams blotto;

  // kind == "builtin": "rps" | "matching_pennies". Doubles as a display name.
  std::string name;

  // kind == "dense": per-player payoff tensors, flattened row-major with
  // player 0 as the outermost axis.
  std::vector<int> action_counts;
  std::vector<std::vector<double>> tensor;
};

enum class GameBackend { kDense, kLazyBlotto };

struct BuildOptions {
  // Joint sizes up to this get a dense per-player payoff table; larger games
  // evaluate lazily from the Blotto rule.
  uint64_t dense_cap = uint64_t{1} << 26;
  // EnumerateAllocations refuses per-player action spaces beyond this.
  uint64_t action_cap = uint64_t{1} << 24;
  std::optional<GameBackend> backend;  // overrides the automatic choice
  // Lazy backend only: cache profile rewards. Guarded by a mutex, so leave
  // off unless a workload revisits profiles enough to pay for the lock.
  bool memoize = false;
};

// Immutable n-player normal-form game. Cheap to copy (shared payoff storage).
class Game {
 public:
  int num_players() const;
  int num_actions(int player) const;
  uint64_t num_joint_actions() const;
  GameBackend backend() const;
  const std::string& name() const;

  // Exchangeable under any player permutation (same action set for all,
  // permuting seats permutes rewards identically).
  bool symmetric() const;
  double min_reward() const;
  double max_reward() const;

  // Per-player rewards at a pure joint action.
  void RewardsInto(std::span<const int> joint, std::span<double> out) const;
  std::vector<double> Rewards(std::span<const int> joint) const;
  double Reward(int player, std::span<const int> joint) const;

  // Allocation table when this is a Blotto game, else nullptr.
  const std::vector<AllocationAction>* allocations() const;

  // Flattened payoff tensor for `player` when the backend is dense, else
  // nullptr. Layout matches GameSpec::tensor.
  const std::vector<double>* dense_tensor(int player) const;

  // Strides into the flattened tensor: flat = sum_i joint[i] * stride(i).
  uint64_t stride(int player) const;

  struct Impl;
  explicit Game(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<const Impl> impl_;
};

// Validates the spec and constructs the game. Blotto games pick the dense
// backend when the joint size fits options.dense_cap, lazy otherwise. Throws
// std::invalid_argument on malformed specs.
Game BuildGame(const GameSpec& spec, const BuildOptions& options = {});

// Conveniences for the common cases.
Game BuildBlotto(const BlottoParams& params, const BuildOptions& options = {});
Game BuildBuiltin(const std::string& name);

struct TensorStats {
  std::vector<int> action_counts;
  uint64_t num_joint_actions = 0;
  // Storage a dense build would need (num players * joint * sizeof(double)).
  uint64_t dense_bytes = 0;
};

TensorStats PayoffTensorStats(const Game& game);

}  // namespace brpi

#endif  // BRPI_GAME_H_
