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

#ifndef BRPI_METAGAME_H_
#define BRPI_METAGAME_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "brpi/game.h"
#include "brpi/metrics.h"
#include "brpi/responses.h"
#include "brpi/strategy.h"

namespace brpi {

struct Interval {
  double lower = 0;
  double upper = 0;
};

// Inverse standard normal CDF. Rational initial guess refined by one Halley
// step against erfc, accurate to ~1e-13 over (0, 1). Throws std::domain_error
// outside the open interval.
double InverseNormalCdf(double p);

// Wilson score interval with continuity correction for a binomial mean.
// `successes` may be fractional: scores rescaled into [0, 1] sum to a
// fractional success count and the interval still covers conservatively.
// Degenerate edges pin exactly: successes == 0 gives lower == 0 and
// successes == trials gives upper == 1.
Interval WilsonInterval(double successes, int trials,
                        double confidence = 0.95);

struct CellEstimate {
  double value = 0;  // mean reward of the row policy
  // Monte-Carlo tables only, on the raw reward scale.
  std::optional<Interval> interval;
};

enum class TableMode { kExact, kMonteCarlo };

struct OneVsRestOptions {
  TableMode mode = TableMode::kExact;
  int episodes = 1000;  // per cell, monte carlo only
  uint64_t seed = 0;
  double confidence = 0.95;
};

struct MetaGameTable {
  // cells[r][c]: one seat plays checkpoint r while every other seat plays
  // checkpoint c.
  std::vector<std::vector<CellEstimate>> cells;
  TableMode mode = TableMode::kExact;
};

// Round-robin table over checkpoint strategies. Exact mode contracts the
// payoff tensor with the row policy in seat 0 and therefore requires a
// symmetric game; Monte-Carlo mode seats the row policy uniformly at random
// each episode and attaches a Wilson interval per cell. Cell streams are
// derived from (seed, row, col), so cells are reproducible in isolation.
// Exact cells fan out over BRPI_WORKERS threads when that is set above 1.
MetaGameTable BuildOneVsRestTable(const Game& game,
                                  std::span<const MixedStrategy> checkpoints,
                                  const OneVsRestOptions& options = {});

struct LeagueEntry {
  int prefix = 0;  // how many checkpoints this league admits
  // Symmetrized equilibrium mass per admitted checkpoint (seat marginals
  // averaged).
  std::vector<double> weights;
  double objective = 0;  // gap value at the solved point
};

struct LeagueResult {
  std::vector<LeagueEntry> entries;  // prefix = 1..num_checkpoints
};

// For each prefix k, builds the meta-game whose actions are the first k
// checkpoints (every seat draws from the same set, so all players need equal
// action counts), solves it with the quantal-response solver at the given
// config, and records the symmetrized mixture. Throws std::runtime_error if
// any solve fails to converge rather than returning a half-solved league.
LeagueResult NashLeague(const Game& game,
                        std::span<const MixedStrategy> checkpoints,
                        const QreConfig& qre);

// Synthetic league over an explicit two-seat score matrix: payoff[r][c] is
// the row checkpoint's score against the column one, seat two sees the
// transpose.
LeagueResult NashLeagueFromMatrix(
    const std::vector<std::vector<double>>& payoff, const QreConfig& qre);

struct ExploitReport {
  // Mean sampled-response gain per exploiting seat: the exact expected
  // reward of each episode's sampled response minus the seat's expected
  // reward under the target profile. Never exceeds the exact best-response
  // gain for that seat.
  std::vector<double> per_player_margin;
  std::vector<Interval> per_player_interval;  // Wilson, raw margin scale
  std::vector<double> exact_gain;             // exact best-response gains
  double aggregate = 0;       // sum of clipped mean margins
  double exact_nashconv = 0;  // sum of exact gains, the upper reference
};

// Lower-bounds the exploitability of a product policy with sampled best
// responses: per episode one seat runs a sampled response (bases drawn from
// the target profile, candidates uniform) and is credited the exact expected
// reward of the action it picked. Episode streams derive from
// (seed, player, episode). cfg's candidate and base sources are ignored.
ExploitReport SbrExploitLowerBound(const Game& game,
                                   const ProductProfile& target,
                                   const SBRConfig& cfg, int episodes,
                                   uint64_t seed, double confidence = 0.95);

}  // namespace brpi

#endif  // BRPI_METAGAME_H_
