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

#include "brpi/metagame.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <future>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "brpi/metrics.h"
#include "brpi/rng.h"

namespace brpi {
namespace {

constexpr uint64_t kMetagameTag = 0x4d47;  // per-cell table streams
constexpr uint64_t kExploitTag = 0x4558;   // per-episode exploit streams

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

int PureAction(const MixedStrategy& strategy) {
  for (int a = 0; a < strategy.num_actions(); ++a) {
    if (strategy.prob(a) > 0.5) return a;
  }
  throw std::logic_error("PureAction: response was not pure");
}

int EnvWorkers() {
  const char* raw = std::getenv("BRPI_WORKERS");
  if (raw == nullptr) return 1;
  int workers = std::atoi(raw);
  return workers < 1 ? 1 : workers;
}

void ValidateCheckpoints(const Game& game,
                         std::span<const MixedStrategy> checkpoints) {
  if (checkpoints.empty()) {
    throw std::invalid_argument("checkpoint list must not be empty");
  }
  for (int p = 1; p < game.num_players(); ++p) {
    if (game.num_actions(p) != game.num_actions(0)) {
      throw std::invalid_argument(
          "checkpoints are seated at every position, which requires equal "
          "action counts across players");
    }
  }
  for (const MixedStrategy& s : checkpoints) {
    if (s.num_actions() != game.num_actions(0)) {
      throw std::invalid_argument(
          "checkpoint action count does not match the game");
    }
  }
}

// Expected reward of `row` in seat 0 while every other seat plays `col`.
double ExactCell(const Game& game, const MixedStrategy& row,
                 const MixedStrategy& col) {
  std::vector<MixedStrategy> seats;
  seats.reserve(game.num_players());
  seats.push_back(row);
  for (int p = 1; p < game.num_players(); ++p) seats.push_back(col);
  CorrelationDevice device =
      CorrelationDevice::FromProfile(ProductProfile{std::move(seats)});
  std::vector<double> vec = ExpectedRewardVector(game, 0, device);
  return Dot(row.probs(), vec);
}

CellEstimate MonteCarloCell(const Game& game,
                            std::span<const MixedStrategy> checkpoints, int r,
                            int c, const OneVsRestOptions& options) {
  RngStream rng =
      DeriveStream(options.seed, {kMetagameTag, static_cast<uint64_t>(r),
                                  static_cast<uint64_t>(c)});
  const int n = game.num_players();
  const double lo = game.min_reward();
  const double hi = game.max_reward();
  double sum = 0;
  JointAction joint(n);
  for (int e = 0; e < options.episodes; ++e) {
    int seat = rng.NextBelow(n);
    for (int p = 0; p < n; ++p) {
      joint[p] = rng.NextIndex(checkpoints[p == seat ? r : c].probs());
    }
    sum += game.Reward(seat, joint);
  }
  CellEstimate cell;
  cell.value = sum / options.episodes;
  if (hi > lo) {
    double successes = (sum - options.episodes * lo) / (hi - lo);
    successes = std::clamp(successes, 0.0, 1.0 * options.episodes);
    Interval w = WilsonInterval(successes, options.episodes,
                                options.confidence);
    cell.interval = Interval{lo + (hi - lo) * w.lower, lo + (hi - lo) * w.upper};
  } else {
    cell.interval = Interval{cell.value, cell.value};
  }
  return cell;
}

// Meta game over the first k checkpoints: each seat picks a checkpoint and
// plays its strategy in the base game.
Game BuildCheckpointMetaGame(const Game& game,
                             std::span<const MixedStrategy> checkpoints,
                             int k) {
  const int n = game.num_players();
  uint64_t joint = 1;
  for (int i = 0; i < n; ++i) {
    joint *= static_cast<uint64_t>(k);
    if (joint > (uint64_t{1} << 20)) {
      throw std::invalid_argument("NashLeague: meta game too large");
    }
  }
  GameSpec spec;
  spec.kind = "dense";
  spec.name = "meta_" + game.name();
  spec.action_counts.assign(n, k);
  spec.tensor.assign(n, std::vector<double>(joint));
  std::vector<int> m(n, 0);
  for (uint64_t flat = 0; flat < joint; ++flat) {
    std::vector<MixedStrategy> seats;
    seats.reserve(n);
    for (int i = 0; i < n; ++i) seats.push_back(checkpoints[m[i]]);
    std::vector<double> values =
        ExpectedProfileRewards(game, ProductProfile{std::move(seats)});
    for (int i = 0; i < n; ++i) spec.tensor[i][flat] = values[i];
    for (int i = n - 1; i >= 0; --i) {
      if (++m[i] < k) break;
      m[i] = 0;
    }
  }
  return BuildGame(spec);
}

// Shared league driver: `build` returns the prefix-k meta game.
LeagueResult SolveLeague(int num_checkpoints,
                         const std::function<Game(int)>& build,
                         const QreConfig& qre) {
  LeagueResult result;
  for (int k = 1; k <= num_checkpoints; ++k) {
    Game meta = build(k);
    QreResult solved = QreSolve(meta, qre);
    if (!solved.converged) {
      throw std::runtime_error(
          "NashLeague: equilibrium solve did not converge at prefix " +
          std::to_string(k));
    }
    LeagueEntry entry;
    entry.prefix = k;
    entry.objective = solved.objective;
    entry.weights.assign(k, 0.0);
    int n = meta.num_players();
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < k; ++c) {
        entry.weights[c] += solved.profile[i].prob(c) / n;
      }
    }
    result.entries.push_back(std::move(entry));
  }
  return result;
}

}  // namespace

double InverseNormalCdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("InverseNormalCdf: p must be in (0, 1)");
  }
  // Acklam's rational approximation, then one Halley refinement against the
  // exact CDF via erfc.
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - plow) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    double q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  double err = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  double u = err * std::sqrt(2 * std::numbers::pi) * std::exp(x * x / 2);
  return x - u / (1 + x * u / 2);
}

Interval WilsonInterval(double successes, int trials, double confidence) {
  if (trials < 1) {
    throw std::invalid_argument("WilsonInterval: trials must be >= 1");
  }
  if (!(successes >= 0 && successes <= trials)) {
    throw std::invalid_argument(
        "WilsonInterval: successes must lie in [0, trials]");
  }
  if (!(confidence > 0 && confidence < 1)) {
    throw std::invalid_argument("WilsonInterval: confidence must be in (0, 1)");
  }
  const double n = trials;
  const double p = successes / n;
  const double z = InverseNormalCdf(1 - (1 - confidence) / 2);
  const double z2 = z * z;
  const double denom = 2 * (n + z2);
  Interval out;
  if (successes <= 0) {
    out.lower = 0;
  } else {
    double arg = z2 - 2 - 1 / n + 4 * p * (n * (1 - p) + 1);
    out.lower = (2 * n * p + z2 - 1 - z * std::sqrt(std::max(0.0, arg))) /
                denom;
  }
  if (successes >= n) {
    out.upper = 1;
  } else {
    double arg = z2 + 2 - 1 / n + 4 * p * (n * (1 - p) - 1);
    out.upper = (2 * n * p + z2 + 1 + z * std::sqrt(std::max(0.0, arg))) /
                denom;
  }
  out.lower = std::clamp(out.lower, 0.0, p);
  out.upper = std::clamp(out.upper, p, 1.0);
  return out;
}

MetaGameTable BuildOneVsRestTable(const Game& game,
                                  std::span<const MixedStrategy> checkpoints,
                                  const OneVsRestOptions& options) {
  ValidateCheckpoints(game, checkpoints);
  if (options.episodes < 1 && options.mode == TableMode::kMonteCarlo) {
    throw std::invalid_argument("BuildOneVsRestTable: episodes must be >= 1");
  }
  if (options.mode == TableMode::kExact && !game.symmetric()) {
    throw std::invalid_argument(
        "BuildOneVsRestTable: exact mode seats the row policy at position 0, "
        "which requires a symmetric game");
  }
  const int k = static_cast<int>(checkpoints.size());
  MetaGameTable table;
  table.mode = options.mode;
  table.cells.assign(k, std::vector<CellEstimate>(k));
  if (options.mode == TableMode::kMonteCarlo) {
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < k; ++c) {
        table.cells[r][c] = MonteCarloCell(game, checkpoints, r, c, options);
      }
    }
    return table;
  }
  int workers = EnvWorkers();
  if (workers <= 1 || k == 1) {
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < k; ++c) {
        table.cells[r][c].value = ExactCell(game, checkpoints[r],
                                            checkpoints[c]);
      }
    }
    return table;
  }
  std::vector<std::future<std::vector<double>>> rows;
  rows.reserve(k);
  for (int r = 0; r < k; ++r) {
    rows.push_back(std::async(std::launch::async, [&, r] {
      std::vector<double> row(k);
      for (int c = 0; c < k; ++c) {
        row[c] = ExactCell(game, checkpoints[r], checkpoints[c]);
      }
      return row;
    }));
  }
  for (int r = 0; r < k; ++r) {
    std::vector<double> row = rows[r].get();
    for (int c = 0; c < k; ++c) table.cells[r][c].value = row[c];
  }
  return table;
}

LeagueResult NashLeague(const Game& game,
                        std::span<const MixedStrategy> checkpoints,
                        const QreConfig& qre) {
  ValidateCheckpoints(game, checkpoints);
  return SolveLeague(
      static_cast<int>(checkpoints.size()),
      [&](int k) { return BuildCheckpointMetaGame(game, checkpoints, k); },
      qre);
}

LeagueResult NashLeagueFromMatrix(
    const std::vector<std::vector<double>>& payoff, const QreConfig& qre) {
  const int k = static_cast<int>(payoff.size());
  if (k == 0) {
    throw std::invalid_argument("NashLeagueFromMatrix: matrix must not be empty");
  }
  for (const auto& row : payoff) {
    if (static_cast<int>(row.size()) != k) {
      throw std::invalid_argument("NashLeagueFromMatrix: matrix must be square");
    }
  }
  return SolveLeague(
      k,
      [&](int prefix) {
        GameSpec spec;
        spec.kind = "dense";
        spec.name = "league_matrix";
        spec.action_counts = {prefix, prefix};
        spec.tensor.assign(2, std::vector<double>(prefix * prefix));
        for (int r = 0; r < prefix; ++r) {
          for (int c = 0; c < prefix; ++c) {
            spec.tensor[0][r * prefix + c] = payoff[r][c];
            spec.tensor[1][r * prefix + c] = payoff[c][r];
          }
        }
        return BuildGame(spec);
      },
      qre);
}

ExploitReport SbrExploitLowerBound(const Game& game,
                                   const ProductProfile& target,
                                   const SBRConfig& cfg, int episodes,
                                   uint64_t seed, double confidence) {
  const int n = game.num_players();
  if (target.num_players() != n) {
    throw std::invalid_argument(
        "SbrExploitLowerBound: target does not match the game");
  }
  if (episodes < 1) {
    throw std::invalid_argument("SbrExploitLowerBound: episodes must be >= 1");
  }
  CorrelationDevice base = CorrelationDevice::FromProfile(target);
  const double lo = game.min_reward() - game.max_reward();
  const double hi = game.max_reward() - game.min_reward();
  ExploitReport report;
  for (int i = 0; i < n; ++i) {
    std::vector<double> vec = ExpectedRewardVector(game, i, base);
    double own = Dot(target[i].probs(), vec);
    double best = *std::max_element(vec.begin(), vec.end());
    MixedStrategy uniform = MixedStrategy::Uniform(game.num_actions(i));
    double sum = 0;
    for (int e = 0; e < episodes; ++e) {
      RngStream rng =
          DeriveStream(seed, {kExploitTag, static_cast<uint64_t>(i),
                              static_cast<uint64_t>(e)});
      ResponseResult res =
          SampledBestResponse(game, i, base, uniform, cfg, rng);
      // Credit the exact expectation of the chosen action, not its sampled
      // score, so no margin can exceed the exact best-response gain.
      sum += vec[PureAction(res.strategy)] - own;
    }
    double mean = sum / episodes;
    report.per_player_margin.push_back(mean);
    report.exact_gain.push_back(best - own);
    if (hi > lo) {
      double successes = (sum - episodes * lo) / (hi - lo);
      successes = std::clamp(successes, 0.0, 1.0 * episodes);
      Interval w = WilsonInterval(successes, episodes, confidence);
      report.per_player_interval.push_back(
          Interval{lo + (hi - lo) * w.lower, lo + (hi - lo) * w.upper});
    } else {
      report.per_player_interval.push_back(Interval{mean, mean});
    }
    report.aggregate += std::max(0.0, mean);
    report.exact_nashconv += best - own;
  }
  return report;
}

}  // namespace brpi
