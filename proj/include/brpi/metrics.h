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

#ifndef BRPI_METRICS_H_
#define BRPI_METRICS_H_

#include <span>
#include <vector>

#include "brpi/game.h"
#include "brpi/strategy.h"

namespace brpi {

// How much each player gains by deviating from a policy to their best fixed
// action. per_player_gain is unclipped (a correlated policy can beat every
// fixed deviation, making the gain negative); aggregate clips each player's
// contribution at zero.
struct DeviationReport {
  std::vector<double> per_player_gain;
  std::vector<int> best_deviation;
  double aggregate = 0;
};

// Sum over players of (best-response value - current value) against the
// other players' independent strategies. Per-player gains are >= 0 here, so
// aggregate equals their plain sum; 0 iff the profile is a Nash equilibrium.
DeviationReport NashConv(const Game& game, const ProductProfile& profile);

// Distance from the set of coarse correlated equilibria: for each player,
// the gain of their best fixed deviation over following the device's
// recommendations. 0 iff the device is a CCE.
DeviationReport CCEDist(const Game& game, const CorrelationDevice& device);

// Total (not averaged) external regret of `player` over a play sequence:
// max_a sum_t r(a, pi_t) - sum_t r(pi_t). The per-player CCEDist gain of the
// uniform empirical device over the same sequence equals this divided by T.
double ExternalRegret(const Game& game,
                      std::span<const ProductProfile> play_sequence,
                      int player);

// Shannon entropy in nats; 0 log 0 = 0.
double Entropy(const MixedStrategy& strategy);

struct QreConfig {
  // Temperature of the entropy regularizer. tau = 0 solves for Nash; tau > 0
  // for the logit quantal response equilibrium at inverse temperature
  // beta = 1/tau.
  double tau = 0;
  double learning_rate = 0.1;
  int max_iters = 100000;
  // Convergence on the projected-gradient-mapping residual (max norm of
  // (x - Proj(x - lr*grad))/lr at the initial learning rate), or on the
  // objective reaching 0 (up to 1e-12), whichever happens first.
  double gradient_tolerance = 1e-8;
};

struct QreResult {
  ProductProfile profile;
  double objective = 0;
  double residual = 0;
  int iterations = 0;
  bool converged = false;
};

// Objective and gradient of the smoothed exploitability
//   sum_i [ s_i(x) - r_i(x) - tau h(x_i) ],
// where s_i is the entropy-smoothed best-response value (tau = 0: the plain
// max). Zero exactly at a QRE (tau > 0) or Nash (tau = 0). Strategies are
// raw vectors: the multilinear extension is evaluated as-is, so finite
// difference probes may step off the simplex.
struct QreEval {
  double objective = 0;
  std::vector<std::vector<double>> gradient;
};
double QreObjective(const Game& game,
                    const std::vector<std::vector<double>>& strategies,
                    double tau);
QreEval QreEvaluate(const Game& game,
                    const std::vector<std::vector<double>>& strategies,
                    double tau);

// Projected gradient descent on the objective above, from the uniform
// profile, with halving backtracking. Non-convergence is reported through
// QreResult (converged = false, final residual), never silently dropped.
QreResult QreSolve(const Game& game, const QreConfig& config = {});

// Euclidean projection onto the probability simplex.
std::vector<double> ProjectToSimplex(std::span<const double> v);

}  // namespace brpi

#endif  // BRPI_METRICS_H_
