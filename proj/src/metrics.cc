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

#include "brpi/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace brpi {

DeviationReport NashConv(const Game& game, const ProductProfile& profile) {
  const auto device = CorrelationDevice::FromProfile(profile);
  DeviationReport report;
  report.per_player_gain.resize(game.num_players());
  report.best_deviation.resize(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    const std::vector<double> values = ExpectedRewardVector(game, i, device);
    int best = 0;
    double value = 0;
    for (int a = 0; a < static_cast<int>(values.size()); ++a) {
      if (values[a] > values[best]) best = a;
      value += profile[i].prob(a) * values[a];
    }
    report.per_player_gain[i] = values[best] - value;
    report.best_deviation[i] = best;
    report.aggregate += std::max(0.0, report.per_player_gain[i]);
  }
  return report;
}

DeviationReport CCEDist(const Game& game, const CorrelationDevice& device) {
  DeviationReport report;
  report.per_player_gain.resize(game.num_players());
  report.best_deviation.resize(game.num_players());
  const std::vector<double> current = ExpectedJointRewards(game, device);
  for (int i = 0; i < game.num_players(); ++i) {
    const std::vector<double> values = ExpectedRewardVector(game, i, device);
    const int best = static_cast<int>(
        std::max_element(values.begin(), values.end()) - values.begin());
    report.per_player_gain[i] = values[best] - current[i];
    report.best_deviation[i] = best;
    report.aggregate += std::max(0.0, report.per_player_gain[i]);
  }
  return report;
}

double ExternalRegret(const Game& game,
                      std::span<const ProductProfile> play_sequence,
                      int player) {
  if (play_sequence.empty()) {
    throw std::invalid_argument("ExternalRegret: empty play sequence");
  }
  std::vector<double> cumulative(game.num_actions(player), 0.0);
  double earned = 0;
  for (const ProductProfile& profile : play_sequence) {
    const auto device = CorrelationDevice::FromProfile(profile);
    const std::vector<double> values =
        ExpectedRewardVector(game, player, device);
    for (int a = 0; a < static_cast<int>(values.size()); ++a) {
      cumulative[a] += values[a];
      earned += profile[player].prob(a) * values[a];
    }
  }
  return *std::max_element(cumulative.begin(), cumulative.end()) - earned;
}

double Entropy(const MixedStrategy& strategy) {
  double h = 0;
  for (double p : strategy.probs()) {
    if (p > 0) h -= p * std::log(p);
  }
  return h;
}

// -- QRE ----------------------------------------------------------------------

namespace {

struct RawEval {
  // reward_vector[i][a]: E[r_i | i plays a, others follow x].
  std::vector<std::vector<double>> reward_vector;
  // pair_value[i][j][b * |A_i| + a]: E[r_i | i plays a, j plays b, rest x].
  // Only filled when with_pairs is set; i == j slots stay empty.
  std::vector<std::vector<std::vector<double>>> pair_value;
};

// One pass over the joint action space, accumulating single- and (optionally)
// double-exclusion contractions of every player's payoff against the raw
// strategy vectors. Direct products, no divisions, so zero entries are safe.
RawEval Contract(const Game& game,
                 const std::vector<std::vector<double>>& x, bool with_pairs) {
  const int n = game.num_players();
  if (static_cast<int>(x.size()) != n) {
    throw std::invalid_argument("QRE: strategy count does not match players");
  }
  for (int p = 0; p < n; ++p) {
    if (static_cast<int>(x[p].size()) != game.num_actions(p)) {
      throw std::invalid_argument("QRE: strategy arity mismatch");
    }
  }
  RawEval eval;
  eval.reward_vector.resize(n);
  for (int i = 0; i < n; ++i) eval.reward_vector[i].assign(game.num_actions(i), 0.0);
  if (with_pairs) {
    eval.pair_value.resize(n);
    for (int i = 0; i < n; ++i) {
      eval.pair_value[i].resize(n);
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        eval.pair_value[i][j].assign(
            static_cast<size_t>(game.num_actions(j)) * game.num_actions(i), 0.0);
      }
    }
  }

  std::vector<int> joint(n, 0);
  std::vector<double> probs(n), rewards(n);
  std::vector<double> prefix(n + 1), suffix(n + 1);
  while (true) {
    for (int p = 0; p < n; ++p) probs[p] = x[p][joint[p]];
    prefix[0] = 1;
    for (int p = 0; p < n; ++p) prefix[p + 1] = prefix[p] * probs[p];
    suffix[n] = 1;
    for (int p = n - 1; p >= 0; --p) suffix[p] = suffix[p + 1] * probs[p];

    bool any = false;
    for (int i = 0; i < n && !any; ++i) any = prefix[i] * suffix[i + 1] != 0;
    if (any || with_pairs) {
      game.RewardsInto(joint, rewards);
      for (int i = 0; i < n; ++i) {
        const double w_minus_i = prefix[i] * suffix[i + 1];
        if (w_minus_i != 0) {
          eval.reward_vector[i][joint[i]] += w_minus_i * rewards[i];
        }
        if (!with_pairs) continue;
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          double w = 1;
          for (int p = 0; p < n; ++p) {
            if (p != i && p != j) w *= probs[p];
          }
          if (w == 0) continue;
          eval.pair_value[i][j][static_cast<size_t>(joint[j]) *
                                    game.num_actions(i) + joint[i]] +=
              w * rewards[i];
        }
      }
    }
    int p = n - 1;
    while (p >= 0 && ++joint[p] == game.num_actions(p)) joint[p--] = 0;
    if (p < 0) break;
  }
  return eval;
}

double EntropyRaw(std::span<const double> x) {
  double h = 0;
  for (double v : x) {
    if (v > 0) h -= v * std::log(v);
  }
  return h;
}

// Smoothed best-response value of a reward vector: max for tau = 0,
// tau * logsumexp(r / tau) otherwise.
double SmoothedMax(std::span<const double> values, double tau) {
  const double top = *std::max_element(values.begin(), values.end());
  if (tau == 0) return top;
  double total = 0;
  for (double v : values) total += std::exp((v - top) / tau);
  return top + tau * std::log(total);
}

// softmax(r / tau) for tau > 0; for tau = 0 the pure lowest-index argmax.
std::vector<double> SmoothedArgmax(std::span<const double> values, double tau) {
  std::vector<double> p(values.size(), 0.0);
  const double top = *std::max_element(values.begin(), values.end());
  if (tau == 0) {
    for (size_t a = 0; a < values.size(); ++a) {
      if (values[a] == top) {
        p[a] = 1.0;
        break;
      }
    }
    return p;
  }
  double total = 0;
  for (size_t a = 0; a < values.size(); ++a) {
    p[a] = std::exp((values[a] - top) / tau);
    total += p[a];
  }
  for (double& v : p) v /= total;
  return p;
}

double ObjectiveFromEval(const RawEval& eval,
                         const std::vector<std::vector<double>>& x,
                         double tau) {
  double objective = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const auto& vec = eval.reward_vector[i];
    double value = 0;
    for (size_t a = 0; a < vec.size(); ++a) value += x[i][a] * vec[a];
    objective += SmoothedMax(vec, tau) - value - tau * EntropyRaw(x[i]);
  }
  return objective;
}

}  // namespace

double QreObjective(const Game& game,
                    const std::vector<std::vector<double>>& strategies,
                    double tau) {
  return ObjectiveFromEval(Contract(game, strategies, false), strategies, tau);
}

QreEval QreEvaluate(const Game& game,
                    const std::vector<std::vector<double>>& strategies,
                    double tau) {
  const int n = game.num_players();
  const RawEval raw = Contract(game, strategies, true);
  QreEval out;
  out.objective = ObjectiveFromEval(raw, strategies, tau);
  out.gradient.resize(n);

  std::vector<std::vector<double>> smoothed_br(n);
  for (int i = 0; i < n; ++i) {
    smoothed_br[i] = SmoothedArgmax(raw.reward_vector[i], tau);
  }
  for (int j = 0; j < n; ++j) {
    auto& g = out.gradient[j];
    g.assign(game.num_actions(j), 0.0);
    for (int b = 0; b < game.num_actions(j); ++b) {
      // Own term: the smoothed best-response value of player j does not
      // depend on x_j, so only -r_j(b) and the entropy regularizer remain.
      g[b] = -raw.reward_vector[j][b];
      if (tau > 0) {
        g[b] += tau * (std::log(std::max(strategies[j][b], 1e-12)) + 1.0);
      }
      // Cross terms: moving mass in x_j changes every other player's reward
      // vector; the chain rule contracts that change against the gap between
      // their smoothed best response and their current strategy.
      for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        const auto& pair = raw.pair_value[i][j];
        const size_t row = static_cast<size_t>(b) * game.num_actions(i);
        for (int a = 0; a < game.num_actions(i); ++a) {
          g[b] += (smoothed_br[i][a] - strategies[i][a]) * pair[row + a];
        }
      }
    }
  }
  return out;
}

std::vector<double> ProjectToSimplex(std::span<const double> v) {
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumulative = 0;
  double threshold = 0;
  for (size_t k = 0; k < u.size(); ++k) {
    cumulative += u[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u[k] - candidate > 0) threshold = candidate;
  }
  std::vector<double> out(v.size());
  for (size_t a = 0; a < v.size(); ++a) out[a] = std::max(0.0, v[a] - threshold);
  return out;
}

QreResult QreSolve(const Game& game, const QreConfig& config) {
  if (config.tau < 0 || !std::isfinite(config.tau)) {
    throw std::invalid_argument("QreSolve: tau must be finite and >= 0");
  }
  if (config.learning_rate <= 0) {
    throw std::invalid_argument("QreSolve: learning_rate must be > 0");
  }
  const int n = game.num_players();
  std::vector<std::vector<double>> x(n);
  for (int p = 0; p < n; ++p) {
    x[p].assign(game.num_actions(p), 1.0 / game.num_actions(p));
  }

  const double lr0 = config.learning_rate;
  double lr = lr0;
  constexpr double kObjectiveFloor = 1e-12;
  QreEval eval = QreEvaluate(game, x, config.tau);

  QreResult result;
  auto step = [&](double rate, std::vector<std::vector<double>>& out) {
    out.resize(n);
    for (int p = 0; p < n; ++p) {
      std::vector<double> moved(x[p].size());
      for (size_t a = 0; a < moved.size(); ++a) {
        moved[a] = x[p][a] - rate * eval.gradient[p][a];
      }
      out[p] = ProjectToSimplex(moved);
    }
  };

  std::vector<std::vector<double>> probe, candidate;
  int iter = 0;
  for (; iter < config.max_iters; ++iter) {
    step(lr0, probe);
    double residual = 0;
    for (int p = 0; p < n; ++p) {
      for (size_t a = 0; a < x[p].size(); ++a) {
        residual = std::max(residual, std::abs(x[p][a] - probe[p][a]) / lr0);
      }
    }
    result.residual = residual;
    if (eval.objective <= kObjectiveFloor ||
        residual <= config.gradient_tolerance) {
      result.converged = true;
      break;
    }

    bool accepted = false;
    while (lr >= 1e-13) {
      step(lr, candidate);
      const double candidate_objective =
          QreObjective(game, candidate, config.tau);
      if (candidate_objective < eval.objective) {
        x.swap(candidate);
        eval = QreEvaluate(game, x, config.tau);
        lr = std::min(lr * 2.0, lr0);
        accepted = true;
        break;
      }
      lr *= 0.5;
    }
    if (!accepted) break;  // no descent direction at any step size
  }

  result.objective = eval.objective;
  result.iterations = iter;
  ProductProfile profile;
  for (int p = 0; p < n; ++p) {
    double total = 0;
    for (double v : x[p]) total += v;
    for (double& v : x[p]) v /= total;
    profile.strategies.push_back(MixedStrategy(x[p]));
  }
  result.profile = std::move(profile);
  return result;
}

}  // namespace brpi
