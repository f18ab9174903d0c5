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

#include "brpi/serialization.h"

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "brpi/rng.h"

namespace brpi {
namespace {

constexpr uint64_t kRunSeedTag = 0x5253;  // per-run seed derivation

[[noreturn]] void Fail(const std::string& context, const std::string& message) {
  throw std::invalid_argument(context + ": " + message);
}

const Json& Field(const Json& j, const char* key, const std::string& context) {
  if (!j.is_object()) Fail(context, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) {
    Fail(context, std::string("missing field '") + key + "'");
  }
  return *it;
}

std::string StringField(const Json& j, const char* key,
                        const std::string& context) {
  const Json& f = Field(j, key, context);
  if (!f.is_string()) {
    Fail(context, std::string("field '") + key + "' must be a string");
  }
  return f.get<std::string>();
}

int IntField(const Json& j, const char* key, const std::string& context) {
  const Json& f = Field(j, key, context);
  if (!f.is_number_integer()) {
    Fail(context, std::string("field '") + key + "' must be an integer");
  }
  return f.get<int>();
}

int IntOr(const Json& j, const char* key, int fallback,
          const std::string& context) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return IntField(j, key, context);
}

double DoubleOr(const Json& j, const char* key, double fallback,
                const std::string& context) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const Json& f = j.at(key);
  if (!f.is_number()) {
    Fail(context, std::string("field '") + key + "' must be a number");
  }
  return f.get<double>();
}

bool BoolOr(const Json& j, const char* key, bool fallback,
            const std::string& context) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const Json& f = j.at(key);
  if (!f.is_boolean()) {
    Fail(context, std::string("field '") + key + "' must be a boolean");
  }
  return f.get<bool>();
}

uint64_t Uint64Or(const Json& j, const char* key, uint64_t fallback,
                  const std::string& context) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const Json& f = j.at(key);
  if (!f.is_number_integer() ||
      (!f.is_number_unsigned() && f.get<int64_t>() < 0)) {
    Fail(context,
         std::string("field '") + key + "' must be a non-negative integer");
  }
  return f.get<uint64_t>();
}

std::string StringOr(const Json& j, const char* key,
                     const std::string& fallback, const std::string& context) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return StringField(j, key, context);
}

// Rejects keys outside `allowed` so a typo ("players" for "num_players")
// fails loudly instead of silently falling back to a default. Applied to
// hand-written config objects only; machine-written records stay lenient.
void CheckKeys(const Json& j, std::initializer_list<const char*> allowed,
               const std::string& context) {
  if (!j.is_object()) return;
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) Fail(context, "unknown field '" + item.key() + "'");
  }
}

std::vector<std::string> SplitLine(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double ParseDouble(const std::string& token, const std::string& context) {
  const char* begin = token.c_str();
  char* end = nullptr;
  double value = std::strtod(begin, &end);
  if (end != begin + token.size() || token.empty()) {
    Fail(context, "malformed number '" + token + "'");
  }
  return value;
}

bool IsPure(const MixedStrategy& s, int* action) {
  int hits = 0;
  for (int a = 0; a < s.num_actions(); ++a) {
    if (s.prob(a) != 0.0) {
      if (s.prob(a) != 1.0) return false;
      *action = a;
      ++hits;
    }
  }
  return hits == 1;
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

Json ToJson(const GameSpec& spec) {
  Json j;
  j["kind"] = spec.kind;
  if (spec.kind == "blotto") {
    j["num_players"] = spec.blotto.num_players;
    j["coins"] = spec.blotto.coins;
    j["fields"] = spec.blotto.fields;
  } else if (spec.kind == "builtin") {
    j["name"] = spec.name;
  } else if (spec.kind == "dense") {
    j["action_counts"] = spec.action_counts;
    j["tensor"] = spec.tensor;
    if (!spec.name.empty()) j["name"] = spec.name;
  }
  return j;
}

GameSpec GameSpecFromJson(const Json& j) {
  const std::string context = "game";
  CheckKeys(j, {"kind", "num_players", "coins", "fields", "name",
                "action_counts", "tensor"},
            context);
  GameSpec spec;
  spec.kind = StringField(j, "kind", context);
  if (spec.kind == "blotto") {
    spec.blotto.num_players = IntOr(j, "num_players", 2, context);
    spec.blotto.coins = IntOr(j, "coins", 10, context);
    spec.blotto.fields = IntOr(j, "fields", 3, context);
  } else if (spec.kind == "builtin") {
    spec.name = StringField(j, "name", context);
  } else if (spec.kind == "dense") {
    const Json& counts = Field(j, "action_counts", context);
    if (!counts.is_array()) Fail(context, "field 'action_counts' must be an array");
    for (const Json& c : counts) {
      if (!c.is_number_integer()) {
        Fail(context, "field 'action_counts' must hold integers");
      }
      spec.action_counts.push_back(c.get<int>());
    }
    const Json& tensor = Field(j, "tensor", context);
    if (!tensor.is_array()) Fail(context, "field 'tensor' must be an array");
    for (const Json& per_player : tensor) {
      if (!per_player.is_array()) {
        Fail(context, "field 'tensor' must hold one array per player");
      }
      std::vector<double> values;
      values.reserve(per_player.size());
      for (const Json& v : per_player) {
        if (!v.is_number()) Fail(context, "field 'tensor' must hold numbers");
        values.push_back(v.get<double>());
      }
      spec.tensor.push_back(std::move(values));
    }
    spec.name = StringOr(j, "name", "", context);
  } else {
    Fail(context, "unknown kind '" + spec.kind +
                      "' (expected blotto, dense or builtin)");
  }
  return spec;
}

Json ToJson(const SBRConfig& cfg) {
  Json j;
  j["B"] = cfg.num_base_profiles;
  j["C"] = cfg.num_candidates;
  j["candidates"] = ToString(cfg.candidate_source);
  j["base"] = ToString(cfg.base_source);
  j["tie_tolerance"] = cfg.tie_tolerance;
  j["randomized_ties"] = cfg.randomized_ties;
  j["exact_mode"] = cfg.exact_mode;
  j["share_base_profiles"] = cfg.share_base_profiles;
  return j;
}

SBRConfig SBRConfigFromJson(const Json& j) {
  const std::string context = "sbr";
  if (!j.is_object()) Fail(context, "expected an object");
  CheckKeys(j,
            {"B", "C", "candidates", "base", "tie_tolerance",
             "randomized_ties", "exact_mode", "share_base_profiles"},
            context);
  SBRConfig cfg;
  cfg.num_base_profiles = IntOr(j, "B", cfg.num_base_profiles, context);
  cfg.num_candidates = IntOr(j, "C", cfg.num_candidates, context);
  try {
    if (j.contains("candidates")) {
      cfg.candidate_source =
          CandidateSourceFromString(StringField(j, "candidates", context));
    }
    if (j.contains("base")) {
      cfg.base_source = BaseSourceFromString(StringField(j, "base", context));
    }
  } catch (const std::invalid_argument& e) {
    Fail(context, e.what());
  }
  cfg.tie_tolerance = DoubleOr(j, "tie_tolerance", cfg.tie_tolerance, context);
  cfg.randomized_ties =
      BoolOr(j, "randomized_ties", cfg.randomized_ties, context);
  cfg.exact_mode = BoolOr(j, "exact_mode", cfg.exact_mode, context);
  cfg.share_base_profiles =
      BoolOr(j, "share_base_profiles", cfg.share_base_profiles, context);
  return cfg;
}

Json ToJson(const DynamicsConfig& cfg) {
  Json j;
  j["algorithm"] = ToString(cfg.algorithm);
  j["iterations"] = cfg.iterations;
  j["seed"] = cfg.seed;
  j["beta"] = cfg.beta;
  j["tie_tolerance"] = cfg.tie_tolerance;
  j["samples_per_iteration"] = cfg.samples_per_iteration;
  j["metric_cadence"] = cfg.metric_cadence;
  j["sbr"] = ToJson(cfg.sbr);
  return j;
}

DynamicsConfig DynamicsConfigFromJson(const Json& j) {
  const std::string context = "dynamics";
  CheckKeys(j,
            {"algorithm", "iterations", "seed", "beta", "tie_tolerance",
             "samples_per_iteration", "metric_cadence", "sbr"},
            context);
  DynamicsConfig cfg;
  const std::string algorithm = StringField(j, "algorithm", context);
  try {
    cfg.algorithm = AlgorithmFromString(algorithm);
  } catch (const std::invalid_argument& e) {
    Fail(context, e.what());
  }
  cfg.iterations = IntField(j, "iterations", context);
  cfg.seed = Uint64Or(j, "seed", cfg.seed, context);
  cfg.beta = DoubleOr(j, "beta", cfg.beta, context);
  cfg.tie_tolerance = DoubleOr(j, "tie_tolerance", cfg.tie_tolerance, context);
  cfg.samples_per_iteration =
      IntOr(j, "samples_per_iteration", cfg.samples_per_iteration, context);
  cfg.metric_cadence = IntOr(j, "metric_cadence", cfg.metric_cadence, context);
  if (j.contains("sbr")) cfg.sbr = SBRConfigFromJson(j.at("sbr"));
  return cfg;
}

Json ToJson(const ExperimentConfig& config) {
  Json j;
  if (!config.name.empty()) j["name"] = config.name;
  j["game"] = ToJson(config.game);
  Json runs = Json::array();
  for (const DynamicsConfig& run : config.runs) runs.push_back(ToJson(run));
  j["dynamics"] = std::move(runs);
  j["seed"] = config.seed;
  j["metric_cadence"] = config.metric_cadence;
  j["output_dir"] = config.output_dir;
  return j;
}

ExperimentConfig ExperimentConfigFromJson(const Json& j) {
  const std::string context = "experiment";
  CheckKeys(j,
            {"name", "game", "dynamics", "seed", "metric_cadence",
             "output_dir"},
            context);
  ExperimentConfig config;
  config.game = GameSpecFromJson(Field(j, "game", context));
  config.seed = Uint64Or(j, "seed", 0, context);
  config.metric_cadence = IntOr(j, "metric_cadence", 0, context);
  config.output_dir = StringOr(j, "output_dir", "runs", context);
  config.name = StringOr(j, "name", "", context);
  const Json& dynamics = Field(j, "dynamics", context);
  std::vector<const Json*> run_jsons;
  if (dynamics.is_array()) {
    for (const Json& run : dynamics) run_jsons.push_back(&run);
  } else {
    run_jsons.push_back(&dynamics);
  }
  if (run_jsons.empty()) Fail(context, "field 'dynamics' must not be empty");
  for (size_t index = 0; index < run_jsons.size(); ++index) {
    DynamicsConfig run = DynamicsConfigFromJson(*run_jsons[index]);
    if (!run_jsons[index]->contains("seed")) {
      run.seed = DeriveKey(config.seed, {kRunSeedTag, index});
    }
    if (!run_jsons[index]->contains("metric_cadence") &&
        config.metric_cadence > 0) {
      run.metric_cadence = config.metric_cadence;
    }
    config.runs.push_back(std::move(run));
  }
  return config;
}

Json ProfileToJson(int iteration, const ProductProfile& profile) {
  Json players = Json::array();
  for (const MixedStrategy& s : profile.strategies) {
    Json probs = Json::array();
    for (int a = 0; a < s.num_actions(); ++a) probs.push_back(s.prob(a));
    players.push_back(std::move(probs));
  }
  return Json{{"iteration", iteration}, {"players", std::move(players)}};
}

ProductProfile ProfileFromJson(const Json& j, const Game& game) {
  const std::string context = "checkpoint";
  const Json& players = Field(j, "players", context);
  if (!players.is_array() ||
      static_cast<int>(players.size()) != game.num_players()) {
    Fail(context, "field 'players' must hold one strategy per player");
  }
  std::vector<MixedStrategy> strategies;
  for (int i = 0; i < game.num_players(); ++i) {
    const Json& probs = players.at(i);
    if (!probs.is_array() ||
        static_cast<int>(probs.size()) != game.num_actions(i)) {
      Fail(context, "player " + std::to_string(i) +
                        " strategy must list one probability per action");
    }
    std::vector<double> values;
    values.reserve(probs.size());
    for (const Json& p : probs) {
      if (!p.is_number()) {
        Fail(context, "strategy probabilities must be numbers");
      }
      values.push_back(p.get<double>());
    }
    strategies.push_back(MixedStrategy(std::move(values)));
  }
  return ProductProfile{std::move(strategies)};
}

Json HistoryLineToJson(int iteration, const ProductProfile& profile) {
  std::vector<int> actions(profile.num_players());
  bool all_pure = true;
  for (int i = 0; i < profile.num_players() && all_pure; ++i) {
    all_pure = IsPure(profile[i], &actions[i]);
  }
  if (all_pure) {
    return Json{{"iteration", iteration}, {"actions", actions}};
  }
  return ProfileToJson(iteration, profile);
}

Json HistoryLineToJson(int iteration, const CorrelationDevice& device) {
  Json samples = Json::array();
  for (const auto& comp : device.components()) {
    const JointAction* joint = std::get_if<JointAction>(&comp.policy);
    if (joint == nullptr) {
      throw std::logic_error(
          "HistoryLineToJson: device component is not a joint sample");
    }
    samples.push_back(*joint);
  }
  return Json{{"iteration", iteration}, {"joint_samples", std::move(samples)}};
}

HistoryLine HistoryLineFromJson(const Json& j, const Game& game) {
  const std::string context = "history";
  HistoryLine line;
  line.iteration = IntField(j, "iteration", context);
  if (j.contains("joint_samples")) {
    const Json& samples = j.at("joint_samples");
    if (!samples.is_array() || samples.empty()) {
      Fail(context, "field 'joint_samples' must be a non-empty array");
    }
    for (const Json& sample : samples) {
      if (!sample.is_array() ||
          static_cast<int>(sample.size()) != game.num_players()) {
        Fail(context, "joint sample must list one action per player");
      }
      JointAction joint;
      for (int i = 0; i < game.num_players(); ++i) {
        const Json& a = sample.at(i);
        if (!a.is_number_integer()) Fail(context, "actions must be integers");
        int action = a.get<int>();
        if (action < 0 || action >= game.num_actions(i)) {
          Fail(context, "action out of range for player " + std::to_string(i));
        }
        joint.push_back(action);
      }
      line.joint_samples.push_back(std::move(joint));
    }
    line.is_device = true;
    return line;
  }
  if (j.contains("actions")) {
    const Json& actions = j.at("actions");
    if (!actions.is_array() ||
        static_cast<int>(actions.size()) != game.num_players()) {
      Fail(context, "field 'actions' must list one action per player");
    }
    std::vector<MixedStrategy> strategies;
    for (int i = 0; i < game.num_players(); ++i) {
      const Json& a = actions.at(i);
      if (!a.is_number_integer()) Fail(context, "actions must be integers");
      int action = a.get<int>();
      if (action < 0 || action >= game.num_actions(i)) {
        Fail(context, "action out of range for player " + std::to_string(i));
      }
      strategies.push_back(MixedStrategy::Pure(game.num_actions(i), action));
    }
    line.profile = ProductProfile{std::move(strategies)};
    return line;
  }
  line.profile = ProfileFromJson(j, game);
  return line;
}

std::string TraceCsvHeader(int num_players) {
  std::string header = "iteration,wall_ms,nashconv,ccedist";
  for (int i = 0; i < num_players; ++i) {
    header += ",eps_" + std::to_string(i);
  }
  header += ",policy_kind";
  return header;
}

std::string TraceRowToCsv(const TraceRow& row) {
  std::string line = std::to_string(row.iteration);
  line += ',';
  line += FormatDouble(row.wall_ms);
  line += ',';
  line += FormatDouble(row.nashconv);
  line += ',';
  line += FormatDouble(row.ccedist);
  for (double eps : row.eps_per_player) {
    line += ',';
    line += FormatDouble(eps);
  }
  line += ',';
  line += row.policy_kind;
  return line;
}

std::vector<TraceRow> TraceRowsFromCsv(const std::string& csv) {
  const std::string context = "trace csv";
  std::vector<std::string> lines;
  size_t start = 0;
  while (start < csv.size()) {
    size_t nl = csv.find('\n', start);
    if (nl == std::string::npos) nl = csv.size();
    if (nl > start) lines.push_back(csv.substr(start, nl - start));
    start = nl + 1;
  }
  if (lines.empty()) Fail(context, "missing header");
  std::vector<std::string> header = SplitLine(lines[0]);
  if (header.size() < 6 || header[0] != "iteration" ||
      header[1] != "wall_ms" || header.back() != "policy_kind") {
    Fail(context, "unrecognized header '" + lines[0] + "'");
  }
  const size_t columns = header.size();
  const size_t num_eps = columns - 5;
  std::vector<TraceRow> rows;
  for (size_t k = 1; k < lines.size(); ++k) {
    std::vector<std::string> tokens = SplitLine(lines[k]);
    if (tokens.size() != columns) {
      Fail(context, "row " + std::to_string(k) + " has " +
                        std::to_string(tokens.size()) + " columns, expected " +
                        std::to_string(columns));
    }
    TraceRow row;
    row.iteration = static_cast<int>(ParseDouble(tokens[0], context));
    row.wall_ms = ParseDouble(tokens[1], context);
    row.nashconv = ParseDouble(tokens[2], context);
    row.ccedist = ParseDouble(tokens[3], context);
    for (size_t e = 0; e < num_eps; ++e) {
      row.eps_per_player.push_back(ParseDouble(tokens[4 + e], context));
    }
    row.policy_kind = tokens.back();
    rows.push_back(std::move(row));
  }
  return rows;
}

uint64_t Fnv1a64(std::string_view bytes) {
  uint64_t hash = 14695981039346656037ULL;
  for (unsigned char b : bytes) {
    hash ^= b;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string ToHex64(uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

}  // namespace brpi
