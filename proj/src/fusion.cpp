// Copyright 2025 lidkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lidkit/fusion.hpp"

#include <cmath>

#include "lidkit/error.hpp"
#include "lidkit/io.hpp"
#include "lidkit/text.hpp"

namespace lidkit {

namespace {

void check_config(const FusionConfig& config) {
  if (!(config.weight >= 0.0 && config.weight <= 1.0)) {
    throw UsageError(msg("fusion weight must be in [0, 1], got ",
                         format_double(config.weight)));
  }
  if (!(config.temp_emb > 0.0) || !(config.temp_gen > 0.0)) {
    throw UsageError("fusion temperatures must be positive");
  }
}

// p^(1/T) renormalized. T=1 is the identity up to renormalization.
LidDistribution temper(const LidDistribution& p, double temp) {
  LidDistribution out;
  double total = 0.0;
  for (const auto& [lang, prob] : p.probs) {
    if (!(prob >= 0.0) || !std::isfinite(prob)) {
      throw DataError(msg("probability for '", lang, "' is invalid"));
    }
    const double scaled = std::pow(prob, 1.0 / temp);
    out.probs[lang] = scaled;
    total += scaled;
  }
  if (total <= 0.0) {
    throw DataError("distribution has no probability mass");
  }
  for (auto& [lang, prob] : out.probs) prob /= total;
  return out;
}

}  // namespace

LidDistribution fuse(const LidDistribution& p_emb, const LidDistribution& p_gen,
                     const FusionConfig& config) {
  check_config(config);
  if (p_emb.probs.size() != p_gen.probs.size()) {
    throw DataError("fusion inputs cover different language sets");
  }
  for (const auto& [lang, prob] : p_emb.probs) {
    (void)prob;
    if (p_gen.probs.find(lang) == p_gen.probs.end()) {
      throw DataError(msg("fusion inputs cover different language sets: '",
                          lang, "' missing from one side"));
    }
  }
  const LidDistribution emb = temper(p_emb, config.temp_emb);
  const LidDistribution gen = temper(p_gen, config.temp_gen);
  LidDistribution out;
  for (const auto& [lang, pe] : emb.probs) {
    out.probs[lang] =
        config.weight * pe + (1.0 - config.weight) * gen.probs.at(lang);
  }
  return out;
}

double fusion_accuracy(const std::vector<FusionExample>& dev,
                       const FusionConfig& config) {
  if (dev.empty()) throw UsageError("empty development set");
  size_t correct = 0;
  for (const FusionExample& ex : dev) {
    if (classify(fuse(ex.p_emb, ex.p_gen, config)) == ex.truth) ++correct;
  }
  return double(correct) / double(dev.size());
}

FusionConfig tune_fusion(const std::vector<FusionExample>& dev,
                         const FusionGrid& grid) {
  if (dev.empty()) throw UsageError("empty development set");
  if (grid.weights.empty() || grid.temps.empty()) {
    throw UsageError("empty fusion grid");
  }

  std::vector<FusionConfig> candidates;
  for (double w : grid.weights) {
    for (double te : grid.temps) {
      if (grid.independent_temps) {
        for (double tg : grid.temps) {
          candidates.push_back({w, te, tg});
        }
      } else {
        candidates.push_back({w, te, te});
      }
    }
  }
  candidates.push_back(FusionConfig{});  // the uniform default is never beaten
                                         // by doing nothing

  bool have_best = false;
  FusionConfig best;
  double best_acc = -1.0;
  for (const FusionConfig& c : candidates) {
    const double acc = fusion_accuracy(dev, c);
    if (!have_best) {
      have_best = true;
      best = c;
      best_acc = acc;
      continue;
    }
    if (acc != best_acc) {
      if (acc > best_acc) {
        best = c;
        best_acc = acc;
      }
      continue;
    }
    const double cur_off = std::abs(c.weight - 0.5);
    const double best_off = std::abs(best.weight - 0.5);
    bool better = false;
    if (cur_off != best_off) {
      better = cur_off < best_off;
    } else if (c.weight != best.weight) {
      better = c.weight < best.weight;
    } else if (c.temp_emb != best.temp_emb) {
      better = c.temp_emb < best.temp_emb;
    } else if (c.temp_gen != best.temp_gen) {
      better = c.temp_gen < best.temp_gen;
    }
    if (better) best = c;
  }
  return best;
}

void write_fusion_config(const FusionConfig& config, const std::string& path) {
  check_config(config);
  std::map<std::string, std::string> kv;
  kv["weight"] = format_double(config.weight);
  kv["temp_emb"] = format_double(config.temp_emb);
  kv["temp_gen"] = format_double(config.temp_gen);
  write_kv_file(path, kv);
}

FusionConfig read_fusion_config(const std::string& path) {
  std::map<std::string, std::string> kv = read_kv_file(path);
  FusionConfig config;
  for (const auto& [key, value] : kv) {
    if (key == "weight") {
      config.weight = parse_double(value, msg(path, ": weight"));
    } else if (key == "temp_emb") {
      config.temp_emb = parse_double(value, msg(path, ": temp_emb"));
    } else if (key == "temp_gen") {
      config.temp_gen = parse_double(value, msg(path, ": temp_gen"));
    } else {
      throw DataError(msg(path, ": unknown key '", key, "'"));
    }
  }
  check_config(config);
  return config;
}

}  // namespace lidkit
