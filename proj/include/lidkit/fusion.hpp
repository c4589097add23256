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

#pragma once

#include <string>
#include <vector>

#include "lidkit/lid.hpp"

namespace lidkit {

struct FusionConfig {
  double weight = 0.5;  // mass on the embedding model
  double temp_emb = 1.0;
  double temp_gen = 1.0;
};

// Temperature-scale each distribution (p^(1/T), renormalized), then mix:
// w * p_emb + (1 - w) * p_gen.
LidDistribution fuse(const LidDistribution& p_emb, const LidDistribution& p_gen,
                     const FusionConfig& config);

struct FusionExample {
  LidDistribution p_emb;
  LidDistribution p_gen;
  std::string truth;
};

struct FusionGrid {
  std::vector<double> weights = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<double> temps = {0.5, 1.0, 2.0, 4.0};
  // With tied temps (the default) a single scaler applies to both sources.
  bool independent_temps = false;
};

double fusion_accuracy(const std::vector<FusionExample>& dev,
                       const FusionConfig& config);

// Exhaustive grid search for dev accuracy. The default uniform config is
// always a candidate, so the result never scores below it. Ties prefer the
// weight nearest 0.5, then the smaller weight, then smaller temperatures.
FusionConfig tune_fusion(const std::vector<FusionExample>& dev,
                         const FusionGrid& grid);

void write_fusion_config(const FusionConfig& config, const std::string& path);
FusionConfig read_fusion_config(const std::string& path);

}  // namespace lidkit
