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

#include <cstdint>
#include <string>
#include <vector>

namespace lidkit {

// Per-frame distributions over the symbol inventory; symbols[0] is blank.
struct PosteriorMatrix {
  std::vector<std::string> symbols;
  double frame_rate = 100.0;
  size_t T = 0;
  size_t S = 0;
  std::vector<double> data;  // row-major T x S

  double at(size_t t, size_t s) const { return data[t * S + s]; }
  double& at(size_t t, size_t s) { return data[t * S + s]; }
};

// CTCPOST1 text format: `CTCPOST1 <T> <S> <frame_rate>`, a symbol-name row
// starting with <blank>, then T rows of S probabilities. Row sums off by
// more than 1e-3 are rejected; those between 1e-5 and 1e-3 are renormalized
// with a warning.
PosteriorMatrix read_posteriors(const std::string& path);
void write_posteriors(const PosteriorMatrix& post, const std::string& path);

// Exact CTC likelihood (natural log): sum over all blank-augmented
// alignments that collapse to `labels`. Labels are symbol ids without blank.
double ctc_forward_logprob(const PosteriorMatrix& post,
                           const std::vector<uint16_t>& labels);

// Best single alignment (log10), with blank_bias added per emitted blank.
// Returns -infinity when no alignment fits in T frames.
double ctc_viterbi_log10(const PosteriorMatrix& post,
                         const std::vector<uint16_t>& labels,
                         double blank_bias = 0.0);

}  // namespace lidkit
