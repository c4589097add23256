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

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "lidkit/lid.hpp"

namespace lidkit {

// Frozen-encoder classifier head: layer aggregation, multi-resolution
// attentive statistics pooling, embedding extraction. Forward pass only;
// parameters load from file or are seeded randomly for tests.
struct PoolerParams {
  static constexpr int kLayers = 24;
  static constexpr int kDim = 1024;
  static constexpr int kHeads = 4;
  static constexpr int kAttnHidden = 256;
  static constexpr int kPooledDim = 2 * kHeads * kDim;  // 8192
  static constexpr int kEmbedDim = 512;

  struct Head {
    Eigen::MatrixXd w1;     // kAttnHidden x kDim
    Eigen::VectorXd b1;     // kAttnHidden
    Eigen::RowVectorXd w2;  // 1 x kAttnHidden
    double b2 = 0.0;
    double temperature = 1.0;
  };

  Eigen::MatrixXd layer_logits;  // kDim x kLayers; softmaxed per row on use
  std::vector<Head> heads;       // kHeads entries, temperatures 0.5/1/2/4
  Eigen::MatrixXd hidden1_w;     // kEmbedDim x kPooledDim
  Eigen::VectorXd hidden1_b;
  Eigen::MatrixXd hidden2_w;  // kEmbedDim x kEmbedDim
  Eigen::VectorXd hidden2_b;
  Eigen::MatrixXd class_w;  // n_classes x kEmbedDim
  Eigen::VectorXd class_b;

  static PoolerParams random(uint64_t seed, int n_classes);
  void validate() const;
  Eigen::MatrixXd normalized_layer_weights() const;
};

struct Embedding {
  std::string utt_id;
  Eigen::VectorXd vector;
};

// output[t][d] = sum_l w[d][l] * layers[l][t][d]
Eigen::MatrixXd aggregate_layers(const std::vector<Eigen::MatrixXd>& layers,
                                 const PoolerParams& params);

struct PoolDetail {
  std::vector<Eigen::VectorXd> alphas;  // per head, length T, sums to 1
  std::vector<Eigen::VectorXd> means;   // per head, kDim
  std::vector<Eigen::VectorXd> stds;
};

// Per head: softmax attention over frames (two-layer affine scores at the
// head's temperature), weighted mean and std, concatenated to 8192 dims.
Eigen::VectorXd attentive_pool(const Eigen::MatrixXd& seq,
                               const PoolerParams& params,
                               PoolDetail* detail = nullptr);

// First post-pooling affine layer, before the ReLU.
Embedding extract_embedding(const Eigen::VectorXd& pooled,
                            const PoolerParams& params);

Eigen::VectorXd length_normalize(const Eigen::VectorXd& v);

struct LdaModel {
  Eigen::MatrixXd projection;   // d x out_dim
  Eigen::VectorXd global_mean;  // d
  std::vector<std::string> classes;
  Eigen::MatrixXd class_means;  // n_classes x d
  double shrinkage = 0.1;

  Eigen::VectorXd transform(const Eigen::VectorXd& v) const;
};

// Generalized eigen-solve of (between, shrunk within) scatter, population
// normalization, sign fixed so each column's first nonzero entry is
// positive.
LdaModel fit_lda(const Eigen::MatrixXd& x, const std::vector<std::string>& labels,
                 int out_dim = 100, double shrinkage = 0.1);

struct LogRegModel {
  std::vector<std::string> classes;
  Eigen::MatrixXd weights;  // n_classes x dim
  Eigen::VectorXd bias;
  double l2 = 0.0;
};

// Multinomial cross-entropy objective used for fitting and gradient checks.
struct LogRegProblem {
  Eigen::MatrixXd x;   // n x dim
  std::vector<int> y;  // class indices
  int n_classes = 0;
  double l2 = 0.0;

  double loss(const Eigen::MatrixXd& w, const Eigen::VectorXd& b) const;
  void gradient(const Eigen::MatrixXd& w, const Eigen::VectorXd& b,
                Eigen::MatrixXd* gw, Eigen::VectorXd* gb) const;
};

// Deterministic full-batch gradient descent, step 0.1 halved on
// non-decrease, until the gradient norm drops under 1e-6.
LogRegModel fit_logreg(const Eigen::MatrixXd& x,
                       const std::vector<std::string>& labels, double l2);

// length-normalize -> LDA -> logistic regression softmax.
LidDistribution predict_proba(const Embedding& embedding, const LdaModel& lda,
                              const LogRegModel& logreg);

void write_pooler(const PoolerParams& params, const std::string& path);
PoolerParams read_pooler(const std::string& path);
void write_lda(const LdaModel& model, const std::string& path);
LdaModel read_lda(const std::string& path);
void write_logreg(const LogRegModel& model, const std::string& path);
LogRegModel read_logreg(const std::string& path);

// TSV `utt_id<TAB>space-separated decimals`, one consistent dimension.
std::vector<Embedding> read_embeddings_tsv(const std::string& path);
void write_embeddings_tsv(const std::vector<Embedding>& embeddings,
                          const std::string& path);

// TSV `utt_id<TAB>label`.
std::map<std::string, std::string> read_labels_tsv(const std::string& path);
void write_labels_tsv(const std::map<std::string, std::string>& labels,
                      const std::string& path);

// ENCACT1 layer-activation file: header `ENCACT1 <T> <L> <D>`, then T*L
// rows (frame-major: all layers of frame 0, then frame 1, ...).
std::vector<Eigen::MatrixXd> read_encoder_activations(const std::string& path);
void write_encoder_activations(const std::vector<Eigen::MatrixXd>& layers,
                               const std::string& path);

}  // namespace lidkit
