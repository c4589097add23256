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

#include "lidkit/embed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <sstream>

#include "lidkit/error.hpp"
#include "lidkit/io.hpp"
#include "lidkit/rng.hpp"
#include "lidkit/text.hpp"

namespace lidkit {

namespace {

constexpr double kHeadTemps[PoolerParams::kHeads] = {0.5, 1.0, 2.0, 4.0};

void fill_normal(Rng& rng, double scale, Eigen::Ref<Eigen::MatrixXd> m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = scale * rng.normal();
    }
  }
}

Eigen::VectorXd softmax_vec(const Eigen::VectorXd& scores) {
  const double mx = scores.maxCoeff();
  Eigen::VectorXd e = (scores.array() - mx).exp();
  return e / e.sum();
}

void check_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    throw DataError(msg(what, " contains non-finite values"));
  }
}

}  // namespace

PoolerParams PoolerParams::random(uint64_t seed, int n_classes) {
  if (n_classes < 2) throw UsageError("pooler needs at least 2 classes");
  Rng rng(seed);
  PoolerParams p;
  p.layer_logits.resize(kDim, kLayers);
  fill_normal(rng, 1.0, p.layer_logits);
  p.heads.resize(kHeads);
  for (int h = 0; h < kHeads; ++h) {
    Head& head = p.heads[h];
    head.w1.resize(kAttnHidden, kDim);
    fill_normal(rng, 1.0 / std::sqrt(double(kDim)), head.w1);
    head.b1.resize(kAttnHidden);
    fill_normal(rng, 0.1, head.b1);
    head.w2.resize(kAttnHidden);
    fill_normal(rng, 1.0 / std::sqrt(double(kAttnHidden)), head.w2);
    head.b2 = 0.1 * rng.normal();
    head.temperature = kHeadTemps[h];
  }
  p.hidden1_w.resize(kEmbedDim, kPooledDim);
  fill_normal(rng, 1.0 / std::sqrt(double(kPooledDim)), p.hidden1_w);
  p.hidden1_b.resize(kEmbedDim);
  fill_normal(rng, 0.1, p.hidden1_b);
  p.hidden2_w.resize(kEmbedDim, kEmbedDim);
  fill_normal(rng, 1.0 / std::sqrt(double(kEmbedDim)), p.hidden2_w);
  p.hidden2_b.resize(kEmbedDim);
  fill_normal(rng, 0.1, p.hidden2_b);
  p.class_w.resize(n_classes, kEmbedDim);
  fill_normal(rng, 1.0 / std::sqrt(double(kEmbedDim)), p.class_w);
  p.class_b.resize(n_classes);
  fill_normal(rng, 0.1, p.class_b);
  return p;
}

void PoolerParams::validate() const {
  if (layer_logits.rows() != kDim || layer_logits.cols() != kLayers) {
    throw DataError("pooler layer_logits must be 1024x24");
  }
  if (int(heads.size()) != kHeads) throw DataError("pooler must have 4 heads");
  for (const Head& h : heads) {
    if (h.w1.rows() != kAttnHidden || h.w1.cols() != kDim ||
        h.b1.size() != kAttnHidden || h.w2.size() != kAttnHidden) {
      throw DataError("pooler head has wrong attention dimensions");
    }
    if (!(h.temperature > 0.0)) {
      throw DataError("pooler head temperature must be positive");
    }
  }
  if (hidden1_w.rows() != kEmbedDim || hidden1_w.cols() != kPooledDim ||
      hidden1_b.size() != kEmbedDim || hidden2_w.rows() != kEmbedDim ||
      hidden2_w.cols() != kEmbedDim || hidden2_b.size() != kEmbedDim) {
    throw DataError("pooler embedding layers have wrong dimensions");
  }
  if (class_w.rows() < 2 || class_w.cols() != kEmbedDim ||
      class_b.size() != class_w.rows()) {
    throw DataError("pooler classifier layer has wrong dimensions");
  }
}

Eigen::MatrixXd PoolerParams::normalized_layer_weights() const {
  Eigen::MatrixXd w(layer_logits.rows(), layer_logits.cols());
  for (Eigen::Index d = 0; d < layer_logits.rows(); ++d) {
    w.row(d) = softmax_vec(layer_logits.row(d).transpose()).transpose();
  }
  return w;
}

Eigen::MatrixXd aggregate_layers(const std::vector<Eigen::MatrixXd>& layers,
                                 const PoolerParams& params) {
  if (int(layers.size()) != PoolerParams::kLayers) {
    throw DataError(msg("expected ", PoolerParams::kLayers,
                        " encoder layers, got ", layers.size()));
  }
  const Eigen::Index t = layers[0].rows();
  if (t < 1) throw DataError("encoder activations have no frames");
  for (const Eigen::MatrixXd& l : layers) {
    if (l.rows() != t || l.cols() != PoolerParams::kDim) {
      throw DataError("encoder layers disagree on frame count or dimension");
    }
  }
  const Eigen::MatrixXd w = params.normalized_layer_weights();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(t, PoolerParams::kDim);
  for (int l = 0; l < PoolerParams::kLayers; ++l) {
    out.array() += layers[l].array().rowwise() * w.col(l).transpose().array();
  }
  return out;
}

Eigen::VectorXd attentive_pool(const Eigen::MatrixXd& seq,
                               const PoolerParams& params, PoolDetail* detail) {
  if (seq.rows() < 1) throw DataError("cannot pool an empty sequence");
  if (seq.cols() != PoolerParams::kDim) {
    throw DataError(msg("pooling input must have ", PoolerParams::kDim,
                        " dimensions, got ", seq.cols()));
  }
  check_finite(seq, "pooling input");
  if (detail != nullptr) {
    detail->alphas.clear();
    detail->means.clear();
    detail->stds.clear();
  }
  Eigen::VectorXd pooled(PoolerParams::kPooledDim);
  Eigen::Index offset = 0;
  for (const PoolerParams::Head& head : params.heads) {
    // The scorer is stated as a two-layer affine map, so no nonlinearity
    // sits between the layers.
    Eigen::MatrixXd hidden = seq * head.w1.transpose();
    hidden.rowwise() += head.b1.transpose();
    Eigen::VectorXd scores = hidden * head.w2.transpose();
    scores.array() += head.b2;
    Eigen::VectorXd alpha = softmax_vec(scores / head.temperature);
    Eigen::VectorXd mean = seq.transpose() * alpha;
    Eigen::MatrixXd centered = seq.rowwise() - mean.transpose();
    Eigen::VectorXd var = centered.array().square().matrix().transpose() * alpha;
    Eigen::VectorXd stddev = var.array().max(0.0).sqrt();
    pooled.segment(offset, PoolerParams::kDim) = mean;
    pooled.segment(offset + PoolerParams::kDim, PoolerParams::kDim) = stddev;
    offset += 2 * PoolerParams::kDim;
    if (detail != nullptr) {
      detail->alphas.push_back(alpha);
      detail->means.push_back(mean);
      detail->stds.push_back(stddev);
    }
  }
  return pooled;
}

Embedding extract_embedding(const Eigen::VectorXd& pooled,
                            const PoolerParams& params) {
  if (pooled.size() != PoolerParams::kPooledDim) {
    throw DataError(msg("pooled vector must have ", PoolerParams::kPooledDim,
                        " dimensions, got ", pooled.size()));
  }
  Embedding e;
  e.vector = params.hidden1_w * pooled + params.hidden1_b;
  return e;
}

Eigen::VectorXd length_normalize(const Eigen::VectorXd& v) {
  check_finite(v, "embedding");
  const double norm = v.norm();
  if (norm == 0.0) throw DataError("cannot length-normalize a zero vector");
  return v / norm;
}

Eigen::VectorXd LdaModel::transform(const Eigen::VectorXd& v) const {
  if (v.size() != projection.rows()) {
    throw DataError(msg("LDA expects ", projection.rows(),
                        "-dimensional input, got ", v.size()));
  }
  return projection.transpose() * (v - global_mean);
}

LdaModel fit_lda(const Eigen::MatrixXd& x, const std::vector<std::string>& labels,
                 int out_dim, double shrinkage) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (n == 0 || d == 0) throw DataError("LDA needs a non-empty data matrix");
  if (size_t(n) != labels.size()) {
    throw DataError("LDA label count does not match row count");
  }
  check_finite(x, "LDA input");
  if (shrinkage < 0.0 || shrinkage > 1.0) {
    throw UsageError("LDA shrinkage must be in [0, 1]");
  }

  std::map<std::string, std::vector<Eigen::Index>> by_class;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (labels[i].empty()) throw DataError("LDA labels must be non-empty");
    by_class[labels[i]].push_back(i);
  }
  const int n_classes = int(by_class.size());
  if (n_classes < 2) throw DataError("LDA needs at least 2 classes");
  for (const auto& [cls, rows] : by_class) {
    if (rows.size() < 2) {
      throw DataError(msg("LDA class '", cls, "' has fewer than 2 samples"));
    }
  }
  if (out_dim < 1 || out_dim > int(std::min<Eigen::Index>(d, n_classes - 1))) {
    throw UsageError(msg("LDA output dimension must be in [1, ",
                         std::min<Eigen::Index>(d, n_classes - 1), "], got ",
                         out_dim));
  }

  LdaModel model;
  model.shrinkage = shrinkage;
  model.global_mean = x.colwise().mean().transpose();
  model.classes.reserve(by_class.size());
  model.class_means.resize(n_classes, d);
  Eigen::MatrixXd sw = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd sb = Eigen::MatrixXd::Zero(d, d);
  int ci = 0;
  for (const auto& [cls, rows] : by_class) {
    model.classes.push_back(cls);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    for (Eigen::Index i : rows) mean += x.row(i).transpose();
    mean /= double(rows.size());
    model.class_means.row(ci) = mean.transpose();
    for (Eigen::Index i : rows) {
      Eigen::VectorXd diff = x.row(i).transpose() - mean;
      sw.noalias() += diff * diff.transpose();
    }
    Eigen::VectorXd off = mean - model.global_mean;
    sb.noalias() += double(rows.size()) * off * off.transpose();
    ++ci;
  }
  // Population normalization keeps the solution invariant under dataset
  // duplication.
  sw /= double(n);
  sb /= double(n);

  const double target = sw.trace() / double(d);
  Eigen::MatrixXd sw_shrunk =
      (1.0 - shrinkage) * sw +
      shrinkage * target * Eigen::MatrixXd::Identity(d, d);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> within(sw_shrunk);
  if (within.info() != Eigen::Success) {
    throw InternalError("LDA within-class eigendecomposition failed");
  }
  const Eigen::VectorXd wvals = within.eigenvalues();
  const double tol = 1e-12 * std::max(1.0, wvals.cwiseAbs().maxCoeff());
  if (wvals.minCoeff() <= tol) {
    throw DataError(
        "within-class scatter is singular; raise the LDA shrinkage");
  }
  Eigen::MatrixXd whiten = within.eigenvectors() *
                           wvals.cwiseSqrt().cwiseInverse().asDiagonal() *
                           within.eigenvectors().transpose();

  Eigen::MatrixXd m = whiten * sb * whiten;
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> between(m);
  if (between.info() != Eigen::Success) {
    throw InternalError("LDA between-class eigendecomposition failed");
  }

  model.projection.resize(d, out_dim);
  for (int k = 0; k < out_dim; ++k) {
    // SelfAdjointEigenSolver orders eigenvalues ascending.
    Eigen::VectorXd col =
        whiten * between.eigenvectors().col(d - 1 - k);
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (col(i) != 0.0) {
        if (col(i) < 0.0) col = -col;
        break;
      }
    }
    model.projection.col(k) = col;
  }
  return model;
}

double LogRegProblem::loss(const Eigen::MatrixXd& w,
                           const Eigen::VectorXd& b) const {
  const Eigen::Index n = x.rows();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd logits = w * x.row(i).transpose() + b;
    const double mx = logits.maxCoeff();
    const double lse = mx + std::log((logits.array() - mx).exp().sum());
    total += lse - logits(y[i]);
  }
  total /= double(n);
  total += 0.5 * l2 * w.squaredNorm();
  return total;
}

void LogRegProblem::gradient(const Eigen::MatrixXd& w, const Eigen::VectorXd& b,
                             Eigen::MatrixXd* gw, Eigen::VectorXd* gb) const {
  const Eigen::Index n = x.rows();
  gw->setZero(w.rows(), w.cols());
  gb->setZero(b.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd p = softmax_vec(w * x.row(i).transpose() + b);
    p(y[i]) -= 1.0;
    gw->noalias() += p * x.row(i);
    *gb += p;
  }
  *gw /= double(n);
  *gb /= double(n);
  gw->noalias() += l2 * w;
}

LogRegModel fit_logreg(const Eigen::MatrixXd& x,
                       const std::vector<std::string>& labels, double l2) {
  const Eigen::Index n = x.rows();
  if (n == 0) throw DataError("logistic regression needs training data");
  if (size_t(n) != labels.size()) {
    throw DataError("logistic regression label count does not match rows");
  }
  if (l2 < 0.0) throw UsageError("L2 strength must be non-negative");
  check_finite(x, "logistic regression input");

  std::set<std::string> class_set(labels.begin(), labels.end());
  if (class_set.size() < 2) {
    throw DataError("logistic regression needs at least 2 classes");
  }
  LogRegModel model;
  model.classes.assign(class_set.begin(), class_set.end());
  model.l2 = l2;
  std::map<std::string, int> index;
  for (size_t i = 0; i < model.classes.size(); ++i) {
    index[model.classes[i]] = int(i);
  }

  LogRegProblem problem;
  problem.x = x;
  problem.n_classes = int(model.classes.size());
  problem.l2 = l2;
  problem.y.reserve(labels.size());
  for (const std::string& l : labels) problem.y.push_back(index.at(l));

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(problem.n_classes, x.cols());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(problem.n_classes);
  Eigen::MatrixXd gw;
  Eigen::VectorXd gb;
  double step = 0.1;
  double cur_loss = problem.loss(w, b);
  constexpr int kMaxIters = 20000;
  for (int iter = 0; iter < kMaxIters; ++iter) {
    problem.gradient(w, b, &gw, &gb);
    const double gnorm =
        std::sqrt(gw.squaredNorm() + gb.squaredNorm());
    if (gnorm < 1e-6 || step < 1e-15) break;
    Eigen::MatrixXd w_next = w - step * gw;
    Eigen::VectorXd b_next = b - step * gb;
    const double next_loss = problem.loss(w_next, b_next);
    if (next_loss < cur_loss) {
      w = std::move(w_next);
      b = std::move(b_next);
      cur_loss = next_loss;
    } else {
      step *= 0.5;
    }
  }
  model.weights = std::move(w);
  model.bias = std::move(b);
  return model;
}

LidDistribution predict_proba(const Embedding& embedding, const LdaModel& lda,
                              const LogRegModel& logreg) {
  if (logreg.weights.cols() != lda.projection.cols()) {
    throw DataError("LDA output and classifier input dimensions disagree");
  }
  Eigen::VectorXd z = lda.transform(length_normalize(embedding.vector));
  Eigen::VectorXd p = softmax_vec(logreg.weights * z + logreg.bias);
  LidDistribution dist;
  for (size_t i = 0; i < logreg.classes.size(); ++i) {
    dist.probs[logreg.classes[i]] = p(Eigen::Index(i));
  }
  return dist;
}

namespace {

// Model files are line-oriented: `key value` scalars followed by
// `matrix <name> <rows> <cols>` blocks with one row per line.
constexpr int kModelDigits = 9;

void append_matrix(std::string& out, const std::string& name,
                   const Eigen::MatrixXd& m) {
  out += msg("matrix ", name, " ", m.rows(), " ", m.cols(), "\n");
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ' ';
      out += format_double(m(r, c), kModelDigits);
    }
    out += '\n';
  }
}

class ModelReader {
 public:
  ModelReader(const std::string& path, const std::string& magic)
      : path_(path), lines_(read_lines(path)) {
    if (lines_.empty() || lines_[0] != magic) {
      throw DataError(msg(path, ": expected ", magic, " header"));
    }
    pos_ = 1;
  }

  bool done() const { return pos_ >= lines_.size(); }

  const std::string& peek() const {
    if (done()) throw DataError(msg(path_, ": unexpected end of file"));
    return lines_[pos_];
  }

  std::vector<std::string> next_fields() {
    std::vector<std::string> fields = split(peek(), ' ');
    ++pos_;
    return fields;
  }

  // `key value`; value returned as string.
  std::string scalar(const std::string& key) {
    std::vector<std::string> fields = next_fields();
    if (fields.size() != 2 || fields[0] != key) {
      throw DataError(msg(path_, ": expected '", key, " <value>' line"));
    }
    return fields[1];
  }

  Eigen::MatrixXd matrix(const std::string& name) {
    std::vector<std::string> fields = next_fields();
    if (fields.size() != 4 || fields[0] != "matrix" || fields[1] != name) {
      throw DataError(msg(path_, ": expected matrix '", name, "'"));
    }
    const long rows = parse_int(fields[2], msg(path_, ": ", name, " rows"));
    const long cols = parse_int(fields[3], msg(path_, ": ", name, " cols"));
    if (rows < 1 || cols < 1) {
      throw DataError(msg(path_, ": matrix '", name, "' has empty shape"));
    }
    Eigen::MatrixXd m(rows, cols);
    for (long r = 0; r < rows; ++r) {
      std::vector<std::string> row = next_fields();
      if (long(row.size()) != cols) {
        throw DataError(msg(path_, ": matrix '", name, "' row ", r + 1,
                            " has ", row.size(), " values, expected ", cols));
      }
      for (long c = 0; c < cols; ++c) {
        m(r, c) = parse_double(row[c], msg(path_, ": ", name));
      }
    }
    if (!m.allFinite()) {
      throw DataError(msg(path_, ": matrix '", name, "' has non-finite values"));
    }
    return m;
  }

  long int_scalar(const std::string& key) {
    return parse_int(scalar(key), msg(path_, ": ", key));
  }

  double double_scalar(const std::string& key) {
    return parse_double(scalar(key), msg(path_, ": ", key));
  }

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::vector<std::string> lines_;
  size_t pos_ = 0;
};

std::vector<std::string> read_class_list(ModelReader& reader, long count) {
  if (count < 2) {
    throw DataError(msg(reader.path(), ": need at least 2 classes"));
  }
  std::vector<std::string> classes;
  classes.reserve(size_t(count));
  std::set<std::string> seen;
  for (long i = 0; i < count; ++i) {
    std::string cls = reader.scalar("class");
    if (!seen.insert(cls).second) {
      throw DataError(msg(reader.path(), ": duplicate class '", cls, "'"));
    }
    classes.push_back(std::move(cls));
  }
  return classes;
}

}  // namespace

void write_pooler(const PoolerParams& params, const std::string& path) {
  params.validate();
  std::string out = "POOLER1\n";
  out += msg("classes ", params.class_w.rows(), "\n");
  for (int h = 0; h < PoolerParams::kHeads; ++h) {
    out += msg("temperature ", h, " ",
               format_double(params.heads[h].temperature, kModelDigits), "\n");
  }
  append_matrix(out, "layer_logits", params.layer_logits);
  for (int h = 0; h < PoolerParams::kHeads; ++h) {
    const PoolerParams::Head& head = params.heads[h];
    append_matrix(out, msg("head", h, "_w1"), head.w1);
    append_matrix(out, msg("head", h, "_b1"), head.b1);
    append_matrix(out, msg("head", h, "_w2"), head.w2);
    append_matrix(out, msg("head", h, "_b2"),
                  Eigen::MatrixXd::Constant(1, 1, head.b2));
  }
  append_matrix(out, "hidden1_w", params.hidden1_w);
  append_matrix(out, "hidden1_b", params.hidden1_b);
  append_matrix(out, "hidden2_w", params.hidden2_w);
  append_matrix(out, "hidden2_b", params.hidden2_b);
  append_matrix(out, "class_w", params.class_w);
  append_matrix(out, "class_b", params.class_b);
  atomic_write_file(path, out);
}

PoolerParams read_pooler(const std::string& path) {
  ModelReader reader(path, "POOLER1");
  const long n_classes = reader.int_scalar("classes");
  PoolerParams p;
  p.heads.resize(PoolerParams::kHeads);
  for (int h = 0; h < PoolerParams::kHeads; ++h) {
    std::vector<std::string> fields = reader.next_fields();
    if (fields.size() != 3 || fields[0] != "temperature") {
      throw DataError(msg(path, ": expected temperature line for head ", h));
    }
    p.heads[h].temperature = parse_double(fields[2], msg(path, ": temperature"));
  }
  p.layer_logits = reader.matrix("layer_logits");
  for (int h = 0; h < PoolerParams::kHeads; ++h) {
    p.heads[h].w1 = reader.matrix(msg("head", h, "_w1"));
    p.heads[h].b1 = reader.matrix(msg("head", h, "_b1"));
    p.heads[h].w2 = reader.matrix(msg("head", h, "_w2")).row(0);
    p.heads[h].b2 = reader.matrix(msg("head", h, "_b2"))(0, 0);
  }
  p.hidden1_w = reader.matrix("hidden1_w");
  p.hidden1_b = reader.matrix("hidden1_b");
  p.hidden2_w = reader.matrix("hidden2_w");
  p.hidden2_b = reader.matrix("hidden2_b");
  p.class_w = reader.matrix("class_w");
  p.class_b = reader.matrix("class_b");
  if (p.class_w.rows() != n_classes) {
    throw DataError(msg(path, ": classifier rows disagree with class count"));
  }
  p.validate();
  return p;
}

void write_lda(const LdaModel& model, const std::string& path) {
  std::string out = "LDA1\n";
  out += msg("shrinkage ", format_double(model.shrinkage, kModelDigits), "\n");
  out += msg("classes ", model.classes.size(), "\n");
  for (const std::string& cls : model.classes) {
    out += msg("class ", cls, "\n");
  }
  append_matrix(out, "projection", model.projection);
  append_matrix(out, "global_mean", model.global_mean);
  append_matrix(out, "class_means", model.class_means);
  atomic_write_file(path, out);
}

LdaModel read_lda(const std::string& path) {
  ModelReader reader(path, "LDA1");
  LdaModel model;
  model.shrinkage = reader.double_scalar("shrinkage");
  const long n_classes = reader.int_scalar("classes");
  model.classes = read_class_list(reader, n_classes);
  model.projection = reader.matrix("projection");
  model.global_mean = reader.matrix("global_mean");
  model.class_means = reader.matrix("class_means");
  if (model.global_mean.size() != model.projection.rows()) {
    throw DataError(msg(path, ": global_mean does not match projection rows"));
  }
  if (model.class_means.rows() != n_classes ||
      model.class_means.cols() != model.projection.rows()) {
    throw DataError(msg(path, ": class_means has wrong shape"));
  }
  return model;
}

void write_logreg(const LogRegModel& model, const std::string& path) {
  std::string out = "LOGREG1\n";
  out += msg("l2 ", format_double(model.l2, kModelDigits), "\n");
  out += msg("classes ", model.classes.size(), "\n");
  for (const std::string& cls : model.classes) {
    out += msg("class ", cls, "\n");
  }
  append_matrix(out, "weights", model.weights);
  append_matrix(out, "bias", model.bias);
  atomic_write_file(path, out);
}

LogRegModel read_logreg(const std::string& path) {
  ModelReader reader(path, "LOGREG1");
  LogRegModel model;
  model.l2 = reader.double_scalar("l2");
  const long n_classes = reader.int_scalar("classes");
  model.classes = read_class_list(reader, n_classes);
  model.weights = reader.matrix("weights");
  model.bias = reader.matrix("bias");
  if (model.weights.rows() != n_classes || model.bias.size() != n_classes) {
    throw DataError(msg(path, ": weight rows disagree with class count"));
  }
  return model;
}

std::vector<Embedding> read_embeddings_tsv(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  std::vector<Embedding> out;
  std::set<std::string> seen;
  Eigen::Index dim = -1;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> fields = split(lines[i], '\t');
    if (fields.size() != 2 || fields[0].empty()) {
      throw DataError(msg(path, " line ", i + 1,
                          ": expected `utt_id<TAB>values`"));
    }
    if (!seen.insert(fields[0]).second) {
      throw DataError(msg(path, " line ", i + 1, ": duplicate utterance '",
                          fields[0], "'"));
    }
    std::vector<std::string> values = split(fields[1], ' ');
    if (dim < 0) {
      dim = Eigen::Index(values.size());
      if (dim == 0) throw DataError(msg(path, " line ", i + 1, ": no values"));
    } else if (Eigen::Index(values.size()) != dim) {
      throw DataError(msg(path, " line ", i + 1, ": expected ", dim,
                          " values, got ", values.size()));
    }
    Embedding e;
    e.utt_id = fields[0];
    e.vector.resize(dim);
    for (Eigen::Index d = 0; d < dim; ++d) {
      e.vector(d) = parse_double(values[size_t(d)],
                                 msg(path, " line ", i + 1));
    }
    if (!e.vector.allFinite()) {
      throw DataError(msg(path, " line ", i + 1, ": non-finite embedding"));
    }
    out.push_back(std::move(e));
  }
  if (out.empty()) throw DataError(msg(path, ": no embeddings"));
  return out;
}

void write_embeddings_tsv(const std::vector<Embedding>& embeddings,
                          const std::string& path) {
  std::string out;
  for (const Embedding& e : embeddings) {
    out += e.utt_id;
    out += '\t';
    for (Eigen::Index d = 0; d < e.vector.size(); ++d) {
      if (d > 0) out += ' ';
      out += format_double(e.vector(d));
    }
    out += '\n';
  }
  atomic_write_file(path, out);
}

std::map<std::string, std::string> read_labels_tsv(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  std::map<std::string, std::string> out;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> fields = split(lines[i], '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw DataError(msg(path, " line ", i + 1,
                          ": expected `utt_id<TAB>label`"));
    }
    if (!out.emplace(fields[0], fields[1]).second) {
      throw DataError(msg(path, " line ", i + 1, ": duplicate utterance '",
                          fields[0], "'"));
    }
  }
  if (out.empty()) throw DataError(msg(path, ": no labels"));
  return out;
}

void write_labels_tsv(const std::map<std::string, std::string>& labels,
                      const std::string& path) {
  std::string out;
  for (const auto& [utt, label] : labels) {
    out += msg(utt, "\t", label, "\n");
  }
  atomic_write_file(path, out);
}

std::vector<Eigen::MatrixXd> read_encoder_activations(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw DataError(msg(path, ": empty activation file"));
  std::vector<std::string> header = split(lines[0], ' ');
  if (header.size() != 4 || header[0] != "ENCACT1") {
    throw DataError(msg(path, ": expected `ENCACT1 <T> <L> <D>` header"));
  }
  const long t = parse_int(header[1], msg(path, ": frame count"));
  const long l = parse_int(header[2], msg(path, ": layer count"));
  const long d = parse_int(header[3], msg(path, ": dimension"));
  if (t < 1 || l < 1 || d < 1) {
    throw DataError(msg(path, ": activation shape must be positive"));
  }
  if (long(lines.size()) != 1 + t * l) {
    throw DataError(msg(path, ": expected ", t * l, " rows, got ",
                        lines.size() - 1));
  }
  std::vector<Eigen::MatrixXd> layers(size_t(l), Eigen::MatrixXd(t, d));
  size_t row = 1;
  for (long ti = 0; ti < t; ++ti) {
    for (long li = 0; li < l; ++li, ++row) {
      std::vector<std::string> values = split(lines[row], ' ');
      if (long(values.size()) != d) {
        throw DataError(msg(path, " line ", row + 1, ": expected ", d,
                            " values, got ", values.size()));
      }
      for (long di = 0; di < d; ++di) {
        const double v =
            parse_double(values[size_t(di)], msg(path, " line ", row + 1));
        if (!std::isfinite(v)) {
          throw DataError(msg(path, " line ", row + 1, ": non-finite value"));
        }
        layers[size_t(li)](ti, di) = v;
      }
    }
  }
  return layers;
}

void write_encoder_activations(const std::vector<Eigen::MatrixXd>& layers,
                               const std::string& path) {
  if (layers.empty()) throw UsageError("no layers to write");
  const Eigen::Index t = layers[0].rows();
  const Eigen::Index d = layers[0].cols();
  for (const Eigen::MatrixXd& m : layers) {
    if (m.rows() != t || m.cols() != d) {
      throw UsageError("layers disagree on shape");
    }
  }
  std::string out = msg("ENCACT1 ", t, " ", layers.size(), " ", d, "\n");
  for (Eigen::Index ti = 0; ti < t; ++ti) {
    for (const Eigen::MatrixXd& layer : layers) {
      for (Eigen::Index di = 0; di < d; ++di) {
        if (di > 0) out += ' ';
        out += format_double(layer(ti, di));
      }
      out += '\n';
    }
  }
  atomic_write_file(path, out);
}

}  // namespace lidkit
