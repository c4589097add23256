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

#include "lidkit/ctc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "lidkit/error.hpp"
#include "lidkit/io.hpp"
#include "lidkit/text.hpp"

namespace lidkit {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

void check_labels(const PosteriorMatrix& post,
                  const std::vector<uint16_t>& labels) {
  for (uint16_t l : labels) {
    if (l == 0) throw UsageError("labels must not contain the blank symbol");
    if (l >= post.S)
      throw UsageError(msg("label id ", l, " out of range for ", post.S,
                           " symbols"));
  }
}

size_t min_alignment_frames(const std::vector<uint16_t>& labels) {
  size_t n = labels.size();
  for (size_t i = 1; i < labels.size(); ++i)
    if (labels[i] == labels[i - 1]) ++n;  // a separating blank is forced
  return n;
}

}  // namespace

PosteriorMatrix read_posteriors(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw DataError(msg(path, ": empty posterior file"));
  std::vector<std::string> header = split(lines[0], ' ');
  if (header.size() != 4 || header[0] != "CTCPOST1")
    throw DataError(
        msg(path, ": expected header 'CTCPOST1 <T> <S> <frame_rate>'"));
  PosteriorMatrix post;
  long t_decl = parse_int(header[1]);
  long s_decl = parse_int(header[2]);
  post.frame_rate = parse_double(header[3]);
  if (t_decl < 1 || s_decl < 1)
    throw DataError(msg(path, ": T and S must be >= 1"));
  if (!(post.frame_rate > 0) || !std::isfinite(post.frame_rate))
    throw DataError(msg(path, ": frame_rate must be positive"));
  post.T = static_cast<size_t>(t_decl);
  post.S = static_cast<size_t>(s_decl);

  if (lines.size() < 2) throw DataError(msg(path, ": missing symbol row"));
  post.symbols = split(lines[1], ' ');
  if (post.symbols.size() != post.S)
    throw DataError(msg(path, ": header declares ", post.S, " symbols, row ",
                        "has ", post.symbols.size()));
  if (post.symbols[0] != "<blank>")
    throw DataError(msg(path, ": first symbol must be <blank>, got '",
                        post.symbols[0], "'"));
  std::set<std::string> uniq(post.symbols.begin(), post.symbols.end());
  if (uniq.size() != post.symbols.size())
    throw DataError(msg(path, ": duplicate symbol names"));

  size_t row = 0;
  post.data.resize(post.T * post.S);
  for (size_t i = 2; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    if (row == post.T)
      throw DataError(msg(path, ": more than the declared ", post.T,
                          " data rows"));
    std::vector<std::string> fields = split(lines[i], ' ');
    if (fields.size() != post.S)
      throw DataError(msg(path, ": data row ", row + 1, " has ",
                          fields.size(), " values, expected ", post.S));
    double sum = 0.0;
    for (size_t s = 0; s < post.S; ++s) {
      double v = parse_double(fields[s]);
      if (!(v >= 0.0) || !(v <= 1.0))
        throw DataError(msg(path, ": data row ", row + 1, " column ", s + 1,
                            " outside [0,1]"));
      post.at(row, s) = v;
      sum += v;
    }
    double err = std::fabs(sum - 1.0);
    if (err > 1e-3)
      throw DataError(msg(path, ": data row ", row + 1, " sums to ", sum));
    if (err > 1e-5) {
      warn(msg(path, ": data row ", row + 1, " sums to ", sum,
               "; renormalizing"));
      for (size_t s = 0; s < post.S; ++s) post.at(row, s) /= sum;
    }
    ++row;
  }
  if (row != post.T)
    throw DataError(msg(path, ": header declares ", post.T,
                        " data rows, found ", row));
  return post;
}

void write_posteriors(const PosteriorMatrix& post, const std::string& path) {
  if (post.symbols.size() != post.S || post.data.size() != post.T * post.S)
    throw InternalError("posterior matrix shape is inconsistent");
  std::string out =
      msg("CTCPOST1 ", post.T, " ", post.S, " ", format_double(post.frame_rate),
          "\n", join(post.symbols, " "), "\n");
  for (size_t t = 0; t < post.T; ++t) {
    for (size_t s = 0; s < post.S; ++s) {
      if (s) out += ' ';
      out += format_double(post.at(t, s));
    }
    out += '\n';
  }
  atomic_write_file(path, out);
}

double ctc_forward_logprob(const PosteriorMatrix& post,
                           const std::vector<uint16_t>& labels) {
  check_labels(post, labels);
  if (min_alignment_frames(labels) > post.T)
    throw DataError(msg("label sequence of ", labels.size(),
                        " symbols cannot align to ", post.T, " frames"));
  // Alpha recursion over the blank-interleaved label sequence.
  size_t n = 2 * labels.size() + 1;
  auto sym = [&](size_t j) -> uint16_t {
    return j % 2 == 0 ? 0 : labels[j / 2];
  };
  std::vector<double> alpha(n, kNegInf), next(n);
  alpha[0] = std::log(post.at(0, 0));
  if (n > 1) alpha[1] = std::log(post.at(0, sym(1)));
  for (size_t t = 1; t < post.T; ++t) {
    for (size_t j = 0; j < n; ++j) {
      double a = alpha[j];
      if (j >= 1) a = log_add(a, alpha[j - 1]);
      if (j >= 2 && sym(j) != 0 && sym(j) != sym(j - 2))
        a = log_add(a, alpha[j - 2]);
      next[j] = a + std::log(post.at(t, sym(j)));
    }
    alpha.swap(next);
  }
  double total = alpha[n - 1];
  if (n > 1) total = log_add(total, alpha[n - 2]);
  return total;
}

double ctc_viterbi_log10(const PosteriorMatrix& post,
                         const std::vector<uint16_t>& labels,
                         double blank_bias) {
  check_labels(post, labels);
  if (min_alignment_frames(labels) > post.T) return kNegInf;
  size_t n = 2 * labels.size() + 1;
  auto sym = [&](size_t j) -> uint16_t {
    return j % 2 == 0 ? 0 : labels[j / 2];
  };
  auto lp = [&](size_t t, size_t j) {
    uint16_t s = sym(j);
    double v = std::log10(post.at(t, s));
    return s == 0 ? v + blank_bias : v;
  };
  std::vector<double> alpha(n, kNegInf), next(n);
  alpha[0] = lp(0, 0);
  if (n > 1) alpha[1] = lp(0, 1);
  for (size_t t = 1; t < post.T; ++t) {
    for (size_t j = 0; j < n; ++j) {
      double a = alpha[j];
      if (j >= 1) a = std::max(a, alpha[j - 1]);
      if (j >= 2 && sym(j) != 0 && sym(j) != sym(j - 2))
        a = std::max(a, alpha[j - 2]);
      next[j] = a + lp(t, j);
    }
    alpha.swap(next);
  }
  double best = alpha[n - 1];
  if (n > 1) best = std::max(best, alpha[n - 2]);
  return best;
}

}  // namespace lidkit
