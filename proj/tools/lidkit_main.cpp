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

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lidkit/batch.hpp"
#include "lidkit/corpus.hpp"
#include "lidkit/ctc.hpp"
#include "lidkit/decoder.hpp"
#include "lidkit/embed.hpp"
#include "lidkit/error.hpp"
#include "lidkit/eval.hpp"
#include "lidkit/fusion.hpp"
#include "lidkit/io.hpp"
#include "lidkit/lid.hpp"
#include "lidkit/roman.hpp"
#include "lidkit/synth.hpp"
#include "lidkit/text.hpp"

namespace {

using namespace lidkit;

void attach_decoder_flags(CLI::App* cmd, DecoderConfig* config) {
  cmd->add_option("--beam-width", config->beam_width, "Beam width")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--lm-weight", config->lm_weight, "Language model weight")
      ->capture_default_str();
  cmd->add_option("--word-bonus", config->word_insertion_bonus,
                  "Per-token insertion bonus (log10)")
      ->capture_default_str();
  cmd->add_option("--blank-bias", config->blank_bias,
                  "Additive log10 bias on blank frames")
      ->capture_default_str();
}

std::vector<UttScores> embedding_scores(const std::vector<ManifestEntry>& manifest,
                                        const std::string& embeddings_path,
                                        const std::string& lda_path,
                                        const std::string& logreg_path) {
  const LdaModel lda = read_lda(lda_path);
  const LogRegModel logreg = read_logreg(logreg_path);
  std::map<std::string, Embedding> by_utt;
  for (Embedding& e : read_embeddings_tsv(embeddings_path)) {
    by_utt[e.utt_id] = std::move(e);
  }
  std::vector<UttScores> out;
  out.reserve(manifest.size());
  for (const ManifestEntry& entry : manifest) {
    auto it = by_utt.find(entry.utt_id);
    if (it == by_utt.end()) {
      throw DataError(msg("utterance '", entry.utt_id, "' has no embedding in ",
                          embeddings_path));
    }
    UttScores s;
    s.utt_id = entry.utt_id;
    s.dist = predict_proba(it->second, lda, logreg);
    s.best = classify(s.dist);
    out.push_back(std::move(s));
  }
  return out;
}

void print_score_summary(const std::vector<UttScores>& scores) {
  std::map<std::string, size_t> by_lang;
  for (const UttScores& s : scores) ++by_lang[s.best];
  std::cout << "scored " << scores.size() << " utterances\n";
  for (const auto& [lang, count] : by_lang) {
    std::cout << "  " << lang << "\t" << count << "\n";
  }
}

std::vector<UttResult> join_results(const std::vector<ManifestEntry>& manifest,
                                    const ScoresFile& pred,
                                    const std::map<std::string, std::string>* hyps,
                                    const std::string& pred_path) {
  std::vector<UttResult> out;
  out.reserve(manifest.size());
  for (const ManifestEntry& entry : manifest) {
    auto bi = pred.best.find(entry.utt_id);
    if (bi == pred.best.end()) {
      throw DataError(msg("utterance '", entry.utt_id, "' is missing from ",
                          pred_path));
    }
    UttResult r;
    r.utt_id = entry.utt_id;
    r.true_language = entry.language;
    r.predicted_language = bi->second;
    if (hyps != nullptr) {
      auto hi = hyps->find(entry.utt_id);
      if (hi == hyps->end()) {
        throw DataError(msg("utterance '", entry.utt_id,
                            "' has no hypothesis row"));
      }
      r.reference_text = entry.reference_text;
      r.hypothesis_text = hi->second;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& csv, const char* what) {
  std::vector<double> out;
  for (const std::string& part : split(csv, ',')) {
    if (part.empty()) throw UsageError(msg("empty value in ", what));
    out.push_back(parse_double(part, what));
  }
  return out;
}

int dispatch(int argc, char** argv) {
  CLI::App app{
      "lidkit: spoken language identification over CTC posteriors, with "
      "per-language lexicon-constrained decoding, an embedding classifier, "
      "score fusion, evaluation and routing"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "INI/TOML config file; flags override config values");
  app.get_formatter()->column_width(34);

  // build-pack
  auto* bp = app.add_subcommand(
      "build-pack", "Train a language pack (subword vocab, lexicon, LM)");
  std::string bp_lang, bp_corpus, bp_out;
  PackBuildOptions bp_opts;
  bp->add_option("--lang", bp_lang, "Language code")->required();
  bp->add_option("--corpus", bp_corpus, "Corpus text file, one sentence per line")
      ->required();
  bp->add_option("--out", bp_out, "Pack root; the pack is written to <out>/<lang>")
      ->required();
  bp->add_option("--vocab-size", bp_opts.vocab_size, "Subword vocabulary size")
      ->capture_default_str();
  bp->add_option("--seed-size", bp_opts.seed_size,
                 "Seed candidate pool size (0 = 4x vocab size)")
      ->capture_default_str();
  bp->add_option("--lm-order", bp_opts.lm_order, "Kneser-Ney n-gram order")
      ->capture_default_str()
      ->check(CLI::Range(1, 4));
  bp->add_option("--max-lines", bp_opts.max_corpus_lines,
                 "Corpus line budget (uniform sample beyond it)")
      ->capture_default_str();
  bp->add_option("--seed", bp_opts.sample_seed, "Corpus sampling seed")
      ->capture_default_str();
  bp->callback([&] {
    const TextCorpus corpus = load_corpus(bp_corpus, bp_lang);
    const LanguagePack pack =
        build_language_pack(corpus, default_roman_map(), bp_opts);
    ensure_dir(bp_out);
    const std::string dir = bp_out + "/" + bp_lang;
    save_language_pack(pack, dir);
    std::cout << "wrote pack " << dir << "\n";
  });

  // classify
  auto* cl = app.add_subcommand(
      "classify",
      "Classify manifest utterances: generative (--packs), embedding "
      "(--embeddings/--lda/--logreg), or fused (both)");
  std::string cl_manifest, cl_out, cl_packs, cl_emb, cl_lda, cl_logreg;
  std::string cl_fusion_cfg, cl_hyps_out, cl_gen_scores_out, cl_emb_scores_out;
  DecoderConfig cl_decoder;
  FusionConfig cl_fusion;
  int cl_workers = 1;
  bool cl_fusion_weight_set = false, cl_fusion_temp_set = false;
  cl->add_option("--manifest", cl_manifest, "Evaluation manifest TSV")->required();
  cl->add_option("--out", cl_out, "Output scores TSV")->required();
  cl->add_option("--packs", cl_packs, "Pack root for the generative classifier");
  cl->add_option("--embeddings", cl_emb, "Utterance embeddings TSV");
  cl->add_option("--lda", cl_lda, "LDA model file");
  cl->add_option("--logreg", cl_logreg, "Logistic regression model file");
  cl->add_option("--fusion-config", cl_fusion_cfg,
                 "Fusion config (key=value) for fused mode");
  cl->add_option("--fusion-weight", cl_fusion.weight,
                 "Fusion weight on the embedding model (overrides config)")
      ->check(CLI::Range(0.0, 1.0))
      ->each([&](const std::string&) { cl_fusion_weight_set = true; });
  cl->add_option("--temperature", cl_fusion.temp_emb,
                 "Fusion temperature for both sources (overrides config)")
      ->check(CLI::PositiveNumber)
      ->each([&](const std::string&) { cl_fusion_temp_set = true; });
  cl->add_option("--hyps-out", cl_hyps_out,
                 "Write best-language hypothesis texts here");
  cl->add_option("--gen-scores-out", cl_gen_scores_out,
                 "Also write the raw generative scores here (fused mode)");
  cl->add_option("--emb-scores-out", cl_emb_scores_out,
                 "Also write the raw embedding scores here (fused mode)");
  cl->add_option("--workers", cl_workers, "Decode worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  attach_decoder_flags(cl, &cl_decoder);
  cl->callback([&] {
    const bool gen_mode = !cl_packs.empty();
    const bool emb_mode = !cl_emb.empty();
    if (!gen_mode && !emb_mode) {
      throw UsageError("classify needs --packs, --embeddings, or both");
    }
    if (emb_mode && (cl_lda.empty() || cl_logreg.empty())) {
      throw UsageError("embedding mode needs --lda and --logreg");
    }
    if (!cl_hyps_out.empty() && !gen_mode) {
      throw UsageError("--hyps-out requires the generative decoder (--packs)");
    }
    const std::vector<ManifestEntry> manifest = read_manifest(cl_manifest);

    std::vector<UttScores> gen_scores;
    if (gen_mode) {
      const std::vector<LanguagePack> packs = load_pack_set(cl_packs);
      gen_scores = score_manifest(manifest, packs, cl_decoder, cl_workers);
    }
    std::vector<UttScores> emb_scores;
    if (emb_mode) {
      emb_scores = embedding_scores(manifest, cl_emb, cl_lda, cl_logreg);
    }

    std::vector<UttScores> final_scores;
    if (gen_mode && emb_mode) {
      FusionConfig fusion;
      if (!cl_fusion_cfg.empty()) fusion = read_fusion_config(cl_fusion_cfg);
      if (cl_fusion_weight_set) fusion.weight = cl_fusion.weight;
      if (cl_fusion_temp_set) {
        fusion.temp_emb = cl_fusion.temp_emb;
        fusion.temp_gen = cl_fusion.temp_emb;
      }
      final_scores.reserve(manifest.size());
      for (size_t i = 0; i < manifest.size(); ++i) {
        UttScores s;
        s.utt_id = manifest[i].utt_id;
        s.dist = fuse(emb_scores[i].dist, gen_scores[i].dist, fusion);
        s.best = classify(s.dist);
        s.hypotheses = gen_scores[i].hypotheses;
        final_scores.push_back(std::move(s));
      }
      if (!cl_gen_scores_out.empty()) {
        write_scores_tsv(gen_scores, cl_gen_scores_out);
      }
      if (!cl_emb_scores_out.empty()) {
        write_scores_tsv(emb_scores, cl_emb_scores_out);
      }
    } else {
      final_scores = gen_mode ? std::move(gen_scores) : std::move(emb_scores);
    }

    write_scores_tsv(final_scores, cl_out);
    if (!cl_hyps_out.empty()) write_hyps_tsv(final_scores, cl_hyps_out);
    print_score_summary(final_scores);
  });

  // train-emb-classifier
  auto* te = app.add_subcommand(
      "train-emb-classifier",
      "Fit the LDA projection and logistic regression on labeled embeddings");
  std::string te_emb, te_labels, te_lda_out, te_logreg_out;
  int te_dim = 100;
  double te_shrinkage = 0.1, te_l2 = 0.0;
  te->add_option("--embeddings", te_emb, "Training embeddings TSV")->required();
  te->add_option("--labels", te_labels, "Labels TSV `utt_id<TAB>language`")
      ->required();
  te->add_option("--lda-out", te_lda_out, "Output LDA model file")->required();
  te->add_option("--logreg-out", te_logreg_out, "Output logreg model file")
      ->required();
  te->add_option("--lda-dim", te_dim, "LDA output dimension")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  te->add_option("--shrinkage", te_shrinkage, "Within-class scatter shrinkage")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  te->add_option("--l2", te_l2, "Logistic regression L2 strength")
      ->capture_default_str();
  te->callback([&] {
    const std::vector<Embedding> embs = read_embeddings_tsv(te_emb);
    const std::map<std::string, std::string> labels = read_labels_tsv(te_labels);
    Eigen::MatrixXd x(Eigen::Index(embs.size()), embs[0].vector.size());
    std::vector<std::string> y;
    y.reserve(embs.size());
    for (size_t i = 0; i < embs.size(); ++i) {
      auto it = labels.find(embs[i].utt_id);
      if (it == labels.end()) {
        throw DataError(msg("utterance '", embs[i].utt_id, "' has no label"));
      }
      x.row(Eigen::Index(i)) = length_normalize(embs[i].vector).transpose();
      y.push_back(it->second);
    }
    const LdaModel lda = fit_lda(x, y, te_dim, te_shrinkage);
    Eigen::MatrixXd projected(x.rows(), te_dim);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      // fit_lda saw normalized rows, so transform them the same way.
      projected.row(i) =
          (lda.projection.transpose() *
           (x.row(i).transpose() - lda.global_mean))
              .transpose();
    }
    const LogRegModel logreg = fit_logreg(projected, y, te_l2);
    write_lda(lda, te_lda_out);
    write_logreg(logreg, te_logreg_out);
    std::cout << "trained on " << embs.size() << " embeddings, "
              << logreg.classes.size() << " classes\n";
  });

  // fuse-tune
  auto* ft = app.add_subcommand(
      "fuse-tune", "Grid-search fusion weight/temperatures on a dev set");
  std::string ft_emb, ft_gen, ft_manifest, ft_out, ft_weights, ft_temps;
  bool ft_independent = false;
  ft->add_option("--emb-scores", ft_emb, "Embedding classifier scores TSV")
      ->required();
  ft->add_option("--gen-scores", ft_gen, "Generative classifier scores TSV")
      ->required();
  ft->add_option("--manifest", ft_manifest, "Dev manifest with true languages")
      ->required();
  ft->add_option("--out", ft_out, "Output fusion config")->required();
  ft->add_option("--grid-weights", ft_weights, "Comma-separated weight grid");
  ft->add_option("--grid-temps", ft_temps, "Comma-separated temperature grid");
  ft->add_flag("--independent-temps", ft_independent,
               "Search temp_emb and temp_gen independently");
  ft->callback([&] {
    const std::vector<ManifestEntry> manifest = read_manifest(ft_manifest);
    const ScoresFile emb = read_scores_tsv(ft_emb);
    const ScoresFile gen = read_scores_tsv(ft_gen);
    std::vector<FusionExample> dev;
    dev.reserve(manifest.size());
    for (const ManifestEntry& entry : manifest) {
      auto ei = emb.dists.find(entry.utt_id);
      auto gi = gen.dists.find(entry.utt_id);
      if (ei == emb.dists.end() || gi == gen.dists.end()) {
        throw DataError(msg("utterance '", entry.utt_id,
                            "' is missing from a scores file"));
      }
      dev.push_back({ei->second, gi->second, entry.language});
    }
    FusionGrid grid;
    if (!ft_weights.empty()) {
      grid.weights = parse_double_list(ft_weights, "--grid-weights");
    }
    if (!ft_temps.empty()) {
      grid.temps = parse_double_list(ft_temps, "--grid-temps");
    }
    grid.independent_temps = ft_independent;
    const FusionConfig best = tune_fusion(dev, grid);
    write_fusion_config(best, ft_out);
    std::cout << "weight " << format_double(best.weight) << " temp_emb "
              << format_double(best.temp_emb) << " temp_gen "
              << format_double(best.temp_gen) << " dev-accuracy "
              << format_double(fusion_accuracy(dev, best)) << "\n";
  });

  // evaluate
  auto* ev = app.add_subcommand(
      "evaluate", "Score predictions against a manifest (LID, CER, challenge)");
  std::string ev_pred, ev_manifest, ev_hyps, ev_report;
  std::string ev_dpred, ev_dmanifest, ev_dhyps;
  bool ev_parent_credit = false;
  size_t ev_topk = 10;
  ev->add_option("--pred", ev_pred, "Scores TSV with best rows")->required();
  ev->add_option("--manifest", ev_manifest, "Manifest with true languages")
      ->required();
  ev->add_option("--hyps", ev_hyps, "Hypothesis texts TSV (enables CER)");
  ev->add_option("--dialect-pred", ev_dpred, "Dialect-set scores TSV");
  ev->add_option("--dialect-manifest", ev_dmanifest, "Dialect-set manifest");
  ev->add_option("--dialect-hyps", ev_dhyps, "Dialect-set hypothesis TSV");
  ev->add_option("--report", ev_report, "Machine-readable report TSV");
  ev->add_option("--top-confusions", ev_topk, "Confusion pairs to print")
      ->capture_default_str();
  ev->add_flag("--parent-credit", ev_parent_credit,
               "Credit dialect predictions matching the parent language");
  ev->callback([&] {
    const std::vector<ManifestEntry> manifest = read_manifest(ev_manifest);
    const ScoresFile pred = read_scores_tsv(ev_pred);
    std::map<std::string, std::string> hyps;
    const bool have_cer = !ev_hyps.empty();
    if (have_cer) hyps = read_hyps_tsv(ev_hyps);
    const std::vector<UttResult> results =
        join_results(manifest, pred, have_cer ? &hyps : nullptr, ev_pred);

    std::string report;
    const double acc = lid_accuracy(results);
    std::cout << "lid_accuracy\t" << format_double(acc) << "\n";
    report += msg("lid_accuracy\t", format_double(acc), "\n");

    if (have_cer) {
      const CerByLanguage by_lang = mean_cer_by_language(results);
      std::cout << "mean_cer\t" << format_double(by_lang.macro) << "\n";
      report += msg("mean_cer\t", format_double(by_lang.macro), "\n");
      for (const auto& [lang, value] : by_lang.per_language) {
        report += msg("cer\t", lang, "\t", format_double(value), "\n");
      }
    }

    if (ev_dpred.empty() != ev_dmanifest.empty()) {
      throw UsageError("--dialect-pred and --dialect-manifest go together");
    }
    const bool have_dialect = !ev_dpred.empty();
    auto emit = [&](const char* key, double value) {
      std::cout << key << "\t" << format_double(value) << "\n";
      report += msg(key, "\t", format_double(value), "\n");
    };
    if (have_dialect) {
      const std::vector<ManifestEntry> dmanifest = read_manifest(ev_dmanifest);
      const ScoresFile dpred = read_scores_tsv(ev_dpred);
      std::map<std::string, std::string> dhyps;
      const bool have_dialect_cer = !ev_dhyps.empty();
      if (have_cer && !have_dialect_cer) {
        throw UsageError("--dialect-hyps is required when --hyps is given");
      }
      const std::vector<UttResult> dresults = join_results(
          dmanifest, dpred,
          have_dialect_cer ? (dhyps = read_hyps_tsv(ev_dhyps), &dhyps) : nullptr,
          ev_dpred);
      ChallengeOptions options;
      options.parent_credit = ev_parent_credit;
      if (have_cer && have_dialect_cer) {
        const ChallengeScore score = challenge_score(results, dresults, options);
        emit("std_cer", score.std_cer);
        emit("worst15_cer", score.worst15_cer);
        emit("dialect_lid_accuracy", score.dialect_lid_accuracy);
        emit("dialect_cer", score.dialect_cer);
        if (score.worst15_truncated) {
          std::cout << "note\tworst15 truncated to " << score.worst15_k
                    << " languages\n";
          report += msg("worst15_k\t", score.worst15_k, "\n");
        }
      } else {
        // Without hypotheses only the dialect LID metric is available.
        emit("dialect_lid_accuracy", lid_accuracy(dresults, options));
      }
    }

    const std::vector<ConfusionPair> confusions =
        confusion_pairs(results, ev_topk);
    for (const ConfusionPair& c : confusions) {
      std::cout << "confusion\t" << c.truth << "->" << c.predicted << "\t"
                << c.count << "\n";
      report += msg("confusion\t", c.truth, "\t", c.predicted, "\t", c.count,
                    "\n");
    }
    if (!ev_report.empty()) atomic_write_file(ev_report, report);
  });

  // route
  auto* rt = app.add_subcommand(
      "route", "Pick the best ASR model per language from a dev CER table");
  std::string rt_table, rt_out, rt_precedence;
  rt->add_option("--cer-table", rt_table,
                 "TSV `language<TAB>model<TAB>cer` of dev results")
      ->required();
  rt->add_option("--out", rt_out, "Output routing TSV")->required();
  rt->add_option("--precedence", rt_precedence,
                 "Comma-separated model precedence for ties (cheapest first)");
  rt->callback([&] {
    const CerTable table = read_cer_table_tsv(rt_table);
    std::vector<std::string> precedence;
    if (!rt_precedence.empty()) {
      for (const std::string& m : split(rt_precedence, ',')) {
        if (m.empty()) throw UsageError("empty model in --precedence");
        precedence.push_back(m);
      }
    }
    const RoutingTable routing = optimize_routing(table, precedence);
    write_routing_tsv(routing, rt_out);
    std::cout << "routed_macro_cer\t"
              << format_double(routed_macro_cer(table, routing)) << "\n";
  });

  // make-fixture
  auto* mf = app.add_subcommand(
      "make-fixture",
      "Generate a synthetic multi-language fixture (corpora, posteriors, "
      "manifests, embeddings)");
  std::string mf_out;
  FixtureSpec mf_spec;
  mf->add_option("--out", mf_out, "Fixture directory")->required();
  mf->add_option("--languages", mf_spec.n_languages, "Number of toy languages")
      ->capture_default_str();
  mf->add_option("--corpus-lines", mf_spec.corpus_lines, "Training lines per language")
      ->capture_default_str();
  mf->add_option("--line-len", mf_spec.line_len, "Characters per training line")
      ->capture_default_str();
  mf->add_option("--utts", mf_spec.utts_per_language, "Test utterances per language")
      ->capture_default_str();
  mf->add_option("--utt-len", mf_spec.utt_len, "Characters per test utterance")
      ->capture_default_str();
  mf->add_option("--frames-per-char", mf_spec.frames_per_char,
                 "Posterior frames per character")
      ->capture_default_str();
  mf->add_option("--noise-eps", mf_spec.noise_eps,
                 "Posterior noise mass (the clean set always uses 0)")
      ->capture_default_str();
  mf->add_option("--blank-rate", mf_spec.blank_rate, "Random blank insertion rate")
      ->capture_default_str();
  mf->add_option("--train-embeddings", mf_spec.train_embeddings_per_language,
                 "Training embeddings per language")
      ->capture_default_str();
  mf->add_option("--seed", mf_spec.seed, "Fixture seed")->capture_default_str();
  mf->callback([&] {
    write_fixture(mf_spec, mf_out);
    std::cout << "wrote fixture " << mf_out << " (" << mf_spec.n_languages
              << " languages)\n";
  });

  // decode
  auto* dc = app.add_subcommand(
      "decode", "Decode one posterior file with a single language pack");
  std::string dc_pack, dc_post;
  DecoderConfig dc_decoder;
  dc->add_option("--pack", dc_pack, "Pack directory")->required();
  dc->add_option("--posteriors", dc_post, "CTCPOST1 posterior file")->required();
  attach_decoder_flags(dc, &dc_decoder);
  dc->callback([&] {
    const LanguagePack pack = load_language_pack(dc_pack);
    const PosteriorMatrix post = read_posteriors(dc_post);
    const DecodeResult result =
        beam_decode(post, pack.lexicon, pack.lm, dc_decoder);
    std::cout << "text\t" << result.text << "\n";
    std::cout << "tokens\t" << join(result.tokens, " ") << "\n";
    std::cout << "acoustic_log10\t" << format_double(result.acoustic_logscore)
              << "\n";
    std::cout << "lm_log10\t" << format_double(result.lm_logscore) << "\n";
    std::cout << "total_log10\t" << format_double(result.total_logscore)
              << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "ERROR usage: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "ERROR usage: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "ERROR data: " << e.what() << "\n";
    return 3;
  } catch (const InternalError& e) {
    std::cerr << "ERROR internal: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "ERROR internal: " << e.what() << "\n";
    return 4;
  }
}
