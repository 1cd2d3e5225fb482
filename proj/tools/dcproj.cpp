// dcproj: discourse-connective annotation projection toolkit.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "dcproj/alignment.hpp"
#include "dcproj/annotations.hpp"
#include "dcproj/classifier.hpp"
#include "dcproj/em.hpp"
#include "dcproj/errors.hpp"
#include "dcproj/evaluation.hpp"
#include "dcproj/lexicon.hpp"
#include "dcproj/parallel.hpp"
#include "dcproj/pipeline.hpp"
#include "dcproj/projection.hpp"
#include "dcproj/synthetic.hpp"

namespace fs = std::filesystem;
using namespace dcproj;

namespace {

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("error writing " + path);
}

struct CorpusArgs {
  std::string c_path;
  std::string a_path;
  std::string c_profile = "french";
  std::string a_profile = "generic";
  std::string punctuation;
  std::optional<PunctuationSet> punct;

  void add(CLI::App* cmd) {
    cmd->add_option("--corpus-c", c_path, "side C corpus (candidates), one sentence per line")->required();
    cmd->add_option("--corpus-a", a_path, "side A corpus (annotated), one sentence per line")->required();
    cmd->add_option("--profile-c", c_profile, "tokenizer profile for side C")->capture_default_str();
    cmd->add_option("--profile-a", a_profile, "tokenizer profile for side A")->capture_default_str();
    cmd->add_option("--punctuation", punctuation, "punctuation file replacing the built-in set");
  }

  const PunctuationSet& punct_set() {
    if (!punct) punct = punctuation.empty() ? PunctuationSet::standard() : PunctuationSet::load(punctuation);
    return *punct;
  }

  std::vector<SentencePair> load(unsigned jobs) {
    LoadOptions opts;
    opts.c_profile = parse_profile(c_profile);
    opts.a_profile = parse_profile(a_profile);
    opts.punct = &punct_set();
    opts.jobs = jobs;
    return load_parallel(c_path, a_path, opts);
  }
};

Direction direction_arg(const std::string& name) {
  if (name == "direct") return Direction::a_given_c;
  if (name == "inverse") return Direction::c_given_a;
  return parse_direction(name);
}

std::vector<CandidateDC> all_candidates(const std::vector<SentencePair>& pairs, const Lexicon& lexicon, unsigned jobs) {
  const ConnectiveMatcher matcher(lexicon);
  std::vector<std::vector<CandidateDC>> per_pair(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t i) { per_pair[i] = match_candidates(pairs[i], lexicon, matcher); });
  std::vector<CandidateDC> out;
  for (auto& v : per_pair) out.insert(out.end(), v.begin(), v.end());
  return out;
}

std::string format_metrics(const ClassifierMetrics& m) {
  auto f = [](const std::optional<double>& v) {
    if (!v) return std::string("null");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *v);
    return std::string(buf);
  };
  return "precision\t" + f(m.precision) + "\nrecall\t" + f(m.recall) + "\nf1\t" + f(m.f1) + "\ntrue_positive\t" +
         std::to_string(m.true_positive) + "\nfalse_positive\t" + std::to_string(m.false_positive) +
         "\nfalse_negative\t" + std::to_string(m.false_negative) + "\ntrue_negative\t" +
         std::to_string(m.true_negative) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Project discourse-connective annotations across a parallel corpus."};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned jobs = default_jobs();
  app.add_option("--jobs,-j", jobs, "worker threads (output never depends on it)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  std::function<void()> action;

  // tokenize
  CorpusArgs tok_corpus;
  std::string tok_out;
  auto* tok = app.add_subcommand("tokenize", "tokenize both sides; writes tokens.c.txt and tokens.a.txt");
  tok_corpus.add(tok);
  tok->add_option("--out", tok_out, "output directory")->required();
  tok->callback([&] {
    action = [&] {
      auto pairs = tok_corpus.load(jobs);
      fs::create_directories(tok_out);
      write_tokenized(pairs, fs::path(tok_out) / "tokens.c.txt", fs::path(tok_out) / "tokens.a.txt");
    };
  });

  // train-align
  CorpusArgs ta_corpus;
  std::string ta_direction, ta_out, ta_trace;
  int ta_iterations = 10;
  auto* ta = app.add_subcommand("train-align", "train a Model 1 translation table by EM");
  ta_corpus.add(ta);
  ta->add_option("--direction", ta_direction, "a_given_c (direct) or c_given_a (inverse)")->required();
  ta->add_option("--iterations", ta_iterations, "EM iterations")->check(CLI::PositiveNumber)->capture_default_str();
  ta->add_option("--out", ta_out, "model TSV")->required();
  ta->add_option("--trace", ta_trace, "optional log-likelihood trace TSV");
  ta->callback([&] {
    action = [&] {
      auto pairs = ta_corpus.load(jobs);
      auto r = train_em(pairs, direction_arg(ta_direction), ta_iterations, jobs);
      write_model(r.model, ta_out);
      if (!ta_trace.empty()) emit(format_log_likelihood(r.log_likelihood), ta_trace);
    };
  });

  // align
  CorpusArgs al_corpus;
  std::string al_model, al_out;
  auto* al = app.add_subcommand("align", "Viterbi alignments of a corpus under a trained model");
  al_corpus.add(al);
  al->add_option("--model", al_model, "model TSV from train-align")->required();
  al->add_option("--out", al_out, "Pharaoh output")->required();
  al->callback([&] {
    action = [&] {
      auto pairs = al_corpus.load(jobs);
      write_pharaoh(align_corpus(read_model(al_model), pairs, jobs), al_out);
    };
  });

  // symmetrize
  std::string sy_direct, sy_inverse, sy_method = "grow-diag", sy_out;
  auto* sy = app.add_subcommand("symmetrize", "combine direct and inverse alignments");
  sy->add_option("--direct", sy_direct, "direct Pharaoh file")->required();
  sy->add_option("--inverse", sy_inverse, "inverse Pharaoh file")->required();
  sy->add_option("--method", sy_method, "intersection, union or grow-diag")->capture_default_str();
  sy->add_option("--out", sy_out, "Pharaoh output")->required();
  sy->callback([&] {
    action = [&] {
      const auto method = parse_aligner(sy_method);
      write_pharaoh(combine_alignments(read_pharaoh(sy_direct, AlignerKind::direct),
                                       read_pharaoh(sy_inverse, AlignerKind::inverse), method, jobs),
                    sy_out);
    };
  });

  // match
  CorpusArgs ma_corpus;
  std::string ma_lexicon, ma_out;
  auto* ma = app.add_subcommand("match", "find candidate connectives on side C");
  ma_corpus.add(ma);
  ma->add_option("--lexicon-c", ma_lexicon, "side C connective lexicon")->required();
  ma->add_option("--out", ma_out, "candidates JSONL")->required();
  ma->callback([&] {
    action = [&] {
      auto pairs = ma_corpus.load(jobs);
      write_candidates(all_candidates(pairs, load_lexicon(ma_lexicon, ma_corpus.punct_set()), jobs), ma_out);
    };
  });

  // project
  CorpusArgs pr_corpus;
  std::string pr_lexicon, pr_lexicon_a, pr_annotations, pr_aligner = "intersection", pr_alignment, pr_direct,
                                                         pr_inverse, pr_out, pr_stats;
  bool pr_filter = true;
  int pr_iterations = 10;
  auto* pr = app.add_subcommand("project", "label candidates through word alignments");
  pr_corpus.add(pr);
  pr->add_option("--lexicon-c", pr_lexicon, "side C connective lexicon")->required();
  auto* pr_ann = pr->add_option("--annotations", pr_annotations, "side A annotation JSONL");
  pr->add_option("--lexicon-a", pr_lexicon_a, "side A lexicon for baseline annotation")->excludes(pr_ann);
  pr->add_option("--aligner", pr_aligner, "direct, inverse, intersection, union, grow-diag or external")
      ->capture_default_str();
  pr->add_flag("--filter,!--no-filter", pr_filter, "mark candidates without support as UNSUPPORTED")
      ->capture_default_str();
  pr->add_option("--alignment", pr_alignment, "precomputed Pharaoh alignment (required for external)");
  pr->add_option("--direct", pr_direct, "direct Pharaoh alignment instead of training");
  pr->add_option("--inverse", pr_inverse, "inverse Pharaoh alignment instead of training");
  pr->add_option("--iterations", pr_iterations, "EM iterations when training")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  pr->add_option("--out", pr_out, "projected JSONL")->required();
  pr->add_option("--stats", pr_stats, "optional stats TSV");
  pr->callback([&] {
    action = [&] {
      const auto kind = parse_aligner(pr_aligner);
      auto pairs = pr_corpus.load(jobs);
      std::vector<AlignmentSet> alignments;
      if (!pr_alignment.empty()) {
        alignments = read_pharaoh(pr_alignment, kind);
      } else if (kind == AlignerKind::external) {
        throw FormatError("--aligner external needs --alignment");
      } else {
        const bool need_direct = kind != AlignerKind::inverse;
        const bool need_inverse = kind != AlignerKind::direct;
        std::vector<AlignmentSet> direct, inverse;
        if (need_direct) {
          direct = !pr_direct.empty()
                       ? read_pharaoh(pr_direct, AlignerKind::direct)
                       : align_corpus(train_em(pairs, Direction::a_given_c, pr_iterations, jobs).model, pairs, jobs);
        }
        if (need_inverse) {
          inverse = !pr_inverse.empty()
                        ? read_pharaoh(pr_inverse, AlignerKind::inverse)
                        : align_corpus(train_em(pairs, Direction::c_given_a, pr_iterations, jobs).model, pairs, jobs);
        }
        alignments = combine_alignments(direct, inverse, kind, jobs);
      }
      const auto lexicon = load_lexicon(pr_lexicon, pr_corpus.punct_set());
      const auto annotations = resolve_annotations(pairs, pr_annotations, pr_lexicon_a);
      auto res = project_corpus(pairs, alignments, annotations, lexicon, pr_filter, jobs);
      if (res.missing_alignments > 0) {
        std::cerr << "warning: " << res.missing_alignments << " pairs had no alignment\n";
      }
      write_projected(res.records, pr_out);
      if (!pr_stats.empty()) emit(format_stats(corpus_stats(res.records)), pr_stats);
    };
  });

  // stats
  std::string st_projected, st_out;
  auto* st = app.add_subcommand("stats", "label counts of a projected corpus");
  st->add_option("--projected", st_projected, "projected JSONL")->required();
  st->add_option("--out", st_out, "TSV output (default: standard output)");
  st->callback([&] { action = [&] { emit(format_stats(corpus_stats(read_projected(st_projected))), st_out); }; });

  // eval / dropped-eval
  std::string ev_projected, ev_gold, ev_out;
  auto* ev = app.add_subcommand("eval", "precision and recall against a gold standard");
  ev->add_option("--projected", ev_projected, "projected JSONL")->required();
  ev->add_option("--gold", ev_gold, "gold JSONL")->required();
  ev->add_option("--out", ev_out, "TSV output (default: standard output)");
  ev->callback([&] {
    action = [&] { emit(format_report(intrinsic_eval(read_projected(ev_projected), load_gold(ev_gold))), ev_out); };
  });
  std::string de_projected, de_gold, de_out;
  auto* de = app.add_subcommand("dropped-eval", "outcome of gold DROPPED candidates");
  de->add_option("--projected", de_projected, "projected JSONL")->required();
  de->add_option("--gold", de_gold, "gold JSONL")->required();
  de->add_option("--out", de_out, "TSV output (default: standard output)");
  de->callback([&] {
    action = [&] { emit(format_report(dropped_eval(read_projected(de_projected), load_gold(de_gold))), de_out); };
  });

  // alpha
  std::string ka_data, ka_out;
  auto* ka = app.add_subcommand("alpha", "Krippendorff's alpha for nominal labels");
  ka->add_option("--reliability", ka_data, "TSV rows: item, annotator, label")->required();
  ka->add_option("--out", ka_out, "output (default: standard output)");
  ka->callback([&] {
    action = [&] {
      auto data = load_reliability(ka_data);
      auto a = krippendorff_alpha(data);
      char buf[64];
      if (a) std::snprintf(buf, sizeof buf, "%.6f", *a);
      emit("items\t" + std::to_string(data.items.size()) + "\nannotators\t" + std::to_string(data.annotators.size()) +
               "\nalpha\t" + (a ? std::string(buf) : std::string("undefined")) + "\n",
           ka_out);
    };
  });

  // synth
  SynthConfig sy_cfg;
  std::uint64_t synth_seed = 42;
  std::string synth_out;
  auto* sn = app.add_subcommand("synth", "generate a synthetic parallel corpus with gold labels");
  sn->add_option("--pairs", sy_cfg.n_pairs, "sentence pairs")->capture_default_str();
  sn->add_option("--drop-rate", sy_cfg.drop_rate, "share of connectives dropped on side A")->capture_default_str();
  sn->add_option("--ndu-rate", sy_cfg.ndu_rate, "share of non-discourse usages")->capture_default_str();
  sn->add_option("--context-noise", sy_cfg.context_noise, "share of usages drawn with atypical context")
      ->capture_default_str();
  sn->add_option("--c-vocab", sy_cfg.c_vocab_size, "side C content vocabulary")->capture_default_str();
  sn->add_option("--a-vocab", sy_cfg.a_vocab_size, "side A content vocabulary")->capture_default_str();
  sn->add_option("--seed", synth_seed, "random seed")->capture_default_str();
  sn->add_option("--out", synth_out, "output directory")->required();
  sn->callback([&] { action = [&] { write_synthetic(gen_synthetic(sy_cfg, synth_seed, jobs), synth_out); }; });

  // train-clf
  CorpusArgs tc_corpus;
  std::string tc_projected, tc_out;
  TrainConfig tc_cfg;
  bool tc_no_avg = false;
  auto* tc = app.add_subcommand("train-clf", "train the DU/NDU classifier on a projected corpus");
  tc_corpus.add(tc);
  tc->add_option("--projected", tc_projected, "projected JSONL")->required();
  tc->add_option("--epochs", tc_cfg.epochs, "training epochs")->check(CLI::PositiveNumber)->capture_default_str();
  tc->add_option("--learning-rate", tc_cfg.learning_rate, "update size")->capture_default_str();
  tc->add_option("--seed", tc_cfg.seed, "shuffling seed")->capture_default_str();
  tc->add_flag("--no-averaging", tc_no_avg, "keep the final weights instead of their average");
  tc->add_option("--out", tc_out, "model TSV")->required();
  tc->callback([&] {
    action = [&] {
      tc_cfg.averaging = !tc_no_avg;
      auto pairs = tc_corpus.load(jobs);
      write_classifier(train(training_examples(read_projected(tc_projected), pairs), tc_cfg), tc_out);
    };
  });

  // classify
  CorpusArgs cl_corpus;
  std::string cl_model, cl_lexicon, cl_out;
  auto* cl = app.add_subcommand("classify", "label every candidate with a trained classifier");
  cl_corpus.add(cl);
  cl->add_option("--model", cl_model, "classifier TSV")->required();
  cl->add_option("--lexicon-c", cl_lexicon, "side C connective lexicon")->required();
  cl->add_option("--out", cl_out, "predictions JSONL (default: standard output)");
  cl->callback([&] {
    action = [&] {
      auto pairs = cl_corpus.load(jobs);
      const auto model = read_classifier(cl_model);
      const auto lexicon = load_lexicon(cl_lexicon, cl_corpus.punct_set());
      std::map<std::string, const SentencePair*> by_id;
      for (const auto& p : pairs) by_id.emplace(p.pair_id, &p);
      auto cands = all_candidates(pairs, lexicon, jobs);
      std::vector<std::string> lines(cands.size());
      parallel_for(cands.size(), jobs, [&](std::size_t i) {
        const auto& pair = *by_id.at(cands[i].pair_id);
        lines[i] = prediction_json_line(cands[i], predict(model, extract_features(cands[i], pair)));
      });
      std::string text;
      for (const auto& l : lines) text += l + '\n';
      emit(text, cl_out);
    };
  });

  // eval-clf
  CorpusArgs ec_corpus;
  std::string ec_model, ec_gold, ec_out;
  auto* ec = app.add_subcommand("eval-clf", "score a classifier on gold DU/NDU candidates");
  ec_corpus.add(ec);
  ec->add_option("--model", ec_model, "classifier TSV")->required();
  ec->add_option("--gold", ec_gold, "gold JSONL (DROPPED records are skipped)")->required();
  ec->add_option("--out", ec_out, "TSV output (default: standard output)");
  ec->callback([&] {
    action = [&] {
      auto pairs = ec_corpus.load(jobs);
      auto examples = gold_examples(load_gold(ec_gold), pairs);
      if (examples.empty()) throw FormatError("gold set has no DU or NDU records");
      emit(format_metrics(evaluate_classifier(read_classifier(ec_model), examples)), ec_out);
    };
  });

  // pipeline
  std::string pl_config;
  std::map<std::string, std::string> pl_overrides;
  auto* pl = app.add_subcommand("pipeline", "tokenize, align, symmetrize, match, project and count in one run");
  pl->add_option("--config", pl_config, "key = value config file");
  for (const auto& key : config_keys()) {
    if (key == "filter" || key == "classifier" || key == "averaging" || key == "jobs") continue;
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    pl->add_option_function<std::string>(
        flag, [&pl_overrides, key](const std::string& v) { pl_overrides[key] = v; }, "overrides '" + key + "'");
  }
  pl->add_flag_function(
      "--filter,!--no-filter", [&](std::int64_t n) { pl_overrides["filter"] = n > 0 ? "on" : "off"; },
      "overrides 'filter'");
  pl->add_flag_function(
      "--classifier,!--no-classifier", [&](std::int64_t n) { pl_overrides["classifier"] = n > 0 ? "on" : "off"; },
      "overrides 'classifier'");
  pl->add_flag_function(
      "--averaging,!--no-averaging", [&](std::int64_t n) { pl_overrides["averaging"] = n > 0 ? "on" : "off"; },
      "overrides 'averaging'");
  pl->callback([&] {
    action = [&] {
      RunConfig config = pl_config.empty() ? RunConfig{} : load_config(pl_config);
      config.jobs = jobs;
      for (const auto& [key, value] : pl_overrides) apply_setting(config, key, value);
      auto res = run_pipeline(config);
      std::cerr << res.pairs << " pairs, " << res.candidates << " candidates: " << res.stats.n_du << " DU, "
                << res.stats.n_ndu << " NDU, " << res.stats.n_unsupported << " UNSUPPORTED\n";
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    action();
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
