#include "dcproj/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dcproj/em.hpp"
#include "dcproj/errors.hpp"
#include "dcproj/evaluation.hpp"
#include "dcproj/parallel.hpp"

namespace dcproj {
namespace {

namespace fs = std::filesystem;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "yes" || value == "1") return true;
  if (value == "off" || value == "false" || value == "no" || value == "0") return false;
  throw FormatError("config key '" + key + "': expected on/off, got '" + value + "'");
}

long long parse_int(const std::string& key, const std::string& value, long long lo) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || v < lo) {
    throw FormatError("config key '" + key + "': expected an integer >= " + std::to_string(lo) + ", got '" + value +
                      "'");
  }
  return v;
}

double parse_positive(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || !(v > 0.0)) {
    throw FormatError("config key '" + key + "': expected a positive number, got '" + value + "'");
  }
  return v;
}

fs::path resolve(const fs::path& base, const std::string& value) {
  fs::path p(value);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("error writing " + path.string());
}

std::size_t line_of(const std::string& pair_id) {
  std::size_t n = 0;
  for (char ch : pair_id) {
    if (ch < '0' || ch > '9') throw FormatError("pair id '" + pair_id + "' is not a line number");
    n = n * 10 + static_cast<std::size_t>(ch - '0');
  }
  return n;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "corpus_c",  "corpus_a",  "lexicon_c",    "lexicon_a",  "annotations", "alignment",     "gold",
      "punctuation", "out",     "aligner",      "filter",     "em_iterations", "profile_c",   "profile_a",
      "classifier", "epochs",   "learning_rate", "averaging", "seed",        "jobs"};
  return keys;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value, const fs::path& base) {
  if (key == "corpus_c") c.corpus_c = resolve(base, value);
  else if (key == "corpus_a") c.corpus_a = resolve(base, value);
  else if (key == "lexicon_c") c.lexicon_c = resolve(base, value);
  else if (key == "lexicon_a") c.lexicon_a = resolve(base, value);
  else if (key == "annotations") c.annotations = resolve(base, value);
  else if (key == "alignment") c.alignment = resolve(base, value);
  else if (key == "gold") c.gold = resolve(base, value);
  else if (key == "punctuation") c.punctuation = resolve(base, value);
  else if (key == "out") c.out_dir = resolve(base, value);
  else if (key == "aligner") c.aligner = parse_aligner(value);
  else if (key == "filter") c.filter_unsupported = parse_bool(key, value);
  else if (key == "em_iterations") c.em_iterations = static_cast<int>(parse_int(key, value, 1));
  else if (key == "profile_c") c.profile_c = parse_profile(value);
  else if (key == "profile_a") c.profile_a = parse_profile(value);
  else if (key == "classifier") c.train_classifier = parse_bool(key, value);
  else if (key == "epochs") c.classifier.epochs = static_cast<int>(parse_int(key, value, 1));
  else if (key == "learning_rate") c.classifier.learning_rate = parse_positive(key, value);
  else if (key == "averaging") c.classifier.averaging = parse_bool(key, value);
  else if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(parse_int(key, value, 0));
  } else if (key == "jobs") c.jobs = static_cast<unsigned>(parse_int(key, value, 1));
  else throw FormatError("unknown config key '" + key + "'");
}

std::map<std::string, std::string> parse_config_text(std::string_view text, std::string_view name) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  const auto& keys = config_keys();
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::string where = std::string(name) + ":" + std::to_string(line_no) + ": ";
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw FormatError(where + "expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw FormatError(where + "unknown key '" + key + "'");
    if (!out.emplace(key, value).second) throw FormatError(where + "duplicate key '" + key + "'");
  }
  return out;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  RunConfig config;
  const fs::path base = path.parent_path();
  for (const auto& [key, value] : parse_config_text(buf.str(), path.string())) {
    if (!value.empty()) apply_setting(config, key, value, base);
  }
  return config;
}

void validate(const RunConfig& c) {
  auto need = [](const fs::path& p, const char* key) {
    if (p.empty()) throw FormatError(std::string("config: '") + key + "' is required");
    if (!fs::exists(p)) throw IoError(std::string("config: ") + key + " file not found: " + p.string());
  };
  auto optional_file = [](const fs::path& p, const char* key) {
    if (!p.empty() && !fs::exists(p)) throw IoError(std::string("config: ") + key + " file not found: " + p.string());
  };
  need(c.corpus_c, "corpus_c");
  need(c.corpus_a, "corpus_a");
  need(c.lexicon_c, "lexicon_c");
  if (c.annotations.empty() && c.lexicon_a.empty()) {
    throw FormatError("config: either 'annotations' or 'lexicon_a' is required");
  }
  optional_file(c.annotations, "annotations");
  optional_file(c.lexicon_a, "lexicon_a");
  optional_file(c.gold, "gold");
  optional_file(c.punctuation, "punctuation");
  if (c.aligner == AlignerKind::external) need(c.alignment, "alignment");
  else optional_file(c.alignment, "alignment");
  if (c.out_dir.empty()) throw FormatError("config: 'out' is required");
  if (c.em_iterations < 1) throw FormatError("config: em_iterations must be >= 1");
}

void write_tokenized(const std::vector<SentencePair>& pairs, const fs::path& c_path, const fs::path& a_path) {
  std::string c_text, a_text;
  std::size_t line = 0;
  for (const auto& p : pairs) {
    const std::size_t n = line_of(p.pair_id);
    for (++line; line < n; ++line) {
      c_text += '\n';
      a_text += '\n';
    }
    c_text += join_surfaces(p.c_tokens) + '\n';
    a_text += join_surfaces(p.a_tokens) + '\n';
  }
  write_text(c_path, c_text);
  write_text(a_path, a_text);
}

void write_candidates(const std::vector<CandidateDC>& candidates, const fs::path& path) {
  std::string text;
  for (const auto& c : candidates) {
    nlohmann::ordered_json j;
    j["pair_id"] = c.pair_id;
    j["span"] = {c.start, c.end};
    j["form"] = c.canonical;
    text += j.dump() + '\n';
  }
  write_text(path, text);
}

std::vector<AlignmentSet> combine_alignments(const std::vector<AlignmentSet>& direct,
                                             const std::vector<AlignmentSet>& inverse, AlignerKind kind,
                                             unsigned jobs) {
  if (kind == AlignerKind::direct) return direct;
  if (kind == AlignerKind::inverse) return inverse;
  if (direct.size() != inverse.size()) {
    throw FormatError("direct and inverse alignments cover " + std::to_string(direct.size()) + " and " +
                      std::to_string(inverse.size()) + " pairs");
  }
  std::vector<AlignmentSet> out(direct.size());
  parallel_for(direct.size(), jobs, [&](std::size_t i) { out[i] = symmetrize(direct[i], inverse[i], kind); });
  return out;
}

AnnotationIndex resolve_annotations(const std::vector<SentencePair>& pairs, const fs::path& annotations,
                                    const fs::path& lexicon_a, const std::function<void(const std::string&)>& warn) {
  AnnotationIndex index;
  if (!annotations.empty()) {
    AnnotationLoadOptions opts;
    opts.warn = warn;
    index = load_annotations(annotations, opts);
  } else if (!lexicon_a.empty()) {
    const auto lex = load_lexicon(lexicon_a);
    const ConnectiveMatcher matcher(lex);
    for (const auto& p : pairs) {
      auto anns = baseline_annotate(p, lex, matcher);
      if (!anns.empty()) index[p.pair_id] = std::move(anns);
    }
  } else {
    throw FormatError("no annotation source: give an annotation file or an A-side lexicon");
  }
  std::map<std::string, const SentencePair*> by_id;
  for (const auto& p : pairs) by_id.emplace(p.pair_id, &p);
  for (const auto& [id, anns] : index) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw FormatError("annotation for unknown pair_id " + id);
    check_bounds(anns, *it->second);
  }
  return index;
}

std::string format_log_likelihood(const std::vector<double>& trace) {
  std::string out = "iteration\tlog_likelihood\n";
  char buf[64];
  for (std::size_t k = 0; k < trace.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu\t%.17g\n", k, trace[k]);
    out += buf;
  }
  return out;
}

std::string prediction_json_line(const CandidateDC& candidate, const Prediction& prediction) {
  nlohmann::ordered_json j;
  j["pair_id"] = candidate.pair_id;
  j["span"] = {candidate.start, candidate.end};
  j["form"] = candidate.canonical;
  j["label"] = std::string(to_string(prediction.label));
  j["score"] = prediction.score;
  return j.dump();
}

PipelineResult run_pipeline(const RunConfig& c, const std::function<void(const std::string&)>& warn_fn) {
  validate(c);
  auto warn = [&](const std::string& msg) {
    if (warn_fn) warn_fn(msg);
    else std::cerr << "warning: " << msg << '\n';
  };
  std::error_code ec;
  fs::create_directories(c.out_dir, ec);
  if (ec) throw IoError("cannot create " + c.out_dir.string() + ": " + ec.message());

  PipelineResult result;
  auto out = [&](const char* name) {
    result.outputs.push_back(c.out_dir / name);
    return result.outputs.back();
  };

  std::optional<PunctuationSet> punct;
  if (!c.punctuation.empty()) punct = PunctuationSet::load(c.punctuation);
  LoadOptions load;
  load.c_profile = c.profile_c;
  load.a_profile = c.profile_a;
  load.punct = punct ? &*punct : nullptr;
  load.jobs = c.jobs;
  load.warn = warn;
  const auto pairs = load_parallel(c.corpus_c, c.corpus_a, load);
  result.pairs = pairs.size();
  write_tokenized(pairs, out("tokens.c.txt"), out("tokens.a.txt"));

  std::vector<AlignmentSet> alignments;
  if (c.aligner == AlignerKind::external) {
    alignments = read_pharaoh(c.alignment);
  } else {
    const auto direct_em = train_em(pairs, Direction::a_given_c, c.em_iterations, c.jobs);
    const auto inverse_em = train_em(pairs, Direction::c_given_a, c.em_iterations, c.jobs);
    write_model(direct_em.model, out("model.direct.tsv"));
    write_model(inverse_em.model, out("model.inverse.tsv"));
    write_text(out("loglik.direct.tsv"), format_log_likelihood(direct_em.log_likelihood));
    write_text(out("loglik.inverse.tsv"), format_log_likelihood(inverse_em.log_likelihood));
    const auto direct = align_corpus(direct_em.model, pairs, c.jobs);
    const auto inverse = align_corpus(inverse_em.model, pairs, c.jobs);
    write_pharaoh(direct, out("align.direct.pharaoh"));
    write_pharaoh(inverse, out("align.inverse.pharaoh"));
    alignments = combine_alignments(direct, inverse, c.aligner, c.jobs);
  }
  write_pharaoh(alignments, out("alignment.pharaoh"));

  const auto lexicon = load_lexicon(c.lexicon_c, punct ? *punct : PunctuationSet::standard());
  const ConnectiveMatcher matcher(lexicon);
  std::vector<std::vector<CandidateDC>> per_pair(pairs.size());
  parallel_for(pairs.size(), c.jobs, [&](std::size_t i) { per_pair[i] = match_candidates(pairs[i], lexicon, matcher); });
  std::vector<CandidateDC> candidates;
  for (auto& v : per_pair) candidates.insert(candidates.end(), v.begin(), v.end());
  result.candidates = candidates.size();
  write_candidates(candidates, out("candidates.jsonl"));

  const auto annotations = resolve_annotations(pairs, c.annotations, c.lexicon_a, warn);
  save_annotations(annotations, out("annotations.jsonl"));

  const auto projection = project_corpus(pairs, alignments, annotations, lexicon, c.filter_unsupported, c.jobs);
  result.missing_alignments = projection.missing_alignments;
  if (projection.missing_alignments > 0) {
    warn(std::to_string(projection.missing_alignments) + " pairs had no alignment and were projected with none");
  }
  write_projected(projection.records, out("projected.jsonl"));
  result.stats = corpus_stats(projection.records);
  write_text(out("stats.tsv"), format_stats(result.stats));

  if (!c.gold.empty()) {
    const auto gold = load_gold(c.gold);
    write_text(out("eval.tsv"), format_report(intrinsic_eval(projection.records, gold)));
    const bool any_dropped = std::any_of(gold.begin(), gold.end(),
                                         [](const GoldRecord& g) { return g.gold_status == GoldStatus::DROPPED; });
    if (any_dropped) write_text(out("dropped.tsv"), format_report(dropped_eval(projection.records, gold)));
  }
  if (c.train_classifier) {
    TrainConfig tc = c.classifier;
    tc.seed = c.seed;
    write_classifier(train(training_examples(projection.records, pairs), tc), out("classifier.tsv"));
  }
  return result;
}

}  // namespace dcproj
