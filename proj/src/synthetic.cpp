#include "dcproj/synthetic.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dcproj/errors.hpp"
#include "dcproj/parallel.hpp"
#include "dcproj/random.hpp"

namespace dcproj {
namespace {

// Content words [0, kContextClass) open clauses ("subject-like"), words
// [kContextClass, 2 * kContextClass) follow non-discourse usages
// ("object-like"); the rest fill arguments.
constexpr std::size_t kContextClass = 12;

std::string c_word(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fr%03zu", k);
  return buf;
}

std::string a_word(std::size_t k, std::size_t a_vocab) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "en%03zu", k % a_vocab);
  return buf;
}

std::vector<std::string> surfaces(std::string_view text, TokenizerProfile profile) {
  std::vector<std::string> out;
  for (auto& t : tokenize(text, profile)) out.push_back(std::move(t.surface));
  return out;
}

std::string render(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out += tokens[i];
    const bool elided = !tokens[i].empty() && tokens[i].back() == '\'';
    if (i + 1 < tokens.size() && !elided) out.push_back(' ');
  }
  return out;
}

struct GeneratedPair {
  std::string c_line;
  std::string a_line;
  SentencePair pair;
  GoldRecord gold;
  bool discourse = false;
  AlignmentSet oracle;
  std::optional<SourceAnnotation> annotation;
};

GeneratedPair generate_one(const SynthConfig& cfg, const std::vector<std::vector<std::string>>& c_forms,
                           const std::vector<std::vector<std::string>>& a_forms, std::uint64_t seed,
                           std::size_t index) {
  Rng rng(Rng::derive(seed, index));
  GeneratedPair g;
  const std::string pair_id = make_pair_id(index + 1);

  const double u = rng.uniform();
  const GoldStatus status = u < cfg.drop_rate                  ? GoldStatus::DROPPED
                            : u < cfg.drop_rate + cfg.ndu_rate ? GoldStatus::NDU
                                                               : GoldStatus::DU;
  const std::size_t conn = rng.below(cfg.connectives.size());
  const auto& spec = cfg.connectives[conn];
  g.discourse = status != GoldStatus::NDU;

  const bool initial = rng.bernoulli(g.discourse ? 0.3 : 0.05);
  const bool comma = !initial && rng.bernoulli(g.discourse ? 0.8 : 0.15);
  const bool typical_next = !rng.bernoulli(cfg.context_noise);
  const bool subject_next = g.discourse == typical_next;

  std::vector<std::string> c_toks;
  std::vector<std::string> a_toks;
  std::set<AlignmentLink> links;
  auto add_word = [&](std::size_t k) {
    links.insert({c_toks.size(), a_toks.size()});
    c_toks.push_back(c_word(k));
    a_toks.push_back(a_word(k, cfg.a_vocab_size));
  };
  auto add_punct = [&](const char* p) {
    links.insert({c_toks.size(), a_toks.size()});
    c_toks.emplace_back(p);
    a_toks.emplace_back(p);
  };
  const std::size_t filler_lo = 2 * kContextClass;
  const std::size_t filler_hi = cfg.c_vocab_size - 1;

  if (!initial) {
    const std::size_t len = rng.between(cfg.min_arg_len, cfg.max_arg_len);
    for (std::size_t w = 0; w < len; ++w) add_word(rng.between(filler_lo, filler_hi));
    if (comma) add_punct(",");
  }

  const std::size_t c_start = c_toks.size();
  const std::size_t a_start = a_toks.size();
  for (const auto& t : c_forms[conn]) c_toks.push_back(t);
  std::vector<std::size_t> translation;
  if (status == GoldStatus::DU) {
    for (const auto& t : a_forms[conn]) a_toks.push_back(t);
    for (const auto& [co, ao] : spec.links) links.insert({c_start + co, a_start + ao});
    for (std::size_t k = 0; k < a_forms[conn].size(); ++k) translation.push_back(a_start + k);
  } else if (status == GoldStatus::NDU) {
    a_toks.push_back(spec.ndu_translation);
    for (std::size_t k = 0; k < c_forms[conn].size(); ++k) links.insert({c_start + k, a_start});
    translation.push_back(a_start);
  }
  const std::size_t c_end = c_toks.size();
  const std::size_t a_end = a_toks.size();

  add_word(subject_next ? rng.below(kContextClass) : kContextClass + rng.below(kContextClass));
  const std::size_t len = rng.between(cfg.min_arg_len, cfg.max_arg_len);
  for (std::size_t w = 1; w < len; ++w) add_word(rng.between(filler_lo, filler_hi));
  add_punct(".");

  g.c_line = render(c_toks);
  g.a_line = render(a_toks);
  g.pair.pair_id = pair_id;
  g.pair.c_tokens = tokenize(g.c_line, TokenizerProfile::french);
  g.pair.a_tokens = tokenize(g.a_line, TokenizerProfile::generic);
  if (g.pair.c_tokens.size() != c_toks.size() || g.pair.a_tokens.size() != a_toks.size()) {
    throw std::logic_error("synthetic sentence does not re-tokenize to its planted tokens: " + g.c_line);
  }

  g.gold.pair_id = pair_id;
  g.gold.span = {c_start, c_end};
  g.gold.gold_status = status;
  g.gold.gold_translation = translation;
  if (status == GoldStatus::DU) {
    g.gold.gold_relation = spec.relation;
    g.annotation = SourceAnnotation{pair_id, {{a_start, a_end}}, spec.relation};
  }
  g.oracle = AlignmentSet{pair_id, std::move(links), AlignerKind::external};
  return g;
}

}  // namespace

std::vector<SynthConnective> default_connectives() {
  return {
      {"mais", "but", "Contrast", "only", {{0, 0}}},
      {"aussi", "also", "Conjunction", "both", {{0, 0}}},
      {"donc", "therefore", "Result", "really", {{0, 0}}},
      {"ainsi", "thus", "Result", "likewise", {{0, 0}}},
      {"alors", "then", "Asynchronous", "now", {{0, 0}}},
      {"pour", "so that", "Purpose", "for", {{0, 0}, {0, 1}}},
      {"afin de", "in order to", "Purpose", "to", {{0, 0}, {0, 1}, {1, 2}}},
      {"d'autre part", "on the other hand", "Contrast", "elsewhere", {{0, 0}, {0, 1}, {1, 2}, {2, 3}}},
      {"enfin", "finally", "Conjunction", "last", {{0, 0}}},
      {"cependant", "however", "Contrast", "yet", {{0, 0}}},
      {"puis", "afterwards", "Succession", "next", {{0, 0}}},
      {"car", "because", "Cause", "since", {{0, 0}}},
      {"si", "if", "Condition", "so", {{0, 0}}},
      {"lorsque", "when", "Synchrony", "whenever", {{0, 0}}},
      {"en effet", "indeed", "Instantiation", "effectively", {{0, 0}, {1, 0}}},
      {"comme", "as", "Cause", "like", {{0, 0}}},
      {"ou", "or", "Alternative", "either", {{0, 0}}},
      {"et", "and", "Conjunction", "plus", {{0, 0}}},
      {"toutefois", "nevertheless", "Concession", "still", {{0, 0}}},
      {"en outre", "moreover", "Conjunction", "besides", {{0, 0}, {1, 0}}},
  };
}

void validate(const SynthConfig& cfg) {
  auto rate = [](double r, const char* name) {
    if (!(r >= 0.0 && r <= 1.0)) throw FormatError(std::string("synthetic config: ") + name + " must be in [0, 1]");
  };
  rate(cfg.drop_rate, "drop_rate");
  rate(cfg.ndu_rate, "ndu_rate");
  rate(cfg.context_noise, "context_noise");
  if (cfg.drop_rate + cfg.ndu_rate > 1.0) throw FormatError("synthetic config: drop_rate + ndu_rate exceeds 1");
  if (cfg.connectives.empty()) throw FormatError("synthetic config: empty connective inventory");
  if (cfg.c_vocab_size <= 2 * kContextClass || cfg.a_vocab_size == 0) {
    throw FormatError("synthetic config: c_vocab_size must exceed " + std::to_string(2 * kContextClass));
  }
  if (cfg.c_vocab_size > 1000 || cfg.a_vocab_size > 1000) {
    throw FormatError("synthetic config: vocabulary sizes are limited to 1000");
  }
  if (cfg.min_arg_len < 1 || cfg.min_arg_len > cfg.max_arg_len) {
    throw FormatError("synthetic config: need 1 <= min_arg_len <= max_arg_len");
  }
  for (const auto& c : cfg.connectives) {
    if (c.relation.empty()) throw FormatError("synthetic config: connective '" + c.c_form + "' has no relation");
    if (surfaces(c.ndu_translation, TokenizerProfile::generic).size() != 1) {
      throw FormatError("synthetic config: NDU translation of '" + c.c_form + "' must be one token");
    }
    const auto nc = surfaces(c.c_form, TokenizerProfile::french).size();
    const auto na = surfaces(c.a_form, TokenizerProfile::generic).size();
    for (const auto& [co, ao] : c.links) {
      if (co >= nc || ao >= na) throw FormatError("synthetic config: link out of range in '" + c.c_form + "'");
    }
  }
}

SyntheticCorpus gen_synthetic(const SynthConfig& config, std::uint64_t seed, unsigned jobs) {
  validate(config);
  SyntheticCorpus out;
  {
    std::ostringstream tsv;
    for (const auto& c : config.connectives) tsv << c.c_form << '\t' << c.c_form << '\t' << c.relation << '\n';
    out.c_lexicon = parse_lexicon(tsv.str());
  }
  std::vector<std::vector<std::string>> c_forms;
  std::vector<std::vector<std::string>> a_forms;
  for (const auto& c : config.connectives) {
    c_forms.push_back(surfaces(c.c_form, TokenizerProfile::french));
    a_forms.push_back(surfaces(c.a_form, TokenizerProfile::generic));
  }

  std::vector<GeneratedPair> generated(config.n_pairs);
  parallel_for(config.n_pairs, jobs,
               [&](std::size_t i) { generated[i] = generate_one(config, c_forms, a_forms, seed, i); });

  for (auto& g : generated) {
    out.c_lines.push_back(std::move(g.c_line));
    out.a_lines.push_back(std::move(g.a_line));
    out.pairs.push_back(std::move(g.pair));
    out.gold.push_back(std::move(g.gold));
    out.discourse_usage.push_back(g.discourse);
    out.oracle_alignments.push_back(std::move(g.oracle));
    if (g.annotation) out.annotations[g.annotation->pair_id].push_back(std::move(*g.annotation));
  }
  return out;
}

void write_synthetic(const SyntheticCorpus& corpus, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  auto write_lines = [](const std::vector<std::string>& lines, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    for (const auto& l : lines) out << l << '\n';
    if (!out) throw IoError("error writing " + path.string());
  };
  write_lines(corpus.c_lines, dir / "corpus.c.txt");
  write_lines(corpus.a_lines, dir / "corpus.a.txt");
  write_gold(corpus.gold, dir / "gold.jsonl");
  write_pharaoh(corpus.oracle_alignments, dir / "oracle.pharaoh");
  save_annotations(corpus.annotations, dir / "annotations.jsonl");
  write_lexicon(corpus.c_lexicon, dir / "lexicon.c.tsv");
}

}  // namespace dcproj
