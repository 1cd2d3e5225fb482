#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dcproj/alignment.hpp"
#include "dcproj/annotations.hpp"
#include "dcproj/classifier.hpp"
#include "dcproj/corpus.hpp"
#include "dcproj/lexicon.hpp"
#include "dcproj/projection.hpp"

namespace dcproj {

/// Settings of a full projection run. Loaded from a flat `key = value`
/// file; command-line flags override file values key by key.
struct RunConfig {
  std::filesystem::path corpus_c;
  std::filesystem::path corpus_a;
  std::filesystem::path lexicon_c;
  std::filesystem::path lexicon_a;    // used for baseline annotation when `annotations` is unset
  std::filesystem::path annotations;
  std::filesystem::path alignment;    // required when aligner is external
  std::filesystem::path gold;         // optional; enables eval.tsv and dropped.tsv
  std::filesystem::path punctuation;  // optional punctuation file
  std::filesystem::path out_dir;
  AlignerKind aligner = AlignerKind::intersection;
  bool filter_unsupported = true;
  int em_iterations = 10;
  TokenizerProfile profile_c = TokenizerProfile::french;
  TokenizerProfile profile_a = TokenizerProfile::generic;
  bool train_classifier = false;
  TrainConfig classifier;
  std::uint64_t seed = 42;
  unsigned jobs = 1;
};

/// Keys accepted in config files, in documentation order.
const std::vector<std::string>& config_keys();

/// Applies one `key`/`value` setting. Relative paths are resolved against `base`.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value,
                   const std::filesystem::path& base = {});

/// Parses `key = value` lines; `#` starts a comment, blank lines are ignored.
/// Unknown keys and duplicate keys are errors.
std::map<std::string, std::string> parse_config_text(std::string_view text, std::string_view name = "config");

RunConfig load_config(const std::filesystem::path& path);

/// Checks that referenced input files exist, that an external aligner has an
/// alignment file, and that some annotation source is given.
void validate(const RunConfig& config);

struct PipelineResult {
  CorpusStats stats;
  std::size_t pairs = 0;
  std::size_t candidates = 0;
  std::size_t missing_alignments = 0;
  std::vector<std::filesystem::path> outputs;
};

/// tokenize -> train-align (both directions) -> align -> symmetrize -> match
/// -> project -> stats, writing every intermediate file into out_dir.
PipelineResult run_pipeline(const RunConfig& config, const std::function<void(const std::string&)>& warn = {});

// Building blocks shared with the command-line subcommands.

/// One line per input line: token surfaces joined by spaces; lines skipped
/// by the loader stay empty.
void write_tokenized(const std::vector<SentencePair>& pairs, const std::filesystem::path& c_path,
                     const std::filesystem::path& a_path);

/// JSONL `{"pair_id", "span", "form"}` per candidate.
void write_candidates(const std::vector<CandidateDC>& candidates, const std::filesystem::path& path);

/// Word alignments of every pair with `kind`; direct/inverse come from the
/// EM models, the rest by symmetrizing them.
std::vector<AlignmentSet> combine_alignments(const std::vector<AlignmentSet>& direct,
                                             const std::vector<AlignmentSet>& inverse, AlignerKind kind,
                                             unsigned jobs = 1);

/// Annotations from a JSONL file, or from the baseline annotator when only an A-side lexicon is given.
AnnotationIndex resolve_annotations(const std::vector<SentencePair>& pairs, const std::filesystem::path& annotations,
                                    const std::filesystem::path& lexicon_a,
                                    const std::function<void(const std::string&)>& warn = {});

/// `iteration <TAB> log_likelihood` rows.
std::string format_log_likelihood(const std::vector<double>& trace);
/// JSONL `{"pair_id", "span", "form", "label", "score"}`.
std::string prediction_json_line(const CandidateDC& candidate, const Prediction& prediction);

}  // namespace dcproj
