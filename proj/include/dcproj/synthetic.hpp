#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "dcproj/alignment.hpp"
#include "dcproj/annotations.hpp"
#include "dcproj/corpus.hpp"
#include "dcproj/evaluation.hpp"
#include "dcproj/lexicon.hpp"

namespace dcproj {

/// A bilingual connective for the generator. `links` pair token offsets of
/// c_form with token offsets of a_form.
struct SynthConnective {
  std::string c_form;
  std::string a_form;
  std::string relation;
  std::string ndu_translation;  // single non-connective word used for NDU usages
  std::vector<std::pair<std::size_t, std::size_t>> links;
};

std::vector<SynthConnective> default_connectives();

struct SynthConfig {
  std::size_t n_pairs = 1000;
  std::size_t c_vocab_size = 300;
  std::size_t a_vocab_size = 300;
  std::vector<SynthConnective> connectives = default_connectives();
  double drop_rate = 0.15;
  double ndu_rate = 0.54;
  std::size_t min_arg_len = 3;
  std::size_t max_arg_len = 8;
  /// Probability that a usage draws the context typical of the other usage.
  double context_noise = 0.25;
};

/// Throws FormatError on rates outside [0, 1], rates summing over 1, an
/// empty inventory or vocabularies too small for the context word classes.
void validate(const SynthConfig& config);

struct SyntheticCorpus {
  std::vector<std::string> c_lines;
  std::vector<std::string> a_lines;
  std::vector<SentencePair> pairs;
  std::vector<GoldRecord> gold;  // one planted candidate per pair
  /// True usage of each gold candidate: dropped connectives keep their
  /// discourse usage even though side A lost the counterpart.
  std::vector<bool> discourse_usage;
  std::vector<AlignmentSet> oracle_alignments;
  AnnotationIndex annotations;
  Lexicon c_lexicon;
};

/// Generates a parallel corpus from a bilingual dictionary with one planted
/// connective per sentence. With probability drop_rate the side-A
/// counterpart is omitted (DROPPED), with probability ndu_rate it is a
/// non-connective word (NDU), otherwise it is the annotated connective (DU).
/// Every pair draws from its own stream derived from `seed`, so the output
/// does not depend on `jobs`.
SyntheticCorpus gen_synthetic(const SynthConfig& config, std::uint64_t seed, unsigned jobs = 1);

/// Writes corpus.c.txt, corpus.a.txt, gold.jsonl, oracle.pharaoh,
/// annotations.jsonl and lexicon.c.tsv into `dir`.
void write_synthetic(const SyntheticCorpus& corpus, const std::filesystem::path& dir);

}  // namespace dcproj
