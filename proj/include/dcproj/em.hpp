#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dcproj/alignment.hpp"
#include "dcproj/corpus.hpp"

namespace dcproj {

/// c_given_a: t(c-word | a-word), conditioning on side A (+NULL); its
/// Viterbi alignment links every C token and is the "inverse" alignment.
/// a_given_c: t(a-word | c-word), conditioning on side C (+NULL); its
/// Viterbi alignment links every A token and is the "direct" alignment.
enum class Direction { c_given_a, a_given_c };

std::string_view to_string(Direction direction);
Direction parse_direction(std::string_view name);

/// Kind of alignment produced by Viterbi decoding with a model of this direction.
AlignerKind viterbi_kind(Direction direction);

/// Lexical translation table t(out | cond) over case-folded words, with the
/// distinguished conditioning word kNullWord.
class TranslationModel {
 public:
  static constexpr std::string_view kNullWord = "<null>";

  struct Entry {
    std::string cond;
    std::string out;
    double prob;
  };

  TranslationModel() = default;
  /// Builds a model from explicit entries. Throws FormatError on a duplicate
  /// (cond, out) or a probability outside [0, 1].
  TranslationModel(Direction direction, std::vector<Entry> entries);

  Direction direction() const { return direction_; }

  /// t(out | cond); 0 for pairs never seen together.
  double prob(std::string_view cond, std::string_view out) const;

  /// Entries sorted by (cond, out) byte order.
  const std::vector<Entry>& entries() const { return entries_; }

  /// Largest |sum_out t(cond, out) - 1| over all conditioning words.
  double max_normalization_error() const;

 private:
  Direction direction_ = Direction::c_given_a;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::unordered_map<std::string, double>> table_;
};

struct EmResult {
  TranslationModel model;
  /// log_likelihood[k] is the corpus log-likelihood under the model after k
  /// EM iterations (index 0 is the uniform initialisation).
  std::vector<double> log_likelihood;
  /// Worst normalization error of any conditional distribution, recorded after each M-step.
  std::vector<double> normalization_error;
};

/// IBM Model 1 EM. Initialisation is uniform over the output words that
/// co-occur with each conditioning word. Expected counts are reduced in
/// corpus order, so the result does not depend on `jobs`.
EmResult train_em(const std::vector<SentencePair>& pairs, Direction direction, int iterations, unsigned jobs = 1);

/// Posterior probability that output token j was generated by each
/// conditioning position (index 0 is NULL, index i+1 is conditioning token i),
/// i.e. the normalised expected counts of one E-step.
std::vector<std::vector<double>> link_posteriors(const TranslationModel& model, const SentencePair& pair);

/// Links every output token to its most probable conditioning token, or to
/// nothing when NULL is at least as probable. Ties between words go to the
/// lowest token index. Unknown words align to NULL.
AlignmentSet viterbi_align(const TranslationModel& model, const SentencePair& pair);

std::vector<AlignmentSet> align_corpus(const TranslationModel& model, const std::vector<SentencePair>& pairs,
                                       unsigned jobs = 1);

/// TSV: header `direction <TAB> c_given_a|a_given_c`, then `cond <TAB> out <TAB> prob`.
void write_model(const TranslationModel& model, const std::filesystem::path& path);
TranslationModel read_model(const std::filesystem::path& path);

}  // namespace dcproj
