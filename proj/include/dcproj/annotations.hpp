#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dcproj/corpus.hpp"
#include "dcproj/lexicon.hpp"

namespace dcproj {

/// An explicit connective on side A and the relation it signals. Spans may
/// be discontinuous ("either ... or"). Tokens outside every annotation are
/// non-discourse usages.
struct SourceAnnotation {
  std::string pair_id;
  std::vector<TokenSpan> spans;
  std::string relation;

  friend bool operator==(const SourceAnnotation&, const SourceAnnotation&) = default;
};

using AnnotationIndex = std::map<std::string, std::vector<SourceAnnotation>>;

/// Throws FormatError unless spans are non-empty, sorted, pairwise disjoint
/// and the relation is non-empty.
void validate_annotation(const SourceAnnotation& annotation);

struct AnnotationLoadOptions {
  /// Overlap between two annotations of the same pair: warning by default.
  bool overlap_is_error = false;
  std::function<void(const std::string&)> warn;  // null means standard error
};

AnnotationIndex parse_annotations(std::string_view jsonl, const AnnotationLoadOptions& options = {});
AnnotationIndex load_annotations(const std::filesystem::path& path, const AnnotationLoadOptions& options = {});

/// One JSON object per line, pairs in key order, annotations in stored order.
void save_annotations(const AnnotationIndex& annotations, const std::filesystem::path& path);

/// Throws FormatError if any span runs past the pair's A side.
void check_bounds(const std::vector<SourceAnnotation>& annotations, const SentencePair& pair);

/// Lexicon-driven stand-in for a discourse parser: every lexicon match on
/// side A becomes a single-span annotation carrying the entry's default
/// relation. Throws FormatError if a matched entry has no default relation.
std::vector<SourceAnnotation> baseline_annotate(const SentencePair& pair, const Lexicon& a_lexicon);
std::vector<SourceAnnotation> baseline_annotate(const SentencePair& pair, const Lexicon& a_lexicon,
                                                const ConnectiveMatcher& matcher);

}  // namespace dcproj
