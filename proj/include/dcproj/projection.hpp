#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcproj/alignment.hpp"
#include "dcproj/annotations.hpp"
#include "dcproj/corpus.hpp"
#include "dcproj/lexicon.hpp"

namespace dcproj {

enum class ProjectionStatus { DU, NDU, UNSUPPORTED };

std::string_view to_string(ProjectionStatus status);
ProjectionStatus parse_status(std::string_view name);

/// A candidate connective with the label projected onto it.
struct ProjectedAnnotation {
  std::string pair_id;
  TokenSpan span;    // token indices on side C
  std::string form;  // canonical form of the matched lexicon entry
  ProjectionStatus status = ProjectionStatus::NDU;
  std::optional<std::string> relation;  // set iff status is DU
  std::vector<std::size_t> translation;  // A-side token indices, strictly increasing
  std::string aligner;

  friend bool operator==(const ProjectedAnnotation&, const ProjectedAnnotation&) = default;
};

/// Checks the record-local invariants (relation iff DU, strictly increasing translation).
void validate(const ProjectedAnnotation& record);

/// Sorted, de-duplicated A indices linked to any C token of the candidate.
std::vector<std::size_t> translation_span(const CandidateDC& candidate, const AlignmentSet& alignment,
                                          const SentencePair& pair);

/// Labels a candidate from its translation:
///  - translation without punctuation tokens is empty: UNSUPPORTED when
///    filtering, NDU otherwise;
///  - some remaining token lies in a source annotation: DU with the relation
///    of the annotation covering the most tokens (ties: leftmost first span);
///  - otherwise NDU.
ProjectedAnnotation classify_candidate(const CandidateDC& candidate, const std::vector<std::size_t>& translation,
                                       const SentencePair& pair, const std::vector<SourceAnnotation>& annotations,
                                       bool filter_unsupported, std::string aligner = {});

struct ProjectionResult {
  std::vector<ProjectedAnnotation> records;  // sorted by (pair_id, span.start)
  std::size_t missing_alignments = 0;        // pairs projected with an empty alignment
};

/// Matches candidates on every pair and projects labels through the given
/// alignments. A pair without an alignment is projected with an empty one.
/// A non-empty alignment for an unknown pair_id is an error.
ProjectionResult project_corpus(const std::vector<SentencePair>& pairs, const std::vector<AlignmentSet>& alignments,
                                const AnnotationIndex& annotations, const Lexicon& lexicon, bool filter_unsupported,
                                unsigned jobs = 1);

struct ConnectiveStats {
  std::string form;
  std::size_t du = 0;
  std::size_t ndu = 0;
  std::size_t unsupported = 0;

  std::size_t total() const { return du + ndu + unsupported; }
  friend bool operator==(const ConnectiveStats&, const ConnectiveStats&) = default;
};

struct CorpusStats {
  std::size_t n_du = 0;
  std::size_t n_ndu = 0;
  std::size_t n_unsupported = 0;
  std::vector<ConnectiveStats> per_connective;  // by total descending, then form

  std::size_t total() const { return n_du + n_ndu + n_unsupported; }
};

CorpusStats corpus_stats(const std::vector<ProjectedAnnotation>& projected);

/// TSV report: a totals block followed by one row per connective.
std::string format_stats(const CorpusStats& stats);

/// Projected corpus as JSON lines:
/// {"pair_id", "span": [start, end], "form", "status", "relation", "translation", "aligner"}.
std::string to_json_line(const ProjectedAnnotation& record);
ProjectedAnnotation parse_projected_line(std::string_view line, std::size_t line_no = 0);
void write_projected(const std::vector<ProjectedAnnotation>& corpus, const std::filesystem::path& path);
std::vector<ProjectedAnnotation> read_projected(const std::filesystem::path& path);

}  // namespace dcproj
