#include "dcproj/projection.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "dcproj/errors.hpp"
#include "dcproj/parallel.hpp"

namespace dcproj {

std::string_view to_string(ProjectionStatus status) {
  switch (status) {
    case ProjectionStatus::DU: return "DU";
    case ProjectionStatus::NDU: return "NDU";
    case ProjectionStatus::UNSUPPORTED: return "UNSUPPORTED";
  }
  return "NDU";
}

ProjectionStatus parse_status(std::string_view name) {
  if (name == "DU") return ProjectionStatus::DU;
  if (name == "NDU") return ProjectionStatus::NDU;
  if (name == "UNSUPPORTED") return ProjectionStatus::UNSUPPORTED;
  throw FormatError("unknown status '" + std::string(name) + "'");
}

void validate(const ProjectedAnnotation& record) {
  if (record.status == ProjectionStatus::DU && !record.relation) {
    throw FormatError("record " + record.pair_id + ": status DU requires a relation");
  }
  if (record.status != ProjectionStatus::DU && record.relation) {
    throw FormatError("record " + record.pair_id + ": status " + std::string(to_string(record.status)) +
                      " must not carry a relation");
  }
  if (record.span.start >= record.span.end) throw FormatError("record " + record.pair_id + ": empty span");
  for (std::size_t i = 1; i < record.translation.size(); ++i) {
    if (record.translation[i - 1] >= record.translation[i]) {
      throw FormatError("record " + record.pair_id + ": translation indices not strictly increasing");
    }
  }
}

std::vector<std::size_t> translation_span(const CandidateDC& candidate, const AlignmentSet& alignment,
                                          const SentencePair& pair) {
  if (alignment.pair_id != candidate.pair_id || pair.pair_id != candidate.pair_id) {
    throw FormatError("translation_span: candidate of pair " + candidate.pair_id + " used with alignment of pair " +
                      alignment.pair_id);
  }
  std::set<std::size_t> linked;
  for (auto it = alignment.links.lower_bound({candidate.start, 0});
       it != alignment.links.end() && it->c_index < candidate.end; ++it)
    linked.insert(it->a_index);
  return {linked.begin(), linked.end()};
}

ProjectedAnnotation classify_candidate(const CandidateDC& candidate, const std::vector<std::size_t>& translation,
                                       const SentencePair& pair, const std::vector<SourceAnnotation>& annotations,
                                       bool filter_unsupported, std::string aligner) {
  ProjectedAnnotation out;
  out.pair_id = candidate.pair_id;
  out.span = {candidate.start, candidate.end};
  out.form = candidate.canonical;
  out.translation = translation;
  out.aligner = std::move(aligner);

  std::vector<std::size_t> content;
  for (auto idx : translation) {
    if (idx >= pair.a_tokens.size()) {
      throw FormatError("pair " + pair.pair_id + ": translation index " + std::to_string(idx) + " out of bounds");
    }
    if (!pair.a_tokens[idx].is_punct) content.push_back(idx);
  }
  if (content.empty()) {
    out.status = filter_unsupported ? ProjectionStatus::UNSUPPORTED : ProjectionStatus::NDU;
    return out;
  }

  const SourceAnnotation* best = nullptr;
  std::size_t best_overlap = 0;
  for (const auto& a : annotations) {
    std::size_t overlap = 0;
    for (auto idx : content) {
      for (const auto& s : a.spans) {
        if (idx >= s.start && idx < s.end) {
          ++overlap;
          break;
        }
      }
    }
    if (overlap == 0) continue;
    if (!best || overlap > best_overlap ||
        (overlap == best_overlap && a.spans.front().start < best->spans.front().start)) {
      best = &a;
      best_overlap = overlap;
    }
  }
  if (best) {
    out.status = ProjectionStatus::DU;
    out.relation = best->relation;
  } else {
    out.status = ProjectionStatus::NDU;
  }
  return out;
}

ProjectionResult project_corpus(const std::vector<SentencePair>& pairs, const std::vector<AlignmentSet>& alignments,
                                const AnnotationIndex& annotations, const Lexicon& lexicon, bool filter_unsupported,
                                unsigned jobs) {
  std::map<std::string, std::size_t> pair_index;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!pair_index.emplace(pairs[i].pair_id, i).second) throw FormatError("duplicate pair_id " + pairs[i].pair_id);
  }
  std::vector<const AlignmentSet*> by_pair(pairs.size(), nullptr);
  for (const auto& a : alignments) {
    auto it = pair_index.find(a.pair_id);
    if (it == pair_index.end()) {
      if (a.links.empty()) continue;  // e.g. the line of a blank corpus line
      throw FormatError("alignment references unknown pair_id " + a.pair_id);
    }
    if (by_pair[it->second]) throw FormatError("duplicate alignment for pair " + a.pair_id);
    check_bounds(a, pairs[it->second]);
    by_pair[it->second] = &a;
  }
  const std::string fallback_aligner(alignments.empty() ? "external" : to_string(alignments.front().aligner));

  const ConnectiveMatcher matcher(lexicon);
  static const std::vector<SourceAnnotation> kNone;
  std::vector<std::vector<ProjectedAnnotation>> per_pair(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t i) {
    const SentencePair& pair = pairs[i];
    auto ann = annotations.find(pair.pair_id);
    const auto& pair_annotations = ann == annotations.end() ? kNone : ann->second;
    check_bounds(pair_annotations, pair);
    const AlignmentSet empty{pair.pair_id, {}, AlignerKind::external};
    const AlignmentSet& alignment = by_pair[i] ? *by_pair[i] : empty;
    const std::string aligner = by_pair[i] ? std::string(to_string(alignment.aligner)) : fallback_aligner;
    for (const auto& candidate : match_candidates(pair, lexicon, matcher)) {
      per_pair[i].push_back(classify_candidate(candidate, translation_span(candidate, alignment, pair), pair,
                                               pair_annotations, filter_unsupported, aligner));
    }
  });

  ProjectionResult result;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!by_pair[i]) ++result.missing_alignments;
    for (auto& r : per_pair[i]) result.records.push_back(std::move(r));
  }
  std::stable_sort(result.records.begin(), result.records.end(), [](const auto& x, const auto& y) {
    return std::tie(x.pair_id, x.span.start) < std::tie(y.pair_id, y.span.start);
  });
  return result;
}

CorpusStats corpus_stats(const std::vector<ProjectedAnnotation>& projected) {
  CorpusStats stats;
  std::map<std::string, ConnectiveStats> per;
  for (const auto& r : projected) {
    auto& c = per[r.form];
    c.form = r.form;
    switch (r.status) {
      case ProjectionStatus::DU: ++stats.n_du, ++c.du; break;
      case ProjectionStatus::NDU: ++stats.n_ndu, ++c.ndu; break;
      case ProjectionStatus::UNSUPPORTED: ++stats.n_unsupported, ++c.unsupported; break;
    }
  }
  for (auto& [form, c] : per) stats.per_connective.push_back(std::move(c));
  std::stable_sort(stats.per_connective.begin(), stats.per_connective.end(),
                   [](const auto& x, const auto& y) { return x.total() > y.total(); });
  return stats;
}

std::string format_stats(const CorpusStats& stats) {
  std::ostringstream out;
  out << "label\tcount\n";
  out << "DU\t" << stats.n_du << '\n';
  out << "NDU\t" << stats.n_ndu << '\n';
  out << "UNSUPPORTED\t" << stats.n_unsupported << '\n';
  out << "TOTAL\t" << stats.total() << "\n\n";
  out << "connective\tDU\tNDU\tUNSUPPORTED\ttotal\n";
  for (const auto& c : stats.per_connective) {
    out << c.form << '\t' << c.du << '\t' << c.ndu << '\t' << c.unsupported << '\t' << c.total() << '\n';
  }
  return out.str();
}

}  // namespace dcproj
