#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dcproj/corpus.hpp"

namespace dcproj {

struct AlignmentLink {
  std::size_t c_index = 0;
  std::size_t a_index = 0;

  friend auto operator<=>(const AlignmentLink&, const AlignmentLink&) = default;
};

enum class AlignerKind { direct, inverse, intersection, union_, grow_diag, external };

/// "direct", "inverse", "intersection", "union", "grow-diag", "external".
std::string_view to_string(AlignerKind kind);
/// Accepts the names above; "grow_diag" is accepted as a synonym.
AlignerKind parse_aligner(std::string_view name);

struct AlignmentSet {
  std::string pair_id;
  std::set<AlignmentLink> links;  // ordered by (c_index, a_index)
  AlignerKind aligner = AlignerKind::external;

  friend bool operator==(const AlignmentSet&, const AlignmentSet&) = default;
};

/// Throws FormatError if a link falls outside the pair's token counts.
void check_bounds(const AlignmentSet& alignment, const SentencePair& pair);

AlignmentSet intersect(const AlignmentSet& direct, const AlignmentSet& inverse);
AlignmentSet union_align(const AlignmentSet& direct, const AlignmentSet& inverse);

/// Grows the intersection towards the union. Repeats full passes until a
/// pass adds nothing: links are visited in (c, a) order and their eight
/// neighbours in the order (-1,-1) (-1,0) (-1,1) (0,-1) (0,1) (1,-1) (1,0)
/// (1,1); a neighbour is added when it is in the union and at least one of
/// its tokens is still unaligned. No final step.
AlignmentSet grow_diag(const AlignmentSet& direct, const AlignmentSet& inverse);

/// Dispatches to intersect / union_align / grow_diag.
AlignmentSet symmetrize(const AlignmentSet& direct, const AlignmentSet& inverse, AlignerKind method);

/// Pharaoh format: one line per pair, space-separated `c-a` links. Line n
/// holds the links of pair_id make_pair_id(n).
AlignmentSet parse_pharaoh_line(std::string_view line, std::string pair_id, std::size_t line_no = 0);
std::string format_pharaoh_line(const AlignmentSet& alignment);

std::vector<AlignmentSet> read_pharaoh(const std::filesystem::path& path, AlignerKind kind = AlignerKind::external);

/// Writes sets ordered by numeric pair_id; ids absent from `sets` become
/// empty lines so that line numbers keep matching pair ids.
void write_pharaoh(const std::vector<AlignmentSet>& sets, const std::filesystem::path& path);

}  // namespace dcproj
