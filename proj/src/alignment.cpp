#include "dcproj/alignment.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>

#include "dcproj/errors.hpp"

namespace dcproj {
namespace {

void require_same_pair(const AlignmentSet& a, const AlignmentSet& b) {
  if (a.pair_id != b.pair_id) {
    throw FormatError("alignment pair_id mismatch: '" + a.pair_id + "' vs '" + b.pair_id + "'");
  }
}

std::size_t parse_index(std::string_view field, std::size_t line_no, std::string_view token) {
  const std::string where = "pharaoh line " + std::to_string(line_no) + ": ";
  if (!field.empty() && field[0] == '-') throw FormatError(where + "negative index in '" + std::string(token) + "'");
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw FormatError(where + "non-integer field in '" + std::string(token) + "'");
  }
  return value;
}

std::size_t pair_number(const std::string& pair_id) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(pair_id.data(), pair_id.data() + pair_id.size(), value);
  if (pair_id.empty() || ec != std::errc() || ptr != pair_id.data() + pair_id.size() || value == 0) {
    throw FormatError("pharaoh output needs numeric pair ids, got '" + pair_id + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(AlignerKind kind) {
  switch (kind) {
    case AlignerKind::direct: return "direct";
    case AlignerKind::inverse: return "inverse";
    case AlignerKind::intersection: return "intersection";
    case AlignerKind::union_: return "union";
    case AlignerKind::grow_diag: return "grow-diag";
    case AlignerKind::external: return "external";
  }
  return "external";
}

AlignerKind parse_aligner(std::string_view name) {
  if (name == "direct") return AlignerKind::direct;
  if (name == "inverse") return AlignerKind::inverse;
  if (name == "intersection") return AlignerKind::intersection;
  if (name == "union") return AlignerKind::union_;
  if (name == "grow-diag" || name == "grow_diag") return AlignerKind::grow_diag;
  if (name == "external") return AlignerKind::external;
  throw FormatError("unknown aligner '" + std::string(name) + "'");
}

void check_bounds(const AlignmentSet& alignment, const SentencePair& pair) {
  for (const auto& link : alignment.links) {
    if (link.c_index >= pair.c_tokens.size() || link.a_index >= pair.a_tokens.size()) {
      throw FormatError("pair " + pair.pair_id + ": link " + std::to_string(link.c_index) + "-" +
                        std::to_string(link.a_index) + " out of bounds (" + std::to_string(pair.c_tokens.size()) +
                        " x " + std::to_string(pair.a_tokens.size()) + " tokens)");
    }
  }
}

AlignmentSet intersect(const AlignmentSet& direct, const AlignmentSet& inverse) {
  require_same_pair(direct, inverse);
  AlignmentSet out{direct.pair_id, {}, AlignerKind::intersection};
  std::set_intersection(direct.links.begin(), direct.links.end(), inverse.links.begin(), inverse.links.end(),
                        std::inserter(out.links, out.links.end()));
  return out;
}

AlignmentSet union_align(const AlignmentSet& direct, const AlignmentSet& inverse) {
  require_same_pair(direct, inverse);
  AlignmentSet out{direct.pair_id, {}, AlignerKind::union_};
  std::set_union(direct.links.begin(), direct.links.end(), inverse.links.begin(), inverse.links.end(),
                 std::inserter(out.links, out.links.end()));
  return out;
}

AlignmentSet grow_diag(const AlignmentSet& direct, const AlignmentSet& inverse) {
  const AlignmentSet candidates = union_align(direct, inverse);
  AlignmentSet out = intersect(direct, inverse);
  out.aligner = AlignerKind::grow_diag;

  std::set<std::size_t> c_aligned;
  std::set<std::size_t> a_aligned;
  for (const auto& link : out.links) {
    c_aligned.insert(link.c_index);
    a_aligned.insert(link.a_index);
  }

  static constexpr int kNeighbours[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                            {0, 1},   {1, -1}, {1, 0},  {1, 1}};
  bool added = true;
  while (added) {
    added = false;
    const std::vector<AlignmentLink> current(out.links.begin(), out.links.end());
    for (const auto& link : current) {
      for (const auto& d : kNeighbours) {
        if ((d[0] < 0 && link.c_index == 0) || (d[1] < 0 && link.a_index == 0)) continue;
        const AlignmentLink n{static_cast<std::size_t>(static_cast<std::ptrdiff_t>(link.c_index) + d[0]),
                              static_cast<std::size_t>(static_cast<std::ptrdiff_t>(link.a_index) + d[1])};
        if (!candidates.links.count(n) || out.links.count(n)) continue;
        if (c_aligned.count(n.c_index) && a_aligned.count(n.a_index)) continue;
        out.links.insert(n);
        c_aligned.insert(n.c_index);
        a_aligned.insert(n.a_index);
        added = true;
      }
    }
  }
  return out;
}

AlignmentSet symmetrize(const AlignmentSet& direct, const AlignmentSet& inverse, AlignerKind method) {
  switch (method) {
    case AlignerKind::intersection: return intersect(direct, inverse);
    case AlignerKind::union_: return union_align(direct, inverse);
    case AlignerKind::grow_diag: return grow_diag(direct, inverse);
    default: break;
  }
  throw FormatError("'" + std::string(to_string(method)) + "' is not a symmetrization method");
}

AlignmentSet parse_pharaoh_line(std::string_view line, std::string pair_id, std::size_t line_no) {
  AlignmentSet out{std::move(pair_id), {}, AlignerKind::external};
  std::size_t pos = 0;
  while (pos < line.size()) {
    if (line[pos] == ' ' || line[pos] == '\t') {
      ++pos;
      continue;
    }
    auto end = line.find_first_of(" \t", pos);
    if (end == std::string_view::npos) end = line.size();
    const std::string_view token = line.substr(pos, end - pos);
    // Split on the first '-' that is not a leading sign, so "-1-2" reports a negative index.
    const auto dash = token.find('-', 1);
    if (dash == std::string_view::npos) {
      throw FormatError("pharaoh line " + std::to_string(line_no) + ": expected 'c-a', got '" +
                        std::string(token) + "'");
    }
    const std::size_t c = parse_index(token.substr(0, dash), line_no, token);
    const std::size_t a = parse_index(token.substr(dash + 1), line_no, token);
    out.links.insert({c, a});
    pos = end;
  }
  return out;
}

std::string format_pharaoh_line(const AlignmentSet& alignment) {
  std::string out;
  for (const auto& link : alignment.links) {
    if (!out.empty()) out.push_back(' ');
    out += std::to_string(link.c_index);
    out.push_back('-');
    out += std::to_string(link.a_index);
  }
  return out;
}

std::vector<AlignmentSet> read_pharaoh(const std::filesystem::path& path, AlignerKind kind) {
  std::vector<AlignmentSet> sets;
  const auto lines = read_lines(path);
  sets.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    sets.push_back(parse_pharaoh_line(lines[i], make_pair_id(i + 1), i + 1));
    sets.back().aligner = kind;
  }
  return sets;
}

void write_pharaoh(const std::vector<AlignmentSet>& sets, const std::filesystem::path& path) {
  std::map<std::size_t, const AlignmentSet*> by_line;
  for (const auto& s : sets) {
    if (!by_line.emplace(pair_number(s.pair_id), &s).second) {
      throw FormatError("duplicate alignment for pair " + s.pair_id);
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  std::size_t line = 1;
  for (const auto& [number, set] : by_line) {
    for (; line < number; ++line) out << '\n';
    out << format_pharaoh_line(*set) << '\n';
    ++line;
  }
  if (!out) throw IoError("error writing " + path.string());
}

}  // namespace dcproj
