#include "dcproj/annotations.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "dcproj/errors.hpp"

namespace dcproj {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

bool overlaps(const SourceAnnotation& x, const SourceAnnotation& y) {
  for (const auto& a : x.spans)
    for (const auto& b : y.spans)
      if (a.start < b.end && b.start < a.end) return true;
  return false;
}

SourceAnnotation from_json(const json& j, const std::string& where) {
  auto field = [&](const char* name) -> const json& {
    if (!j.contains(name)) throw FormatError(where + "missing field '" + name + "'");
    return j.at(name);
  };
  SourceAnnotation a;
  const json& id = field("pair_id");
  if (!id.is_string()) throw FormatError(where + "field 'pair_id' must be a string");
  a.pair_id = id.get<std::string>();
  const json& rel = field("relation");
  if (!rel.is_string()) throw FormatError(where + "field 'relation' must be a string");
  a.relation = rel.get<std::string>();
  const json& spans = field("spans");
  if (!spans.is_array() || spans.empty()) throw FormatError(where + "field 'spans' must be a non-empty array");
  for (const auto& s : spans) {
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_unsigned() || !s[1].is_number_unsigned()) {
      throw FormatError(where + "field 'spans' entries must be [start, end] with non-negative integers");
    }
    a.spans.push_back({s[0].get<std::size_t>(), s[1].get<std::size_t>()});
  }
  try {
    validate_annotation(a);
  } catch (const FormatError& e) {
    throw FormatError(where + e.what());
  }
  return a;
}

}  // namespace

void validate_annotation(const SourceAnnotation& annotation) {
  if (annotation.relation.empty()) throw FormatError("field 'relation': empty relation");
  if (annotation.spans.empty()) throw FormatError("field 'spans': no spans");
  for (std::size_t i = 0; i < annotation.spans.size(); ++i) {
    const auto& s = annotation.spans[i];
    if (s.start >= s.end) {
      throw FormatError("field 'spans': empty span [" + std::to_string(s.start) + "," + std::to_string(s.end) + ")");
    }
    if (i > 0 && annotation.spans[i - 1].end > s.start) {
      const bool out_of_order = annotation.spans[i - 1].start >= s.start;
      throw FormatError(std::string("field 'spans': ") + (out_of_order ? "span out of order" : "overlapping spans") +
                        " at index " + std::to_string(i));
    }
  }
}

AnnotationIndex parse_annotations(std::string_view jsonl, const AnnotationLoadOptions& options) {
  AnnotationIndex index;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "annotations line " + std::to_string(line_no) + ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError(where + "invalid JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw FormatError(where + "expected a JSON object");
    SourceAnnotation a = from_json(j, where);
    auto& bucket = index[a.pair_id];
    for (const auto& other : bucket) {
      if (overlaps(other, a)) {
        const std::string msg = where + "annotation overlaps an earlier annotation of pair " + a.pair_id;
        if (options.overlap_is_error) throw FormatError(msg);
        if (options.warn) {
          options.warn(msg);
        } else {
          std::cerr << "warning: " << msg << '\n';
        }
        break;
      }
    }
    bucket.push_back(std::move(a));
  }
  return index;
}

AnnotationIndex load_annotations(const std::filesystem::path& path, const AnnotationLoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open annotations " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_annotations(buf.str(), options);
}

void save_annotations(const AnnotationIndex& annotations, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& [pair_id, list] : annotations) {
    for (const auto& a : list) {
      ordered_json j;
      j["pair_id"] = a.pair_id;
      j["spans"] = ordered_json::array();
      for (const auto& s : a.spans) j["spans"].push_back({s.start, s.end});
      j["relation"] = a.relation;
      out << j.dump() << '\n';
    }
  }
  if (!out) throw IoError("error writing " + path.string());
}

void check_bounds(const std::vector<SourceAnnotation>& annotations, const SentencePair& pair) {
  for (const auto& a : annotations) {
    for (const auto& s : a.spans) {
      if (s.end > pair.a_tokens.size()) {
        throw FormatError("pair " + pair.pair_id + ": annotation span [" + std::to_string(s.start) + "," +
                          std::to_string(s.end) + ") exceeds " + std::to_string(pair.a_tokens.size()) +
                          " tokens");
      }
    }
  }
}

std::vector<SourceAnnotation> baseline_annotate(const SentencePair& pair, const Lexicon& a_lexicon,
                                                const ConnectiveMatcher& matcher) {
  std::vector<SourceAnnotation> out;
  for (const auto& m : matcher.match(pair.a_tokens)) {
    const auto& entry = a_lexicon[m.entry];
    if (!entry.default_relation) {
      throw FormatError("connective '" + entry.canonical + "' matched in pair " + pair.pair_id +
                        " has no default relation");
    }
    out.push_back({pair.pair_id, {{m.start, m.end}}, *entry.default_relation});
  }
  return out;
}

std::vector<SourceAnnotation> baseline_annotate(const SentencePair& pair, const Lexicon& a_lexicon) {
  return baseline_annotate(pair, a_lexicon, ConnectiveMatcher(a_lexicon));
}

}  // namespace dcproj
