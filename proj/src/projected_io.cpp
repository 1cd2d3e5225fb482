#include <fstream>

#include <json.hpp>

#include "dcproj/errors.hpp"
#include "dcproj/projection.hpp"

namespace dcproj {

using nlohmann::json;
using nlohmann::ordered_json;

std::string to_json_line(const ProjectedAnnotation& record) {
  validate(record);
  ordered_json j;
  j["pair_id"] = record.pair_id;
  j["span"] = {record.span.start, record.span.end};
  j["form"] = record.form;
  j["status"] = to_string(record.status);
  j["relation"] = record.relation ? ordered_json(*record.relation) : ordered_json(nullptr);
  j["translation"] = record.translation;
  j["aligner"] = record.aligner;
  return j.dump();
}

ProjectedAnnotation parse_projected_line(std::string_view line, std::size_t line_no) {
  const std::string where = "projected line " + std::to_string(line_no) + ": ";
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw FormatError(where + "invalid JSON (" + e.what() + ")");
  }
  if (!j.is_object()) throw FormatError(where + "expected a JSON object");
  auto field = [&](const char* name) -> const json& {
    if (!j.contains(name)) throw FormatError(where + "missing field '" + name + "'");
    return j.at(name);
  };
  auto string_field = [&](const char* name) {
    const json& v = field(name);
    if (!v.is_string()) throw FormatError(where + "field '" + name + "' must be a string");
    return v.get<std::string>();
  };

  ProjectedAnnotation r;
  r.pair_id = string_field("pair_id");
  r.form = string_field("form");
  r.aligner = string_field("aligner");
  try {
    r.status = parse_status(string_field("status"));
  } catch (const FormatError& e) {
    throw FormatError(where + "field 'status': " + e.what());
  }
  const json& span = field("span");
  if (!span.is_array() || span.size() != 2 || !span[0].is_number_unsigned() || !span[1].is_number_unsigned()) {
    throw FormatError(where + "field 'span' must be [start, end]");
  }
  r.span = {span[0].get<std::size_t>(), span[1].get<std::size_t>()};
  const json& rel = field("relation");
  if (rel.is_string()) {
    r.relation = rel.get<std::string>();
  } else if (!rel.is_null()) {
    throw FormatError(where + "field 'relation' must be a string or null");
  }
  const json& tr = field("translation");
  if (!tr.is_array()) throw FormatError(where + "field 'translation' must be an array");
  for (const auto& v : tr) {
    if (!v.is_number_unsigned()) throw FormatError(where + "field 'translation' must hold non-negative integers");
    r.translation.push_back(v.get<std::size_t>());
  }
  try {
    validate(r);
  } catch (const FormatError& e) {
    throw FormatError(where + e.what());
  }
  return r;
}

void write_projected(const std::vector<ProjectedAnnotation>& corpus, const std::filesystem::path& path) {
  std::string buffer;
  for (const auto& r : corpus) {
    buffer += to_json_line(r);
    buffer.push_back('\n');
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << buffer;
  if (!out) throw IoError("error writing " + path.string());
}

std::vector<ProjectedAnnotation> read_projected(const std::filesystem::path& path) {
  std::vector<ProjectedAnnotation> out;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(parse_projected_line(lines[i], i + 1));
  }
  return out;
}

}  // namespace dcproj
