#include "dcproj/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dcproj/errors.hpp"

namespace dcproj {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::size_t predicted_row(ProjectionStatus s) {
  switch (s) {
    case ProjectionStatus::DU: return 0;
    case ProjectionStatus::NDU: return 1;
    case ProjectionStatus::UNSUPPORTED: return 2;
  }
  return 1;
}

std::size_t gold_column(GoldStatus s) {
  switch (s) {
    case GoldStatus::DU: return 0;
    case GoldStatus::NDU: return 1;
    case GoldStatus::DROPPED: return 2;
  }
  return 1;
}

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string fmt(const std::optional<double>& v) {
  if (!v) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

using JoinKey = std::tuple<std::string, std::size_t, std::size_t>;

std::map<JoinKey, const ProjectedAnnotation*> index_projected(const std::vector<ProjectedAnnotation>& projected) {
  std::map<JoinKey, const ProjectedAnnotation*> out;
  for (const auto& r : projected) out.emplace(JoinKey{r.pair_id, r.span.start, r.span.end}, &r);
  return out;
}

const ProjectedAnnotation& join(const std::map<JoinKey, const ProjectedAnnotation*>& index, const GoldRecord& g) {
  auto it = index.find({g.pair_id, g.span.start, g.span.end});
  if (it == index.end()) {
    throw FormatError("gold record pair " + g.pair_id + " span [" + std::to_string(g.span.start) + "," +
                      std::to_string(g.span.end) + ") has no projected candidate");
  }
  return *it->second;
}

}  // namespace

std::string_view to_string(GoldStatus status) {
  switch (status) {
    case GoldStatus::DU: return "DU";
    case GoldStatus::NDU: return "NDU";
    case GoldStatus::DROPPED: return "DROPPED";
  }
  return "NDU";
}

GoldStatus parse_gold_status(std::string_view name) {
  if (name == "DU") return GoldStatus::DU;
  if (name == "NDU") return GoldStatus::NDU;
  if (name == "DROPPED") return GoldStatus::DROPPED;
  throw FormatError("unknown gold status '" + std::string(name) + "'");
}

void validate(const GoldRecord& g) {
  if (g.span.start >= g.span.end) throw FormatError("gold record " + g.pair_id + ": empty span");
  if (g.gold_status == GoldStatus::DROPPED && g.gold_translation && !g.gold_translation->empty()) {
    throw FormatError("gold record " + g.pair_id + ": DROPPED candidate with a translation");
  }
  if (g.gold_status == GoldStatus::DU && !g.gold_relation) {
    throw FormatError("gold record " + g.pair_id + ": DU candidate without a relation");
  }
}

std::vector<GoldRecord> parse_gold(std::string_view jsonl) {
  std::vector<GoldRecord> out;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "gold line " + std::to_string(line_no) + ": ";
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
    GoldRecord g;
    if (!field("pair_id").is_string()) throw FormatError(where + "field 'pair_id' must be a string");
    g.pair_id = j["pair_id"].get<std::string>();
    const json& span = field("span");
    if (!span.is_array() || span.size() != 2 || !span[0].is_number_unsigned() || !span[1].is_number_unsigned()) {
      throw FormatError(where + "field 'span' must be [start, end]");
    }
    g.span = {span[0].get<std::size_t>(), span[1].get<std::size_t>()};
    if (!field("gold_status").is_string()) throw FormatError(where + "field 'gold_status' must be a string");
    try {
      g.gold_status = parse_gold_status(j["gold_status"].get<std::string>());
    } catch (const FormatError& e) {
      throw FormatError(where + "field 'gold_status': " + e.what());
    }
    if (j.contains("gold_relation") && !j["gold_relation"].is_null()) {
      if (!j["gold_relation"].is_string()) throw FormatError(where + "field 'gold_relation' must be a string or null");
      g.gold_relation = j["gold_relation"].get<std::string>();
    }
    if (j.contains("gold_translation") && !j["gold_translation"].is_null()) {
      const json& tr = j["gold_translation"];
      if (!tr.is_array()) throw FormatError(where + "field 'gold_translation' must be an array or null");
      g.gold_translation.emplace();
      for (const auto& v : tr) {
        if (!v.is_number_unsigned()) throw FormatError(where + "field 'gold_translation' must hold indices");
        g.gold_translation->push_back(v.get<std::size_t>());
      }
    }
    try {
      validate(g);
    } catch (const FormatError& e) {
      throw FormatError(where + e.what());
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<GoldRecord> load_gold(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open gold file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_gold(buf.str());
}

void write_gold(const std::vector<GoldRecord>& gold, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& g : gold) {
    validate(g);
    ordered_json j;
    j["pair_id"] = g.pair_id;
    j["span"] = {g.span.start, g.span.end};
    j["gold_status"] = to_string(g.gold_status);
    j["gold_relation"] = g.gold_relation ? ordered_json(*g.gold_relation) : ordered_json(nullptr);
    j["gold_translation"] = g.gold_translation ? ordered_json(*g.gold_translation) : ordered_json(nullptr);
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("error writing " + path.string());
}

LabelMetrics make_metrics(std::size_t correct, std::size_t predicted, std::size_t gold) {
  LabelMetrics m;
  m.precision = ratio(correct, predicted);
  m.recall = ratio(correct, gold);
  if (m.precision && m.recall) {
    const double sum = *m.precision + *m.recall;
    m.f1 = sum > 0.0 ? 2.0 * *m.precision * *m.recall / sum : 0.0;
  }
  return m;
}

EvalReport intrinsic_eval(const std::vector<ProjectedAnnotation>& projected, const std::vector<GoldRecord>& gold) {
  if (gold.empty()) throw FormatError("intrinsic_eval: empty gold standard");
  const auto index = index_projected(projected);
  EvalReport report;
  for (const auto& g : gold) {
    const auto& p = join(index, g);
    ++report.counts[predicted_row(p.status)][gold_column(g.gold_status)];
    ++report.joined;
    if (p.status == ProjectionStatus::DU && g.gold_status == GoldStatus::DU && p.relation == g.gold_relation)
      ++report.relation_matches;
  }
  const auto& c = report.counts;
  const std::size_t pred_du = c[0][0] + c[0][1] + c[0][2];
  const std::size_t pred_ndu = c[1][0] + c[1][1] + c[1][2];
  const std::size_t gold_du = c[0][0] + c[1][0] + c[2][0];
  const std::size_t gold_ndu = c[0][1] + c[1][1] + c[2][1];
  report.du = make_metrics(c[0][0], pred_du, gold_du);
  report.ndu = make_metrics(c[1][1], pred_ndu, gold_ndu);
  report.overall_precision = ratio(c[0][0] + c[1][1], pred_du + pred_ndu);
  report.overall_recall = ratio(c[0][0] + c[1][1], gold_du + gold_ndu);
  return report;
}

DroppedReport dropped_eval(const std::vector<ProjectedAnnotation>& projected, const std::vector<GoldRecord>& gold) {
  const auto index = index_projected(projected);
  std::array<std::size_t, 3> outcome{};
  DroppedReport report;
  for (const auto& g : gold) {
    if (g.gold_status != GoldStatus::DROPPED) continue;
    ++outcome[predicted_row(join(index, g).status)];
    ++report.n_dropped;
  }
  if (report.n_dropped == 0) throw FormatError("dropped_eval: gold standard has no DROPPED candidates");
  const double n = static_cast<double>(report.n_dropped);
  report.identified_fraction = static_cast<double>(outcome[2]) / n;
  report.misl_du_fraction = static_cast<double>(outcome[0]) / n;
  report.misl_ndu_fraction = static_cast<double>(outcome[1]) / n;
  return report;
}

std::string format_report(const EvalReport& r) {
  std::ostringstream out;
  out << "metric\tDU\tNDU\tOA\n";
  out << "precision\t" << fmt(r.du.precision) << '\t' << fmt(r.ndu.precision) << '\t' << fmt(r.overall_precision)
      << '\n';
  out << "recall\t" << fmt(r.du.recall) << '\t' << fmt(r.ndu.recall) << '\t' << fmt(r.overall_recall) << '\n';
  out << "f1\t" << fmt(r.du.f1) << '\t' << fmt(r.ndu.f1) << "\t-\n\n";
  out << "predicted\\gold\tDU\tNDU\tDROPPED\n";
  static constexpr const char* kRows[] = {"DU", "NDU", "UNSUPPORTED"};
  for (std::size_t i = 0; i < 3; ++i) {
    out << kRows[i] << '\t' << r.counts[i][0] << '\t' << r.counts[i][1] << '\t' << r.counts[i][2] << '\n';
  }
  out << "\njoined\t" << r.joined << "\nrelation_matches\t" << r.relation_matches << '\n';
  return out.str();
}

std::string format_report(const DroppedReport& r) {
  std::ostringstream out;
  out << "dropped\t" << r.n_dropped << '\n';
  out << "identified\t" << fmt(r.identified_fraction) << '\n';
  out << "mislabeled_DU\t" << fmt(r.misl_du_fraction) << '\n';
  out << "mislabeled_NDU\t" << fmt(r.misl_ndu_fraction) << '\n';
  return out.str();
}

void ReliabilityData::add(const std::string& annotator, const std::string& item, const std::string& label) {
  auto index_of = [](std::vector<std::string>& names, const std::string& name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
    names.push_back(name);
    return names.size() - 1;
  };
  const std::size_t a = index_of(annotators, annotator);
  const std::size_t i = index_of(items, item);
  if (!labels.emplace(std::make_pair(a, i), label).second) {
    throw FormatError("annotator '" + annotator + "' labeled item '" + item + "' twice");
  }
}

void validate(const ReliabilityData& data) {
  if (data.annotators.size() < 2) throw FormatError("reliability data needs at least two annotators");
  std::vector<bool> labeled(data.items.size(), false);
  for (const auto& [key, label] : data.labels) {
    if (key.first >= data.annotators.size() || key.second >= data.items.size()) {
      throw FormatError("reliability label refers to an unknown annotator or item");
    }
    labeled[key.second] = true;
  }
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    if (!labeled[i]) throw FormatError("item '" + data.items[i] + "' has no label");
  }
}

ReliabilityData parse_reliability(std::string_view tsv) {
  ReliabilityData data;
  std::istringstream in{std::string(tsv)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::istringstream fields(line);
    for (std::string f; std::getline(fields, f, '\t');) cols.push_back(f);
    if (cols.size() != 3 || cols[0].empty() || cols[1].empty() || cols[2].empty()) {
      throw FormatError("reliability line " + std::to_string(line_no) + ": expected item<TAB>annotator<TAB>label");
    }
    data.add(cols[1], cols[0], cols[2]);
  }
  return data;
}

ReliabilityData load_reliability(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_reliability(buf.str());
}

std::optional<double> krippendorff_alpha(const ReliabilityData& data) {
  validate(data);
  // Per-item label counts, labels numbered in first-seen order over sorted (annotator, item) keys.
  std::map<std::string, std::size_t> label_ids;
  for (const auto& [key, label] : data.labels) label_ids.emplace(label, label_ids.size());
  const std::size_t k = label_ids.size();
  std::vector<std::vector<double>> per_item(data.items.size(), std::vector<double>(k, 0.0));
  std::vector<std::size_t> m(data.items.size(), 0);
  for (const auto& [key, label] : data.labels) {
    per_item[key.second][label_ids.at(label)] += 1.0;
    ++m[key.second];
  }

  std::vector<std::vector<double>> coincidence(k, std::vector<double>(k, 0.0));
  for (std::size_t u = 0; u < per_item.size(); ++u) {
    if (m[u] < 2) continue;
    const double weight = 1.0 / static_cast<double>(m[u] - 1);
    for (std::size_t c = 0; c < k; ++c) {
      if (per_item[u][c] == 0.0) continue;
      for (std::size_t d = 0; d < k; ++d) {
        const double pairs = c == d ? per_item[u][c] * (per_item[u][c] - 1.0) : per_item[u][c] * per_item[u][d];
        coincidence[c][d] += pairs * weight;
      }
    }
  }

  std::vector<double> marginal(k, 0.0);
  double n = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < k; ++d) marginal[c] += coincidence[c][d];
    n += marginal[c];
  }
  double observed = 0.0;
  double expected = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < k; ++d) {
      if (c == d) continue;
      observed += coincidence[c][d];
      expected += marginal[c] * marginal[d];
    }
  }
  if (n < 2.0 || expected == 0.0) return std::nullopt;
  return 1.0 - (n - 1.0) * observed / expected;
}

}  // namespace dcproj
