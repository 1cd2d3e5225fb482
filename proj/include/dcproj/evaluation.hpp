#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dcproj/corpus.hpp"
#include "dcproj/projection.hpp"

namespace dcproj {

enum class GoldStatus { DU, NDU, DROPPED };

std::string_view to_string(GoldStatus status);
GoldStatus parse_gold_status(std::string_view name);

struct GoldRecord {
  std::string pair_id;
  TokenSpan span;  // on side C
  GoldStatus gold_status = GoldStatus::NDU;
  std::optional<std::string> gold_relation;
  std::optional<std::vector<std::size_t>> gold_translation;

  friend bool operator==(const GoldRecord&, const GoldRecord&) = default;
};

void validate(const GoldRecord& record);

/// Gold JSONL: {"pair_id", "span", "gold_status", "gold_relation", "gold_translation"}.
std::vector<GoldRecord> parse_gold(std::string_view jsonl);
std::vector<GoldRecord> load_gold(const std::filesystem::path& path);
void write_gold(const std::vector<GoldRecord>& gold, const std::filesystem::path& path);

/// Precision, recall and F1 of one label. Undefined ratios (0/0) are nullopt.
struct LabelMetrics {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

LabelMetrics make_metrics(std::size_t correct, std::size_t predicted, std::size_t gold);

struct EvalReport {
  LabelMetrics du;
  LabelMetrics ndu;
  std::optional<double> overall_precision;
  std::optional<double> overall_recall;
  /// counts[predicted][gold]; predicted DU/NDU/UNSUPPORTED x gold DU/NDU/DROPPED.
  std::array<std::array<std::size_t, 3>, 3> counts{};
  std::size_t joined = 0;
  /// Correct DU predictions whose projected relation equals the gold relation.
  std::size_t relation_matches = 0;
};

/// Joins gold records to projected candidates on (pair_id, span) and scores
/// DU/NDU labels. UNSUPPORTED predictions are abstentions: they are left out
/// of precision denominators but their gold instances still count for
/// recall. Gold DROPPED candidates are never correct.
EvalReport intrinsic_eval(const std::vector<ProjectedAnnotation>& projected, const std::vector<GoldRecord>& gold);

struct DroppedReport {
  std::size_t n_dropped = 0;
  double identified_fraction = 0.0;  // predicted UNSUPPORTED
  double misl_du_fraction = 0.0;
  double misl_ndu_fraction = 0.0;
};

/// Outcome of the gold-DROPPED candidates only. Throws FormatError if there are none.
DroppedReport dropped_eval(const std::vector<ProjectedAnnotation>& projected, const std::vector<GoldRecord>& gold);

std::string format_report(const EvalReport& report);
std::string format_report(const DroppedReport& report);

/// Nominal labels given by annotators to items; missing labels allowed.
struct ReliabilityData {
  std::vector<std::string> items;
  std::vector<std::string> annotators;
  std::map<std::pair<std::size_t, std::size_t>, std::string> labels;  // (annotator, item) -> label

  void add(const std::string& annotator, const std::string& item, const std::string& label);
};

/// Throws FormatError unless there are >= 2 annotators and every item has a label.
void validate(const ReliabilityData& data);

/// TSV rows `item <TAB> annotator <TAB> label`; '#' lines and blank lines ignored.
ReliabilityData parse_reliability(std::string_view tsv);
ReliabilityData load_reliability(const std::filesystem::path& path);

/// Krippendorff's alpha for nominal data from the coincidence matrix.
/// Items with fewer than two labels are not pairable and are skipped.
/// Returns nullopt when the expected disagreement is zero.
std::optional<double> krippendorff_alpha(const ReliabilityData& data);

}  // namespace dcproj
