#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dcproj/corpus.hpp"
#include "dcproj/evaluation.hpp"
#include "dcproj/lexicon.hpp"
#include "dcproj/projection.hpp"

namespace dcproj {

/// Binary indicator features keyed by template-prefixed names
/// (conn=, prev=, next=, prev+conn=, conn+next=, sent_initial, after_punct).
using FeatureVector = std::map<std::string, double>;

FeatureVector extract_features(const TokenSpan& span, const SentencePair& pair);
FeatureVector extract_features(const CandidateDC& candidate, const SentencePair& pair);

/// A training or test instance. The label must be DU or NDU.
struct LabeledExample {
  FeatureVector features;
  ProjectionStatus label = ProjectionStatus::NDU;
};

struct TrainConfig {
  int epochs = 10;
  double learning_rate = 1.0;
  std::uint64_t seed = 42;
  bool averaging = true;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct ClassifierModel {
  std::map<std::string, double> weights;
  double bias = 0.0;
  TrainConfig config;

  friend bool operator==(const ClassifierModel&, const ClassifierModel&) = default;
};

/// Averaged perceptron. Examples are visited in a fresh seeded shuffle each
/// epoch; the model is a deterministic function of (examples, config).
/// Throws FormatError if a label is UNSUPPORTED or only one label occurs.
ClassifierModel train(const std::vector<LabeledExample>& examples, const TrainConfig& config = {});

struct Prediction {
  ProjectionStatus label;  // DU iff score > 0
  double score;
};

Prediction predict(const ClassifierModel& model, const FeatureVector& features);

struct ClassifierMetrics {
  std::optional<double> precision;  // DU is the positive class
  std::optional<double> recall;
  std::optional<double> f1;
  std::size_t true_positive = 0;
  std::size_t false_positive = 0;
  std::size_t false_negative = 0;
  std::size_t true_negative = 0;
};

ClassifierMetrics evaluate_classifier(const ClassifierModel& model, const std::vector<LabeledExample>& gold);

/// Training examples from a projected corpus joined with its sentence pairs.
/// UNSUPPORTED records are left out. Throws FormatError for unknown pair ids.
std::vector<LabeledExample> training_examples(const std::vector<ProjectedAnnotation>& projected,
                                              const std::vector<SentencePair>& pairs);

/// Test examples from gold records (DROPPED records are skipped).
std::vector<LabeledExample> gold_examples(const std::vector<GoldRecord>& gold, const std::vector<SentencePair>& pairs);

/// TSV: `#bias`, `#epochs`, `#learning_rate`, `#seed`, `#averaging` header
/// lines, then `feature <TAB> weight` sorted by feature.
void write_classifier(const ClassifierModel& model, const std::filesystem::path& path);
ClassifierModel read_classifier(const std::filesystem::path& path);

}  // namespace dcproj
