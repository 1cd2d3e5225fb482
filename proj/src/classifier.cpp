#include "dcproj/classifier.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include "dcproj/errors.hpp"
#include "dcproj/random.hpp"

namespace dcproj {
namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0' || !std::isfinite(v)) throw FormatError(where + "bad number '" + text + "'");
  return v;
}

std::map<std::string, const SentencePair*> index_pairs(const std::vector<SentencePair>& pairs) {
  std::map<std::string, const SentencePair*> out;
  for (const auto& p : pairs) out.emplace(p.pair_id, &p);
  return out;
}

const SentencePair& find_pair(const std::map<std::string, const SentencePair*>& index, const std::string& id) {
  auto it = index.find(id);
  if (it == index.end()) throw FormatError("no sentence pair with id " + id);
  return *it->second;
}

}  // namespace

FeatureVector extract_features(const TokenSpan& span, const SentencePair& pair) {
  const auto& toks = pair.c_tokens;
  std::string conn;
  for (std::size_t i = span.start; i < span.end && i < toks.size(); ++i) {
    if (!conn.empty()) conn.push_back(' ');
    conn += toks[i].lower;
  }
  const std::string prev = span.start == 0 ? "BOS" : toks[span.start - 1].lower;
  const std::string next = span.end >= toks.size() ? "EOS" : toks[span.end].lower;

  FeatureVector fv;
  fv["conn=" + conn] = 1.0;
  fv["prev=" + prev] = 1.0;
  fv["next=" + next] = 1.0;
  fv["prev+conn=" + prev + "|" + conn] = 1.0;
  fv["conn+next=" + conn + "|" + next] = 1.0;
  if (span.start == 0) fv["sent_initial"] = 1.0;
  if (span.start > 0 && toks[span.start - 1].is_punct) fv["after_punct"] = 1.0;
  return fv;
}

FeatureVector extract_features(const CandidateDC& candidate, const SentencePair& pair) {
  return extract_features(TokenSpan{candidate.start, candidate.end}, pair);
}

ClassifierModel train(const std::vector<LabeledExample>& examples, const TrainConfig& config) {
  if (config.epochs < 1) throw FormatError("train: epochs must be >= 1");
  if (!(config.learning_rate > 0.0)) throw FormatError("train: learning rate must be positive");
  bool has_du = false;
  bool has_ndu = false;
  for (const auto& ex : examples) {
    if (ex.label == ProjectionStatus::UNSUPPORTED) {
      throw FormatError("train: UNSUPPORTED example reached the classifier; filter it upstream");
    }
    (ex.label == ProjectionStatus::DU ? has_du : has_ndu) = true;
  }
  if (!has_du || !has_ndu) throw FormatError("train: training set needs both DU and NDU examples");

  // Dense ids in feature-name order.
  std::map<std::string, std::size_t> ids;
  for (const auto& ex : examples)
    for (const auto& [name, value] : ex.features) ids.emplace(name, 0);
  std::vector<std::string> names;
  for (auto& [name, id] : ids) {
    id = names.size();
    names.push_back(name);
  }
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i)
    for (const auto& [name, value] : examples[i].features) rows[i].emplace_back(ids.at(name), value);

  std::vector<double> w(names.size(), 0.0);
  std::vector<double> w_acc(names.size(), 0.0);  // sum of step * update, for averaging
  double b = 0.0;
  double b_acc = 0.0;
  double step = 1.0;

  Rng rng(config.seed);
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      const double y = examples[i].label == ProjectionStatus::DU ? 1.0 : -1.0;
      double score = b;
      for (const auto& [f, v] : rows[i]) score += w[f] * v;
      if (y * score <= 0.0) {
        const double delta = config.learning_rate * y;
        for (const auto& [f, v] : rows[i]) {
          w[f] += delta * v;
          w_acc[f] += step * delta * v;
        }
        b += delta;
        b_acc += step * delta;
      }
      step += 1.0;
    }
  }

  ClassifierModel model;
  model.config = config;
  model.bias = config.averaging ? b - b_acc / step : b;
  for (std::size_t f = 0; f < names.size(); ++f) {
    const double v = config.averaging ? w[f] - w_acc[f] / step : w[f];
    if (v != 0.0) model.weights.emplace(names[f], v);
  }
  return model;
}

Prediction predict(const ClassifierModel& model, const FeatureVector& features) {
  double score = model.bias;
  for (const auto& [name, value] : features) {
    auto it = model.weights.find(name);
    if (it != model.weights.end()) score += it->second * value;
  }
  return {score > 0.0 ? ProjectionStatus::DU : ProjectionStatus::NDU, score};
}

ClassifierMetrics evaluate_classifier(const ClassifierModel& model, const std::vector<LabeledExample>& gold) {
  if (gold.empty()) throw FormatError("evaluate_classifier: empty gold set");
  ClassifierMetrics m;
  for (const auto& ex : gold) {
    const bool predicted_du = predict(model, ex.features).label == ProjectionStatus::DU;
    const bool gold_du = ex.label == ProjectionStatus::DU;
    if (predicted_du && gold_du) ++m.true_positive;
    if (predicted_du && !gold_du) ++m.false_positive;
    if (!predicted_du && gold_du) ++m.false_negative;
    if (!predicted_du && !gold_du) ++m.true_negative;
  }
  const auto metrics =
      make_metrics(m.true_positive, m.true_positive + m.false_positive, m.true_positive + m.false_negative);
  m.precision = metrics.precision;
  m.recall = metrics.recall;
  m.f1 = metrics.f1;
  return m;
}

std::vector<LabeledExample> training_examples(const std::vector<ProjectedAnnotation>& projected,
                                              const std::vector<SentencePair>& pairs) {
  const auto index = index_pairs(pairs);
  std::vector<LabeledExample> out;
  for (const auto& r : projected) {
    if (r.status == ProjectionStatus::UNSUPPORTED) continue;
    out.push_back({extract_features(r.span, find_pair(index, r.pair_id)), r.status});
  }
  return out;
}

std::vector<LabeledExample> gold_examples(const std::vector<GoldRecord>& gold, const std::vector<SentencePair>& pairs) {
  const auto index = index_pairs(pairs);
  std::vector<LabeledExample> out;
  for (const auto& g : gold) {
    if (g.gold_status == GoldStatus::DROPPED) continue;
    out.push_back({extract_features(g.span, find_pair(index, g.pair_id)),
                   g.gold_status == GoldStatus::DU ? ProjectionStatus::DU : ProjectionStatus::NDU});
  }
  return out;
}

void write_classifier(const ClassifierModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "#bias\t" << format_double(model.bias) << '\n';
  out << "#epochs\t" << model.config.epochs << '\n';
  out << "#learning_rate\t" << format_double(model.config.learning_rate) << '\n';
  out << "#seed\t" << model.config.seed << '\n';
  out << "#averaging\t" << (model.config.averaging ? "true" : "false") << '\n';
  for (const auto& [name, weight] : model.weights) out << name << '\t' << format_double(weight) << '\n';
  if (!out) throw IoError("error writing " + path.string());
}

ClassifierModel read_classifier(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  ClassifierModel model;
  int headers = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(i + 1) + ": ";
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw FormatError(where + "expected 2 tab-separated columns");
    }
    const std::string key = line.substr(0, tab);
    const std::string value = line.substr(tab + 1);
    if (key == "#bias") {
      model.bias = parse_double(value, where), ++headers;
    } else if (key == "#epochs") {
      model.config.epochs = static_cast<int>(parse_double(value, where)), ++headers;
    } else if (key == "#learning_rate") {
      model.config.learning_rate = parse_double(value, where), ++headers;
    } else if (key == "#seed") {
      model.config.seed = std::stoull(value), ++headers;
    } else if (key == "#averaging") {
      if (value != "true" && value != "false") throw FormatError(where + "#averaging must be true or false");
      model.config.averaging = value == "true", ++headers;
    } else if (!key.empty() && key[0] == '#') {
      throw FormatError(where + "unknown header '" + key + "'");
    } else {
      model.weights[key] = parse_double(value, where);
    }
  }
  if (headers != 5) throw FormatError(path.string() + ": missing header lines (bias and training config)");
  return model;
}

}  // namespace dcproj
