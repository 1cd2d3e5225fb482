#include <doctest.h>

#include "dcproj/classifier.hpp"
#include "dcproj/errors.hpp"
#include "dcproj/synthetic.hpp"
#include "test_support.hpp"

using namespace dcproj;
using dcproj::testing::make_pair;

namespace {

LabeledExample ex(std::initializer_list<const char*> feats, ProjectionStatus label) {
  LabeledExample e;
  for (const char* f : feats) e.features[f] = 1.0;
  e.label = label;
  return e;
}

std::vector<LabeledExample> separable() {
  std::vector<LabeledExample> out;
  for (int i = 0; i < 10; ++i) {
    out.push_back(ex({"conn=x", "prev=a"}, ProjectionStatus::DU));
    out.push_back(ex({"conn=y", "prev=a"}, ProjectionStatus::NDU));
  }
  return out;
}

}  // namespace

TEST_SUITE("classifier") {
  TEST_CASE("feature templates") {
    auto pair = make_pair("1", "mais nous , donc", "x");
    auto first = extract_features(TokenSpan{0, 1}, pair);
    CHECK(first.count("conn=mais"));
    CHECK(first.count("prev=BOS"));
    CHECK(first.count("next=nous"));
    CHECK(first.count("prev+conn=BOS|mais"));
    CHECK(first.count("conn+next=mais|nous"));
    CHECK(first.count("sent_initial"));
    CHECK_FALSE(first.count("after_punct"));
    for (const auto& [k, v] : first) CHECK(v == 1.0);

    auto last = extract_features(CandidateDC{"1", 3, 4, 0, "donc"}, pair);
    CHECK(last.count("next=EOS"));
    CHECK(last.count("after_punct"));
    CHECK_FALSE(last.count("sent_initial"));

    auto multi = extract_features(TokenSpan{0, 3}, make_pair("1", "D'autre part nous", "x"));
    CHECK(multi.count("conn=d' autre part"));
    CHECK(extract_features(TokenSpan{1, 2}, pair) == extract_features(TokenSpan{1, 2}, pair));
  }

  TEST_CASE("separable data is learnt perfectly") {
    auto data = separable();
    auto model = train(data);
    auto m = evaluate_classifier(model, data);
    CHECK(m.precision == std::optional<double>(1.0));
    CHECK(m.recall == std::optional<double>(1.0));
    CHECK(m.f1 == std::optional<double>(1.0));
    CHECK(m.true_positive == 10);
    CHECK(m.true_negative == 10);
    CHECK(model.config == TrainConfig{});
  }

  TEST_CASE("training is deterministic and depends on the seed only through order") {
    auto corpus = gen_synthetic([] {
      SynthConfig c;
      c.n_pairs = 300;
      return c;
    }(), 2);
    auto data = gold_examples(corpus.gold, corpus.pairs);
    CHECK(train(data) == train(data));
    TrainConfig other;
    other.seed = 43;
    CHECK(train(data, other).config.seed == 43);
  }

  TEST_CASE("decision rule") {
    ClassifierModel m;
    m.weights = {{"a", 1.0}, {"b", -2.0}};
    CHECK(predict(m, {{"a", 1.0}}).label == ProjectionStatus::DU);
    CHECK(predict(m, {{"a", 1.0}}).score == 1.0);
    CHECK(predict(m, {{"a", 1.0}, {"b", 1.0}}).label == ProjectionStatus::NDU);
    CHECK(predict(m, {}).label == ProjectionStatus::NDU);
    m.weights = {{"a", 1.0}, {"b", -1.0}};
    CHECK(predict(m, {{"a", 1.0}, {"b", 1.0}}).label == ProjectionStatus::NDU);
    m.bias = 0.5;
    CHECK(predict(m, {{"unseen", 1.0}}).label == ProjectionStatus::DU);
    m.bias = -0.5;
    CHECK(predict(m, {{"unseen", 1.0}}).label == ProjectionStatus::NDU);
  }

  TEST_CASE("scaling the model keeps every label") {
    auto corpus = gen_synthetic([] {
      SynthConfig c;
      c.n_pairs = 200;
      return c;
    }(), 8);
    auto data = gold_examples(corpus.gold, corpus.pairs);
    auto model = train(data);
    Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
      const double c = 0.01 + rng.uniform() * 100.0;
      auto scaled = model;
      for (auto& [k, w] : scaled.weights) w *= c;
      scaled.bias *= c;
      for (const auto& e : data) REQUIRE(predict(scaled, e.features).label == predict(model, e.features).label);
    }
  }

  TEST_CASE("metrics") {
    ClassifierModel never;
    never.bias = -1.0;
    auto m = evaluate_classifier(never, separable());
    CHECK_FALSE(m.precision.has_value());
    CHECK(m.recall == std::optional<double>(0.0));
    CHECK(m.false_negative == 10);
  }

  TEST_CASE("bad training sets") {
    CHECK_THROWS_AS(train({ex({"a"}, ProjectionStatus::DU)}), FormatError);
    CHECK_THROWS_AS(train({}), FormatError);
    auto data = separable();
    data.push_back(ex({"a"}, ProjectionStatus::UNSUPPORTED));
    CHECK_THROWS_AS(train(data), FormatError);
    TrainConfig bad;
    bad.epochs = 0;
    CHECK_THROWS_AS(train(separable(), bad), FormatError);
  }

  TEST_CASE("examples from projected and gold records") {
    auto pairs = std::vector<SentencePair>{make_pair("00000001", "mais oui", "but yes")};
    std::vector<ProjectedAnnotation> projected = {
        {"00000001", {0, 1}, "mais", ProjectionStatus::DU, "Contrast", {0}, "intersection"},
        {"00000001", {1, 2}, "oui", ProjectionStatus::UNSUPPORTED, std::nullopt, {}, "intersection"}};
    auto train_set = training_examples(projected, pairs);
    REQUIRE(train_set.size() == 1);
    CHECK(train_set[0].label == ProjectionStatus::DU);
    CHECK(train_set[0].features.count("conn=mais"));
    projected[0].pair_id = "00000002";
    CHECK_THROWS_AS(training_examples(projected, pairs), FormatError);

    std::vector<GoldRecord> gold = {{"00000001", {0, 1}, GoldStatus::DROPPED, std::nullopt, std::nullopt},
                                    {"00000001", {1, 2}, GoldStatus::NDU, std::nullopt, std::vector<std::size_t>{1}}};
    auto test_set = gold_examples(gold, pairs);
    REQUIRE(test_set.size() == 1);
    CHECK(test_set[0].label == ProjectionStatus::NDU);
  }

  TEST_CASE("model files round-trip exactly") {
    auto dir = dcproj::testing::scratch_dir("classifier");
    TrainConfig cfg;
    cfg.epochs = 3;
    cfg.learning_rate = 0.3;
    cfg.seed = 1234567890123ULL;
    cfg.averaging = false;
    auto model = train(separable(), cfg);
    write_classifier(model, dir / "m.tsv");
    CHECK(read_classifier(dir / "m.tsv") == model);
    dcproj::testing::write_file(dir / "bad.tsv", "#bias\tzero\n");
    CHECK_THROWS_AS(read_classifier(dir / "bad.tsv"), FormatError);
    CHECK_THROWS_AS(read_classifier(dir / "none.tsv"), IoError);
  }
}
