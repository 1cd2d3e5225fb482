#include <doctest.h>

#include <algorithm>

#include "dcproj/annotations.hpp"
#include "dcproj/errors.hpp"
#include "dcproj/lexicon.hpp"
#include "dcproj/projection.hpp"
#include "test_support.hpp"

using namespace dcproj;
using dcproj::testing::links;
using dcproj::testing::make_pair;

namespace {

using Idx = std::vector<std::size_t>;

struct Fixture {
  std::vector<SentencePair> pairs;
  std::vector<AlignmentSet> alignments;
  AnnotationIndex annotations;
  Lexicon lexicon;

  Fixture() {
    const auto dir = dcproj::testing::data_dir() / "fixture";
    pairs = load_parallel(dir / "corpus.fr.txt", dir / "corpus.en.txt");
    alignments = read_pharaoh(dir / "alignment.pharaoh");
    annotations = load_annotations(dir / "annotations.jsonl");
    lexicon = load_lexicon(dcproj::testing::data_dir() / "lexicon.fr.tsv");
  }
};

const ProjectedAnnotation& find(const std::vector<ProjectedAnnotation>& recs, const std::string& id, std::size_t start) {
  auto it = std::find_if(recs.begin(), recs.end(),
                         [&](const ProjectedAnnotation& r) { return r.pair_id == id && r.span.start == start; });
  REQUIRE(it != recs.end());
  return *it;
}

ProjectedAnnotation record(ProjectionStatus status, std::optional<std::string> relation, Idx translation) {
  return {"00000001", {0, 3}, "d'autre part", status, std::move(relation), std::move(translation), "intersection"};
}

}  // namespace

TEST_SUITE("projection") {
  TEST_CASE("translation span of the elided connective") {
    auto pair = make_pair("1", "d'autre part , nous devons agir .", "we must , on the other hand , act .");
    CandidateDC cand{"1", 0, 3, 0, "d'autre part"};
    auto al = links("1", {{0, 3}, {0, 4}, {1, 5}, {2, 6}, {4, 0}});
    auto tr = translation_span(cand, al, pair);
    CHECK(tr == Idx{3, 4, 5, 6});
    std::string text;
    for (auto i : tr) text += (text.empty() ? "" : " ") + pair.a_tokens[i].surface;
    CHECK(text == "on the other hand");

    CHECK(translation_span(cand, links("1", {{4, 0}}), pair).empty());
    CHECK(translation_span(CandidateDC{"1", 0, 2, 0, "x"}, links("1", {{0, 2}, {1, 2}}), pair) == Idx{2});
    CHECK_THROWS_AS(translation_span(cand, links("2", {}), pair), FormatError);
  }

  TEST_CASE("classification rules") {
    auto pair = make_pair("1", "nous devons aussi agir .", "we must also act , both .");
    std::vector<SourceAnnotation> anns = {{"1", {{2, 3}}, "Conjunction"}};
    CandidateDC cand{"1", 2, 3, 0, "aussi"};

    auto du = classify_candidate(cand, {2}, pair, anns, true, "intersection");
    CHECK(du.status == ProjectionStatus::DU);
    CHECK(du.relation == std::optional<std::string>("Conjunction"));
    CHECK(du.aligner == "intersection");
    CHECK(du.form == "aussi");

    auto ndu = classify_candidate(cand, {5}, pair, anns, true);
    CHECK(ndu.status == ProjectionStatus::NDU);
    CHECK_FALSE(ndu.relation.has_value());

    CHECK(classify_candidate(cand, {}, pair, anns, true).status == ProjectionStatus::UNSUPPORTED);
    CHECK(classify_candidate(cand, {}, pair, anns, false).status == ProjectionStatus::NDU);
    auto punct_only = classify_candidate(cand, {4, 6}, pair, anns, true);
    CHECK(punct_only.status == ProjectionStatus::UNSUPPORTED);
    CHECK(punct_only.translation == Idx{4, 6});
    CHECK(classify_candidate(cand, {4}, pair, anns, false).status == ProjectionStatus::NDU);
    // Partial: punctuation plus one real word stays supported.
    CHECK(classify_candidate(cand, {2, 4}, pair, anns, true).status == ProjectionStatus::DU);
  }

  TEST_CASE("largest overlap wins, then the leftmost annotation") {
    auto pair = make_pair("1", "x", "a b c d e f");
    CandidateDC cand{"1", 0, 1, 0, "x"};
    std::vector<SourceAnnotation> anns = {{"1", {{0, 1}}, "Left"}, {"1", {{2, 5}}, "Wide"}, {"1", {{5, 6}}, "Right"}};
    CHECK(classify_candidate(cand, {0, 2, 3}, pair, anns, true).relation == std::optional<std::string>("Wide"));
    CHECK(classify_candidate(cand, {0, 5}, pair, anns, true).relation == std::optional<std::string>("Left"));
    std::vector<SourceAnnotation> reversed(anns.rbegin(), anns.rend());
    CHECK(classify_candidate(cand, {0, 5}, pair, reversed, true).relation == std::optional<std::string>("Left"));
  }

  TEST_CASE("figure fixture yields a Contrast DU") {
    Fixture f;
    auto res = project_corpus(f.pairs, f.alignments, f.annotations, f.lexicon, true);
    const auto& r = find(res.records, "00000001", 0);
    CHECK(r.span.end == 3);
    CHECK(r.translation == Idx{3, 4, 5, 6});
    CHECK(r.status == ProjectionStatus::DU);
    CHECK(r.relation == std::optional<std::string>("Contrast"));
    CHECK(r.aligner == "external");
  }

  TEST_CASE("fixture corpus labels") {
    Fixture f;
    auto on = project_corpus(f.pairs, f.alignments, f.annotations, f.lexicon, true).records;
    auto off = project_corpus(f.pairs, f.alignments, f.annotations, f.lexicon, false).records;
    auto status = [&](const std::string& id, std::size_t start) { return find(on, id, start).status; };
    CHECK(status("00000002", 2) == ProjectionStatus::DU);
    CHECK(status("00000003", 4) == ProjectionStatus::NDU);
    CHECK(status("00000004", 2) == ProjectionStatus::UNSUPPORTED);
    CHECK(status("00000005", 3) == ProjectionStatus::UNSUPPORTED);
    CHECK(status("00000006", 5) == ProjectionStatus::UNSUPPORTED);
    CHECK(status("00000007", 5) == ProjectionStatus::DU);
    CHECK(status("00000007", 8) == ProjectionStatus::NDU);
    CHECK(status("00000010", 2) == ProjectionStatus::DU);
    CHECK(find(on, "00000011", 3).relation == std::optional<std::string>("Alternative"));
    CHECK(find(off, "00000004", 2).status == ProjectionStatus::NDU);
    CHECK(std::none_of(off.begin(), off.end(),
                       [](const ProjectedAnnotation& r) { return r.status == ProjectionStatus::UNSUPPORTED; }));
    CHECK(std::is_sorted(on.begin(), on.end(), [](const auto& a, const auto& b) {
      return std::tie(a.pair_id, a.span.start) < std::tie(b.pair_id, b.span.start);
    }));
  }

  TEST_CASE("missing and unknown alignments") {
    Fixture f;
    std::vector<AlignmentSet> partial(f.alignments.begin(), f.alignments.begin() + 3);
    auto res = project_corpus(f.pairs, partial, f.annotations, f.lexicon, true);
    CHECK(res.missing_alignments == f.pairs.size() - 3);
    CHECK(find(res.records, "00000008", 0).status == ProjectionStatus::UNSUPPORTED);

    auto with_unknown = f.alignments;
    with_unknown.push_back(links("00000099", {{0, 0}}));
    CHECK_THROWS_AS(project_corpus(f.pairs, with_unknown, f.annotations, f.lexicon, true), FormatError);
    auto with_empty_unknown = f.alignments;
    with_empty_unknown.push_back(links("00000099", {}));
    CHECK_NOTHROW(project_corpus(f.pairs, with_empty_unknown, f.annotations, f.lexicon, true));

    auto out_of_bounds = f.alignments;
    out_of_bounds[0].links.insert({50, 0});
    CHECK_THROWS_AS(project_corpus(f.pairs, out_of_bounds, f.annotations, f.lexicon, true), FormatError);
  }

  TEST_CASE("filtering only moves NDU to UNSUPPORTED, shrinking alignments only adds UNSUPPORTED") {
    Fixture f;
    Rng rng(31);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<AlignmentSet> big, small;
      for (const auto& p : f.pairs) {
        auto b = dcproj::testing::random_alignment(rng, p.pair_id, p.c_tokens.size(), p.a_tokens.size(), 0.15);
        AlignmentSet s{p.pair_id, {}, AlignerKind::external};
        for (auto l : b.links)
          if (rng.bernoulli(0.5)) s.links.insert(l);
        big.push_back(b);
        small.push_back(s);
      }
      auto on = project_corpus(f.pairs, big, f.annotations, f.lexicon, true, 2).records;
      auto off = project_corpus(f.pairs, big, f.annotations, f.lexicon, false, 2).records;
      auto on_small = project_corpus(f.pairs, small, f.annotations, f.lexicon, true, 2).records;
      REQUIRE(on.size() == off.size());
      REQUIRE(on.size() == on_small.size());
      for (std::size_t k = 0; k < on.size(); ++k) {
        REQUIRE((on[k].status == ProjectionStatus::DU) == (off[k].status == ProjectionStatus::DU));
        if (on[k].status == ProjectionStatus::DU) REQUIRE(on[k].relation == off[k].relation);
        if (on[k].status == ProjectionStatus::UNSUPPORTED) REQUIRE(off[k].status == ProjectionStatus::NDU);
        if (on[k].status == ProjectionStatus::UNSUPPORTED) REQUIRE(on_small[k].status == ProjectionStatus::UNSUPPORTED);
        REQUIRE_NOTHROW(validate(on[k]));
      }
      auto count = [](const std::vector<ProjectedAnnotation>& v) {
        return std::count_if(v.begin(), v.end(), [](const auto& r) { return r.status == ProjectionStatus::UNSUPPORTED; });
      };
      REQUIRE(count(on_small) >= count(on));
    }
  }

  TEST_CASE("thread count does not change the projection") {
    Fixture f;
    auto one = project_corpus(f.pairs, f.alignments, f.annotations, f.lexicon, true, 1).records;
    auto eight = project_corpus(f.pairs, f.alignments, f.annotations, f.lexicon, true, 8).records;
    CHECK(one == eight);
  }

  TEST_CASE("stats") {
    CHECK(corpus_stats({}).total() == 0);
    std::vector<ProjectedAnnotation> recs;
    for (int i = 0; i < 3; ++i) recs.push_back(record(ProjectionStatus::DU, "Contrast", {3}));
    for (int i = 0; i < 2; ++i) {
      auto r = record(ProjectionStatus::NDU, std::nullopt, {3});
      r.form = "mais";
      recs.push_back(r);
    }
    auto s = corpus_stats(recs);
    CHECK(s.n_du == 3);
    CHECK(s.n_ndu == 2);
    CHECK(s.n_unsupported == 0);
    REQUIRE(s.per_connective.size() == 2);
    CHECK(s.per_connective[0].form == "d'autre part");
    CHECK(s.per_connective[0].du == 3);
    CHECK(s.per_connective[1].ndu == 2);
    auto text = format_stats(s);
    CHECK(text.find("d'autre part\t3\t0\t0\t3") != std::string::npos);
  }

  TEST_CASE("record invariants") {
    CHECK_NOTHROW(validate(record(ProjectionStatus::DU, "Contrast", {3, 4})));
    CHECK_THROWS_AS(validate(record(ProjectionStatus::DU, std::nullopt, {3})), FormatError);
    CHECK_THROWS_AS(validate(record(ProjectionStatus::UNSUPPORTED, "Contrast", {})), FormatError);
    CHECK_THROWS_AS(validate(record(ProjectionStatus::NDU, std::nullopt, {4, 3})), FormatError);
    CHECK_THROWS_AS(validate(record(ProjectionStatus::NDU, std::nullopt, {3, 3})), FormatError);
  }

  TEST_CASE("projected jsonl") {
    auto dir = dcproj::testing::scratch_dir("projected");
    SUBCASE("round trip") {
      std::vector<ProjectedAnnotation> recs = {record(ProjectionStatus::DU, "Contrast", {3, 4, 5, 6})};
      write_projected(recs, dir / "p.jsonl");
      CHECK(read_projected(dir / "p.jsonl") == recs);
      CHECK(to_json_line(recs[0]) ==
            R"({"pair_id":"00000001","span":[0,3],"form":"d'autre part","status":"DU","relation":"Contrast",)"
            R"("translation":[3,4,5,6],"aligner":"intersection"})");
    }
    SUBCASE("fixture round trip") {
      Fixture f;
      auto recs = project_corpus(f.pairs, f.alignments, f.annotations, f.lexicon, true).records;
      write_projected(recs, dir / "p.jsonl");
      CHECK(read_projected(dir / "p.jsonl") == recs);
    }
    SUBCASE("invalid record is not written") {
      CHECK_THROWS_AS(write_projected({record(ProjectionStatus::UNSUPPORTED, "Contrast", {})}, dir / "p.jsonl"),
                      FormatError);
    }
    SUBCASE("trailing blank line is ignored") {
      dcproj::testing::write_file(dir / "p.jsonl", to_json_line(record(ProjectionStatus::NDU, std::nullopt, {})) + "\n\n");
      CHECK(read_projected(dir / "p.jsonl").size() == 1);
    }
    SUBCASE("malformed lines name line and field") {
      auto good = to_json_line(record(ProjectionStatus::NDU, std::nullopt, {}));
      dcproj::testing::write_file(dir / "p.jsonl", good + "\n" + R"({"pair_id":"1","span":[0,1],"form":"x",)"
                                                   R"("status":"MAYBE","relation":null,"translation":[],"aligner":"x"})");
      CHECK_THROWS_WITH_AS(read_projected(dir / "p.jsonl"), doctest::Contains("line 2"), FormatError);
      CHECK_THROWS_WITH_AS(read_projected(dir / "p.jsonl"), doctest::Contains("status"), FormatError);
      CHECK_THROWS_WITH_AS(parse_projected_line(R"({"pair_id":"1","form":"x"})", 4), doctest::Contains("line 4"),
                           FormatError);
      CHECK_THROWS_WITH_AS(parse_projected_line(R"({"pair_id":"1","span":[0,1],"form":"x","status":"DU",)"
                                                R"("relation":null,"translation":[],"aligner":"x"})"),
                           doctest::Contains("relation"), FormatError);
      CHECK_THROWS_AS(parse_projected_line("{"), FormatError);
      CHECK_THROWS_AS(read_projected(dir / "none.jsonl"), IoError);
    }
  }
}
