#include <doctest.h>

#include "dcproj/errors.hpp"
#include "dcproj/projection.hpp"
#include "dcproj/synthetic.hpp"
#include "test_support.hpp"

using namespace dcproj;

namespace {

SynthConfig small(std::size_t n, double drop, double ndu) {
  SynthConfig cfg;
  cfg.n_pairs = n;
  cfg.drop_rate = drop;
  cfg.ndu_rate = ndu;
  return cfg;
}

}  // namespace

TEST_SUITE("synthetic") {
  TEST_CASE("same seed, same corpus, whatever the thread count") {
    auto cfg = small(300, 0.2, 0.4);
    auto a = gen_synthetic(cfg, 5, 1);
    auto b = gen_synthetic(cfg, 5, 8);
    CHECK(a.c_lines == b.c_lines);
    CHECK(a.a_lines == b.a_lines);
    CHECK(a.gold == b.gold);
    CHECK(a.oracle_alignments == b.oracle_alignments);
    CHECK(a.annotations == b.annotations);
    CHECK(gen_synthetic(cfg, 6, 1).c_lines != a.c_lines);
  }

  TEST_CASE("oracle alignments reproduce the gold labels") {
    Rng rng(1);
    for (int trial = 0; trial < 12; ++trial) {
      const double drop = rng.uniform() * 0.5;
      const double ndu = rng.uniform() * (1.0 - drop);
      auto corpus = gen_synthetic(small(200, drop, ndu), rng.next(), 2);
      auto res = project_corpus(corpus.pairs, corpus.oracle_alignments, corpus.annotations, corpus.c_lexicon, true, 2);
      REQUIRE(res.records.size() == corpus.gold.size());
      for (std::size_t k = 0; k < res.records.size(); ++k) {
        const auto& r = res.records[k];
        const auto& g = corpus.gold[k];
        REQUIRE(r.span == g.span);
        switch (g.gold_status) {
          case GoldStatus::DU:
            REQUIRE(r.status == ProjectionStatus::DU);
            REQUIRE(r.relation == g.gold_relation);
            break;
          case GoldStatus::NDU: REQUIRE(r.status == ProjectionStatus::NDU); break;
          case GoldStatus::DROPPED: REQUIRE(r.status == ProjectionStatus::UNSUPPORTED); break;
        }
        REQUIRE(r.translation == g.gold_translation.value());
      }
      for (std::size_t k = 0; k < corpus.pairs.size(); ++k) check_bounds(corpus.oracle_alignments[k], corpus.pairs[k]);
    }
  }

  TEST_CASE("no perturbation means every candidate is DU") {
    auto corpus = gen_synthetic(small(100, 0.0, 0.0), 3);
    for (const auto& g : corpus.gold) REQUIRE(g.gold_status == GoldStatus::DU);
  }

  TEST_CASE("drop everything") {
    auto corpus = gen_synthetic(small(100, 1.0, 0.0), 3);
    auto res = project_corpus(corpus.pairs, corpus.oracle_alignments, corpus.annotations, corpus.c_lexicon, true);
    auto r = dropped_eval(res.records, corpus.gold);
    CHECK(r.n_dropped == 100);
    CHECK(r.identified_fraction == 1.0);
  }

  TEST_CASE("label rates follow the configuration") {
    auto corpus = gen_synthetic(small(4000, 0.15, 0.54), 9, 4);
    std::size_t dropped = 0, ndu = 0;
    for (const auto& g : corpus.gold) {
      dropped += g.gold_status == GoldStatus::DROPPED;
      ndu += g.gold_status == GoldStatus::NDU;
    }
    CHECK(static_cast<double>(dropped) / 4000 == doctest::Approx(0.15).epsilon(0.2));
    CHECK(static_cast<double>(ndu) / 4000 == doctest::Approx(0.54).epsilon(0.1));
  }

  TEST_CASE("written corpora reload to the same pairs") {
    auto dir = dcproj::testing::scratch_dir("synthetic");
    auto corpus = gen_synthetic(small(80, 0.2, 0.3), 11);
    write_synthetic(corpus, dir);
    CHECK(load_parallel(dir / "corpus.c.txt", dir / "corpus.a.txt") == corpus.pairs);
    CHECK(load_gold(dir / "gold.jsonl") == corpus.gold);
    CHECK(read_pharaoh(dir / "oracle.pharaoh") == corpus.oracle_alignments);
    CHECK(load_annotations(dir / "annotations.jsonl") == corpus.annotations);
    CHECK(load_lexicon(dir / "lexicon.c.tsv") == corpus.c_lexicon);
  }

  TEST_CASE("invalid configurations") {
    CHECK_THROWS_AS(gen_synthetic(small(10, 0.6, 0.6), 1), FormatError);
    CHECK_THROWS_AS(gen_synthetic(small(10, -0.1, 0.0), 1), FormatError);
    auto cfg = small(10, 0.1, 0.1);
    cfg.connectives.clear();
    CHECK_THROWS_AS(gen_synthetic(cfg, 1), FormatError);
    cfg = small(10, 0.1, 0.1);
    cfg.c_vocab_size = 10;
    CHECK_THROWS_AS(gen_synthetic(cfg, 1), FormatError);
    cfg = small(10, 0.1, 0.1);
    cfg.min_arg_len = 5;
    cfg.max_arg_len = 2;
    CHECK_THROWS_AS(gen_synthetic(cfg, 1), FormatError);
  }
}
