#include <doctest.h>

#include "dcproj/errors.hpp"
#include "dcproj/lexicon.hpp"
#include "dcproj/random.hpp"
#include "test_support.hpp"

using namespace dcproj;
using dcproj::testing::make_pair;

namespace {

using Form = std::vector<std::string>;

std::vector<std::pair<std::size_t, std::size_t>> spans(const std::vector<CandidateDC>& cands) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& c : cands) out.emplace_back(c.start, c.end);
  return out;
}

}  // namespace

TEST_SUITE("lexicon") {
  TEST_CASE("single-form entry with a relation") {
    auto lex = parse_lexicon("mais\tmais\tContrast\n");
    REQUIRE(lex.size() == 1);
    CHECK(lex[0].canonical == "mais");
    CHECK(lex[0].forms == std::vector<Form>{{"mais"}});
    CHECK(lex[0].default_relation == std::optional<std::string>("Contrast"));
  }

  TEST_CASE("variants tokenize to the same form and the relation may be empty") {
    auto lex = parse_lexicon("d'autre part\td'autre part|d' autre part\t\n");
    REQUIRE(lex.size() == 1);
    CHECK(lex[0].forms.size() == 2);
    CHECK(lex[0].forms[0] == Form{"d'", "autre", "part"});
    CHECK(lex[0].forms[1] == Form{"d'", "autre", "part"});
    CHECK_FALSE(lex[0].default_relation.has_value());
  }

  TEST_CASE("forms are case-folded") {
    auto lex = parse_lexicon("Par contre\tPar Contre\n");
    CHECK(lex[0].forms[0] == Form{"par", "contre"});
  }

  TEST_CASE("malformed lexicons") {
    CHECK_THROWS_WITH_AS(parse_lexicon("pour\tpour\nvers\tvers|pour\n"), doctest::Contains("pour"), FormatError);
    CHECK_THROWS_AS(parse_lexicon("mais\t\n"), FormatError);
    CHECK_THROWS_AS(parse_lexicon("mais\tmais||\n"), FormatError);
    CHECK_THROWS_AS(parse_lexicon("mais\n"), FormatError);
    CHECK_THROWS_AS(parse_lexicon("virgule\t,\n"), FormatError);
    CHECK_THROWS_AS(parse_lexicon("mais\tpourtant\n"), FormatError);
  }

  TEST_CASE("comments and blank lines are ignored") {
    auto lex = parse_lexicon("# header\n\nmais\tmais\n");
    CHECK(lex.size() == 1);
  }

  TEST_CASE("shipped lexicons load") {
    auto fr = load_lexicon(dcproj::testing::data_dir() / "lexicon.fr.tsv");
    auto en = load_lexicon(dcproj::testing::data_dir() / "lexicon.en.tsv");
    CHECK(fr.size() >= 20);
    CHECK(en.size() >= 20);
    for (const auto& e : en) CHECK(e.default_relation.has_value());
  }

  TEST_CASE("write and load round-trip") {
    auto dir = dcproj::testing::scratch_dir("lexicon");
    auto fr = load_lexicon(dcproj::testing::data_dir() / "lexicon.fr.tsv");
    write_lexicon(fr, dir / "lex.tsv");
    CHECK(load_lexicon(dir / "lex.tsv") == fr);
  }

  TEST_CASE("the elided connective matches across three tokens") {
    auto lex = parse_lexicon("d'autre part\td'autre part\tContrast\n");
    auto pair = make_pair("00000001", "d'autre part", "on the other hand");
    auto cands = match_candidates(pair, lex);
    REQUIRE(cands.size() == 1);
    CHECK(cands[0].start == 0);
    CHECK(cands[0].end == 3);
    CHECK(cands[0].canonical == "d'autre part");
    CHECK(cands[0].pair_id == "00000001");
  }

  TEST_CASE("empty lexicon matches nothing") {
    CHECK(match_candidates(make_pair("1", "mais oui", "but yes"), Lexicon{}).empty());
  }

  TEST_CASE("longest match wins and consumes its tokens") {
    auto lex = parse_lexicon("de\tde\nafin de\tafin de\n");
    auto cands = match_candidates(make_pair("1", "afin de voter", "to vote"), lex);
    REQUIRE(cands.size() == 1);
    CHECK(cands[0].canonical == "afin de");
    CHECK(spans(cands) == std::vector<std::pair<std::size_t, std::size_t>>{{0, 2}});
  }

  TEST_CASE("matching backs off to a shorter form when the long one is incomplete") {
    auto lex = parse_lexicon("de\tde\nafin de faire\tafin de faire\n");
    auto cands = match_candidates(make_pair("1", "afin de voter de", "to vote"), lex);
    CHECK(spans(cands) == std::vector<std::pair<std::size_t, std::size_t>>{{1, 2}, {3, 4}});
  }

  TEST_CASE("matching ignores case") {
    auto lex = parse_lexicon("mais\tmais\n");
    CHECK(match_candidates(make_pair("1", "Mais MAIS", "but"), lex).size() == 2);
  }

  TEST_CASE("random matches are disjoint, sorted and re-match their entries") {
    auto lex = parse_lexicon("a\ta\na b\ta b\nb c d\tb c d\nc\tc\nd a\td a\n");
    ConnectiveMatcher matcher(lex);
    Rng rng(11);
    const char* words[] = {"a", "b", "c", "d", "e"};
    for (int trial = 0; trial < 1000; ++trial) {
      std::string text;
      const auto n = rng.between(1, 15);
      for (std::uint64_t i = 0; i < n; ++i) text += std::string(words[rng.below(5)]) + " ";
      auto pair = make_pair("1", text, "x");
      auto cands = match_candidates(pair, lex, matcher);
      std::size_t prev_end = 0;
      for (const auto& c : cands) {
        REQUIRE(c.start >= prev_end);
        REQUIRE(c.start < c.end);
        REQUIRE(c.end <= pair.c_tokens.size());
        REQUIRE(candidate_matches_entry(c, pair, lex));
        prev_end = c.end;
      }
      REQUIRE(match_candidates(pair, lex) == cands);
    }
  }
}
