#include <doctest.h>

#include <algorithm>

#include "dcproj/alignment.hpp"
#include "dcproj/errors.hpp"
#include "test_support.hpp"

using namespace dcproj;
using dcproj::testing::links;
using dcproj::testing::random_alignment;

namespace {

bool subset(const AlignmentSet& a, const AlignmentSet& b) {
  return std::includes(b.links.begin(), b.links.end(), a.links.begin(), a.links.end());
}

AlignmentSet mirror(const AlignmentSet& s) {
  AlignmentSet out{s.pair_id, {}, s.aligner};
  for (auto l : s.links) out.links.insert({l.a_index, l.c_index});
  return out;
}

}  // namespace

TEST_SUITE("alignment") {
  TEST_CASE("intersection") {
    auto d = links("1", {{0, 0}, {0, 1}, {1, 2}});
    auto i = links("1", {{0, 0}, {1, 2}, {2, 2}});
    auto r = intersect(d, i);
    CHECK(r.links == links("1", {{0, 0}, {1, 2}}).links);
    CHECK(r.aligner == AlignerKind::intersection);
    CHECK(intersect(d, d).links == d.links);
    CHECK(intersect(links("1", {{0, 0}}), links("1", {{1, 1}})).links.empty());
    CHECK_THROWS_AS(intersect(links("1", {}), links("2", {})), FormatError);
  }

  TEST_CASE("union") {
    auto r = union_align(links("1", {{0, 0}}), links("1", {{1, 1}}));
    CHECK(r.links == links("1", {{0, 0}, {1, 1}}).links);
    CHECK(r.aligner == AlignerKind::union_);
    auto d = links("1", {{0, 3}, {2, 1}});
    CHECK(union_align(d, d).links == d.links);
    CHECK(union_align(links("1", {}), links("1", {})).links.empty());
    CHECK_THROWS_AS(union_align(links("1", {}), links("2", {})), FormatError);
  }

  TEST_CASE("grow-diag") {
    SUBCASE("equal inputs") {
      auto a = links("1", {{0, 0}, {1, 2}, {3, 1}});
      auto r = grow_diag(a, a);
      CHECK(r.links == a.links);
      CHECK(r.aligner == AlignerKind::grow_diag);
    }
    SUBCASE("empty seed grows nothing") {
      CHECK(grow_diag(links("1", {{0, 0}}), links("1", {{1, 1}})).links.empty());
    }
    SUBCASE("only neighbours of grown points are added") {
      auto d = links("1", {{1, 1}, {1, 2}});
      auto i = links("1", {{1, 1}, {3, 3}});
      CHECK(grow_diag(d, i).links == links("1", {{1, 1}, {1, 2}}).links);
    }
    SUBCASE("a neighbour joining two aligned tokens is refused") {
      // (1,1) neighbours (0,0) but both tokens 1 on C and 1 on A are already aligned via the seed.
      auto d = links("1", {{0, 0}, {1, 1}, {0, 1}});
      auto i = links("1", {{0, 0}, {1, 1}});
      CHECK(grow_diag(d, i).links == links("1", {{0, 0}, {1, 1}}).links);
    }
    SUBCASE("growth chains across passes") {
      auto d = links("1", {{0, 0}, {1, 1}, {2, 2}, {3, 3}});
      auto i = links("1", {{0, 0}});
      CHECK(grow_diag(d, i).links == d.links);
    }
    SUBCASE("mismatched pair ids") {
      CHECK_THROWS_AS(grow_diag(links("1", {}), links("2", {})), FormatError);
    }
  }

  TEST_CASE("symmetrize dispatches") {
    auto d = links("1", {{0, 0}, {1, 1}});
    auto i = links("1", {{0, 0}, {2, 2}});
    CHECK(symmetrize(d, i, AlignerKind::intersection) == intersect(d, i));
    CHECK(symmetrize(d, i, AlignerKind::union_) == union_align(d, i));
    CHECK(symmetrize(d, i, AlignerKind::grow_diag) == grow_diag(d, i));
    CHECK_THROWS_AS(symmetrize(d, i, AlignerKind::direct), FormatError);
  }

  TEST_CASE("aligner names") {
    for (auto k : {AlignerKind::direct, AlignerKind::inverse, AlignerKind::intersection, AlignerKind::union_,
                   AlignerKind::grow_diag, AlignerKind::external})
      CHECK(parse_aligner(to_string(k)) == k);
    CHECK(to_string(AlignerKind::grow_diag) == "grow-diag");
    CHECK(parse_aligner("grow_diag") == AlignerKind::grow_diag);
    CHECK_THROWS_AS(parse_aligner("gdfa"), FormatError);
  }

  TEST_CASE("set algebra over random alignments") {
    Rng rng(2024);
    for (int trial = 0; trial < 2000; ++trial) {
      const auto c_len = rng.between(1, 30);
      const auto a_len = rng.between(1, 30);
      const double density = rng.uniform() * 0.3;
      auto d = random_alignment(rng, "1", c_len, a_len, density);
      auto i = random_alignment(rng, "1", c_len, a_len, density);
      auto in = intersect(d, i);
      auto un = union_align(d, i);
      auto gd = grow_diag(d, i);
      REQUIRE(subset(in, d));
      REQUIRE(subset(in, i));
      REQUIRE(subset(in, gd));
      REQUIRE(subset(gd, un));
      REQUIRE(grow_diag(d, d).links == d.links);
      REQUIRE(intersect(i, d).links == in.links);
      REQUIRE(union_align(i, d).links == un.links);
      REQUIRE(mirror(intersect(mirror(d), mirror(i))).links == in.links);
      REQUIRE(mirror(union_align(mirror(d), mirror(i))).links == un.links);
      REQUIRE(grow_diag(d, i) == gd);
    }
  }

  TEST_CASE("pharaoh lines") {
    CHECK(parse_pharaoh_line("0-0 1-2", "1").links == links("1", {{0, 0}, {1, 2}}).links);
    CHECK(parse_pharaoh_line("", "1").links.empty());
    CHECK(parse_pharaoh_line("  ", "1").links.empty());
    CHECK(parse_pharaoh_line("0-0 0-0", "1").links.size() == 1);
    CHECK(format_pharaoh_line(links("1", {{2, 1}, {0, 3}})) == "0-3 2-1");
    CHECK_THROWS_WITH_AS(parse_pharaoh_line("0-x", "1", 4), doctest::Contains("non-integer"), FormatError);
    CHECK_THROWS_WITH_AS(parse_pharaoh_line("0--1", "1"), doctest::Contains("negative"), FormatError);
    CHECK_THROWS_AS(parse_pharaoh_line("1", "1"), FormatError);
    CHECK_THROWS_AS(parse_pharaoh_line("1-2-3", "1"), FormatError);
  }

  TEST_CASE("pharaoh files round-trip and keep line numbers") {
    auto dir = dcproj::testing::scratch_dir("pharaoh");
    std::vector<AlignmentSet> sets = {links("00000001", {{0, 0}, {1, 1}}), links("00000003", {{2, 0}})};
    write_pharaoh(sets, dir / "a.pharaoh");
    CHECK(dcproj::testing::read_file(dir / "a.pharaoh") == "0-0 1-1\n\n2-0\n");
    auto back = read_pharaoh(dir / "a.pharaoh");
    REQUIRE(back.size() == 3);
    CHECK(back[0] == sets[0]);
    CHECK(back[1].pair_id == "00000002");
    CHECK(back[1].links.empty());
    CHECK(back[2] == sets[1]);
    CHECK_THROWS_AS(read_pharaoh(dir / "missing.pharaoh"), IoError);

    Rng rng(5);
    std::vector<AlignmentSet> many;
    for (std::size_t n = 1; n <= 50; ++n) many.push_back(random_alignment(rng, make_pair_id(n), 10, 10, 0.2));
    write_pharaoh(many, dir / "b.pharaoh");
    CHECK(read_pharaoh(dir / "b.pharaoh") == many);
  }

  TEST_CASE("bounds") {
    auto pair = dcproj::testing::make_pair("1", "la maison", "the house");
    CHECK_NOTHROW(check_bounds(links("1", {{1, 1}}), pair));
    CHECK_THROWS_AS(check_bounds(links("1", {{2, 0}}), pair), FormatError);
    CHECK_THROWS_AS(check_bounds(links("1", {{0, 2}}), pair), FormatError);
  }
}
