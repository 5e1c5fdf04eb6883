#include "doctest.h"

#include "knotscope/codes.hpp"
#include "knotscope/error.hpp"

using namespace knotscope;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

} // namespace

TEST_SUITE("codes") {
  TEST_CASE("parse_dt tokenizes") {
    CHECK(parse_dt("4 6 2").values().size() == 3);
    CHECK(parse_dt("4 6 8 2").crossings() == 4);
    CHECK(parse_dt("[4, 6, 2]") == parse_dt("4 6 2"));
    CHECK(parse_dt("(4,-6,+2)").str() == "4 -6 2");
    CHECK(parse_dt("").empty());
  }

  TEST_CASE("parse_dt rejects bad input") {
    CHECK(code_of([] { parse_dt("4 5 2"); }) == ErrorCode::OddValue);
    CHECK(code_of([] { parse_dt("4 4 2"); }) == ErrorCode::DuplicateMagnitude);
    CHECK(code_of([] { parse_dt("4 8 2"); }) == ErrorCode::WrongRange);
    CHECK(code_of([] { parse_dt("0"); }) == ErrorCode::WrongRange);
    CHECK(code_of([] { parse_dt("4 x 2"); }) == ErrorCode::ParseError);
  }

  TEST_CASE("dt_to_gauss pairs odd and even visits") {
    GaussCode g = dt_to_gauss(parse_dt("4 6 2"));
    REQUIRE(g.size() == 6);
    // (1,4), (3,6), (5,2)
    auto e = g.entries();
    CHECK(e[0].crossing == e[3].crossing);
    CHECK(e[2].crossing == e[5].crossing);
    CHECK(e[4].crossing == e[1].crossing);
    // All positive: odd visits under, even visits over.
    for (std::size_t k = 0; k < 6; ++k)
      CHECK(e[k].over == (k % 2 == 1));
    CHECK(dt_to_gauss(DTCode()).size() == 0);

    GaussCode g4 = dt_to_gauss(parse_dt("4 6 8 2"));
    CHECK(g4.size() == 8);
    CHECK(g4.crossings() == 4);
  }

  TEST_CASE("negative entries flip the even visit under") {
    GaussCode g = dt_to_gauss(parse_dt("4 -6 2"));
    CHECK(g.entries()[5].over == false); // visit 6 under
    CHECK(g.entries()[2].over == true);  // its odd partner over
  }

  TEST_CASE("gauss round trip") {
    for (const char* s : {"4 6 2", "4 6 8 2", "6 8 10 2 4", "4 8 -12 2 -14 -16 -6 -10"}) {
      CAPTURE(s);
      DTCode dt = parse_dt(s);
      CHECK(gauss_to_dt(dt_to_gauss(dt)) == dt);
    }
  }

  TEST_CASE("parse_gauss relabels by first appearance") {
    GaussCode g = parse_gauss("-7 3 -9 7 -3 9");
    CHECK(g.str() == "-1 2 -3 1 -2 3");
    CHECK(gauss_to_dt(g) == parse_dt("4 6 2"));
    CHECK(code_of([] { parse_gauss("1 2 1 2"); }) == ErrorCode::InvalidGauss);
    CHECK(code_of([] { parse_gauss("1 -1 2"); }) == ErrorCode::InvalidGauss);
    // 1 at positions 1 and 3: both odd.
    CHECK(code_of([] { gauss_to_dt(parse_gauss("1 2 -1 -2")); }) == ErrorCode::NonRealizable);
  }

  TEST_CASE("canonical_dt is independent of start and direction") {
    GaussCode g = dt_to_gauss(parse_dt("4 8 10 2 12 6"));
    auto e = std::vector<GaussEntry>(g.entries().begin(), g.entries().end());
    DTCode canon = canonical_dt(g);
    for (std::size_t s = 0; s < e.size(); ++s) {
      std::vector<GaussEntry> rot(e.size()), rev(e.size());
      for (std::size_t k = 0; k < e.size(); ++k) {
        rot[k] = e[(s + k) % e.size()];
        rev[k] = e[(s + e.size() - k) % e.size()];
      }
      CHECK(canonical_dt(GaussCode(rot)) == canon);
      CHECK(canonical_dt(GaussCode(rev)) == canon);
    }
    CHECK(!dt_less(canon, canon));
  }
}
