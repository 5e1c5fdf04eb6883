#include <random>

#include "doctest.h"

#include "knotscope/cyc_int.hpp"
#include "knotscope/diagram.hpp"
#include "knotscope/error.hpp"
#include "knotscope/families.hpp"
#include "knotscope/int_matrix.hpp"
#include "knotscope/invariants.hpp"

using namespace knotscope;

namespace {

LaurentPoly invert_variable(const LaurentPoly& p) {
  LaurentPoly out;
  for (const auto& [e, c] : p.terms())
    out += LaurentPoly::monomial(c, -e);
  return out;
}

std::vector<Diagram> sample_diagrams() {
  std::vector<Diagram> out;
  for (const char* s : {"2", "-2", "4 2", "4 6 2", "4 6 8 2", "6 8 10 2 4", "4 8 10 2 6", "4 8 12 10 2 6",
                        "4 8 10 12 2 6", "4 8 10 2 12 6", "4 10 14 12 2 8 6", "4 8 -12 2 -14 -16 -6 -10",
                        "4 8 -12 2 -14 -6 -16 -10", "4 8 -12 2 14 -6 16 10", "4 -6 2", "4 -6 -8 2"})
    out.push_back(realize(parse_dt(s)));
  for (int n = 1; n <= 8; ++n)
    out.push_back(twist(TwistSpec{n}));
  out.push_back(pretzel(PretzelSpec{-3, 5, 7}));
  out.push_back(pretzel(PretzelSpec{3, -3, 4}));
  return out;
}

CycInt random_cyc(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> u(-1000, 1000);
  return CycInt(u(rng), u(rng), u(rng), u(rng));
}

} // namespace

TEST_SUITE("invariants") {
  TEST_CASE("known determinants") {
    CHECK(determinant(realize(parse_dt("4 6 2"))) == 3);
    CHECK(determinant(realize(parse_dt("4 6 8 2"))) == 5);
    CHECK(determinant(realize(parse_dt("6 8 10 2 4"))) == 5);
    CHECK(determinant(realize(parse_dt("4 8 -12 2 -14 -16 -6 -10"))) == 3);
    CHECK(determinant(realize(parse_dt("4 8 -12 2 14 -6 16 10"))) == 15);
    CHECK(determinant(Diagram()) == 1);
  }

  TEST_CASE("kink bracket") {
    CHECK(kauffman_bracket(realize(parse_dt("-2"))) == LaurentPoly::monomial(-1, 3));
    CHECK(kauffman_bracket(realize(parse_dt("2"))) == LaurentPoly::monomial(-1, -3));
    CHECK(kauffman_bracket(Diagram()) == LaurentPoly(1));
  }

  TEST_CASE("state sum agrees with contraction") {
    for (const Diagram& d : sample_diagrams()) {
      CAPTURE(d.pd_string());
      CHECK(kauffman_bracket(d) == kauffman_bracket_states(d));
    }
  }

  TEST_CASE("three routes agree and the determinant is odd") {
    for (const Diagram& d : sample_diagrams()) {
      CAPTURE(d.pd_string());
      DeterminantRoutes r = determinant_routes(d);
      CHECK(r.agree());
      REQUIRE(r.jones.has_value());
      CHECK(r.goeritz == *r.jones);
      CHECK(r.goeritz % 2 == 1);
    }
  }

  TEST_CASE("mirror invariance") {
    for (const Diagram& d : sample_diagrams()) {
      Diagram m = mirror(d);
      CHECK(determinant(m) == determinant(d));
      CHECK(kauffman_bracket(m) == invert_variable(kauffman_bracket(d)));
    }
  }

  TEST_CASE("jones route from bracket shape") {
    // The trefoil bracket has |<D>(zeta)| = 3.
    LaurentPoly b = kauffman_bracket(realize(parse_dt("4 6 2")));
    CHECK(jones_det_from_bracket(b) == 3);
    CHECK(b.terms().size() == 3);
  }

  TEST_CASE("state-sum budget") {
    Diagram big = twist(TwistSpec{30});
    CHECK(big.crossing_count() > kStateSumMaxCrossings);
    CHECK_THROWS_AS(kauffman_bracket_states(big), Error);
    CHECK(jones_det(big) == 61);
  }

  TEST_CASE("goeritz matrix is symmetric") {
    IntMatrix g = goeritz_matrix(realize(parse_dt("4 8 10 2 12 6")));
    REQUIRE(g.rows() == g.cols());
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j)
        CHECK(g.at(i, j) == g.at(j, i));
  }

  TEST_CASE("bareiss matches cofactor expansion") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> u(-9, 9);
    for (int trial = 0; trial < 50; ++trial) {
      IntMatrix m(4, 4);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
          m.at(i, j) = u(rng);
      BigInt expect = 0;
      // Leibniz over S4.
      std::array<int, 4> p{0, 1, 2, 3};
      do {
        int inversions = 0;
        for (int a = 0; a < 4; ++a)
          for (int b = a + 1; b < 4; ++b)
            inversions += p[a] > p[b];
        BigInt term = inversions % 2 ? -1 : 1;
        for (std::size_t i = 0; i < 4; ++i)
          term *= m.at(i, static_cast<std::size_t>(p[i]));
        expect += term;
      } while (std::next_permutation(p.begin(), p.end()));
      CHECK(m.determinant() == expect);
    }
  }

  TEST_CASE("CycInt ring laws") {
    std::mt19937_64 rng(11);
    CycInt z = CycInt::zeta();
    CycInt p = 1;
    for (int i = 0; i < 8; ++i)
      p *= z;
    CHECK(p == CycInt(1));
    CHECK(CycInt::zeta_power(4) == CycInt(-1));
    CHECK(CycInt::zeta_power(-1) * z == CycInt(1));
    for (int trial = 0; trial < 200; ++trial) {
      CycInt a = random_cyc(rng), b = random_cyc(rng), c = random_cyc(rng);
      CHECK(a * b == b * a);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a + (-a) == CycInt());
      CHECK(a * CycInt(1) == a);
      CHECK((a * b).conjugate() == a.conjugate() * b.conjugate());
      CycInt n = a.norm();
      // Real: coefficient of z^2 vanishes and z, z^3 parts are opposite.
      CHECK(n[2] == 0);
      CHECK(n[1] == -n[3]);
    }
  }
}
