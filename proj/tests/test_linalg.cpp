#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "blform/exceptions.hpp"
#include "blform/linalg.hpp"
#include "blform/rational.hpp"

using blform::EchelonBasis;
using blform::frac;
using blform::Rational;
using blform::RationalMatrix;
using blform::RationalVector;

TEST_CASE("rational parsing and display") {
  CHECK(blform::parse_rational("2/4") == frac(1, 2));
  CHECK(blform::parse_rational("-6/4") == frac(-3, 2));
  CHECK(blform::parse_rational("7") == frac(7));
  CHECK(blform::parse_rational("-0") == frac(0));
  CHECK(blform::rational_string(frac(1, 2)) == "1/2");
  CHECK(blform::rational_string(frac(-3)) == "-3");
  CHECK(blform::rational_string(frac(4, -6)) == "-2/3");
  CHECK_THROWS_AS(blform::parse_rational("1/0"), blform::InputError);
  CHECK_THROWS_AS(blform::parse_rational("a"), blform::InputError);
  CHECK_THROWS_AS(blform::parse_rational(""), blform::InputError);
  CHECK_THROWS_AS(blform::parse_rational("1/2/3"), blform::InputError);
  CHECK_THROWS_AS(blform::parse_rational("1.5"), blform::InputError);
}

TEST_CASE("parse keeps huge parts exact") {
  const std::string big = "123456789012345678901234567890";
  const Rational value = blform::parse_rational(big + "/3");
  CHECK(blform::rational_string(value * 3) == big);
}

TEST_CASE("numerator bit length") {
  CHECK(blform::numerator_bit_length(frac(0)) == 0);
  CHECK(blform::numerator_bit_length(frac(1)) == 1);
  CHECK(blform::numerator_bit_length(frac(-8, 3)) == 4);
}

TEST_CASE("rank oracles") {
  CHECK(blform::rank_of({{1, 0}, {0, 1}}) == 2);
  CHECK(blform::rank_of({{1, 2}, {2, 4}}) == 1);
  CHECK(blform::rank_of({{0, 0}}) == 0);
  CHECK(blform::rank_of({}) == 0);
  // 3x3 with a dependent third row: r3 = r1 + r2.
  CHECK(blform::rank_of({{1, 2, 3}, {4, 5, 6}, {5, 7, 9}}) == 2);
  RationalMatrix fraction_matrix;
  fraction_matrix.rows = {{frac(1, 2), frac(1, 3)}, {frac(1, 4), frac(1, 6)}};
  CHECK(blform::rank(fraction_matrix) == 1);
}

TEST_CASE("rank is invariant under row scaling and permutation") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coord(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    const int rows = 1 + static_cast<int>(rng() % 5);
    const int cols = 1 + static_cast<int>(rng() % 5);
    std::vector<RationalVector> a;
    for (int i = 0; i < rows; ++i) {
      RationalVector row(cols);
      for (int j = 0; j < cols; ++j) row[j] = coord(rng);
      a.push_back(row);
    }
    const int base = blform::rank_of(a);
    std::vector<RationalVector> scaled = a;
    for (auto& row : scaled) {
      Rational c = frac(1 + static_cast<int>(rng() % 7), 1 + static_cast<int>(rng() % 7));
      for (auto& entry : row) entry *= c;
    }
    std::shuffle(scaled.begin(), scaled.end(), rng);
    CHECK(blform::rank_of(scaled) == base);
    CHECK(base <= std::min(rows, cols));
  }
}

TEST_CASE("dot and zero vector") {
  CHECK(blform::dot({1, 2, 3}, {4, 5, 6}) == 32);
  CHECK(blform::dot({frac(1, 2)}, {frac(2, 3)}) == frac(1, 3));
  CHECK(blform::is_zero_vector({0, 0}));
  CHECK_FALSE(blform::is_zero_vector({0, frac(1, 7)}));
}

TEST_CASE("span membership") {
  CHECK(blform::in_span({2, 4}, {{1, 2}}));
  CHECK_FALSE(blform::in_span({1, 0}, {{1, 2}}));
  CHECK(blform::in_span({0, 0}, {}));
  CHECK_FALSE(blform::in_span({1, 1}, {}));
  // Dependent generating lists are fine for membership.
  CHECK(blform::in_span({3, 3, 0}, {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}}));
  CHECK_FALSE(blform::in_span({0, 0, 1}, {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}}));
}

TEST_CASE("solve_in_basis roundtrip") {
  const std::vector<RationalVector> basis = {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}};
  const std::vector<Rational> coords = {frac(1, 2), frac(-1, 3), frac(5)};
  RationalVector target(3, Rational(0));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) target[j] += coords[i] * basis[i][j];
  }
  CHECK(blform::solve_in_basis(target, basis) == coords);
  CHECK_THROWS_AS(blform::solve_in_basis({1, 0}, {{1, 0}, {2, 0}}), blform::PreconditionError);
  CHECK_THROWS_AS(blform::solve_in_basis({1, 0, 0}, {{1, 0}, {0, 1}}), blform::InputError);
}

TEST_CASE("coordinates_in_span") {
  const auto coords = blform::coordinates_in_span({2, 2, 0}, {{1, 0, 0}, {0, 1, 0}});
  REQUIRE(coords.has_value());
  CHECK((*coords)[0] == 2);
  CHECK((*coords)[1] == 2);
  CHECK_FALSE(blform::coordinates_in_span({0, 0, 1}, {{1, 0, 0}, {0, 1, 0}}).has_value());
  CHECK_THROWS_AS(blform::coordinates_in_span({1, 1}, {{1, 0}, {2, 0}}),
                  blform::PreconditionError);
}

TEST_CASE("project_orthogonal") {
  // Projection of e1 off span{(1,1)} is (1/2, -1/2).
  const RationalVector p = blform::project_orthogonal({1, 0}, {{1, 1}});
  CHECK(p == RationalVector{frac(1, 2), frac(-1, 2)});
  CHECK(blform::dot(p, {1, 1}) == 0);
  CHECK(blform::project_orthogonal({3, 4}, {}) == RationalVector{3, 4});
  CHECK_THROWS_AS(blform::project_orthogonal({1, 0}, {{1, 1}, {2, 2}}),
                  blform::PreconditionError);
}

TEST_CASE("projection splits v exactly") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> coord(-4, 4);
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = 3 + static_cast<int>(rng() % 2);
    std::vector<RationalVector> basis;
    EchelonBasis span(dim);
    while (static_cast<int>(basis.size()) < 2) {
      RationalVector v(dim);
      for (int i = 0; i < dim; ++i) v[i] = coord(rng);
      if (span.insert(v)) basis.push_back(v);
    }
    RationalVector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = coord(rng);
    const RationalVector residue = blform::project_orthogonal(v, basis);
    for (const auto& b : basis) CHECK(blform::dot(residue, b) == 0);
    RationalVector inside(dim);
    for (int i = 0; i < dim; ++i) inside[i] = v[i] - residue[i];
    CHECK(blform::in_span(inside, basis));
  }
}

TEST_CASE("echelon basis") {
  EchelonBasis basis(3);
  CHECK(basis.insert({1, 2, 3}));
  CHECK_FALSE(basis.insert({2, 4, 6}));
  CHECK(basis.insert({0, 1, 1}));
  CHECK(basis.rank() == 2);
  CHECK(basis.contains({1, 3, 4}));
  CHECK_FALSE(basis.contains({0, 0, 1}));
  CHECK(basis.contains({0, 0, 0}));
  CHECK(basis.insert({0, 0, 1}));
  CHECK(basis.rank() == 3);
  CHECK(basis.contains({frac(22, 7), frac(-3), frac(355, 113)}));
}
