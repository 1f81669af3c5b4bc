#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hallbridge/ffalg.hpp"

using namespace hallbridge;

TEST_CASE("field validation accepts primes in range only") {
  CHECK_NOTHROW(Field(2));
  CHECK_NOTHROW(Field(13));
  CHECK_THROWS_AS(Field(4), ParseError);
  CHECK_THROWS_AS(Field(1), ParseError);
  CHECK_THROWS_AS(Field(15), ParseError);
  CHECK_THROWS_AS(Field(17), ParseError);
}

TEST_CASE("field inverses") {
  for (unsigned q : {2u, 3u, 5u, 7u, 11u, 13u}) {
    Field f(q);
    for (unsigned a = 1; a < q; ++a) CHECK(f.mul(a, f.inv(a)) == 1);
    CHECK_THROWS_AS(f.inv(0), DivisionByZero);
  }
}

TEST_CASE("tcoeff arithmetic") {
  // (1 + t)(1 - t) = 1 - q = -1 at q = 2
  TCoeff x(2, 1, 1), y(2, 1, -1);
  CHECK(x * y == TCoeff(2, -1, 0));
  // x * 1 = x
  TCoeff z(3, mpq_class(2, 5), mpq_class(-7, 3));
  CHECK(z * TCoeff::one(3) == z);
  // t * t = q
  CHECK(TCoeff::t(3) * TCoeff::t(3) == TCoeff::integer(3, 3));
  // division by zero
  CHECK_THROWS_AS(z / TCoeff::zero(3), DivisionByZero);
  // exact division roundtrip
  TCoeff w(3, mpq_class(1, 2), mpq_class(4, 7));
  CHECK((z / w) * w == z);
}

TEST_CASE("tpow") {
  CHECK(tpow(5, 0) == TCoeff::one(5));
  // q = 2, k = -1: t / 2
  CHECK(tpow(2, -1) == TCoeff(2, 0, mpq_class(1, 2)));
  CHECK(tpow(2, -1) * TCoeff::t(2) == TCoeff::one(2));
  // q = 3, k = 4: 9
  CHECK(tpow(3, 4) == TCoeff::integer(3, 9));
  // additivity over [-6, 6]
  for (unsigned q : {2u, 3u, 5u}) {
    for (long j = -6; j <= 6; ++j)
      for (long k = -6; k <= 6; ++k) CHECK(tpow(q, j) * tpow(q, k) == tpow(q, j + k));
  }
}

TEST_CASE("tcoeff is an integral domain") {
  std::mt19937_64 rng(7);
  for (unsigned q : {2u, 3u, 7u}) {
    for (int trial = 0; trial < 200; ++trial) {
      auto r = [&]() {
        return mpq_class(static_cast<long>(rng() % 17) - 8, static_cast<long>(rng() % 7) + 1);
      };
      TCoeff x(q, r(), r()), y(q, r(), r());
      if ((x * y).is_zero()) CHECK((x.is_zero() || y.is_zero()));
      if (!x.is_zero()) CHECK(x * x.inverse() == TCoeff::one(q));
    }
  }
}

TEST_CASE("rank plus kernel dimension equals columns") {
  std::mt19937_64 rng(11);
  for (unsigned q : {2u, 3u, 5u}) {
    Field f(q);
    for (int trial = 0; trial < 100; ++trial) {
      int rows = static_cast<int>(rng() % 5), cols = static_cast<int>(rng() % 5);
      Mat m(f, rows, cols);
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.set(i, j, static_cast<unsigned>(rng() % q));
      CHECK(m.rank() + m.nullspace().cols() == cols);
    }
  }
}

TEST_CASE("solution_space") {
  Field f2(2);
  SUBCASE("zero matrix") {
    Mat A(f2, 3, 3), b(f2, 3, 1);
    SolutionSpace s = solution_space(A, b);
    CHECK(s.dim == 3);
    CHECK(s.particular.has_value());
  }
  SUBCASE("identity") {
    Mat A = Mat::identity(f2, 3);
    Mat b(f2, 3, 1);
    b.set(1, 0, 1);
    SolutionSpace s = solution_space(A, b);
    CHECK(s.dim == 0);
    CHECK(s.particular.has_value());
    CHECK(s.particular->at(1, 0) == 1);
  }
  SUBCASE("one equation in two unknowns over F_2, against full enumeration") {
    Mat A(f2, 1, 2);
    A.set(0, 0, 1);
    A.set(0, 1, 1);
    Mat b(f2, 1, 1);
    SolutionSpace s = solution_space(A, b);
    CHECK(s.dim == 1);
    CHECK(s.particular.has_value());
    // Oracle: enumerate all 4 vectors of F_2^2.
    int solutions = 0;
    for (unsigned x0 = 0; x0 < 2; ++x0)
      for (unsigned x1 = 0; x1 < 2; ++x1)
        if ((x0 + x1) % 2 == 0) ++solutions;
    CHECK(solutions == 2);
    CHECK(solutions == 1 << s.dim);
  }
  SUBCASE("inconsistent system") {
    Mat A(f2, 2, 1);
    A.set(0, 0, 1);  // x = 0 and x = 1
    Mat b(f2, 2, 1);
    b.set(1, 0, 1);
    SolutionSpace s = solution_space(A, b);
    CHECK(!s.particular.has_value());
  }
}

TEST_CASE("matrix inverse and column basis") {
  Field f3(3);
  Mat m(f3, 2, 2);
  m.set(0, 0, 1);
  m.set(0, 1, 2);
  m.set(1, 1, 1);
  CHECK(m.is_invertible());
  CHECK(m * m.inverse() == Mat::identity(f3, 2));
  Mat wide(f3, 2, 4);
  wide.set(0, 0, 1);
  wide.set(1, 0, 2);
  wide.set(0, 1, 2);
  wide.set(1, 1, 1);  // column 1 = 2 * column 0
  wide.set(0, 3, 1);
  CHECK(wide.column_basis().cols() == wide.rank());
  auto sol = solve(wide, wide);
  CHECK(sol.has_value());
  CHECK(wide * *sol == wide);
}
