#include <doctest.h>

#include "shortops/exact_oracle.hpp"
#include "shortops/tau_engine.hpp"

using namespace shortops;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

PsdMatrix diag2(double a, double b) { return psd_validate(mat2(a, 0, 0, b)); }

}  // namespace

TEST_CASE("exact scalar orbit 1, 1/2, 1/6, 1/42, 1/1806") {
  const auto orbit = exact_scalar_orbit(BigRat(1), BigRat(1), 4);
  REQUIRE(orbit.size() == 5);
  CHECK(orbit[0] == BigRat(1));
  CHECK(orbit[1] == BigRat(1, 2));
  CHECK(orbit[2] == BigRat(1, 6));
  CHECK(orbit[3] == BigRat(1, 42));
  CHECK(orbit[4] == BigRat(1, 1806));
  // denominators follow a_{n+1} = a_n (a_n + 1)
  CHECK(exact_scalar_orbit(BigRat(1), BigRat(1), 6).back() ==
        BigRat(1) / (BigRat(3263442) * BigRat(3263443)));

  CHECK(exact_scalar_orbit(BigRat(0), BigRat(3), 3).back() == BigRat(3));
  CHECK(exact_scalar_orbit(BigRat(2), BigRat(0), 3).back() == BigRat(0));
  CHECK_THROWS_AS(exact_scalar_orbit(BigRat(1), BigRat(1), 64), Error);
}

TEST_CASE("oracle on diagonal pairs") {
  Matrix g = Matrix::Zero(3, 3), x = Matrix::Zero(3, 3);
  g(0, 0) = 1.0;
  x(0, 0) = 3.0;
  x(1, 1) = 5.0;
  const Matrix t = exact_oracle_small(psd_validate(g), psd_validate(x));
  CHECK(t(0, 0) == 0.0);
  CHECK(t(1, 1) == 5.0);
  CHECK(t(2, 2) == 0.0);
}

TEST_CASE("oracle 2x2 case analysis") {
  // G = 0: X is a fixed point
  const PsdMatrix x0 = psd_validate(mat2(2, 1, 1, 3));
  CHECK(max_abs(exact_oracle_small(PsdMatrix::zero(2), x0) - x0.entries()) == 0.0);
  // G definite: tau vanishes
  CHECK(max_abs(exact_oracle_small(psd_validate(mat2(2, 1, 1, 1)), x0)) == 0.0);
  // rank-1 G, definite X: tau = X w w^T X / (w^T X w), w spanning ker G
  const Matrix t = exact_oracle_small(diag2(1, 0), psd_validate(mat2(2, 1, 1, 2)));
  CHECK(max_abs(t - mat2(0.5, 1, 1, 2)) < 1e-15);
  // non-diagonal rank-1 G: ker G = span(1, -1)
  const Matrix t2 =
      exact_oracle_small(psd_validate(mat2(1, 1, 1, 1)), diag2(2, 1));
  // w = (1,-1): Xw = (2,-1), w^T X w = 3: tau = [[4,-2],[-2,1]]/3
  CHECK(max_abs(t2 - mat2(4.0 / 3.0, -2.0 / 3.0, -2.0 / 3.0, 1.0 / 3.0)) <
        1e-15);
  // two distinct lines meet trivially: X stays fixed
  const PsdMatrix line_x = psd_validate(mat2(1, 1, 1, 1));
  CHECK(max_abs(exact_oracle_small(diag2(1, 0), line_x) - line_x.entries()) ==
        0.0);
  // coinciding lines: tau vanishes
  CHECK(max_abs(exact_oracle_small(line_x, line_x.scaled(2.0))) == 0.0);
}

TEST_CASE("oracle agrees with the floating tau across rational 2x2 pairs") {
  // small-denominator rational PSD pairs built as L L^T / k
  const int choices[][4] = {{1, 0, 0, 1}, {1, 1, 0, 0}, {2, 1, 1, 1},
                            {1, 2, 0, 3}, {0, 0, 0, 0}, {3, 0, 1, 1}};
  for (const auto& lg : choices) {
    for (const auto& lx : choices) {
      Matrix l1(2, 2), l2(2, 2);
      l1 << lg[0], lg[1], lg[2], lg[3];
      l2 << lx[0], lx[1], lx[2], lx[3];
      const PsdMatrix g = psd_validate(0.5 * (l1 * l1.transpose()));
      const PsdMatrix x = psd_validate(0.25 * (l2 * l2.transpose()));
      const Matrix exact = exact_oracle_small(g, x);
      const Matrix approx = tau(g, x).value.entries();
      CHECK(max_abs(exact - approx) < 1e-12);
    }
  }
}

TEST_CASE("oracle rejects unsupported inputs") {
  Matrix m = Matrix::Identity(3, 3);
  m(0, 1) = m(1, 0) = 0.25;
  CHECK_THROWS_AS(exact_oracle_small(psd_validate(m), PsdMatrix::identity(3)),
                  OracleUnsupportedError);
  CHECK_THROWS_AS(exact_oracle_small(PsdMatrix::identity(2), PsdMatrix::identity(3)),
                  DimMismatchError);
}
