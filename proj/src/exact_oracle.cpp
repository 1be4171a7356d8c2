#include "shortops/exact_oracle.hpp"

#include <array>

namespace shortops {

namespace {

// Symmetric 2x2 rational matrix [[a, b], [b, d]].
struct Sym2 {
  BigRat a, b, d;

  bool is_zero() const { return a == 0 && b == 0 && d == 0; }
  BigRat det() const { return a * d - b * b; }
};

Sym2 to_sym2(const Matrix& m) {
  Sym2 s;
  s.a = BigRat(m(0, 0));
  s.b = BigRat(0.5 * (m(0, 1) + m(1, 0)));
  s.d = BigRat(m(1, 1));
  return s;
}

int exact_rank(const Sym2& s) {
  if (s.is_zero()) return 0;
  const BigRat det = s.det();
  if (det < 0 || s.a < 0 || s.d < 0) {
    throw OracleUnsupportedError(
        "exact_oracle_small: entries are not exactly positive semidefinite");
  }
  return det > 0 ? 2 : 1;
}

// Kernel direction of a rank-1 Sym2 (unnormalized, rational).
std::array<BigRat, 2> kernel_dir(const Sym2& s) {
  if (s.a != 0) return {s.b, -s.a};
  // a == 0 forces b == 0 for a PSD matrix; kernel is e1
  return {BigRat(1), BigRat(0)};
}

// Range direction of a rank-1 Sym2 (unnormalized, rational).
std::array<BigRat, 2> range_dir(const Sym2& s) {
  if (s.a != 0) return {s.a, s.b};
  return {BigRat(0), s.d};
}

Matrix sym2_to_matrix(const BigRat& a, const BigRat& b, const BigRat& d) {
  Matrix m(2, 2);
  m(0, 0) = static_cast<double>(a);
  m(0, 1) = m(1, 0) = static_cast<double>(b);
  m(1, 1) = static_cast<double>(d);
  return m;
}

Matrix exact_tau_2x2(const Matrix& gm, const Matrix& xm) {
  const Sym2 g = to_sym2(gm);
  const Sym2 x = to_sym2(xm);
  const int rank_g = exact_rank(g);
  const int rank_x = exact_rank(x);
  if (rank_g == 0) return xm;           // every X is a fixed point of mu_0
  if (rank_g == 2) return Matrix::Zero(2, 2);
  if (rank_x == 0) return Matrix::Zero(2, 2);
  if (rank_x == 2) {
    // L = X^{1/2} ker G, so tau = X w w^T X / (w^T X w) for w spanning ker G.
    const auto w = kernel_dir(g);
    const BigRat xw0 = x.a * w[0] + x.b * w[1];
    const BigRat xw1 = x.b * w[0] + x.d * w[1];
    const BigRat denom = w[0] * xw0 + w[1] * xw1;
    return sym2_to_matrix(xw0 * xw0 / denom, xw0 * xw1 / denom, xw1 * xw1 / denom);
  }
  // two lines: tau = 0 when they coincide, X when they meet trivially
  const auto u = range_dir(g);
  const auto v = range_dir(x);
  const bool parallel = u[0] * v[1] - u[1] * v[0] == 0;
  return parallel ? Matrix(Matrix::Zero(2, 2)) : xm;
}

bool exactly_diagonal(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != j && m(i, j) != 0.0) return false;
    }
  }
  return true;
}

}  // namespace

Matrix exact_oracle_small(const PsdMatrix& g, const PsdMatrix& x) {
  if (g.dim() != x.dim()) throw DimMismatchError("exact_oracle_small: dims differ");
  const int n = g.dim();
  const Matrix& gm = g.entries();
  const Matrix& xm = x.entries();
  if (exactly_diagonal(gm) && exactly_diagonal(xm)) {
    // Scalar orbit per diagonal entry: x stays fixed where g vanishes and
    // dies where g > 0.
    Matrix out = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      if (gm(i, i) < 0.0 || xm(i, i) < 0.0) {
        throw OracleUnsupportedError("exact_oracle_small: negative diagonal entry");
      }
      out(i, i) = gm(i, i) == 0.0 ? xm(i, i) : 0.0;
    }
    return out;
  }
  if (n == 1) {
    Matrix out(1, 1);
    out(0, 0) = gm(0, 0) == 0.0 ? xm(0, 0) : 0.0;
    return out;
  }
  if (n == 2) return exact_tau_2x2(gm, xm);
  throw OracleUnsupportedError(
      "exact_oracle_small: supported inputs are dim <= 2 pairs or diagonal "
      "pairs of dim <= 3, got a non-diagonal pair of dim " + std::to_string(n));
}

std::vector<BigRat> exact_scalar_orbit(const BigRat& g, const BigRat& x, int steps) {
  if (g < 0 || x < 0) {
    throw OracleUnsupportedError("exact_scalar_orbit: negative input");
  }
  if (steps < 0 || steps > 20) {
    throw Error("exact_scalar_orbit: steps must lie in [0, 20] "
                "(the iterate's bit-length doubles per step)");
  }
  std::vector<BigRat> orbit{x};
  for (int k = 0; k < steps; ++k) {
    const BigRat& cur = orbit.back();
    if (cur == 0 && g == 0) {
      orbit.push_back(BigRat(0));
      continue;
    }
    orbit.push_back(cur * cur / (cur + g));
  }
  return orbit;
}

}  // namespace shortops
