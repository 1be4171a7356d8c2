#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "shortops/psd_core.hpp"

namespace shortops {

using BigRat = boost::multiprecision::cpp_rational;

/// tau_G(X) in exact rational arithmetic for the supported class: any pair
/// of dimension <= 2, or exactly-diagonal pairs of dimension <= 3. Entries
/// are taken as exact binary rationals; the result is exact, rounded once to
/// doubles. Throws OracleUnsupportedError outside the supported class.
///
/// The 2x2 case is decided by exact rank/kernel classification:
///   G = 0            -> X
///   G definite       -> 0
///   rank G = 1, X definite -> X w w^T X / (w^T X w), w spanning ker G
///   rank G = 1, rank X = 1 -> 0 if ran X = ran G, else X
/// which avoids iterating: the orbit recurrence doubles numerator and
/// denominator bit-length per step, so long exact runs are not feasible.
Matrix exact_oracle_small(const PsdMatrix& g, const PsdMatrix& x);

/// Exact scalar orbit x_{k+1} = x_k^2 / (x_k + g); returns x_0 .. x_steps.
/// Capped at 20 steps (the iterate's bit-length doubles each step).
std::vector<BigRat> exact_scalar_orbit(const BigRat& g, const BigRat& x, int steps);

}  // namespace shortops
