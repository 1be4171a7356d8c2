#pragma once

#include <utility>
#include <vector>

#include "shortops/psd_core.hpp"

namespace shortops {

enum class PsRoute { Shorted, Regularized, InverseFormula };

const char* ps_route_name(PsRoute r);

struct ParallelSumResult {
  PsdMatrix value;
  PsRoute route;
  /// Max-abs disagreement against the shorted route.
  double residual_cross = 0.0;
  /// (schedule value, max-abs of the iterate) per step.
  std::vector<std::pair<double, double>> trace;
};

/// The contraction representation X = (X+G)^{1/2} M (X+G)^{1/2},
/// G = (X+G)^{1/2} (I-M) (X+G)^{1/2}, with 0 ⪯ M ⪯ I supported on ran(X+G).
struct Fg2Pair {
  PsdMatrix m;
  PsdMatrix sum_root;  // (X+G)^{1/2}
};

/// Parallel sum X:G by the shorted formula
/// X - ((X+G)^{-1/2} X)^T ((X+G)^{-1/2} X), pseudoinverse square roots.
/// This is the canonical route every other module calls.
PsdMatrix parallel_sum(const PsdMatrix& x, const PsdMatrix& g,
                       const TolerancePolicy& pol = {});

/// X:G as the limit of X (X+G+eps I)^{-1} G along a decreasing eps schedule
/// (true inverses). The returned residual_cross gauges agreement with the
/// shorted route at the schedule's last point.
ParallelSumResult parallel_sum_regularized(const PsdMatrix& x, const PsdMatrix& g,
                                           const std::vector<double>& eps_schedule,
                                           const TolerancePolicy& pol = {});

/// Default schedule 1e-2 * 4^-k, 16 steps.
std::vector<double> default_eps_schedule();

/// (X^{-1} + G^{-1})^{-1} for positive definite inputs (true inverses);
/// throws NotDefiniteError if either input is singular at tolerance.
PsdMatrix parallel_sum_definite(const PsdMatrix& x, const PsdMatrix& g,
                                const TolerancePolicy& pol = {});

/// inf { (Xf,f) + (Gg,g) : h = f+g }, solved exactly through the normal
/// equations ((X+G) f = G h in the least-squares sense). Coincides with
/// ((X:G) h, h).
double variational_value(const PsdMatrix& x, const PsdMatrix& g, const Vector& h,
                         const TolerancePolicy& pol = {});

/// Extract the contraction M of the representation above; M is clamped
/// spectrally into [0, 1].
Fg2Pair fg2_decompose(const PsdMatrix& x, const PsdMatrix& g,
                      const TolerancePolicy& pol = {});

/// X:G = (X+G)^{1/2} (M - M^2) (X+G)^{1/2} via fg2_decompose.
PsdMatrix parallel_sum_via_m(const PsdMatrix& x, const PsdMatrix& g,
                             const TolerancePolicy& pol = {});

}  // namespace shortops
