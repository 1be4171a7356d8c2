#pragma once

#include "shortops/parallel_sum.hpp"
#include "shortops/psd_core.hpp"

namespace shortops {

/// Lebesgue-type split of B relative to A: B = ac_part + singular_part with
/// ac_part the largest A-absolutely-continuous piece below B and
/// singular_part A-singular (A : singular_part = 0).
struct Decomposition {
  PsdMatrix ac_part;
  PsdMatrix singular_part;
  Subspace omega;  // { f : B^{1/2} f ∈ ran A^{1/2} }
  bool unique;
  struct Residuals {
    double cross_route_gap;  // projection route vs n-schedule limit route
    double singularity;      // ‖A : (B - ac)‖
    double orthogonality;    // ‖ac : (B - ac)‖
  } residuals;
};

/// [A]B by the projection formula B^{1/2} P_Omega B^{1/2} with
/// Omega = { f : B^{1/2} f ∈ ran A^{1/2} }. Canonical route.
PsdMatrix ac_part(const PsdMatrix& a, const PsdMatrix& b,
                  const TolerancePolicy& pol = {});

/// [A]B as the limit of n·A : B along an increasing schedule, early-stopped
/// once successive iterates agree below conv tolerance. residual_cross gauges
/// the gap to the projection route.
ParallelSumResult ac_part_limit(const PsdMatrix& a, const PsdMatrix& b,
                                const std::vector<double>& n_schedule,
                                const TolerancePolicy& pol = {});

/// Default schedule 2^k, k = 0..40.
std::vector<double> default_n_schedule();

/// Full decomposition with residual diagnostics and the uniqueness verdict
/// (unique iff ran(ac_part) ⊆ ran A, tested by projector domination).
Decomposition lebesgue_decompose(const PsdMatrix& a, const PsdMatrix& b,
                                 const TolerancePolicy& pol = {});

/// True iff [A]B = B, i.e. Omega is the whole space.
bool is_absolutely_continuous(const PsdMatrix& a, const PsdMatrix& b,
                              const TolerancePolicy& pol = {});

/// True iff ran A ∩ ran B = {0}; cross-checked against ‖A:B‖ ≈ 0. The two
/// criteria disagreeing signals tolerance misconfiguration
/// (InternalInconsistencyError).
bool is_singular_pair(const PsdMatrix& a, const PsdMatrix& b,
                      const TolerancePolicy& pol = {});

}  // namespace shortops
