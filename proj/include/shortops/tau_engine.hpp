#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shortops/parallel_sum.hpp"
#include "shortops/psd_core.hpp"

namespace shortops {

enum class TauRoute { Iterative, ClosedM, ClosedL, ViaLebesgue, MRecurrence };

const char* tau_route_name(TauRoute r);

/// Orbit F_0 = X, F_{n+1} = F_n - F_n:G with per-step diagnostics.
/// The orbit is Loewner non-increasing and the parallel-sum norms fall
/// monotonically; partial_sums[n] accumulates the telescoping series
/// sum_{k<=n} F_k:G = X - F_{n+1}.
struct IterationTrace {
  enum class Stop { Converged, MaxIter };

  std::vector<PsdMatrix> iterates;      // F_0 .. F_N
  std::vector<double> step_gaps;        // ‖F_n - F_{n+1}‖ max-abs
  std::vector<double> ps_norms;         // ‖F_n : G‖ max-abs
  std::vector<PsdMatrix> partial_sums;  // sum_{k<=n} F_k:G
  Stop stopped_by = Stop::Converged;
};

struct TauResult {
  PsdMatrix value;
  TauRoute route;
  std::optional<Subspace> subspace_used;
  /// Max-abs gap of each route against the canonical value (dispatcher only).
  std::map<std::string, double> cross_residuals;
  bool hit_max_iter = false;
};

/// One step of the orbit map: X - X:G, clamped PSD. 0 ⪯ result ⪯ X, with
/// equality to X exactly when X:G = 0.
PsdMatrix mu(const PsdMatrix& g, const PsdMatrix& x, const TolerancePolicy& pol = {});

/// Iterate mu until the step gap falls below conv tolerance or max_iter.
IterationTrace mu_orbit(const PsdMatrix& g, const PsdMatrix& x,
                        const TolerancePolicy& pol = {});

/// Orbit limit taken literally: the last iterate of mu_orbit.
TauResult tau_iterative(const PsdMatrix& g, const PsdMatrix& x,
                        const TolerancePolicy& pol = {});

/// Closed form (G+X)^{1/2} P_M (G+X)^{1/2} where M is the orthocomplement of
/// { f : (G+X)^{1/2} f ∈ ran G^{1/2} }. Also derives the same subspace as the
/// eigenvalue-1 cluster of the fg2 contraction and insists the two
/// constructions agree in dimension (InternalInconsistencyError otherwise).
TauResult tau_closed_m(const PsdMatrix& g, const PsdMatrix& x,
                       const TolerancePolicy& pol = {});

/// Closed form X^{1/2} P_L X^{1/2} where L is the orthocomplement of
/// { f : X^{1/2} f ∈ ran G^{1/2} }. Cheapest route; canonical in the dispatcher.
TauResult tau_closed_l(const PsdMatrix& g, const PsdMatrix& x,
                       const TolerancePolicy& pol = {});

/// X - [G]X through the shorted module.
TauResult tau_via_lebesgue(const PsdMatrix& g, const PsdMatrix& x,
                           const TolerancePolicy& pol = {});

/// The contraction recurrence M_{k+1} = (I - M_0 + M_k)^{-1} M_k^2 (true
/// inverses; the resolvent stays positive definite). Returns M_0 .. M_steps.
/// Every M_k commutes with M_0 and the sequence falls to the spectral
/// projection onto the eigenvalue-1 eigenspace of M_0.
std::vector<PsdMatrix> m_recurrence(const PsdMatrix& m0, int steps,
                                    const TolerancePolicy& pol = {});

/// Runs the recurrence on the fg2 contraction of (X, G) to convergence and
/// sandwiches the limit with (G+X)^{1/2}.
TauResult tau_m_recurrence(const PsdMatrix& g, const PsdMatrix& x,
                           const TolerancePolicy& pol = {});

/// True iff Y:G = 0 (equivalently ran Y ∩ ran G = {0}; both are computed and
/// must agree).
bool is_fixed_point(const PsdMatrix& g, const PsdMatrix& y,
                    const TolerancePolicy& pol = {});

/// All five routes; returns the closed-L value as canonical with the other
/// routes' gaps in cross_residuals. Pairwise disagreement beyond
/// 1e-6 * (1 + lambda_max(X)) throws RouteDisagreementError (1e-4 against a
/// capped iterative route).
TauResult tau(const PsdMatrix& g, const PsdMatrix& x,
              const TolerancePolicy& pol = {});

}  // namespace shortops
