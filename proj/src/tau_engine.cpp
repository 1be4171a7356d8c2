#include "shortops/tau_engine.hpp"

#include "shortops/shorted.hpp"

namespace shortops {

const char* tau_route_name(TauRoute r) {
  switch (r) {
    case TauRoute::Iterative: return "iterative";
    case TauRoute::ClosedM: return "closed-m";
    case TauRoute::ClosedL: return "closed-l";
    case TauRoute::ViaLebesgue: return "via-lebesgue";
    case TauRoute::MRecurrence: return "m-recurrence";
  }
  return "unknown";
}

namespace {

void check_same_dim(const PsdMatrix& g, const PsdMatrix& x, const char* who) {
  if (g.dim() != x.dim()) {
    throw DimMismatchError(std::string(who) + ": dims differ");
  }
}

Matrix subspace_projector(const Subspace& s) {
  if (s.dim() == 0) return Matrix::Zero(s.ambient_dim(), s.ambient_dim());
  return s.frame() * s.frame().transpose();
}

int eig1_cluster_dim(const PsdMatrix& m0, const TolerancePolicy& pol) {
  int count = 0;
  const Vector& ev = m0.spectral().eigenvalues;
  while (count < ev.size() && ev(count) >= 1.0 - pol.eig1_cluster) ++count;
  return count;
}

// One recurrence step (I - M0 + M)^{-1} M^2, symmetrized and clamped PSD.
PsdMatrix m_step(const Matrix& resolvent_base, const PsdMatrix& m,
                 const TolerancePolicy& pol) {
  const Matrix resolvent = resolvent_base + m.entries();
  const Matrix next = resolvent.ldlt().solve(m.entries() * m.entries());
  return PsdMatrix::validated(symmetrized(next), pol, 1.0);
}

}  // namespace

PsdMatrix mu(const PsdMatrix& g, const PsdMatrix& x, const TolerancePolicy& pol) {
  check_same_dim(g, x, "mu");
  const PsdMatrix ps = parallel_sum(x, g, pol);
  return PsdMatrix::validated(x.entries() - ps.entries(), pol, x.lambda_max());
}

IterationTrace mu_orbit(const PsdMatrix& g, const PsdMatrix& x,
                        const TolerancePolicy& pol) {
  check_same_dim(g, x, "mu_orbit");
  const double stop = pol.conv_tol(x.lambda_max());
  IterationTrace trace;
  trace.iterates.push_back(x);
  trace.stopped_by = IterationTrace::Stop::MaxIter;
  Matrix accumulated = Matrix::Zero(x.dim(), x.dim());
  for (int n = 0; n < pol.max_iter; ++n) {
    const PsdMatrix& current = trace.iterates.back();
    const PsdMatrix ps = parallel_sum(current, g, pol);
    PsdMatrix next = PsdMatrix::validated(current.entries() - ps.entries(), pol,
                                          x.lambda_max());
    const double gap = max_abs(current.entries() - next.entries());
    if (gap < stop) {
      trace.stopped_by = IterationTrace::Stop::Converged;
      break;
    }
    accumulated += ps.entries();
    trace.ps_norms.push_back(max_abs(ps.entries()));
    trace.partial_sums.push_back(
        PsdMatrix::validated(accumulated, pol, x.lambda_max()));
    trace.step_gaps.push_back(gap);
    trace.iterates.push_back(std::move(next));
  }
  return trace;
}

TauResult tau_iterative(const PsdMatrix& g, const PsdMatrix& x,
                        const TolerancePolicy& pol) {
  IterationTrace trace = mu_orbit(g, x, pol);
  return TauResult{trace.iterates.back(),
                   TauRoute::Iterative,
                   std::nullopt,
                   {},
                   trace.stopped_by == IterationTrace::Stop::MaxIter};
}

TauResult tau_closed_m(const PsdMatrix& g, const PsdMatrix& x,
                       const TolerancePolicy& pol) {
  check_same_dim(g, x, "tau_closed_m");
  const double scale = x.lambda_max() + g.lambda_max();
  const PsdMatrix sum = PsdMatrix::validated(g.entries() + x.entries(), pol, scale);
  const Subspace m_space =
      preimage_in_range(sum, range_basis(g, pol), pol).orthocomplement();
  const Matrix sum_half = sqrt_psd(sum).entries();
  PsdMatrix value = PsdMatrix::validated(
      sum_half * subspace_projector(m_space) * sum_half, pol, x.lambda_max());
  const int cluster = eig1_cluster_dim(fg2_decompose(x, g, pol).m, pol);
  if (cluster != m_space.dim()) {
    throw InternalInconsistencyError(
        "tau_closed_m: preimage construction gives dim " +
        std::to_string(m_space.dim()) + " but the contraction's eigenvalue-1 "
        "cluster has dim " + std::to_string(cluster));
  }
  return TauResult{std::move(value), TauRoute::ClosedM, m_space, {}, false};
}

TauResult tau_closed_l(const PsdMatrix& g, const PsdMatrix& x,
                       const TolerancePolicy& pol) {
  check_same_dim(g, x, "tau_closed_l");
  const Subspace l_space =
      preimage_in_range(x, range_basis(g, pol), pol).orthocomplement();
  const Matrix x_half = sqrt_psd(x).entries();
  PsdMatrix value = PsdMatrix::validated(
      x_half * subspace_projector(l_space) * x_half, pol, x.lambda_max());
  return TauResult{std::move(value), TauRoute::ClosedL, l_space, {}, false};
}

TauResult tau_via_lebesgue(const PsdMatrix& g, const PsdMatrix& x,
                           const TolerancePolicy& pol) {
  check_same_dim(g, x, "tau_via_lebesgue");
  const PsdMatrix ac = ac_part(g, x, pol);
  PsdMatrix value =
      PsdMatrix::validated(x.entries() - ac.entries(), pol, x.lambda_max());
  return TauResult{std::move(value), TauRoute::ViaLebesgue, std::nullopt, {}, false};
}

std::vector<PsdMatrix> m_recurrence(const PsdMatrix& m0, int steps,
                                    const TolerancePolicy& pol) {
  if (steps < 0) throw Error("m_recurrence: steps must be >= 0");
  const double slack = pol.loewner_tol(1.0);
  if (m0.lambda_max() > 1.0 + slack || m0.lambda_min() < -slack) {
    throw NotContractionError("m_recurrence: M0 is not a nonnegative contraction");
  }
  const Vector clamped = m0.spectral().eigenvalues.cwiseMin(1.0);
  std::vector<PsdMatrix> out;
  out.push_back(PsdMatrix::from_spectral(m0.spectral().vectors, clamped));
  const Matrix base =
      Matrix::Identity(m0.dim(), m0.dim()) - out.front().entries();
  for (int k = 0; k < steps; ++k) {
    out.push_back(m_step(base, out.back(), pol));
  }
  return out;
}

TauResult tau_m_recurrence(const PsdMatrix& g, const PsdMatrix& x,
                           const TolerancePolicy& pol) {
  check_same_dim(g, x, "tau_m_recurrence");
  const Fg2Pair pair = fg2_decompose(x, g, pol);
  const Matrix base =
      Matrix::Identity(x.dim(), x.dim()) - pair.m.entries();
  PsdMatrix m = pair.m;
  bool converged = false;
  for (int k = 0; k < pol.max_iter; ++k) {
    PsdMatrix next = m_step(base, m, pol);
    const double gap = max_abs(next.entries() - m.entries());
    m = std::move(next);
    if (gap < pol.conv_tol(1.0)) {
      converged = true;
      break;
    }
  }
  const Matrix& root = pair.sum_root.entries();
  PsdMatrix value = PsdMatrix::validated(root * m.entries() * root, pol,
                                         x.lambda_max());
  return TauResult{std::move(value), TauRoute::MRecurrence, std::nullopt, {},
                   !converged};
}

bool is_fixed_point(const PsdMatrix& g, const PsdMatrix& y,
                    const TolerancePolicy& pol) {
  check_same_dim(g, y, "is_fixed_point");
  const double ps_norm = max_abs(parallel_sum(y, g, pol).entries());
  const bool by_norm = ps_norm <= pol.conv_tol(y.lambda_max() + g.lambda_max());
  const bool by_range =
      intersect(range_basis(y, pol), range_basis(g, pol), pol).dim() == 0;
  if (by_norm != by_range) {
    throw InternalInconsistencyError(
        "is_fixed_point: ‖Y:G‖ = " + std::to_string(ps_norm) +
        " contradicts the range-intersection criterion");
  }
  return by_norm;
}

TauResult tau(const PsdMatrix& g, const PsdMatrix& x, const TolerancePolicy& pol) {
  check_same_dim(g, x, "tau");
  TauResult canonical = tau_closed_l(g, x, pol);
  const TauResult routes[] = {
      tau_iterative(g, x, pol),
      tau_closed_m(g, x, pol),
      tau_via_lebesgue(g, x, pol),
      tau_m_recurrence(g, x, pol),
  };
  canonical.cross_residuals[tau_route_name(TauRoute::ClosedL)] = 0.0;
  canonical.hit_max_iter = routes[0].hit_max_iter;
  for (const TauResult& r : routes) {
    canonical.cross_residuals[tau_route_name(r.route)] =
        max_abs(r.value.entries() - canonical.value.entries());
  }
  const double tol = 1e-6 * (1.0 + x.lambda_max());
  const double capped_tol = 1e-4 * (1.0 + x.lambda_max());
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double gap =
          max_abs(routes[i].value.entries() - routes[j].value.entries());
      const bool iterative_capped =
          (routes[i].route == TauRoute::Iterative && routes[i].hit_max_iter) ||
          (routes[j].route == TauRoute::Iterative && routes[j].hit_max_iter);
      if (gap > (iterative_capped ? capped_tol : tol)) worst = std::max(worst, gap);
    }
    const double gap_canon =
        max_abs(routes[i].value.entries() - canonical.value.entries());
    const bool iterative_capped =
        routes[i].route == TauRoute::Iterative && routes[i].hit_max_iter;
    if (gap_canon > (iterative_capped ? capped_tol : tol)) {
      worst = std::max(worst, gap_canon);
    }
  }
  if (worst > 0.0) {
    throw RouteDisagreementError(
        "tau: routes disagree by " + std::to_string(worst) +
        " (allowed " + std::to_string(tol) + ")",
        canonical.cross_residuals);
  }
  return canonical;
}

}  // namespace shortops
