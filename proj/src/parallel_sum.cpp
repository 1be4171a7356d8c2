#include "shortops/parallel_sum.hpp"

namespace shortops {

const char* ps_route_name(PsRoute r) {
  switch (r) {
    case PsRoute::Shorted: return "shorted";
    case PsRoute::Regularized: return "regularized";
    case PsRoute::InverseFormula: return "inverse-formula";
  }
  return "unknown";
}

namespace {

void check_same_dim(const PsdMatrix& x, const PsdMatrix& g, const char* who) {
  if (x.dim() != g.dim()) {
    throw DimMismatchError(std::string(who) + ": dims differ (" +
                           std::to_string(x.dim()) + " vs " +
                           std::to_string(g.dim()) + ")");
  }
}

}  // namespace

PsdMatrix parallel_sum(const PsdMatrix& x, const PsdMatrix& g,
                       const TolerancePolicy& pol) {
  check_same_dim(x, g, "parallel_sum");
  const double scale = x.lambda_max() + g.lambda_max();
  const PsdMatrix sum = PsdMatrix::validated(x.entries() + g.entries(), pol, scale);
  const Matrix half_inv = pinv_sqrt(sum, pol).entries();
  const Matrix k = half_inv * x.entries();
  return PsdMatrix::validated(x.entries() - k.transpose() * k, pol, scale);
}

ParallelSumResult parallel_sum_regularized(const PsdMatrix& x, const PsdMatrix& g,
                                           const std::vector<double>& eps_schedule,
                                           const TolerancePolicy& pol) {
  check_same_dim(x, g, "parallel_sum_regularized");
  if (eps_schedule.empty()) {
    throw ScheduleError("parallel_sum_regularized: empty eps schedule");
  }
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] > 0.0) ||
        (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1]))) {
      throw ScheduleError(
          "parallel_sum_regularized: schedule must be strictly decreasing and positive");
    }
  }
  const int n = x.dim();
  const Matrix sum = x.entries() + g.entries();
  ParallelSumResult out{PsdMatrix::zero(n), PsRoute::Regularized, 0.0, {}};
  Matrix iterate = Matrix::Zero(n, n);
  for (double eps : eps_schedule) {
    const Matrix reg = sum + eps * Matrix::Identity(n, n);
    iterate = symmetrized(x.entries() * reg.ldlt().solve(g.entries()));
    out.trace.emplace_back(eps, max_abs(iterate));
  }
  // The iterate carries O(eps) bias, some of it negative; clamp rather than
  // window-validate.
  out.value = PsdMatrix::clamped(iterate);
  out.residual_cross = max_abs(out.value.entries() - parallel_sum(x, g, pol).entries());
  return out;
}

std::vector<double> default_eps_schedule() {
  std::vector<double> schedule;
  double eps = 1e-2;
  for (int k = 0; k < 16; ++k) {
    schedule.push_back(eps);
    eps *= 0.25;
  }
  return schedule;
}

PsdMatrix parallel_sum_definite(const PsdMatrix& x, const PsdMatrix& g,
                                const TolerancePolicy& pol) {
  check_same_dim(x, g, "parallel_sum_definite");
  if (x.rank(pol) < x.dim() || g.rank(pol) < g.dim()) {
    throw NotDefiniteError("parallel_sum_definite: inputs must be positive definite");
  }
  const int n = x.dim();
  const Matrix inv_sum = x.entries().llt().solve(Matrix::Identity(n, n)) +
                         g.entries().llt().solve(Matrix::Identity(n, n));
  return PsdMatrix::validated(inv_sum.llt().solve(Matrix::Identity(n, n)), pol,
                              x.lambda_max() + g.lambda_max());
}

double variational_value(const PsdMatrix& x, const PsdMatrix& g, const Vector& h,
                         const TolerancePolicy& pol) {
  check_same_dim(x, g, "variational_value");
  if (h.size() != x.dim()) {
    throw DimMismatchError("variational_value: vector length mismatch");
  }
  const PsdMatrix sum =
      PsdMatrix::validated(x.entries() + g.entries(), pol,
                           x.lambda_max() + g.lambda_max());
  const Vector f = pinv_psd(sum, pol).entries() * (g.entries() * h);
  const Vector rest = h - f;
  return f.dot(x.entries() * f) + rest.dot(g.entries() * rest);
}

Fg2Pair fg2_decompose(const PsdMatrix& x, const PsdMatrix& g,
                      const TolerancePolicy& pol) {
  check_same_dim(x, g, "fg2_decompose");
  const double scale = x.lambda_max() + g.lambda_max();
  const PsdMatrix sum = PsdMatrix::validated(x.entries() + g.entries(), pol, scale);
  const PsdMatrix sum_root = sqrt_psd(sum);
  const Matrix half_inv = pinv_sqrt(sum, pol).entries();
  const Matrix raw = symmetrized(half_inv * x.entries() * half_inv);
  Eigen::SelfAdjointEigenSolver<Matrix> es(raw);
  // 0 <= M <= I holds exactly in the calculus; clamp float spill on both ends.
  const Vector clamped = es.eigenvalues().cwiseMax(0.0).cwiseMin(1.0);
  return Fg2Pair{PsdMatrix::from_spectral(es.eigenvectors(), clamped), sum_root};
}

PsdMatrix parallel_sum_via_m(const PsdMatrix& x, const PsdMatrix& g,
                             const TolerancePolicy& pol) {
  check_same_dim(x, g, "parallel_sum_via_m");
  const Fg2Pair pair = fg2_decompose(x, g, pol);
  const Matrix& m = pair.m.entries();
  const Matrix middle = m - m * m;
  return PsdMatrix::validated(
      pair.sum_root.entries() * middle * pair.sum_root.entries(), pol,
      x.lambda_max() + g.lambda_max());
}

}  // namespace shortops
