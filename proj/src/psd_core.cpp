#include "shortops/psd_core.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace shortops {

double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

namespace {

// Sort a spectral pair descending by eigenvalue.
EigenDecomposition sorted_descending(const Matrix& vectors, const Vector& values) {
  const int n = static_cast<int>(values.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return values(i) > values(j); });
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.vectors.resize(vectors.rows(), n);
  for (int i = 0; i < n; ++i) {
    out.eigenvalues(i) = values(order[i]);
    out.vectors.col(i) = vectors.col(order[i]);
  }
  return out;
}

}  // namespace

PsdMatrix PsdMatrix::validated(const Matrix& raw, const TolerancePolicy& pol,
                               double scale_floor) {
  pol.validate();
  if (raw.rows() != raw.cols() || raw.rows() == 0) {
    throw NotSquareError("psd_validate: expected a nonempty square matrix, got " +
                         std::to_string(raw.rows()) + "x" +
                         std::to_string(raw.cols()));
  }
  Matrix sym = symmetrized(raw);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw Error("psd_validate: eigendecomposition failed");
  }
  Vector values = es.eigenvalues();  // ascending
  const double lambda_max = values(values.size() - 1);
  const double scale = std::max({lambda_max, scale_floor, 0.0});
  const double window = pol.loewner_slack * scale;
  // Positive dust below the rank cutoff at the provenance scale is flushed
  // along with the negative clamp; otherwise a result that is exactly zero
  // in the calculus (a parallel sum of disjoint ranges, say) comes out as a
  // noise matrix with a spurious numerical rank.
  const double flush = pol.rank_cutoff(static_cast<int>(raw.rows()), scale);
  bool clamped = false;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) < -window) {
      char msg[128];
      std::snprintf(msg, sizeof(msg),
                    "psd_validate: eigenvalue %.3e below the clamp window -%.3e",
                    values(i), window);
      throw NotPsdError(msg);
    }
    if (values(i) <= flush) {
      clamped = clamped || values(i) != 0.0;
      values(i) = 0.0;
    }
  }
  EigenDecomposition spec = sorted_descending(es.eigenvectors(), values);
  Matrix entries = clamped
      ? symmetrized(spec.vectors * spec.eigenvalues.asDiagonal() *
                    spec.vectors.transpose())
      : std::move(sym);
  return PsdMatrix(std::move(entries), std::move(spec));
}

PsdMatrix PsdMatrix::from_spectral(const Matrix& vectors, const Vector& eigenvalues) {
  Vector values = eigenvalues.cwiseMax(0.0);
  EigenDecomposition spec = sorted_descending(vectors, values);
  Matrix entries = symmetrized(spec.vectors * spec.eigenvalues.asDiagonal() *
                               spec.vectors.transpose());
  return PsdMatrix(std::move(entries), std::move(spec));
}

PsdMatrix PsdMatrix::clamped(const Matrix& raw) {
  if (raw.rows() != raw.cols() || raw.rows() == 0) {
    throw NotSquareError("PsdMatrix::clamped: expected a nonempty square matrix");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(raw));
  return from_spectral(es.eigenvectors(), es.eigenvalues());
}

PsdMatrix PsdMatrix::zero(int dim) {
  return from_spectral(Matrix::Identity(dim, dim), Vector::Zero(dim));
}

PsdMatrix PsdMatrix::identity(int dim) {
  return from_spectral(Matrix::Identity(dim, dim), Vector::Ones(dim));
}

int PsdMatrix::rank(const TolerancePolicy& pol) const {
  const double cutoff = pol.rank_cutoff(dim(), lambda_max());
  int r = 0;
  while (r < dim() && spectral_.eigenvalues(r) > cutoff) ++r;
  return r;
}

PsdMatrix PsdMatrix::scaled(double factor) const {
  if (factor < 0.0) throw Error("PsdMatrix::scaled: factor must be >= 0");
  return from_spectral(spectral_.vectors, factor * spectral_.eigenvalues);
}

Subspace Subspace::zero(int ambient_dim) {
  return Subspace(ambient_dim, Matrix(ambient_dim, 0));
}

Subspace Subspace::full(int ambient_dim) {
  return Subspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::from_frame(Matrix frame) {
  const int ambient = static_cast<int>(frame.rows());
  const int k = static_cast<int>(frame.cols());
  if (k > ambient) {
    throw Error("Subspace: frame has more columns than the ambient dimension");
  }
  if (k > 0) {
    const double ortho_err =
        max_abs(frame.transpose() * frame - Matrix::Identity(k, k));
    if (ortho_err > 1e-8) {
      throw Error("Subspace: frame columns are not orthonormal (residual " +
                  std::to_string(ortho_err) + ")");
    }
  }
  return Subspace(ambient, std::move(frame));
}

Subspace Subspace::orthocomplement() const {
  const int k = dim();
  if (k == 0) return full(ambient_);
  if (k == ambient_) return zero(ambient_);
  Eigen::HouseholderQR<Matrix> qr(frame_);
  Matrix q = qr.householderQ();
  return Subspace(ambient_, q.rightCols(ambient_ - k));
}

double Subspace::containment_residual(const Subspace& other) const {
  if (other.ambient_dim() != ambient_) {
    throw DimMismatchError("containment_residual: ambient dims differ");
  }
  if (other.dim() == 0) return 0.0;
  const Matrix p_other = other.frame() * other.frame().transpose();
  const Matrix p_this = frame_ * frame_.transpose();
  return max_abs(p_this * p_other - p_other);
}

PsdMatrix psd_validate(const Matrix& raw, const TolerancePolicy& pol) {
  return PsdMatrix::validated(raw, pol);
}

PsdMatrix sqrt_psd(const PsdMatrix& a) {
  return PsdMatrix::from_spectral(a.spectral().vectors,
                                  a.spectral().eigenvalues.cwiseSqrt());
}

PsdMatrix pinv_psd(const PsdMatrix& a, const TolerancePolicy& pol) {
  const double cutoff = pol.rank_cutoff(a.dim(), a.lambda_max());
  Vector inv = a.spectral().eigenvalues;
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    inv(i) = inv(i) > cutoff ? 1.0 / inv(i) : 0.0;
  }
  return PsdMatrix::from_spectral(a.spectral().vectors, inv);
}

PsdMatrix pinv_sqrt(const PsdMatrix& a, const TolerancePolicy& pol) {
  const double cutoff = pol.rank_cutoff(a.dim(), a.lambda_max());
  Vector inv = a.spectral().eigenvalues;
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    inv(i) = inv(i) > cutoff ? 1.0 / std::sqrt(inv(i)) : 0.0;
  }
  return PsdMatrix::from_spectral(a.spectral().vectors, inv);
}

PsdMatrix frac_power(const PsdMatrix& a, double alpha, const TolerancePolicy& pol) {
  if (!(alpha > 0.0)) {
    throw BadExponentError("frac_power: exponent must be > 0, got " +
                           std::to_string(alpha));
  }
  const double cutoff = pol.rank_cutoff(a.dim(), a.lambda_max());
  Vector powered = a.spectral().eigenvalues;
  for (Eigen::Index i = 0; i < powered.size(); ++i) {
    powered(i) = powered(i) > cutoff ? std::pow(powered(i), alpha) : 0.0;
  }
  return PsdMatrix::from_spectral(a.spectral().vectors, powered);
}

Subspace range_basis(const PsdMatrix& a, const TolerancePolicy& pol) {
  const int r = a.rank(pol);
  return Subspace::from_frame(a.spectral().vectors.leftCols(r));
}

Subspace kernel_basis(const PsdMatrix& a, const TolerancePolicy& pol) {
  const int r = a.rank(pol);
  return Subspace::from_frame(a.spectral().vectors.rightCols(a.dim() - r));
}

PsdMatrix projector(const Subspace& s) {
  const Subspace comp = s.orthocomplement();
  Matrix vectors(s.ambient_dim(), s.ambient_dim());
  vectors << s.frame(), comp.frame();
  Vector values = Vector::Zero(s.ambient_dim());
  values.head(s.dim()).setOnes();
  return PsdMatrix::from_spectral(vectors, values);
}

Subspace intersect(const Subspace& u, const Subspace& v, const TolerancePolicy& pol) {
  pol.validate();
  if (u.ambient_dim() != v.ambient_dim()) {
    throw DimMismatchError("intersect: ambient dims differ");
  }
  if (u.dim() == 0 || v.dim() == 0) return Subspace::zero(u.ambient_dim());
  Eigen::JacobiSVD<Matrix> svd(u.frame().transpose() * v.frame(),
                               Eigen::ComputeThinU);
  const Vector& cosines = svd.singularValues();  // descending
  int count = 0;
  while (count < cosines.size() && cosines(count) >= 1.0 - pol.eig1_cluster) {
    ++count;
  }
  if (count == 0) return Subspace::zero(u.ambient_dim());
  return Subspace::from_frame(u.frame() * svd.matrixU().leftCols(count));
}

Subspace preimage_in_range(const PsdMatrix& b, const Subspace& target,
                           const TolerancePolicy& pol) {
  pol.validate();
  if (b.dim() != target.ambient_dim()) {
    throw DimMismatchError("preimage_in_range: dims differ");
  }
  const int n = b.dim();
  const Matrix b_half = sqrt_psd(b).entries();
  Matrix c = b_half;
  if (target.dim() > 0) {
    c -= target.frame() * (target.frame().transpose() * b_half);
  }
  Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeFullV);
  const Vector& sigmas = svd.singularValues();  // descending
  const double tol = pol.membership_sigma_tol(b.lambda_max());
  int keep = 0;  // count of sigmas above tolerance
  while (keep < n && sigmas(keep) > tol) ++keep;
  return Subspace::from_frame(svd.matrixV().rightCols(n - keep));
}

bool loewner_leq(const PsdMatrix& a, const PsdMatrix& b, const TolerancePolicy& pol) {
  pol.validate();
  if (a.dim() != b.dim()) throw DimMismatchError("loewner_leq: dims differ");
  Eigen::SelfAdjointEigenSolver<Matrix> es(
      symmetrized(b.entries() - a.entries()));
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(es.eigenvalues().size() - 1);
  const double scale = std::max(std::abs(lo), std::abs(hi));
  return lo >= -pol.loewner_tol(scale);
}

}  // namespace shortops
