#pragma once

#include <Eigen/Dense>

#include "shortops/policy.hpp"

namespace shortops {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Max-abs norm; 0 for empty matrices.
double max_abs(const Matrix& m);

/// (m + m^T)/2
Matrix symmetrized(const Matrix& m);

/// Eigendecomposition of a real symmetric matrix, eigenvalues descending,
/// column i of vectors paired with eigenvalues[i].
struct EigenDecomposition {
  Vector eigenvalues;
  Matrix vectors;
};

/// Immutable certified positive-semidefinite matrix.
///
/// The spectral decomposition is computed once at construction and shared by
/// every downstream operation; nothing is mutated afterwards, so values can
/// be copied and used concurrently without coordination.
class PsdMatrix {
 public:
  /// Symmetrize, eigendecompose and certify a raw square matrix.
  ///
  /// Eigenvalues in [-loewner_slack*scale, 0) are clamped to zero, where
  /// scale = max(lambda_max, scale_floor); anything below the window throws
  /// NotPsdError. Operations that subtract near-equal PSD matrices pass the
  /// scale of their inputs as scale_floor so cancellation dust on a
  /// near-zero result clamps instead of failing validation.
  static PsdMatrix validated(const Matrix& raw, const TolerancePolicy& pol = {},
                             double scale_floor = 0.0);

  /// Build from a known spectral decomposition (no eigensolve). Eigenvalues
  /// are clamped at zero and sorted descending together with their vectors;
  /// entries are reconstructed as V diag(lambda) V^T, re-symmetrized.
  static PsdMatrix from_spectral(const Matrix& vectors, const Vector& eigenvalues);

  /// Symmetrize and clamp every negative eigenvalue, however large. For
  /// routes whose output carries a known bias (regularized limits), where
  /// the windowed validation would reject legitimate approximation error.
  static PsdMatrix clamped(const Matrix& raw);

  static PsdMatrix zero(int dim);
  static PsdMatrix identity(int dim);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  const EigenDecomposition& spectral() const { return spectral_; }
  double lambda_max() const { return spectral_.eigenvalues(0); }
  double lambda_min() const {
    return spectral_.eigenvalues(spectral_.eigenvalues.size() - 1);
  }
  /// Count of eigenvalues above the relative rank cutoff.
  int rank(const TolerancePolicy& pol = {}) const;

  /// factor * this, factor >= 0 (spectral rescale, no eigensolve).
  PsdMatrix scaled(double factor) const;

 private:
  PsdMatrix(Matrix entries, EigenDecomposition spectral)
      : entries_(std::move(entries)), spectral_(std::move(spectral)) {}

  Matrix entries_;
  EigenDecomposition spectral_;
};

/// A linear subspace of R^n held as an orthonormal column frame (k >= 0
/// columns). In finite dimension every operator range is closed, so the
/// closure steps that appear around range and preimage constructions are
/// identity operations here and are not represented.
class Subspace {
 public:
  static Subspace zero(int ambient_dim);
  static Subspace full(int ambient_dim);
  /// Frame columns must already be orthonormal (checked).
  static Subspace from_frame(Matrix frame);

  int ambient_dim() const { return ambient_; }
  int dim() const { return static_cast<int>(frame_.cols()); }
  const Matrix& frame() const { return frame_; }

  Subspace orthocomplement() const;

  /// max-abs of P_this * P_other - P_other; near zero iff other ⊆ this.
  double containment_residual(const Subspace& other) const;

 private:
  Subspace(int ambient, Matrix frame)
      : ambient_(ambient), frame_(std::move(frame)) {}

  int ambient_;
  Matrix frame_;
};

/// Certify a raw square matrix as PSD (symmetrization + eigenvalue clamp).
PsdMatrix psd_validate(const Matrix& raw, const TolerancePolicy& pol = {});

/// Spectral square root; commutes with the input and squares back to it.
PsdMatrix sqrt_psd(const PsdMatrix& a);

/// Moore-Penrose pseudoinverse: eigenvalues above the rank cutoff inverted,
/// the rest zeroed. The zero matrix maps to the zero matrix.
PsdMatrix pinv_psd(const PsdMatrix& a, const TolerancePolicy& pol = {});

/// (A^{1/2})^+ with the rank decision taken on A's own spectrum. Composing
/// pinv_psd(sqrt_psd(A)) re-judges rank on square-rooted eigenvalues, where
/// clamp dust of order 1e-16 inflates to 1e-8 and survives any relative
/// cutoff; every A^{-1/2} in the library goes through this instead.
PsdMatrix pinv_sqrt(const PsdMatrix& a, const TolerancePolicy& pol = {});

/// Spectral power lambda -> lambda^alpha on eigenvalues above the rank
/// cutoff (alpha > 0; throws BadExponentError otherwise).
PsdMatrix frac_power(const PsdMatrix& a, double alpha,
                     const TolerancePolicy& pol = {});

/// Orthonormal basis of ran A (eigenvectors above the rank cutoff). In
/// finite dimension ran A = ran A^{1/2}, so this serves for both.
Subspace range_basis(const PsdMatrix& a, const TolerancePolicy& pol = {});

/// Orthonormal basis of ker A (the complement of range_basis).
Subspace kernel_basis(const PsdMatrix& a, const TolerancePolicy& pol = {});

/// frame * frame^T as a certified PSD matrix (idempotent, symmetric).
PsdMatrix projector(const Subspace& s);

/// U ∩ V via principal angles (SVD of U^T V); a direction belongs to the
/// intersection iff its principal cosine exceeds 1 - eig1_cluster.
Subspace intersect(const Subspace& u, const Subspace& v,
                   const TolerancePolicy& pol = {});

/// { f : B^{1/2} f ∈ target }, computed as the null space of
/// (I - P_target) B^{1/2}.
Subspace preimage_in_range(const PsdMatrix& b, const Subspace& target,
                           const TolerancePolicy& pol = {});

/// Loewner order test A ⪯ B: lambda_min(B - A) >= -slack * (1 + |B - A|).
bool loewner_leq(const PsdMatrix& a, const PsdMatrix& b,
                 const TolerancePolicy& pol = {});

}  // namespace shortops
