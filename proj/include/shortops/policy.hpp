#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace shortops {

// Everything the library throws derives from Error, so the CLI boundary can
// catch the whole family and map it onto the exit-code contract.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotSquareError : Error { using Error::Error; };
struct NotPsdError : Error { using Error::Error; };
struct DimMismatchError : Error { using Error::Error; };
struct BadExponentError : Error { using Error::Error; };
struct ScheduleError : Error { using Error::Error; };
struct NotDefiniteError : Error { using Error::Error; };
struct NotContractionError : Error { using Error::Error; };
struct InfeasibleSpecError : Error { using Error::Error; };
struct OracleUnsupportedError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

// Two redundant computations of the same object disagreed beyond tolerance.
// Signals tolerance misconfiguration, not an input error.
struct InternalInconsistencyError : Error { using Error::Error; };

// Independent evaluation routes drifted apart; carries the per-route gaps.
class RouteDisagreementError : public Error {
 public:
  RouteDisagreementError(const std::string& what,
                         std::map<std::string, double> residuals)
      : Error(what), residuals_(std::move(residuals)) {}

  const std::map<std::string, double>& residuals() const { return residuals_; }

 private:
  std::map<std::string, double> residuals_;
};

/// One set of knobs governs every tolerance decision in the library.
///
/// rank_rel is a per-dimension factor: the numerical rank of A keeps
/// eigenvalues above rank_rel * dim * lambda_max(A). eig1_cluster does double
/// duty as the half-width of the eigenvalue-1 cluster and as the subspace
/// membership knob (principal cosine > 1 - eig1_cluster), so intersection and
/// kernel detection are governed together. conv_abs and loewner_slack are
/// applied scaled by (1 + scale) where scale is the max-abs size of the
/// quantities involved.
struct TolerancePolicy {
  double rank_rel = 0x1p-46;
  double eig1_cluster = 1e-8;
  double conv_abs = 1e-12;
  double loewner_slack = 1e-9;
  int max_iter = 10000;

  void validate() const {
    if (!(rank_rel > 0.0) || !(eig1_cluster > 0.0) || !(conv_abs > 0.0) ||
        !(loewner_slack > 0.0) || max_iter <= 0) {
      throw Error("TolerancePolicy: all fields must be strictly positive");
    }
    if (!(eig1_cluster < 0.5)) {
      throw Error("TolerancePolicy: eig1_cluster must be < 0.5");
    }
  }

  double rank_cutoff(int dim, double lambda_max) const {
    return rank_rel * static_cast<double>(dim) * lambda_max;
  }
  double conv_tol(double scale) const { return conv_abs * (1.0 + scale); }
  double loewner_tol(double scale) const {
    return loewner_slack * (1.0 + scale);
  }
  // Singular-value threshold for "B^{1/2}f lands in the target subspace";
  // scales like sqrt(eig1_cluster) * sqrt(lambda_max), the sigma a direction
  // at the cluster's critical principal angle would produce.
  double membership_sigma_tol(double lambda_max) const {
    return std::sqrt(eig1_cluster * (1.0 + lambda_max));
  }
};

}  // namespace shortops
