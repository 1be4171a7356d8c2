#include <doctest.h>

#include "shortops/shorted.hpp"
#include "shortops/verify.hpp"

using namespace shortops;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

PsdMatrix diag2(double a, double b) { return psd_validate(mat2(a, 0, 0, b)); }

double diff(const Matrix& a, const Matrix& b) { return max_abs(a - b); }

}  // namespace

TEST_CASE("ac_part examples") {
  // Omega = span e1, sandwich keeps the 3 and drops the 5
  CHECK(diff(ac_part(diag2(1, 0), diag2(3, 5)).entries(), mat2(3, 0, 0, 0)) <
        1e-12);
  const PsdMatrix b = psd_validate(mat2(2, 1, 1, 3));
  CHECK(diff(ac_part(b, b).entries(), b.entries()) < 1e-12);
  CHECK(diff(ac_part(PsdMatrix::identity(2), b).entries(), b.entries()) < 1e-12);
}

TEST_CASE("ac_part_limit") {
  const ParallelSumResult r = ac_part_limit(diag2(1, 0), diag2(3, 5),
                                            default_n_schedule());
  CHECK(diff(r.value.entries(), mat2(3, 0, 0, 0)) < 1e-6);
  CHECK(r.residual_cross < 1e-6);
  // iterates 3n/(n+3) on the first entry, nondecreasing
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    CHECK(r.trace[i].second >= r.trace[i - 1].second - 1e-12);
  }

  CHECK(max_abs(ac_part_limit(PsdMatrix::zero(2), diag2(3, 5),
                              default_n_schedule())
                    .value.entries()) == 0.0);
  CHECK(max_abs(ac_part_limit(diag2(1, 0), PsdMatrix::zero(2),
                              default_n_schedule())
                    .value.entries()) == 0.0);

  CHECK_THROWS_AS(ac_part_limit(diag2(1, 0), diag2(3, 5), {}), ScheduleError);
  CHECK_THROWS_AS(ac_part_limit(diag2(1, 0), diag2(3, 5), {4.0, 2.0}),
                  ScheduleError);
}

TEST_CASE("lebesgue_decompose examples") {
  const Decomposition d = lebesgue_decompose(diag2(1, 0), diag2(3, 5));
  CHECK(diff(d.ac_part.entries(), mat2(3, 0, 0, 0)) < 1e-12);
  CHECK(diff(d.singular_part.entries(), mat2(0, 0, 0, 5)) < 1e-12);
  CHECK(d.unique);
  CHECK(d.residuals.singularity < 1e-10);
  CHECK(d.residuals.orthogonality < 1e-10);
  CHECK(d.residuals.cross_route_gap < 1e-6);

  const PsdMatrix b = psd_validate(mat2(2, 1, 1, 3));
  const Decomposition full = lebesgue_decompose(PsdMatrix::identity(2), b);
  CHECK(diff(full.ac_part.entries(), b.entries()) < 1e-12);
  CHECK(max_abs(full.singular_part.entries()) < 1e-12);
  CHECK(full.unique);

  // disjoint ranges: everything is singular
  const Decomposition disj = lebesgue_decompose(diag2(1, 0), diag2(0, 5));
  CHECK(max_abs(disj.ac_part.entries()) < 1e-12);
  CHECK(diff(disj.singular_part.entries(), mat2(0, 0, 0, 5)) < 1e-12);
  CHECK(disj.unique);
}

TEST_CASE("is_absolutely_continuous") {
  DetRng rng(41);
  const PsdMatrix a = random_psd(4, 2, rng);
  const Matrix a_half = sqrt_psd(a).entries();
  const PsdMatrix q = random_psd(4, 4, rng, 0.5, 2.0);
  const PsdMatrix b = PsdMatrix::clamped(a_half * q.entries() * a_half);
  CHECK(is_absolutely_continuous(a, b));
  CHECK_FALSE(is_absolutely_continuous(diag2(1, 0), diag2(0, 1)));
  CHECK(is_absolutely_continuous(a, PsdMatrix::zero(4)));
}

TEST_CASE("is_singular_pair") {
  CHECK(is_singular_pair(diag2(1, 0), diag2(0, 1)));
  CHECK_FALSE(is_singular_pair(PsdMatrix::identity(2), PsdMatrix::identity(2)));
  // span(1,1) meets span(e1) only at zero
  CHECK(is_singular_pair(psd_validate(mat2(1, 1, 1, 1)), diag2(1, 0)));
}

TEST_CASE("shorted identities on random ensembles") {
  DetRng seeder(43);
  for (int trial = 0; trial < 15; ++trial) {
    EnsembleSpec spec;
    spec.dim = 2 + static_cast<int>(seeder.next_u64() % 15);
    spec.seed = 9000 + trial;
    spec.rank_g = static_cast<int>(seeder.next_u64() % (spec.dim + 1));
    spec.rank_x = static_cast<int>(seeder.next_u64() % (spec.dim + 1));
    const int lo = std::max(0, spec.rank_g + spec.rank_x - spec.dim);
    const int hi = std::min(spec.rank_g, spec.rank_x);
    spec.overlap_dim = lo + (hi > lo ? static_cast<int>(seeder.next_u64() % (hi - lo + 1)) : 0);
    const auto [a, b] = gen_pair(spec);
    const double sx = b.lambda_max();
    const double tol = 1e-8 * (1.0 + sx);

    const PsdMatrix ac = ac_part(a, b);
    // idempotence
    CHECK(diff(ac_part(a, ac).entries(), ac.entries()) < tol);
    // scale equivariance
    for (double lambda : {0.1, 7.0}) {
      CHECK(diff(ac_part(a, b.scaled(lambda)).entries(),
                 lambda * ac.entries()) < tol * lambda + tol);
    }
    // parallel-sum compatibility [A:B]B = [A]B
    CHECK(diff(ac_part(parallel_sum(a, b), b).entries(), ac.entries()) < tol);
    // shift identity [A](B + alpha A) = [A]B + alpha A
    const PsdMatrix shifted =
        PsdMatrix::validated(b.entries() + 3.0 * a.entries(), {}, 4.0);
    CHECK(diff(ac_part(a, shifted).entries(), ac.entries() + 3.0 * a.entries()) <
          1e-8 * (1.0 + sx + 3.0 * a.lambda_max()));
    // maximality: C = A:B is absolutely continuous and below B
    CHECK(loewner_leq(parallel_sum(a, b), ac));
  }
}

TEST_CASE("range invariance of the shorted operator") {
  DetRng rng(47);
  const PsdMatrix a = random_psd(5, 3, rng);
  const PsdMatrix b = random_psd(5, 4, rng);
  const Matrix a_half = sqrt_psd(a).entries();
  const PsdMatrix q = random_psd(5, 5, rng, 0.5, 2.0);
  const PsdMatrix a_equiv = PsdMatrix::clamped(a_half * q.entries() * a_half);
  CHECK(diff(ac_part(a_equiv, b).entries(), ac_part(a, b).entries()) <
        1e-8 * (1.0 + b.lambda_max()));
}
