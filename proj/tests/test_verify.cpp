#include <doctest.h>

#include "shortops/tau_engine.hpp"
#include "shortops/verify.hpp"

using namespace shortops;

TEST_CASE("gen_pair hits ranks and overlap exactly") {
  {
    EnsembleSpec spec;
    spec.dim = 4;
    spec.rank_g = 2;
    spec.rank_x = 2;
    spec.overlap_dim = 0;
    spec.seed = 3;
    const auto [g, x] = gen_pair(spec);
    CHECK(g.rank() == 2);
    CHECK(x.rank() == 2);
    CHECK(parallel_sum(x, g).rank() == 0);
  }
  {
    EnsembleSpec spec;
    spec.dim = 4;
    spec.rank_g = 2;
    spec.rank_x = 3;
    spec.overlap_dim = 1;
    spec.seed = 3;
    const auto [g, x] = gen_pair(spec);
    CHECK(g.rank() == 2);
    CHECK(x.rank() == 3);
    CHECK(parallel_sum(x, g).rank() == 1);
    CHECK(intersect(range_basis(g), range_basis(x)).dim() == 1);
  }
}

TEST_CASE("gen_pair determinism") {
  EnsembleSpec spec;
  spec.dim = 6;
  spec.rank_g = 3;
  spec.rank_x = 4;
  spec.overlap_dim = 2;
  spec.seed = 99;
  const auto [g1, x1] = gen_pair(spec);
  const auto [g2, x2] = gen_pair(spec);
  CHECK(g1.entries() == g2.entries());
  CHECK(x1.entries() == x2.entries());
  spec.seed = 100;
  const auto [g3, x3] = gen_pair(spec);
  CHECK(max_abs(g1.entries() - g3.entries()) > 1e-3);
}

TEST_CASE("gen_pair commuting flag") {
  EnsembleSpec spec;
  spec.dim = 5;
  spec.rank_g = 3;
  spec.rank_x = 3;
  spec.overlap_dim = 2;
  spec.seed = 17;
  spec.commuting = true;
  const auto [g, x] = gen_pair(spec);
  CHECK(max_abs(g.entries() * x.entries() - x.entries() * g.entries()) < 1e-13);
  spec.commuting = false;
  const auto [gn, xn] = gen_pair(spec);
  CHECK(max_abs(gn.entries() * xn.entries() - xn.entries() * gn.entries()) >
        1e-4);
}

TEST_CASE("gen_pair infeasible specs") {
  EnsembleSpec spec;
  spec.dim = 4;
  spec.rank_g = 3;
  spec.rank_x = 3;
  spec.overlap_dim = 1;  // 3 + 3 - 1 > 4
  CHECK_THROWS_AS(gen_pair(spec), InfeasibleSpecError);
  spec.overlap_dim = 4;  // exceeds min rank
  CHECK_THROWS_AS(gen_pair(spec), InfeasibleSpecError);
  spec.rank_g = 5;  // exceeds dim
  spec.overlap_dim = 1;
  CHECK_THROWS_AS(gen_pair(spec), InfeasibleSpecError);
}

TEST_CASE("battery passes on representative pairs") {
  EnsembleSpec spec;
  spec.dim = 6;
  spec.rank_g = 3;
  spec.rank_x = 4;
  spec.overlap_dim = 2;
  spec.seed = 12345;
  const auto [g, x] = gen_pair(spec);
  const PropertyReport rep = run_battery(g, x);
  CHECK(rep.all_passed());
  CHECK(rep.skip_count() >= 3);  // at minimum the degenerate trio
  // every named identity appears exactly once
  for (const auto& c : rep.checks) {
    int count = 0;
    for (const auto& d : rep.checks) count += d.name == c.name;
    CHECK(count == 1);
  }
  // skipped entries carry a reason
  for (const auto& c : rep.checks) {
    if (c.status == CheckStatus::Skipped) CHECK(!c.note.empty());
  }
}

TEST_CASE("battery determinism") {
  EnsembleSpec spec;
  spec.dim = 5;
  spec.rank_g = 2;
  spec.rank_x = 3;
  spec.overlap_dim = 1;
  spec.seed = 777;
  const auto [g, x] = gen_pair(spec);
  const PropertyReport a = run_battery(g, x);
  const PropertyReport b = run_battery(g, x);
  REQUIRE(a.checks.size() == b.checks.size());
  CHECK(a.pair_digest == b.pair_digest);
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].name == b.checks[i].name);
    CHECK(a.checks[i].status == b.checks[i].status);
    // residuals are pure functions of the inputs, bitwise
    const bool same = (a.checks[i].residual == b.checks[i].residual) ||
                      (std::isnan(a.checks[i].residual) &&
                       std::isnan(b.checks[i].residual));
    CHECK(same);
  }
}

TEST_CASE("battery handles G = 0 (every X is a fixed point)") {
  DetRng rng(71);
  const PsdMatrix x = random_psd(4, 3, rng);
  const PropertyReport rep = run_battery(PsdMatrix::zero(4), x);
  CHECK(rep.all_passed());
  const PropertyCheck* fixed = rep.find("tau_fixed_point_iff");
  REQUIRE(fixed != nullptr);
  CHECK(fixed->note == "X is a fixed point");
}

TEST_CASE("battery handles a disjoint-range pair (fixed-point branch)") {
  EnsembleSpec spec;
  spec.dim = 5;
  spec.rank_g = 2;
  spec.rank_x = 2;
  spec.overlap_dim = 0;
  spec.seed = 424242;
  const auto [g, x] = gen_pair(spec);
  const PropertyReport rep = run_battery(g, x);
  CHECK(rep.all_passed());
  const PropertyCheck* fixed = rep.find("tau_fixed_point_iff");
  REQUIRE(fixed != nullptr);
  CHECK(fixed->note == "X is a fixed point");
}

TEST_CASE("battery handles definite G (tau = 0 branch)") {
  DetRng rng(73);
  const PsdMatrix g = random_psd(4, 4, rng, 0.5, 1.5);
  const PsdMatrix x = random_psd(4, 2, rng);
  const PropertyReport rep = run_battery(g, x);
  CHECK(rep.all_passed());
  const PropertyCheck* definite = rep.find("tau_definite_g");
  REQUIRE(definite != nullptr);
  CHECK(definite->status == CheckStatus::Pass);
}

TEST_CASE("battery reports degenerate items as skipped with reasons") {
  EnsembleSpec spec;
  spec.seed = 31337;
  const auto [g, x] = gen_pair(spec);
  const PropertyReport rep = run_battery(g, x);
  for (const char* name :
       {"tau_kernel_nontrivial", "tau_kernel_equivalences", "tau_schatten"}) {
    const PropertyCheck* c = rep.find(name);
    REQUIRE(c != nullptr);
    CHECK(c->status == CheckStatus::Skipped);
    CHECK(!c->note.empty());
  }
}

TEST_CASE("battery reports rather than aborts on scale-ratio conflicts") {
  // g2/x2 = 3e-13 sits between the rank cutoff lens (1e-6 counts as nonzero
  // against lambda_max 4e6) and the eigenvalue-1 cluster lens (1 - 3e-13 is
  // inside the 1e-8 cluster), so the closed-M cross-check rejects the pair.
  Matrix gm = Matrix::Zero(2, 2), xm = Matrix::Zero(2, 2);
  gm(0, 0) = 4e6;
  gm(1, 1) = 1e-6;
  xm(0, 0) = 2e6;
  xm(1, 1) = 3e6;
  const PropertyReport rep = run_battery(psd_validate(gm), psd_validate(xm));
  CHECK(rep.fail_count() > 0);
  const PropertyCheck* agree = rep.find("tau_route_agreement");
  REQUIRE(agree != nullptr);
  CHECK(agree->status == CheckStatus::Fail);
  CHECK(agree->note.find("eigenvalue-1 cluster") != std::string::npos);
  CHECK(rep.find("battery_aborted") == nullptr);  // ran to completion
}

TEST_CASE("loosened rank cutoff produces failures") {
  EnsembleSpec spec;
  spec.dim = 6;
  spec.rank_g = 3;
  spec.rank_x = 4;
  spec.overlap_dim = 2;
  spec.seed = 2024;
  const auto [g, x] = gen_pair(spec);
  TolerancePolicy loose;
  loose.rank_rel = 0.5;
  const PropertyReport rep = run_battery(g, x, loose);
  CHECK(rep.fail_count() > 0);
}

TEST_CASE("DetRng reproducibility") {
  DetRng a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  DetRng c(5), d(6);
  bool any_diff = false;
  for (int i = 0; i < 10; ++i) any_diff = any_diff || (c.gaussian() != d.gaussian());
  CHECK(any_diff);
}

TEST_CASE("random_orthogonal frames are orthonormal") {
  DetRng rng(79);
  for (int n : {1, 2, 7, 33}) {
    const Matrix q = random_orthogonal(n, rng);
    CHECK(max_abs(q.transpose() * q - Matrix::Identity(n, n)) < 1e-12);
  }
}
