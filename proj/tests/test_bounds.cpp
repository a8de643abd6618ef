#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "eswitch/bounds.hpp"
#include "eswitch/models.hpp"

using namespace eswitch;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("binary entropies with the 0 ln 0 convention") {
  const EntropyKl r = entropy_kl(0.25, 0.5);
  CHECK(r.entropy == doctest::Approx(0.5623351).epsilon(1e-6));
  CHECK(r.cross == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(r.kl == doctest::Approx(0.1308121).epsilon(1e-5));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_cross_entropy(0.0, 0.0) == 0.0);
  CHECK(binary_cross_entropy(0.5, 0.0) == kInf);
  CHECK(binary_kl(0.3, 0.3) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(binary_entropy(1.5), std::invalid_argument);
}

TEST_CASE("single-mixture bound") {
  CHECK(bound_bayes({0.25, 0.25, 0.25, 0.25}, 2) == doctest::Approx(std::log(4.0)));
  CHECK(bound_bayes({1.0, 0.0}, 1) == kInf);
  CHECK_THROWS_AS(bound_bayes({0.5, 0.5}, 2), std::invalid_argument);
}

TEST_CASE("per-round mixture bound is t times a KL") {
  const double kl = 0.8 * std::log(0.8 / 0.5) + 0.2 * std::log(0.2 / 0.5);
  CHECK(bound_elementwise(7, {0.8, 0.2}, {0.5, 0.5}) ==
        doctest::Approx(7 * kl).epsilon(1e-12));
  CHECK(bound_elementwise(7, {0.8, 0.2}, {1.0, 0.0}) == kInf);
  CHECK(bound_elementwise(0, {0.5, 0.5}, {0.5, 0.5}) == 0.0);
}

TEST_CASE("fixed-share bound") {
  CHECK(bound_fixed_share(2, 5, 2, 0.25) == doctest::Approx(3.6356349).epsilon(1e-6));
  // t = 1 leaves only the block charges
  CHECK(bound_fixed_share(8, 1, 1, 0.7) == doctest::Approx(std::log(8.0)));
  // vacuous guarantees are infinities, not errors
  CHECK(bound_fixed_share(2, 5, 2, 0.0) == kInf);
  CHECK(bound_fixed_share(2, 5, 1, 0.0) == doctest::Approx(std::log(2.0)));
  CHECK(bound_fixed_share(2, 5, 5, 1.0) ==
        doctest::Approx(5 * std::log(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(bound_fixed_share(2, 5, 6, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(bound_fixed_share(2, 5, 0, 0.25), std::invalid_argument);
}

TEST_CASE("tuned-rate toll") {
  CHECK(bound_fs_ml(5, 0.25, 0.25) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(bound_fs_ml(5, 0.25, 0.5) == doctest::Approx(4 * 0.1308121).epsilon(1e-5));
  CHECK(bound_fs_ml(1, 0.9, 0.1) == 0.0);
}

TEST_CASE("slowly decreasing rate bound") {
  CHECK(bound_dsr_slow(2, 5, 2, 1.0) == doctest::Approx(5.1588831).epsilon(1e-6));
  CHECK(bound_dsr_slow(2, 5, 1, 1.0) == doctest::Approx(3.0794415).epsilon(1e-6));
  CHECK_THROWS_AS(bound_dsr_slow(2, 1, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(bound_dsr_slow(2, 5, 2, 0.0), std::invalid_argument);
  // the closed-form minimizer beats its neighbors
  const double cstar = dsr_slow_best_c(3, 50);
  CHECK(cstar == doctest::Approx(2.0 / (1.0 + std::log(49.0))).epsilon(1e-12));
  CHECK(bound_dsr_slow(2, 50, 3, cstar) <= bound_dsr_slow(2, 50, 3, cstar * 1.1));
  CHECK(bound_dsr_slow(2, 50, 3, cstar) <= bound_dsr_slow(2, 50, 3, cstar * 0.9));
}

TEST_CASE("fast decreasing rate bound uses the integer gap pmf") {
  const double expected = 2 * std::log(2.0) + 1.0 - std::log(fat_tail_pmf(1.0));
  CHECK(bound_dsr_fast(2, 2, 1.0, TailPrior::fat(), 1) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(bound_dsr_fast(2, 2, 1.0, TailPrior::fat(), 1) ==
        doctest::Approx(3.8195).epsilon(1e-4));
  // one block never touches tau
  CHECK(bound_dsr_fast(2, 1, 2.0, TailPrior::fat(), 0) ==
        doctest::Approx(std::log(2.0) + 2.0).epsilon(1e-12));
  CHECK_THROWS_AS(bound_dsr_fast(2, 2, 1.0, TailPrior::fat(), 0), std::invalid_argument);
  CHECK_THROWS_AS(bound_dsr_fast(2, 2, 1.0, TailPrior::custom({0.2, 0.5, 0.3}), 1),
                  std::invalid_argument);  // increasing pmf rejected
}

TEST_CASE("the gap-cost relaxation dominates the exact cost") {
  for (int t = 1; t <= 400; ++t) {
    const double exact = -std::log(fat_tail_pmf(static_cast<double>(t)));
    CHECK(fat_tail_cost_relaxation(static_cast<double>(t)) >= exact - 1e-12);
  }
  const double e = std::exp(1.0);
  CHECK(fat_tail_cost_relaxation(10.0) ==
        doctest::Approx(std::log(10.0) + 2 * std::log(std::log(10.0 + e)) + e / 10.0)
            .epsilon(1e-12));
}

TEST_CASE("switch-count estimator bound") {
  CHECK(bound_switching_method(5) ==
        doctest::Approx(std::log(2.0) + 0.5 * std::log(5.0)).epsilon(1e-12));
  CHECK(bound_switching_method(1) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("run-length bound evaluates the pmf at the real average gap") {
  const double expected =
      2 * std::log(2.0) - std::log(0.5) - std::log(0.5 * fat_tail_pmf(9.0));
  CHECK(bound_run_length(2, 2, 9, TailPrior::fat(0.5)) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(bound_run_length(2, 2, 9, TailPrior::fat(0.5)) ==
        doctest::Approx(6.9538123).epsilon(1e-6));
  // average gap 9/2 = 4.5 sits between integers
  CHECK(bound_run_length(2, 3, 9, TailPrior::fat(0.5)) ==
        doctest::Approx(3 * std::log(2.0) - std::log(0.5) -
                        2 * std::log(0.5 * fat_tail_pmf(4.5)))
            .epsilon(1e-12));
  CHECK(bound_run_length(3, 1, 0, TailPrior::fat(0.25)) ==
        doctest::Approx(std::log(3.0) - std::log(0.25)).epsilon(1e-12));
  CHECK_THROWS_AS(bound_run_length(2, 2, 9, TailPrior::fat()), std::invalid_argument);
  CHECK_THROWS_AS(bound_run_length(2, 2, 9, TailPrior::custom({0.6, 0.4}, 0.5)),
                  std::invalid_argument);
}

TEST_CASE("kernel-plus-interpolator bound sums jump costs from expert zero") {
  const DriftKernel kappa = DriftKernel::geometric(0.5);
  const double jumps =
      -std::log(kappa.mass(0)) - std::log(kappa.mass(2)) - std::log(kappa.mass(-1));
  CHECK(bound_kernel_interp(1.5, kappa, {0, 2, 1}) ==
        doctest::Approx(1.5 + jumps).epsilon(1e-12));
  // a jump the kernel cannot make voids the guarantee
  const DriftKernel narrow = DriftKernel::custom({0, 1}, {0.5, 0.5});
  CHECK(bound_kernel_interp(0.0, narrow, {0, 2}) == kInf);
}

TEST_CASE("parameter-drift bound and its minimizing rate") {
  const double root = std::sqrt(2.0) - 1.0;
  const DriftBound r = bound_parameter_drift(4, 4, root);
  CHECK(r.bound == doctest::Approx(8 * std::log(std::sqrt(2.0) + 1.0)).epsilon(1e-12));
  CHECK(r.bound == doctest::Approx(7.0509889).epsilon(1e-6));
  CHECK(r.alpha_star == doctest::Approx(root).epsilon(1e-12));
  // the reported minimizer beats a fine grid
  for (double a = 0.05; a < 0.96; a += 0.05)
    CHECK(r.bound <= bound_parameter_drift(4, 4, a).bound + 1e-12);
  // no drift: alpha* degenerates and only the per-round charge remains
  const DriftBound still = bound_parameter_drift(6, 0, 0.3);
  CHECK(still.alpha_star == 0.0);
  CHECK(still.bound == doctest::Approx(-6 * std::log(0.7 / 1.3)).epsilon(1e-12));
  CHECK_THROWS_AS(bound_parameter_drift(4, 4, 0.0), std::invalid_argument);
}

TEST_CASE("tuned-kernel toll matches the series KL between kernels") {
  const double ahat = 0.3, alpha = 0.6;
  const DriftKernel ka = DriftKernel::geometric(ahat);
  const DriftKernel kb = DriftKernel::geometric(alpha);
  double kl = ka.mass(0) * std::log(ka.mass(0) / kb.mass(0));
  for (int d = 1; d <= 300; ++d)
    kl += 2 * ka.mass(d) * std::log(ka.mass(d) / kb.mass(d));
  CHECK(bound_pd_ml(7, ahat, alpha) == doctest::Approx(7 * kl).epsilon(1e-10));
  CHECK(bound_pd_ml(7, 0.4, 0.4) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("decreasing-drift bound") {
  CHECK(bound_decreasing_drift(3, 0) == doctest::Approx(2 * std::log(4.0)).epsilon(1e-12));
  CHECK(bound_decreasing_drift(3, 0) == doctest::Approx(2.7725887).epsilon(1e-6));
  CHECK(bound_decreasing_drift(10, 3) == doctest::Approx(5 * std::log(11.0)).epsilon(1e-12));
}

TEST_CASE("empirical regret against a fixed reference") {
  const auto data = LikelihoodMatrix::from_rows({{0.8, 0.2}, {0.8, 0.2}});
  const auto ref = ReferenceSequence::from_experts({0, 0});
  CHECK(empirical_regret(bayes_mixture(2).graph(), data, ref) ==
        doctest::Approx(std::log(0.64 / 0.34)).epsilon(1e-12));
  CHECK(empirical_regret(fixed_share(2, 0.5).graph(), data, ref) ==
        doctest::Approx(std::log(0.64 / 0.295)).epsilon(1e-12));
  // a reference that hits a zero likelihood is a degenerate comparator
  const auto zero = LikelihoodMatrix::from_rows({{0.8, 0.0}, {0.8, 0.2}});
  CHECK(empirical_regret(bayes_mixture(2).graph(), zero,
                         ReferenceSequence::from_experts({1, 1})) == -kInf);
}

TEST_CASE("best reference matches brute force over all segmentations") {
  const auto data = LikelihoodMatrix::from_rows({{0.6, 0.3, 0.1},
                                                 {0.2, 0.7, 0.1},
                                                 {0.25, 0.7, 0.05},
                                                 {0.1, 0.2, 0.7},
                                                 {0.5, 0.3, 0.2}});
  for (int mmax = 1; mmax <= 5; ++mmax) {
    // enumerate all 3^5 expert sequences with at most mmax blocks
    double best = kInf;
    for (int code = 0; code < 243; ++code) {
      std::vector<int> seq(5);
      int c = code;
      for (int i = 0; i < 5; ++i, c /= 3) seq[i] = c % 3;
      const auto ref = ReferenceSequence::from_experts(seq);
      if (ref.m > mmax) continue;
      best = std::min(best, ref.codelength(data));
    }
    const auto picked = best_reference(data, mmax);
    CHECK(picked.m <= mmax);
    CHECK(picked.codelength(data) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("best reference tie-breaking prefers fewer blocks, then low experts") {
  const auto flat = LikelihoodMatrix::from_rows(
      std::vector<std::vector<double>>(4, {0.5, 0.5}));
  const auto ref = best_reference(flat, 3);
  CHECK(ref.m == 1);
  CHECK(ref.experts == std::vector<int>(4, 0));
}
