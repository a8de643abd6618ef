#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "eswitch/infer.hpp"
#include "eswitch/models.hpp"
#include "eswitch/oracle.hpp"

using namespace eswitch;

TEST_CASE("smoothed marginals revise early rounds after a switch") {
  const auto data = LikelihoodMatrix::from_rows({{0.9, 0.1}, {0.1, 0.9}});
  const MarginalGrid g = marginals(fixed_share(2, 0.5).graph(), data);
  CHECK(g.log_evidence == doctest::Approx(-std::log(0.17)).epsilon(1e-12));
  CHECK(g.rows[0][0] == doctest::Approx(27.0 / 34.0).epsilon(1e-12));
  CHECK(g.rows[1][0] == doctest::Approx(7.0 / 34.0).epsilon(1e-12));
  CHECK(g.retained_prior_mass == doctest::Approx(1.0).epsilon(1e-12));
  for (double cut : g.cut_log)
    CHECK(cut == doctest::Approx(-g.log_evidence).epsilon(1e-10));
}

TEST_CASE("marginals match the exhaustive path posterior") {
  const auto data = LikelihoodMatrix::from_rows(
      {{0.7, 0.3}, {0.2, 0.8}, {0.6, 0.4}, {0.5, 0.5}});
  for (const Model& m :
       {switching_method(2), run_length_model(2, TailPrior::fat(0.3)),
        kernel_drift(2, DriftKernel::geometric(0.4)), fixed_share(2, 0.2)}) {
    INFO(m.descriptor());
    const MarginalGrid g = marginals(m.graph(), data);
    const OracleRun o = oracle_run(m.graph(), data, 1 << 20);
    for (int i = 0; i < data.t; ++i)
      for (int e = 0; e < data.k; ++e)
        CHECK(g.rows[i][e] == doctest::Approx(o.marginals[i][e]).epsilon(1e-10));
  }
}

TEST_CASE("marginal rows stay normalized under kernel truncation") {
  const auto data = LikelihoodMatrix::from_rows(
      {{0.7, 0.2, 0.1}, {0.1, 0.8, 0.1}, {0.3, 0.3, 0.4}});
  const MarginalGrid g = marginals(kernel_drift(3, DriftKernel::geometric(0.5)).graph(), data);
  for (const auto& row : g.rows) {
    double s = 0.0;
    for (double v : row) s += v;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(g.retained_prior_mass < 1.0);
  CHECK(g.retained_prior_mass > 0.0);
  // the cut identity survives the leaked mass
  for (double cut : g.cut_log)
    CHECK(cut == doctest::Approx(-g.log_evidence).epsilon(1e-10));
}

TEST_CASE("viterbi finds the switching path and its joint score") {
  const auto data = LikelihoodMatrix::from_rows({{0.9, 0.1}, {0.1, 0.9}});
  const StatePath p = viterbi(fixed_share(2, 0.5).graph(), data);
  CHECK(p.experts == std::vector<int>{0, 1});
  // 0.5 (start) * 0.9 * 0.5 (reroute) * 0.5 (land on expert 1) * 0.9
  CHECK(p.log_joint == doctest::Approx(std::log(0.10125)).epsilon(1e-12));
  // the point trail passes through the funnel's silent state
  bool silent_seen = false;
  for (const auto& pt : p.points) silent_seen = silent_seen || pt.node == 2;
  CHECK(silent_seen);
}

TEST_CASE("viterbi on a mixture is the best single expert") {
  const auto data = LikelihoodMatrix::from_rows({{0.8, 0.2}, {0.8, 0.2}});
  const StatePath p = viterbi(bayes_mixture(2).graph(), data);
  CHECK(p.experts == std::vector<int>{0, 0});
  CHECK(p.log_joint == doctest::Approx(std::log(0.32)).epsilon(1e-12));
  REQUIRE(p.points.size() == 2);
  CHECK(p.points[0] == PathPoint{0, 1});
  CHECK(p.points[1] == PathPoint{1, 2});
}

TEST_CASE("viterbi agrees with the oracle's best path when unique") {
  const auto data = LikelihoodMatrix::from_rows(
      {{0.7, 0.3}, {0.2, 0.8}, {0.6, 0.4}, {0.45, 0.55}});
  for (const Model& m :
       {fixed_share(2, 0.3), switching_method(2),
        kernel_drift(2, DriftKernel::geometric(0.4)),
        run_length_model(2, TailPrior::fat(0.2))}) {
    INFO(m.descriptor());
    const OracleRun o = oracle_run(m.graph(), data, 1 << 20);
    REQUIRE(o.best_unique);
    const StatePath p = viterbi(m.graph(), data);
    CHECK(p.log_joint == doctest::Approx(std::log(o.best_score)).epsilon(1e-10));
    CHECK(p.points == o.best_path);
  }
}

TEST_CASE("viterbi ties resolve to the smallest state ids") {
  const auto flat = LikelihoodMatrix::from_rows(
      std::vector<std::vector<double>>(3, {0.5, 0.5}));
  const StatePath p = viterbi(bayes_mixture(2).graph(), flat);
  CHECK(p.experts == std::vector<int>{0, 0, 0});
}

TEST_CASE("an impossible dataset yields an empty path at minus infinity") {
  const auto data = LikelihoodMatrix::from_rows({{0.8, 0.2}, {0.0, 0.0}});
  const StatePath p = viterbi(bayes_mixture(2).graph(), data);
  CHECK(p.points.empty());
  CHECK(p.experts.empty());
  CHECK(p.log_joint == -std::numeric_limits<double>::infinity());
}

TEST_CASE("empty data yields empty results") {
  const LikelihoodMatrix empty = LikelihoodMatrix::zeros(0, 2);
  const MarginalGrid g = marginals(bayes_mixture(2).graph(), empty);
  CHECK(g.rows.empty());
  CHECK(g.log_evidence == 0.0);
  const StatePath p = viterbi(bayes_mixture(2).graph(), empty);
  CHECK(p.points.empty());
  CHECK(p.log_joint == 0.0);
}
