#include <doctest.h>

#include <cmath>
#include <vector>

#include "eswitch/forward.hpp"
#include "eswitch/models.hpp"

using namespace eswitch;

namespace {

LikelihoodMatrix repeat_row(std::vector<double> row, int t) {
  std::vector<std::vector<double>> rows(t, row);
  return LikelihoodMatrix::from_rows(rows);
}

const LikelihoodMatrix kTwo = repeat_row({0.8, 0.2}, 2);

}  // namespace

TEST_CASE("uniform mixture evidence on two identical rounds") {
  // 0.5 * 0.8^2 + 0.5 * 0.2^2 = 0.34
  const RunResult r = run(bayes_mixture(2).graph(), kTwo);
  CHECK(r.log_evidence == doctest::Approx(-std::log(0.34)).epsilon(1e-12));
}

TEST_CASE("per-round reset evidence is the product of round mixtures") {
  const RunResult r = run(elementwise_mixture(2).graph(), kTwo);
  CHECK(r.log_evidence == doctest::Approx(-std::log(0.25)).epsilon(1e-12));
}

TEST_CASE("switching predictions mix posterior with the uniform restart") {
  const Model fs = fixed_share(2, 0.5);
  const RunResult r = run(fs.graph(), kTwo, true);
  REQUIRE(r.predictions.size() == 2);
  CHECK(r.predictions[0][0] == doctest::Approx(0.5));
  // posterior (0.8, 0.2), mixed: 0.5*0.8 + 0.5*0.5 = 0.65
  CHECK(r.predictions[1][0] == doctest::Approx(0.65).epsilon(1e-12));
  CHECK(r.predictions[1][1] == doctest::Approx(0.35).epsilon(1e-12));
  CHECK(r.log_evidence == doctest::Approx(-std::log(0.295)).epsilon(1e-12));
}

TEST_CASE("session exposes normalized weights and cached percolation") {
  const Model fs = fixed_share(2, 0.5);
  ForwardSession s(fs.graph());
  const auto pred = s.predict();
  CHECK(pred[0] == doctest::Approx(0.5));
  s.observe(kTwo.row(0));
  CHECK(s.round() == 1);
  CHECK(s.weights()[0] == doctest::Approx(0.8));
  CHECK(s.predict()[0] == doctest::Approx(0.65));
  s.observe(kTwo.row(1));
  CHECK(s.log_evidence() == doctest::Approx(-std::log(0.295)).epsilon(1e-12));
}

TEST_CASE("an all-zero likelihood row collapses the evidence") {
  const auto data = LikelihoodMatrix::from_rows({{0.8, 0.2}, {0.0, 0.0}});
  CHECK_THROWS_AS(run(bayes_mixture(2).graph(), data), EvidenceCollapse);
  try {
    run(bayes_mixture(2).graph(), data);
  } catch (const EvidenceCollapse& e) {
    CHECK(e.round() == 2);
  }
}

TEST_CASE("a partial zero is survivable when some expert stays positive") {
  const auto data = LikelihoodMatrix::from_rows({{0.8, 0.0}, {0.5, 0.5}});
  const RunResult r = run(bayes_mixture(2).graph(), data);
  CHECK(r.log_evidence == doctest::Approx(-std::log(0.5 * 0.8 * 0.5)).epsilon(1e-12));
}

TEST_CASE("truncated drift predictions are sub-stochastic") {
  const Model pd = kernel_drift(2, DriftKernel::geometric(0.5));
  CHECK(pd.graph().sub_stochastic());
  ForwardSession s(pd.graph());
  double total = 0.0;
  for (double p : s.predict()) total += p;
  CHECK(total == doctest::Approx(0.5).epsilon(1e-12));  // 1/3 + 1/6
  // portfolio() renormalizes the same mass to one
  double ptotal = 0.0;
  for (double p : ForwardSession(pd.graph(), Mode::invest).portfolio()) ptotal += p;
  CHECK(ptotal == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reinvestment wealth on return factors") {
  const auto returns = repeat_row({1.2, 0.8}, 2);
  const InvestResult r = invest(bayes_mixture(2).graph(), returns);
  CHECK(r.wealth == doctest::Approx(1.04).epsilon(1e-12));
  CHECK(r.log_wealth == doctest::Approx(std::log(1.04)).epsilon(1e-12));
  CHECK_FALSE(r.ruined);
  // per-round reset repurchases the round-1 mixture: (0.5*1.2+0.5*0.8)^2 = 1
  const InvestResult em = invest(elementwise_mixture(2).graph(), returns);
  CHECK(em.wealth == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("all-ones returns leave wealth exactly one for any model") {
  const auto ones = repeat_row({1.0, 1.0}, 4);
  for (const Model& m : {bayes_mixture(2), fixed_share(2, 0.3),
                         kernel_drift(2, DriftKernel::geometric(0.5)),
                         switching_method(2)}) {
    const InvestResult r = m.fused ? invest(*m.fused, ones) : invest(m.graph(), ones);
    CHECK(r.wealth == 1.0);  // exact: renormalized portfolio returns exactly 1
  }
}

TEST_CASE("ruin is flagged when the portfolio return hits zero") {
  const auto returns = LikelihoodMatrix::from_rows({{0.0, 0.0}});
  const InvestResult r = invest(bayes_mixture(2).graph(), returns);
  CHECK(r.ruined);
  CHECK(r.wealth == 0.0);
}

TEST_CASE("fused and graph sessions agree step by step") {
  const Model fs = fixed_share(3, 0.25);
  const auto data = LikelihoodMatrix::from_rows(
      {{0.7, 0.2, 0.1}, {0.1, 0.8, 0.1}, {0.3, 0.3, 0.4}});
  ForwardSession graph(fs.graph());
  ForwardSession fused(*fs.fused);
  for (int i = 0; i < data.t; ++i) {
    const auto pg = graph.predict();
    const auto pf = fused.predict();
    for (int e = 0; e < data.k; ++e) CHECK(pg[e] == doctest::Approx(pf[e]).epsilon(1e-12));
    graph.observe(data.row(i));
    fused.observe(data.row(i));
  }
  CHECK(graph.log_evidence() == doctest::Approx(fused.log_evidence()).epsilon(1e-12));
}

TEST_CASE("relaxation accounting matches the edge counts") {
  const Model fs = fixed_share(4, 0.3);
  const auto data = repeat_row({0.4, 0.3, 0.2, 0.1}, 6);
  const RunResult r = run(fs.graph(), data);
  // initial block k edges, then 3k per boundary
  CHECK(r.relaxations == 4 + 3 * 4 * 5);
}
