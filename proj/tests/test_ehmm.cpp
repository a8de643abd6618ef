#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "eswitch/ehmm.hpp"

using namespace eswitch;

namespace {

// Two experts, one silent funnel per round: sources split (1-a) to the
// identity target and a to the funnel, the funnel spreads uniformly.
struct FunnelSpec : EhmmSpec {
  double a;
  explicit FunnelSpec(double alpha) : a(alpha) {}
  int expert_count() const override { return 2; }
  void layer(int, Layer& out) const override { out.label = {0, 1}; }
  void initial(TransitionBlock& out) const override {
    out.reset(1, 0, 2);
    out.add(0, 1, 0.5);
    out.add(0, 2, 0.5);
  }
  void transition(int, TransitionBlock& out) const override {
    out.reset(2, 1, 2);
    out.add(0, 2, a);
    out.add(1, 2, a);
    out.add(0, 3, 1.0 - a);
    out.add(2, 3, 0.5);
    out.add(1, 4, 1.0 - a);
    out.add(2, 4, 0.5);
  }
};

}  // namespace

TEST_CASE("transition block layout and zero-edge dropping") {
  TransitionBlock b;
  b.reset(2, 1, 3);
  CHECK(b.target_base() == 3);
  CHECK(b.node_count() == 6);
  b.add(0, 3, 0.25);
  b.add(1, 2, 0.0);  // dropped
  b.add(2, 4, 1.0);
  CHECK(b.edges.size() == 2);
  b.reset(1, 0, 1);
  CHECK(b.edges.empty());
}

TEST_CASE("percolate routes mass through silent states exactly") {
  FunnelSpec spec(0.4);
  TransitionBlock b;
  spec.transition(1, b);
  std::vector<double> in{0.9, 0.1}, out, scratch;
  const int64_t relaxed = percolate(b, in, out, scratch);
  CHECK(relaxed == static_cast<int64_t>(b.edges.size()));
  REQUIRE(out.size() == 2);
  // funnel mass = 0.4, split half/half on top of the identity edges
  CHECK(out[0] == doctest::Approx(0.9 * 0.6 + 0.4 * 0.5).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx(0.1 * 0.6 + 0.4 * 0.5).epsilon(1e-15));
  CHECK(out[0] + out[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("percolate accepts evaluation order that is not source-sorted") {
  // Edges of two separate chains interleaved: 0 -> 2 -> 4 and 1 -> 3 -> 5.
  TransitionBlock b;
  b.reset(2, 2, 2);
  b.add(0, 2, 1.0);
  b.add(1, 3, 1.0);
  b.add(2, 4, 1.0);
  b.add(3, 5, 1.0);
  std::vector<double> in{0.3, 0.7}, out, scratch;
  percolate(b, in, out, scratch);
  CHECK(out[0] == doctest::Approx(0.3));
  CHECK(out[1] == doctest::Approx(0.7));
}

TEST_CASE("percolate_back is the transpose of percolate") {
  FunnelSpec spec(0.35);
  TransitionBlock b;
  spec.transition(3, b);
  std::vector<double> u{0.2, 0.8}, v{0.6, 0.4}, fwd, bwd, scratch;
  percolate(b, u, fwd, scratch);
  percolate_back(b, v, bwd, scratch);
  // <M u, v> == <u, M^T v>
  const double lhs = fwd[0] * v[0] + fwd[1] * v[1];
  const double rhs = u[0] * bwd[0] + u[1] * bwd[1];
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-15));
}

TEST_CASE("percolate_max tracks the best path and breaks ties to smaller ids") {
  TransitionBlock b;
  b.reset(2, 0, 1);
  b.add(0, 2, 0.5);
  b.add(1, 2, 0.5);
  std::vector<double> in{std::log(0.4), std::log(0.4)}, out, scratch;
  std::vector<NodeId> back;
  percolate_max(b, in, out, scratch, back);
  CHECK(out[0] == doctest::Approx(std::log(0.2)));
  CHECK(back[2] == 0);  // exact tie: keep the smaller predecessor

  // Through a silent state the products compose.
  TransitionBlock c;
  c.reset(1, 1, 1);
  c.add(0, 1, 0.3);
  c.add(0, 2, 0.1);
  c.add(1, 2, 0.9);
  std::vector<double> in2{0.0};
  percolate_max(c, in2, out, scratch, back);
  CHECK(out[0] == doctest::Approx(std::log(0.27)));
  CHECK(back[2] == 1);
  CHECK(back[1] == 0);
}

TEST_CASE("percolate_max flags unreachable targets with -inf") {
  TransitionBlock b;
  b.reset(1, 0, 2);
  b.add(0, 1, 1.0);
  std::vector<double> in{0.0}, out, scratch;
  std::vector<NodeId> back;
  percolate_max(b, in, out, scratch, back);
  CHECK(out[0] == doctest::Approx(0.0));
  CHECK(out[1] == -std::numeric_limits<double>::infinity());
  CHECK(back[2] == -1);
}

TEST_CASE("validate_spec passes a well-formed spec") {
  FunnelSpec spec(0.25);
  CHECK(validate_spec(spec, 20).empty());
}

TEST_CASE("validate_spec catches bad outgoing sums") {
  struct Bad : FunnelSpec {
    Bad() : FunnelSpec(0.3) {}
    void transition(int, TransitionBlock& out) const override {
      out.reset(2, 0, 2);
      out.add(0, 2, 0.9);  // leaks 0.1
      out.add(1, 3, 1.0);
    }
  } bad;
  const auto v = validate_spec(bad, 3);
  REQUIRE(!v.empty());
  CHECK(v[0].kind == "outgoing-sum");
  CHECK(v[0].node == 0);
  CHECK(format_violations(v).find("mass") != std::string::npos);
}

TEST_CASE("validate_spec catches evaluation-order violations") {
  struct Bad : FunnelSpec {
    Bad() : FunnelSpec(0.3) {}
    void transition(int, TransitionBlock& out) const override {
      out.reset(2, 1, 2);
      out.add(2, 3, 0.5);  // silent fires before receiving its mass
      out.add(2, 4, 0.5);
      out.add(0, 2, 1.0);
      out.add(1, 2, 1.0);
    }
  } bad;
  const auto v = validate_spec(bad, 2);
  REQUIRE(!v.empty());
  bool found = false;
  for (const auto& violation : v) found = found || violation.kind == "edge-order";
  CHECK(found);
}

TEST_CASE("validate_spec catches self-loops as order violations") {
  struct Bad : FunnelSpec {
    Bad() : FunnelSpec(0.3) {}
    void transition(int, TransitionBlock& out) const override {
      out.reset(2, 1, 2);
      out.add(0, 2, 1.0);
      out.add(1, 2, 1.0);
      out.add(2, 2, 0.5);  // silent self-loop
      out.add(2, 3, 0.25);
      out.add(2, 4, 0.25);
    }
  } bad;
  const auto v = validate_spec(bad, 2);
  REQUIRE(!v.empty());
  CHECK(v[0].kind == "edge-order");
}

TEST_CASE("validate_spec catches out-of-range endpoints and labels") {
  struct Bad : FunnelSpec {
    Bad() : FunnelSpec(0.3) {}
    void transition(int, TransitionBlock& out) const override {
      out.reset(2, 0, 2);
      out.add(0, 7, 1.0);
      out.add(1, 3, 1.0);
    }
  } bad;
  auto v = validate_spec(bad, 2);
  REQUIRE(!v.empty());
  CHECK(v[0].kind == "edge-range");

  struct BadLabel : FunnelSpec {
    BadLabel() : FunnelSpec(0.3) {}
    void layer(int, Layer& out) const override { out.label = {0, 9}; }
  } bad_label;
  v = validate_spec(bad_label, 2);
  REQUIRE(!v.empty());
  CHECK(v[0].kind == "label-range");
}

TEST_CASE("validate_spec catches layer/block size mismatches") {
  struct Bad : FunnelSpec {
    Bad() : FunnelSpec(0.3) {}
    void layer(int round, Layer& out) const override {
      out.label.assign(round == 2 ? 3 : 2, 0);
    }
  } bad;
  const auto v = validate_spec(bad, 3);
  REQUIRE(!v.empty());
  bool found = false;
  for (const auto& violation : v) found = found || violation.kind == "layer-mismatch";
  CHECK(found);
}
