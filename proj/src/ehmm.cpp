#include "eswitch/ehmm.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace eswitch {

int64_t percolate(const TransitionBlock& block, const std::vector<double>& source,
                  std::vector<double>& target, std::vector<double>& scratch) {
  scratch.assign(block.node_count(), 0.0);
  for (int i = 0; i < block.n_from; ++i) scratch[i] = source[i];
  for (const Edge& e : block.edges) scratch[e.to] += scratch[e.from] * e.prob;
  target.assign(scratch.begin() + block.target_base(), scratch.end());
  return static_cast<int64_t>(block.edges.size());
}

int64_t percolate_back(const TransitionBlock& block, const std::vector<double>& target,
                       std::vector<double>& source, std::vector<double>& scratch) {
  scratch.assign(block.node_count(), 0.0);
  const int base = block.target_base();
  for (int j = 0; j < block.n_to; ++j) scratch[base + j] = target[j];
  for (auto it = block.edges.rbegin(); it != block.edges.rend(); ++it)
    scratch[it->from] += it->prob * scratch[it->to];
  source.assign(scratch.begin(), scratch.begin() + block.n_from);
  return static_cast<int64_t>(block.edges.size());
}

int64_t percolate_max(const TransitionBlock& block, const std::vector<double>& log_source,
                      std::vector<double>& log_target, std::vector<double>& scratch,
                      std::vector<NodeId>& backptr) {
  const double ninf = -std::numeric_limits<double>::infinity();
  scratch.assign(block.node_count(), ninf);
  backptr.assign(block.node_count(), -1);
  for (int i = 0; i < block.n_from; ++i) scratch[i] = log_source[i];
  for (const Edge& e : block.edges) {
    if (scratch[e.from] == ninf || e.prob <= 0.0) continue;
    const double cand = scratch[e.from] + std::log(e.prob);
    if (cand > scratch[e.to] ||
        (cand == scratch[e.to] && e.from < backptr[e.to])) {  // ties: smallest id
      scratch[e.to] = cand;
      backptr[e.to] = e.from;
    }
  }
  log_target.assign(scratch.begin() + block.target_base(), scratch.end());
  return static_cast<int64_t>(block.edges.size());
}

namespace {

constexpr double kSumTol = 1e-12;

void check_block(const EhmmSpec& spec, const TransitionBlock& block, int round,
                 int expect_from, int expect_to, std::vector<Violation>& out) {
  if (block.n_from != expect_from) {
    std::ostringstream os;
    os << "block has " << block.n_from << " sources, expected " << expect_from;
    out.push_back({round, -1, "layer-mismatch", os.str()});
  }
  if (block.n_to != expect_to) {
    std::ostringstream os;
    os << "block has " << block.n_to << " targets, expected " << expect_to;
    out.push_back({round, -1, "layer-mismatch", os.str()});
  }

  const int base = block.target_base();
  const int total = block.node_count();
  std::vector<double> outgoing(total, 0.0);
  std::vector<char> has_incoming(total, 0), opened(total, 0);
  for (const Edge& e : block.edges) {
    if (e.from < 0 || e.from >= base || e.to < block.n_from || e.to >= total) {
      std::ostringstream os;
      os << "edge " << e.from << "->" << e.to << " leaves the block's node range";
      out.push_back({round, e.from, "edge-range", os.str()});
      continue;
    }
    // Single-sweep evaluation order: once a node has forwarded mass, nothing
    // may feed it.  This also keeps the silent subgraph acyclic.
    if (e.to == e.from || opened[e.to]) {
      std::ostringstream os;
      os << "edge " << e.from << "->" << e.to
         << " feeds a state whose outgoing edges were already listed";
      out.push_back({round, e.from, "edge-order", os.str()});
    }
    opened[e.from] = 1;
    if (!(e.prob >= 0.0) || !std::isfinite(e.prob)) {
      std::ostringstream os;
      os << "edge " << e.from << "->" << e.to << " has probability " << e.prob;
      out.push_back({round, e.from, "edge-prob", os.str()});
      continue;
    }
    outgoing[e.from] += e.prob;
    has_incoming[e.to] = 1;
  }

  // Outgoing mass: every source, and every silent state that is fed, must
  // forward (almost) all of it.
  for (int v = 0; v < base; ++v) {
    const bool silent = v >= block.n_from;
    if (silent && !has_incoming[v]) continue;  // unreachable silent node: ignore
    const double s = outgoing[v];
    const bool ok = spec.sub_stochastic() ? (s <= 1.0 + kSumTol)
                                          : (std::abs(s - 1.0) <= kSumTol);
    if (!ok) {
      std::ostringstream os;
      os << (silent ? "silent" : "productive") << " state " << v << " has outgoing mass " << s;
      out.push_back({round, v, "outgoing-sum", os.str()});
    }
  }
}

}  // namespace

std::vector<Violation> validate_spec(const EhmmSpec& spec, int horizon) {
  std::vector<Violation> out;
  const int k = spec.expert_count();
  if (k <= 0) {
    out.push_back({0, -1, "expert-count", "expert count must be positive"});
    return out;
  }

  Layer cur, next;
  spec.layer(1, cur);
  for (int e : cur.label)
    if (e < 0 || e >= k) out.push_back({1, -1, "label-range", "layer 1 label out of range"});

  TransitionBlock block;
  spec.initial(block);
  check_block(spec, block, 0, 1, cur.size(), out);

  // Start must reach layer 1 with positive probability.
  {
    std::vector<double> one{1.0}, reach, scratch;
    percolate(block, one, reach, scratch);
    double total = 0.0;
    for (double v : reach) total += v;
    if (!(total > 0.0))
      out.push_back({0, 0, "start-unreachable", "start state reaches no productive state"});
  }

  for (int r = 1; r < horizon; ++r) {
    spec.layer(r + 1, next);
    for (int e : next.label) {
      if (e < 0 || e >= k) {
        std::ostringstream os;
        os << "layer " << (r + 1) << " label " << e << " out of range";
        out.push_back({r + 1, -1, "label-range", os.str()});
        break;
      }
    }
    spec.transition(r, block);
    check_block(spec, block, r, cur.size(), next.size(), out);
    cur = next;
  }
  return out;
}

std::string format_violations(const std::vector<Violation>& violations) {
  std::ostringstream os;
  for (const Violation& v : violations) {
    if (v.round == 0)
      os << "initial block";
    else
      os << "block " << v.round << "->" << (v.round + 1);
    os << " [" << v.kind << "]";
    if (v.node >= 0) os << " node " << v.node;
    os << ": " << v.detail << "\n";
  }
  return os.str();
}

}  // namespace eswitch
