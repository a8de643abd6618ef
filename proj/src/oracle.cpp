#include "eswitch/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eswitch {

namespace {

// A block with a per-node index over its edges.  Edge lists are only required
// to be in evaluation order, so a stable counting sort groups them by source
// while keeping each node's out-edges in their original order.
struct IndexedBlock {
  TransitionBlock block;
  std::vector<int> offset;  // offset[u]..offset[u+1] = out-edges of node u
  std::vector<int> order;   // edge indices, stably grouped by source

  void index() {
    offset.assign(block.node_count() + 1, 0);
    for (const Edge& e : block.edges) ++offset[e.from + 1];
    for (size_t i = 1; i < offset.size(); ++i) offset[i] += offset[i - 1];
    order.resize(block.edges.size());
    std::vector<int> cursor(offset.begin(), offset.end() - 1);
    for (int i = 0; i < static_cast<int>(block.edges.size()); ++i)
      order[cursor[block.edges[i].from]++] = i;
  }

  const Edge& edge(int slot) const { return block.edges[order[slot]]; }
};

struct Enumerator {
  const LikelihoodMatrix& data;
  std::vector<IndexedBlock> blocks;  // block 0 = initial, block i = layer i -> i+1
  std::vector<Layer> layers;         // layers[i] = productive layer i+1
  int t;

  OracleRun out;
  std::vector<PathPoint> path;
  std::vector<std::vector<double>> mass;  // unnormalized per-round label mass
  std::vector<std::pair<int, int>> productive;  // (round index 0-based, label) stack
  double best_ = -1.0, second_ = -1.0;

  explicit Enumerator(const EhmmSpec& spec, const LikelihoodMatrix& d) : data(d), t(d.t) {
    blocks.resize(t);
    layers.resize(t);
    spec.initial(blocks[0].block);
    blocks[0].index();
    spec.layer(1, layers[0]);
    for (int r = 1; r < t; ++r) {
      spec.transition(r, blocks[r].block);
      blocks[r].index();
      spec.layer(r + 1, layers[r]);
    }
    mass.assign(t, std::vector<double>(d.k, 0.0));
  }

  // First-found wins on exact ties (strict > to replace), so the recorded
  // best path is the first-in-enumeration-order maximizer.
  void finish(double weight) {
    ++out.paths;
    out.likelihood += weight;
    for (const auto& [round, label] : productive) mass[round][label] += weight;
    if (weight > best_) {
      second_ = best_;
      best_ = weight;
      out.best_path = path;
    } else if (weight > second_) {
      second_ = weight;
    }
  }

  // Enter node u of block bi carrying accumulated weight w (transition
  // probabilities and likelihoods of everything before u).
  void enter(int bi, NodeId u, double w) {
    path.push_back({bi, u});
    const IndexedBlock& ib = blocks[bi];
    const int base = ib.block.target_base();
    if (u >= base) {
      const int j = u - base;
      const int label = layers[bi].label[j];
      const double w2 = w * data.at(bi, label);
      productive.push_back({bi, label});
      if (bi == t - 1) {
        finish(w2);
      } else {
        const IndexedBlock& nb = blocks[bi + 1];
        for (int ei = nb.offset[j]; ei < nb.offset[j + 1]; ++ei)
          enter(bi + 1, nb.edge(ei).to, w2 * nb.edge(ei).prob);
      }
      productive.pop_back();
    } else {
      for (int ei = ib.offset[u]; ei < ib.offset[u + 1]; ++ei)
        enter(bi, ib.edge(ei).to, w * ib.edge(ei).prob);
    }
    path.pop_back();
  }

  void run() {
    const IndexedBlock& b0 = blocks[0];
    for (int ei = b0.offset[0]; ei < b0.offset[1]; ++ei)
      enter(0, b0.edge(ei).to, b0.edge(ei).prob);
    out.best_score = std::max(best_, 0.0);
    out.best_unique = best_ > 0.0 && best_ - second_ > 1e-12 * best_;
    out.marginals.assign(t, std::vector<double>(data.k, 0.0));
    if (out.likelihood > 0.0)
      for (int i = 0; i < t; ++i)
        for (int e = 0; e < data.k; ++e) out.marginals[i][e] = mass[i][e] / out.likelihood;
  }
};

}  // namespace

int64_t count_paths(const EhmmSpec& spec, int t, int64_t cap) {
  if (t <= 0) return 0;
  const int64_t clamp = cap + 1;
  TransitionBlock block;
  std::vector<int64_t> acc, counts;
  spec.initial(block);
  acc.assign(block.node_count(), 0);
  acc[0] = 1;
  for (const Edge& e : block.edges) acc[e.to] = std::min(clamp, acc[e.to] + acc[e.from]);
  counts.assign(acc.begin() + block.target_base(), acc.end());
  for (int r = 1; r < t; ++r) {
    spec.transition(r, block);
    acc.assign(block.node_count(), 0);
    for (int i = 0; i < block.n_from; ++i) acc[i] = counts[i];
    for (const Edge& e : block.edges) acc[e.to] = std::min(clamp, acc[e.to] + acc[e.from]);
    counts.assign(acc.begin() + block.target_base(), acc.end());
  }
  int64_t total = 0;
  for (int64_t c : counts) total = std::min(clamp, total + c);
  return total;
}

OracleRun oracle_run(const EhmmSpec& spec, const LikelihoodMatrix& data, int64_t max_paths) {
  const int64_t n = count_paths(spec, data.t, max_paths);
  if (n > max_paths) {
    std::ostringstream os;
    os << "path enumeration rejected: at least " << n << " state paths exceed the budget of "
       << max_paths;
    throw PathBudgetExceeded(n, os.str());
  }
  Enumerator en(spec, data);
  en.run();
  return en.out;
}

double oracle_likelihood(const EhmmSpec& spec, const LikelihoodMatrix& data, int64_t max_paths) {
  if (data.t == 0) return 1.0;
  return oracle_run(spec, data, max_paths).likelihood;
}

}  // namespace eswitch
