// Layered hidden-Markov state graphs over experts.
//
// A spec describes, per round, a directed acyclic transition block from the
// productive layer at round r to the productive layer at round r+1.  Blocks
// may contain silent states that reroute probability mass within the round
// boundary; productive states carry an expert label and consume one round of
// data.  Everything is generated lazily: a spec is a pure generator and owns
// no mutable run state.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace eswitch {

using NodeId = int32_t;

struct Edge {
  NodeId from;
  NodeId to;
  double prob;
};

// Node-id layout inside a block:
//   [0, n_from)                         sources  = productive layer r
//   [n_from, n_from + n_silent)         silent states
//   [target_base(), target_base()+n_to) targets  = productive layer r+1
// Edges are listed in evaluation order: all edges into a state appear before
// any edge out of it.  A single sweep over the list then percolates mass
// exactly (and its reverse serves the backward pass); this also forces the
// silent subgraph to be acyclic.
struct TransitionBlock {
  int n_from = 0;
  int n_silent = 0;
  int n_to = 0;
  std::vector<Edge> edges;

  int target_base() const { return n_from + n_silent; }
  int node_count() const { return n_from + n_silent + n_to; }
  void reset(int from, int silent, int to) {
    n_from = from;
    n_silent = silent;
    n_to = to;
    edges.clear();
  }
  void add(NodeId from, NodeId to, double prob) {
    if (prob != 0.0) edges.push_back({from, to, prob});
  }
};

// Expert labels of a productive layer.
struct Layer {
  std::vector<int> label;
  int size() const { return static_cast<int>(label.size()); }
};

class EhmmSpec {
 public:
  virtual ~EhmmSpec() = default;

  virtual int expert_count() const = 0;

  // True when outgoing mass is allowed to sum to less than one (models that
  // drop convolution mass leaving a finite expert range).
  virtual bool sub_stochastic() const { return false; }

  // Productive layer at round r >= 1.
  virtual void layer(int round, Layer& out) const = 0;

  // Block from the start state (single source, id 0) into layer 1.
  virtual void initial(TransitionBlock& out) const = 0;

  // Block from layer r into layer r+1, r >= 1.
  virtual void transition(int round, TransitionBlock& out) const = 0;
};

// ---------------------------------------------------------------------------
// Percolation sweeps.  All return the number of edge relaxations performed
// (= block edge count), which the engine accumulates for work accounting.

// Sum-product: target[j] = sum over paths source->target of prob products.
// `scratch` is resized internally; `source` must have size n_from.
int64_t percolate(const TransitionBlock& block, const std::vector<double>& source,
                  std::vector<double>& target, std::vector<double>& scratch);

// Transpose sweep for backward passes: source[i] = sum_j P(i->j) target[j].
int64_t percolate_back(const TransitionBlock& block, const std::vector<double>& target,
                       std::vector<double>& source, std::vector<double>& scratch);

// Max-product in log domain with backpointers over all block nodes.
// `log_source` holds log scores of sources; on return `log_target` holds the
// best achievable log score per target and `backptr[v]` the predecessor of
// node v on that best path (-1 for sources / unreachable).  Ties keep the
// smallest predecessor id.
int64_t percolate_max(const TransitionBlock& block, const std::vector<double>& log_source,
                      std::vector<double>& log_target, std::vector<double>& scratch,
                      std::vector<NodeId>& backptr);

// ---------------------------------------------------------------------------
// Validation.  Violations are data, not exceptions.

struct Violation {
  int round;         // 0 = initial block, r >= 1 = block r -> r+1
  NodeId node;       // offending node id within the block, -1 if structural
  std::string kind;  // short machine-readable tag
  std::string detail;
};

// Checks layers 1..horizon and the blocks between them: outgoing sums
// (=1, or <=1 for sub-stochastic specs, tolerance 1e-12), evaluation order,
// edge ranges, label ranges, layer-size consistency, and that the start
// reaches layer 1 with positive probability.
std::vector<Violation> validate_spec(const EhmmSpec& spec, int horizon);

std::string format_violations(const std::vector<Violation>& violations);

}  // namespace eswitch
