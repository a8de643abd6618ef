#include "eswitch/infer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "eswitch/forward.hpp"

namespace eswitch {

MarginalGrid marginals(const EhmmSpec& spec, const LikelihoodMatrix& data) {
  MarginalGrid grid;
  grid.t = data.t;
  grid.k = data.k;
  if (data.k != spec.expert_count())
    throw std::invalid_argument("data width does not match the spec's expert count");
  if (data.t == 0) return grid;

  // Forward sweep, checkpointing the normalized posterior at every round
  // together with the evidence prefix.
  ForwardSession session(spec);
  std::vector<std::vector<double>> fwd(data.t);
  std::vector<double> prefix_loss(data.t);  // -ln Q(x^i)
  for (int i = 0; i < data.t; ++i) {
    session.observe(data.row(i));
    fwd[i] = session.weights();
    prefix_loss[i] = session.log_evidence();
  }
  grid.log_evidence = session.log_evidence();

  // Backward sweep over re-generated blocks, normalizing each frontier and
  // carrying the log of the applied scale.
  Layer layer;
  TransitionBlock block;
  std::vector<double> bwd, tmp, scratch;
  spec.layer(data.t, layer);
  bwd.assign(layer.size(), 1.0);
  double bwd_scale = 0.0;  // ln of mass divided out of bwd so far

  grid.rows.assign(data.t, std::vector<double>(data.k, 0.0));
  grid.cut_log.assign(data.t, 0.0);
  for (int i = data.t - 1; i >= 0; --i) {
    // Combine the checkpoint with the backward frontier at layer i+1.
    auto& row = grid.rows[i];
    double cut = 0.0;
    for (int q = 0; q < layer.size(); ++q) {
      const double mass = fwd[i][q] * bwd[q];
      row[layer.label[q]] += mass;
      cut += mass;
    }
    grid.cut_log[i] = std::log(cut) + bwd_scale - prefix_loss[i];
    if (cut > 0.0)
      for (double& v : row) v /= cut;

    if (i == 0) break;
    // Pull the frontier back through block i -> i+1, weighting targets by
    // their emission at round i+1.
    tmp.resize(layer.size());
    for (int q = 0; q < layer.size(); ++q)
      tmp[q] = bwd[q] * data.at(i, layer.label[q]);
    spec.transition(i, block);
    spec.layer(i, layer);
    if (block.n_to != static_cast<int>(tmp.size()) || block.n_from != layer.size())
      throw std::invalid_argument("spec layers are inconsistent with its blocks");
    percolate_back(block, tmp, bwd, scratch);
    double norm = 0.0;
    for (double v : bwd) norm = std::max(norm, v);
    if (norm > 0.0) {
      for (double& v : bwd) v /= norm;
      bwd_scale += std::log(norm);
    }
  }

  if (spec.sub_stochastic()) {
    LikelihoodMatrix ones = LikelihoodMatrix::zeros(data.t, data.k);
    ones.cells.assign(ones.cells.size(), 1.0);
    grid.retained_prior_mass = std::exp(-run(spec, ones).log_evidence);
  }
  return grid;
}

StatePath viterbi(const EhmmSpec& spec, const LikelihoodMatrix& data) {
  const double ninf = -std::numeric_limits<double>::infinity();
  StatePath out;
  if (data.k != spec.expert_count())
    throw std::invalid_argument("data width does not match the spec's expert count");
  if (data.t == 0) return out;

  struct BlockTrace {
    int n_from, target_base;
    std::vector<NodeId> backptr;
  };
  std::vector<BlockTrace> trace(data.t);

  Layer layer;
  TransitionBlock block;
  std::vector<double> score{0.0}, next, scratch;
  std::vector<NodeId> backptr;
  for (int i = 0; i < data.t; ++i) {
    if (i == 0)
      spec.initial(block);
    else
      spec.transition(i, block);
    spec.layer(i + 1, layer);
    percolate_max(block, score, next, scratch, backptr);
    for (int q = 0; q < layer.size(); ++q)
      next[q] += std::log(data.at(i, layer.label[q]));  // log 0 = -inf
    trace[i] = {block.n_from, block.target_base(), std::move(backptr)};
    backptr.clear();
    score = std::move(next);
    next.clear();
  }

  int best = 0;
  for (int q = 1; q < static_cast<int>(score.size()); ++q)
    if (score[q] > score[best]) best = q;
  out.log_joint = score[best];
  if (out.log_joint == ninf) return out;

  // Unwind block by block; within a block collect every node after the
  // source, then convert the entry source to the previous block's target.
  std::vector<PathPoint> reversed;
  std::vector<int> experts_rev;
  int target = best;
  for (int i = data.t - 1; i >= 0; --i) {
    spec.layer(i + 1, layer);
    experts_rev.push_back(layer.label[target]);
    NodeId node = trace[i].target_base + target;
    while (node >= trace[i].n_from) {
      reversed.push_back({i, node});
      node = trace[i].backptr[node];
    }
    target = node;  // a source of block i = target index of block i-1
  }
  out.points.assign(reversed.rbegin(), reversed.rend());
  out.experts.assign(experts_rev.rbegin(), experts_rev.rend());
  return out;
}

}  // namespace eswitch
