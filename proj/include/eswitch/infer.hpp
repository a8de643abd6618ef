// Posterior analysis over a completed run: smoothed per-round expert
// marginals (forward-backward) and the most likely state path (Viterbi with
// silent-state max-relaxation).
#pragma once

#include <vector>

#include "eswitch/data.hpp"
#include "eswitch/ehmm.hpp"
#include "eswitch/oracle.hpp"

namespace eswitch {

struct MarginalGrid {
  int t = 0;
  int k = 0;
  std::vector<std::vector<double>> rows;  // row i: P(expert at round i+1 | all data)
  double log_evidence = 0.0;              // -ln Q(x^t)
  // ln of the forward*backward mass across each productive layer; every entry
  // equals -log_evidence up to rounding (the cut identity, which survives
  // kernel truncation).
  std::vector<double> cut_log;
  // Total prior mass of surviving paths (1 unless the spec is sub-stochastic).
  double retained_prior_mass = 1.0;
};

// Rows are normalized by the total evidence, so they sum to one even when a
// truncated kernel leaks prior mass; the leak is reported separately.
MarginalGrid marginals(const EhmmSpec& spec, const LikelihoodMatrix& data);

struct StatePath {
  // Every node entered after the start state, in traversal order, in the
  // oracle's (block, block-local node id) encoding; silent states included.
  std::vector<PathPoint> points;
  std::vector<int> experts;  // expert label of the round-i productive state
  double log_joint = 0.0;  // ln of the path's transition-likelihood product
};

// Empty path with log_joint = -inf when no positive-probability path exists.
StatePath viterbi(const EhmmSpec& spec, const LikelihoodMatrix& data);

}  // namespace eswitch
