// Brute-force reference implementations: exhaustive enumeration of all state
// paths through the layered graph.  Exponential in t; intended for tests and
// small instances only.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "eswitch/data.hpp"
#include "eswitch/ehmm.hpp"

namespace eswitch {

// A node entered along a path: block 0 is the initial block, block i >= 1 the
// transition from layer i to i+1.  Sources are not repeated (each block's
// source is the previous block's target), so a full path is the concatenation
// of every silent and target node entered, in traversal order.
struct PathPoint {
  int block;
  NodeId node;
  bool operator==(const PathPoint&) const = default;
};

class PathBudgetExceeded : public std::runtime_error {
 public:
  PathBudgetExceeded(int64_t estimate, const std::string& what)
      : std::runtime_error(what), estimate_(estimate) {}
  int64_t estimate() const { return estimate_; }  // clamped path-count estimate

 private:
  int64_t estimate_;
};

struct OracleRun {
  double likelihood = 0.0;  // sum over all complete paths of prob * likelihood products
  int64_t paths = 0;        // complete paths enumerated
  double best_score = 0.0;  // largest single-path joint (prob * likelihoods)
  std::vector<PathPoint> best_path;
  bool best_unique = true;  // false if another path ties the best within 1e-12 relative
  std::vector<std::vector<double>> marginals;  // t x k, rows normalized by `likelihood`
};

// Enumerates every state path over rounds 1..data.t.  Throws
// PathBudgetExceeded (with a clamped count estimate) if the path count
// exceeds max_paths.
OracleRun oracle_run(const EhmmSpec& spec, const LikelihoodMatrix& data, int64_t max_paths);

// Convenience: just the marginal likelihood Q(x^t).
double oracle_likelihood(const EhmmSpec& spec, const LikelihoodMatrix& data, int64_t max_paths);

// Number of complete paths through layers 1..t, clamped to cap + 1.
int64_t count_paths(const EhmmSpec& spec, int t, int64_t cap);

}  // namespace eswitch
