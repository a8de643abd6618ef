// Input data containers: per-round expert likelihoods (or return factors) and
// comparator expert sequences with their derived switching statistics.
#pragma once

#include <string>
#include <vector>

namespace eswitch {

// What the matrix entries mean.  In prediction mode entry (i, xi) is the
// probability expert xi assigned to the outcome realized at round i and must
// lie in (0, 1]; zero is tolerated (an expert may rule an outcome out).  In
// investment mode the entry is a per-round wealth multiplication factor and
// only nonnegativity is required.
enum class Mode { predict, invest };

struct LikelihoodMatrix {
  int t = 0;                  // rounds
  int k = 0;                  // experts
  std::vector<double> cells;  // row-major, t * k

  double at(int round, int expert) const { return cells[static_cast<size_t>(round) * k + expert]; }
  double& at(int round, int expert) { return cells[static_cast<size_t>(round) * k + expert]; }
  const double* row(int round) const { return cells.data() + static_cast<size_t>(round) * k; }

  static LikelihoodMatrix zeros(int t, int k);
  static LikelihoodMatrix from_rows(const std::vector<std::vector<double>>& rows);

  // Empty string if the matrix is valid for `mode`, else a message naming the
  // first offending row (1-based, matching the CSV round column).
  std::string check(Mode mode) const;
};

// A comparator expert sequence xi_1..xi_t with the statistics the regret
// bounds consume.  A "block" is a maximal run of equal experts; "drift" is
// the total index distance walked along the ordered-expert line, where the
// first step is counted from expert 0.
struct ReferenceSequence {
  std::vector<int> experts;      // xi_1..xi_t, 0-based expert indices
  int t = 0;
  int m = 0;                     // block count (0 when t == 0)
  std::vector<int> switch_bounds;    // boundaries b_2..b_m: xi_b != xi_{b+1}, 1-based
  std::vector<int> block_experts;    // expert of each block, length m
  std::vector<int> block_lengths;    // length m, sums to t
  int d = 0;                     // total drift: |xi_1| + sum |xi_i - xi_{i-1}|
  int last_switch = 0;           // b_m, or 0 when m <= 1
  double alpha_star = 0.0;       // (m-1)/(t-1), 0 when t <= 1

  static ReferenceSequence from_experts(std::vector<int> experts);

  // -ln prod_i data[i][xi_i]; +inf if the reference hits a zero likelihood.
  double codelength(const LikelihoodMatrix& data) const;
};

}  // namespace eswitch
