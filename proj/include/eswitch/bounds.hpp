// Closed-form regret guarantees for the model zoo, the empirical regret they
// must dominate, and the best-segmentation comparator.  All values are in
// nats.  Infinity is a first-class result (a boundary rate or a zero prior
// mass makes a guarantee vacuous, not invalid); only violated preconditions
// throw.
#pragma once

#include <vector>

#include "eswitch/data.hpp"
#include "eswitch/ehmm.hpp"
#include "eswitch/priors.hpp"

namespace eswitch {

// Binary entropies with the 0 ln 0 = 0 convention.
struct EntropyKl {
  double cross;    // H(p, q) = -p ln q - (1-p) ln(1-q)
  double entropy;  // H(p)
  double kl;       // KL(p || q) = cross - entropy
};
EntropyKl entropy_kl(double p, double q);
double binary_entropy(double p);
double binary_cross_entropy(double p, double q);
double binary_kl(double p, double q);

// Single mixture: -ln w(expert); +inf if that expert has no prior mass.
double bound_bayes(const std::vector<double>& w, int expert);

// Per-round mixture vs the best fixed distribution: t * KL(what || w).
double bound_elementwise(int t, const std::vector<double>& what,
                         const std::vector<double>& w);

// m ln k + (t-1) H((m-1)/(t-1), alpha), the (t-1)-term vanishing at t = 1.
// Requires 1 <= m <= t.
double bound_fixed_share(int k, int t, int m, double alpha);

// (t-1) KL(ahat || alpha): regret vs the best-tuned switching rate.
double bound_fs_ml(int t, double ahat, double alpha);

// m ln k + c - (m-1) ln c + (m-1+c) ln(t-1).  Requires c > 0, t >= 2.
double bound_dsr_slow(int k, int t, int m, double c);
// The minimizing scale for given (m, t).
double dsr_slow_best_c(int m, int t);

// m ln k + c - (m-1) ln c - (m-1) ln tau(t_m).  Requires c > 0 and a
// nonincreasing tau; the tau term needs t_m >= 1 and is absent for m = 1.
double bound_dsr_fast(int k, int m, double c, const TailPrior& tau, int t_m);
// ln t + 2 ln ln(t+e) + e/t, an upper bound for -ln tau(t) under the
// fat-tailed pmf.
double fat_tail_cost_relaxation(double t);

// ln 2 + (1/2) ln t: the switch-count estimator vs every fixed rate.
double bound_switching_method(int t);

// m ln k - ln tau(inf) - (m-1) ln tau(t_m/(m-1)) with the pmf evaluated at
// the real-valued average gap.  Rejects tau without an infinite-gap atom or
// without a real-argument pmf formula.
double bound_run_length(int k, int m, int t_m, const TailPrior& tau);

// Interpolator cost plus per-block kernel jump costs, jumps taken from
// expert 0 through the blocks' experts.
double bound_kernel_interp(double interp_cost_nats, const DriftKernel& kappa,
                           const std::vector<int>& block_experts);

// -ln C(sigma): the interpolator spec run as a code on the two-symbol
// switch sequence sigma (entries 0 = continue, 1 = switch).
double interpolator_cost(const EhmmSpec& interp, const std::vector<int>& sigma);

// -t ln((1-alpha)/(1+alpha)) - d ln alpha, plus the minimizing rate
// sqrt(1 + (t/d)^2) - t/d (0 when d = 0).
struct DriftBound {
  double bound;
  double alpha_star;
};
DriftBound bound_parameter_drift(int t, int d, double alpha);

// t * KL(kappa_ahat || kappa_alpha) in closed form.
double bound_pd_ml(int t, double ahat, double alpha);

// (d+2) ln(t+1) for the 1/(i+1) drift-rate schedule.
double bound_decreasing_drift(int t, int d);

// run(spec).log_evidence - ref codelength; -inf when the reference path has
// zero likelihood (degenerate comparator).
double empirical_regret(const EhmmSpec& spec, const LikelihoodMatrix& data,
                        const ReferenceSequence& ref);

// Best comparator with at most max_blocks blocks: maximizes the reference
// likelihood by exact dynamic programming over boundaries.  Ties prefer
// fewer switches, then lower expert indices.
ReferenceSequence best_reference(const LikelihoodMatrix& data, int max_blocks);

}  // namespace eswitch
