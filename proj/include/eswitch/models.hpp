// The model zoo.  Every constructor yields a Model bundling the lazily
// generated state graph, an equivalent fused O(width) update rule when the
// model admits one, and the parameters its regret guarantee needs.
#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eswitch/ehmm.hpp"
#include "eswitch/forward.hpp"
#include "eswitch/priors.hpp"

namespace eswitch {

// Which regret guarantee applies; drives the bound column of reports.
enum class BoundFamily {
  bayes,              // single block: ln k for the realized expert
  elementwise,        // per-round mixture: t * KL(best fixed w-hat || w)
  fixed_share,        // m ln k + (t-1) H(alpha*, alpha)
  decreasing_slow,    // rate 1 - exp(-c/i)
  decreasing_fast,    // rate 1 - exp(-c tau(i)), fat-tailed tau
  counts,             // add-half switch-count estimator
  grid,               // best grid member + ln(grid size)
  run_length,         // renewal gaps, real-argument tail pmf
  drift,              // fixed two-sided geometric kernel
  drift_decreasing,   // kernel rate 1/(i+1)
  kernel_interp,      // interpolator cost + kernel jump costs
};

struct Model {
  std::string name;    // descriptor head, e.g. "fs"
  std::string params;  // canonical parameters, ';'-separated, e.g. "alpha=0.25"
  int k = 0;
  BoundFamily family = BoundFamily::bayes;

  // Parameters used by the bound calculators; unset scalars are NaN.
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double theta = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> grid;
  std::optional<SwitchRateSchedule> schedule;
  std::optional<TailPrior> tau;
  std::optional<DriftKernel> kappa;

  std::shared_ptr<const EhmmSpec> spec;
  std::shared_ptr<const FusedRule> fused;

  std::string descriptor() const {
    return params.empty() ? name : name + "(" + params + ")";
  }
  const EhmmSpec& graph() const { return *spec; }

  // -ln Q(x^t) through the fused rule when present, else the graph.
  double evidence(const LikelihoodMatrix& data) const;
};

// Empty weight vectors mean uniform; explicit ones must sum to one (1e-9).
Model bayes_mixture(int k, std::vector<double> w = {});
Model elementwise_mixture(int k, std::vector<double> w = {});
Model fixed_share(int k, double alpha, std::vector<double> w = {});
// Time-varying switch rate (slow or fast decrease).
Model decreasing_rate(int k, const SwitchRateSchedule& sched,
                      std::vector<double> w = {});
// Switch-count estimator via the counts interpolator.
Model switching_method(int k, std::vector<double> w = {});
// Bayes mixture of Fixed Share instances, one per grid rate.
Model fixed_share_grid(int k, std::vector<double> alphas,
                       std::vector<double> grid_prior = {});
// Renewal gaps between switches via the run-length interpolator.
Model run_length_model(int k, const TailPrior& tau, std::vector<double> w = {});
// Every round applies the drift kernel to the posterior.
Model kernel_drift(int k, const DriftKernel& kappa);
// Kernel rate decays per the schedule (kernel application i uses rate(i);
// application 1 is the initial draw from expert 0).
Model kernel_drift(int k, const SwitchRateSchedule& sched);
// Mix identity dynamics with one kernel application, stateful in the chosen
// interpolator (Bernoulli rates, switch counts, or renewal gaps).
Model kernel_switch(int k, const DriftKernel& kappa,
                    const SwitchRateSchedule& sched);
Model kernel_switch_counts(int k, const DriftKernel& kappa);
Model kernel_switch_runlength(int k, const DriftKernel& kappa,
                              const TailPrior& tau);

std::vector<double> uniform_weights(int k);

}  // namespace eswitch
