#include "eswitch/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "eswitch/forward.hpp"

namespace eswitch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogy(double x, double y) {  // x ln y with 0 ln 0 = 0
  if (x == 0.0) return 0.0;
  return x * std::log(y);
}

}  // namespace

double binary_cross_entropy(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("rates must lie in [0,1]");
  return -xlogy(p, q) - xlogy(1.0 - p, 1.0 - q);
}

double binary_entropy(double p) { return binary_cross_entropy(p, p); }

double binary_kl(double p, double q) {
  return binary_cross_entropy(p, q) - binary_entropy(p);
}

EntropyKl entropy_kl(double p, double q) {
  EntropyKl r;
  r.cross = binary_cross_entropy(p, q);
  r.entropy = binary_entropy(p);
  r.kl = r.cross - r.entropy;
  return r;
}

double bound_bayes(const std::vector<double>& w, int expert) {
  if (expert < 0 || expert >= static_cast<int>(w.size()))
    throw std::invalid_argument("expert index outside the prior's support");
  if (w[expert] <= 0.0) return kInf;
  return -std::log(w[expert]);
}

double bound_elementwise(int t, const std::vector<double>& what,
                         const std::vector<double>& w) {
  if (t < 0) throw std::invalid_argument("t must be nonnegative");
  if (what.size() != w.size())
    throw std::invalid_argument("distributions must share one support");
  double kl = 0.0;
  for (size_t i = 0; i < w.size(); ++i) {
    if (what[i] == 0.0) continue;
    if (w[i] <= 0.0) return kInf;
    kl += what[i] * std::log(what[i] / w[i]);
  }
  return t * kl;
}

double bound_fixed_share(int k, int t, int m, double alpha) {
  if (k < 1 || t < 1) throw std::invalid_argument("need k >= 1 and t >= 1");
  if (m < 1 || m > t)
    throw std::invalid_argument("block count must satisfy 1 <= m <= t");
  double b = m * std::log(static_cast<double>(k));
  if (t > 1) {
    const double astar = static_cast<double>(m - 1) / (t - 1);
    b += (t - 1) * binary_cross_entropy(astar, alpha);
  }
  return b;
}

double bound_fs_ml(int t, double ahat, double alpha) {
  if (t < 1) throw std::invalid_argument("t must be >= 1");
  if (t == 1) return 0.0;
  return (t - 1) * binary_kl(ahat, alpha);
}

double bound_dsr_slow(int k, int t, int m, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  if (t < 2) throw std::invalid_argument("slow-rate bound needs t >= 2");
  if (m < 1 || m > t)
    throw std::invalid_argument("block count must satisfy 1 <= m <= t");
  return m * std::log(static_cast<double>(k)) + c - (m - 1) * std::log(c) +
         (m - 1 + c) * std::log(static_cast<double>(t - 1));
}

double dsr_slow_best_c(int m, int t) {
  if (m < 1 || t < 2) throw std::invalid_argument("need m >= 1 and t >= 2");
  if (m == 1) return std::numeric_limits<double>::min();  // c -> 0 limit
  return (m - 1) / (1.0 + std::log(static_cast<double>(t - 1)));
}

double bound_dsr_fast(int k, int m, double c, const TailPrior& tau, int t_m) {
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  if (m < 1) throw std::invalid_argument("block count must be >= 1");
  if (!tau.nonincreasing())
    throw std::invalid_argument("fast-rate bound needs a nonincreasing tau");
  double b = m * std::log(static_cast<double>(k)) + c;
  if (m > 1) {
    if (t_m < 1)
      throw std::invalid_argument("last switch index must be >= 1 when m > 1");
    b -= (m - 1) * std::log(c);
    const double p = tau.pmf(t_m);
    if (p <= 0.0) return kInf;
    b -= (m - 1) * std::log(p);
  }
  return b;
}

double fat_tail_cost_relaxation(double t) {
  const double e = std::exp(1.0);
  return std::log(t) + 2.0 * std::log(std::log(t + e)) + e / t;
}

double bound_switching_method(int t) {
  if (t < 1) throw std::invalid_argument("t must be >= 1");
  return std::log(2.0) + 0.5 * std::log(static_cast<double>(t));
}

double bound_run_length(int k, int m, int t_m, const TailPrior& tau) {
  if (k < 1 || m < 1) throw std::invalid_argument("need k >= 1 and m >= 1");
  if (tau.atom() <= 0.0)
    throw std::invalid_argument(
        "run-length bound assumes an infinite-gap atom: tau(inf) must be positive");
  if (!tau.has_real_extension())
    throw std::invalid_argument(
        "run-length bound needs a tau with a real-argument pmf formula");
  double b = m * std::log(static_cast<double>(k)) - std::log(tau.atom());
  if (m > 1) {
    if (t_m < 1)
      throw std::invalid_argument("last switch index must be >= 1 when m > 1");
    const double p = tau.pmf_real(static_cast<double>(t_m) / (m - 1));
    if (p <= 0.0) return kInf;
    b -= (m - 1) * std::log(p);
  }
  return b;
}

double bound_kernel_interp(double interp_cost_nats, const DriftKernel& kappa,
                           const std::vector<int>& block_experts) {
  double b = interp_cost_nats;
  int prev = 0;  // jumps start at expert 0
  for (int e : block_experts) {
    const double p = kappa.mass(e - prev);
    if (p <= 0.0) return kInf;
    b -= std::log(p);
    prev = e;
  }
  return b;
}

double interpolator_cost(const EhmmSpec& interp, const std::vector<int>& sigma) {
  LikelihoodMatrix data = LikelihoodMatrix::zeros(static_cast<int>(sigma.size()), 2);
  for (size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i] != 0 && sigma[i] != 1)
      throw std::invalid_argument("switch sequence entries must be 0 or 1");
    data.at(static_cast<int>(i), sigma[i]) = 1.0;
  }
  try {
    return run(interp, data).log_evidence;
  } catch (const EvidenceCollapse&) {
    return kInf;  // sigma falls outside the interpolator's support
  }
}

DriftBound bound_parameter_drift(int t, int d, double alpha) {
  if (t < 0 || d < 0) throw std::invalid_argument("need t >= 0 and d >= 0");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("drift rate must lie in (0,1)");
  DriftBound r;
  r.bound = -t * std::log((1.0 - alpha) / (1.0 + alpha)) - xlogy(d, alpha);
  if (d == 0) {
    r.alpha_star = 0.0;
  } else {
    const double ratio = static_cast<double>(t) / d;
    r.alpha_star = std::sqrt(1.0 + ratio * ratio) - ratio;
  }
  return r;
}

double bound_pd_ml(int t, double ahat, double alpha) {
  if (t < 0) throw std::invalid_argument("t must be nonnegative");
  if (!(ahat > 0.0 && ahat < 1.0 && alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("both rates must lie in (0,1)");
  const double mean_jump = 2.0 * ahat / ((1.0 - ahat) * (1.0 + ahat));
  const double norm = std::log((1.0 + alpha) * (1.0 - ahat) /
                               ((1.0 - alpha) * (1.0 + ahat)));
  return t * (mean_jump * std::log(ahat / alpha) + norm);
}

double bound_decreasing_drift(int t, int d) {
  if (t < 0 || d < 0) throw std::invalid_argument("need t >= 0 and d >= 0");
  return (d + 2.0) * std::log(t + 1.0);
}

double empirical_regret(const EhmmSpec& spec, const LikelihoodMatrix& data,
                        const ReferenceSequence& ref) {
  const double reference = ref.codelength(data);
  if (std::isinf(reference)) return -kInf;  // degenerate comparator
  return run(spec, data).log_evidence - reference;
}

ReferenceSequence best_reference(const LikelihoodMatrix& data, int max_blocks) {
  if (max_blocks < 1) throw std::invalid_argument("need at least one block");
  const int t = data.t, k = data.k;
  if (t == 0) return ReferenceSequence::from_experts({});
  const int mmax = std::min(max_blocks, t);
  const double ninf = -kInf;

  // score[b][e]: best log-likelihood of a prefix ending in expert e using
  // exactly b+1 blocks; from[b][e]: expert before the last switch (-1: none).
  auto logcell = [&](int i, int e) {
    const double p = data.at(i, e);
    return p > 0.0 ? std::log(p) : ninf;
  };
  std::vector<std::vector<double>> score(mmax, std::vector<double>(k, ninf));
  std::vector<std::vector<std::vector<int>>> from(
      t, std::vector<std::vector<int>>(mmax, std::vector<int>(k, -1)));
  for (int e = 0; e < k; ++e) score[0][e] = logcell(0, e);

  for (int i = 1; i < t; ++i) {
    // Best predecessor per block count, preferring lower expert indices.
    std::vector<double> best(mmax, ninf);
    std::vector<int> argbest(mmax, -1);
    for (int b = 0; b < mmax; ++b)
      for (int e = 0; e < k; ++e)
        if (score[b][e] > best[b]) {
          best[b] = score[b][e];
          argbest[b] = e;
        }
    for (int b = mmax - 1; b >= 0; --b) {
      for (int e = 0; e < k; ++e) {
        double stay = score[b][e];  // continue the current block
        double enter = ninf;
        int enter_from = -1;
        if (b > 0 && argbest[b - 1] >= 0 && argbest[b - 1] != e) {
          enter = best[b - 1];
          enter_from = argbest[b - 1];
        } else if (b > 0) {
          // best predecessor has the same expert: pick the runner-up
          for (int e2 = 0; e2 < k; ++e2)
            if (e2 != e && score[b - 1][e2] > enter) {
              enter = score[b - 1][e2];
              enter_from = e2;
            }
        }
        // ties prefer staying (fewer switches)
        if (enter > stay) {
          score[b][e] = enter + logcell(i, e);
          from[i][b][e] = enter_from;
        } else {
          score[b][e] = stay + logcell(i, e);
          from[i][b][e] = -1;
        }
      }
    }
  }

  // Best final cell over <= mmax blocks; ties prefer fewer blocks, then the
  // lower expert index.
  int best_b = 0, best_e = 0;
  double best_score = ninf;
  for (int b = 0; b < mmax; ++b)
    for (int e = 0; e < k; ++e)
      if (score[b][e] > best_score) {
        best_score = score[b][e];
        best_b = b;
        best_e = e;
      }

  std::vector<int> experts(t);
  int b = best_b, e = best_e;
  for (int i = t - 1; i >= 0; --i) {
    experts[i] = e;
    const int pred = from[i][b][e];
    if (pred >= 0) {
      e = pred;
      --b;
    }
  }
  return ReferenceSequence::from_experts(std::move(experts));
}

}  // namespace eswitch
