#include "eswitch/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "eswitch/interpolate.hpp"

namespace eswitch {

namespace {

std::string num(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

std::vector<double> check_weights(int k, std::vector<double> w, const char* who) {
  if (k < 1) throw std::invalid_argument("expert count must be >= 1");
  if (w.empty()) return uniform_weights(k);
  if (static_cast<int>(w.size()) != k)
    throw std::invalid_argument(std::string(who) + ": weight vector length != k");
  double sum = 0.0;
  for (double x : w) {
    if (!std::isfinite(x) || x < 0.0)
      throw std::invalid_argument(std::string(who) +
                                  ": weights must be finite and nonnegative");
    sum += x;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw std::invalid_argument(std::string(who) + ": weights must sum to one (got " +
                                num(sum) + ")");
  return w;
}

void identity_layer(int k, Layer& out) {
  out.label.resize(k);
  for (int i = 0; i < k; ++i) out.label[i] = i;
}

// ---------------------------------------------------------------------------
// Fixed mixture: pick an expert once and keep it.

class MixtureSpec : public EhmmSpec {
 public:
  MixtureSpec(int k, std::vector<double> w) : k_(k), w_(std::move(w)) {}
  int expert_count() const override { return k_; }
  void layer(int, Layer& out) const override { identity_layer(k_, out); }
  void initial(TransitionBlock& out) const override {
    out.reset(1, 0, k_);
    for (int j = 0; j < k_; ++j) out.add(0, 1 + j, w_[j]);
  }
  void transition(int, TransitionBlock& out) const override {
    out.reset(k_, 0, k_);
    for (int j = 0; j < k_; ++j) out.add(j, k_ + j, 1.0);
  }

 private:
  int k_;
  std::vector<double> w_;
};

// Per-round mixture: forget everything through a funnel each round.
class ResetSpec : public EhmmSpec {
 public:
  ResetSpec(int k, std::vector<double> w) : k_(k), w_(std::move(w)) {}
  int expert_count() const override { return k_; }
  void layer(int, Layer& out) const override { identity_layer(k_, out); }
  void initial(TransitionBlock& out) const override {
    out.reset(1, 0, k_);
    for (int j = 0; j < k_; ++j) out.add(0, 1 + j, w_[j]);
  }
  void transition(int, TransitionBlock& out) const override {
    out.reset(k_, 1, k_);
    for (int j = 0; j < k_; ++j) out.add(j, k_, 1.0);
    for (int j = 0; j < k_; ++j) out.add(k_, k_ + 1 + j, w_[j]);
  }

 private:
  int k_;
  std::vector<double> w_;
};

// Keep with probability 1 - rate(r), else redraw from w through the funnel.
class ShareSpec : public EhmmSpec {
 public:
  ShareSpec(int k, SwitchRateSchedule sched, std::vector<double> w)
      : k_(k), sched_(sched), w_(std::move(w)) {}
  int expert_count() const override { return k_; }
  void layer(int, Layer& out) const override { identity_layer(k_, out); }
  void initial(TransitionBlock& out) const override {
    out.reset(1, 0, k_);
    for (int j = 0; j < k_; ++j) out.add(0, 1 + j, w_[j]);
  }
  void transition(int round, TransitionBlock& out) const override {
    const double a = sched_.rate(round);
    out.reset(k_, 1, k_);
    for (int j = 0; j < k_; ++j) {
      out.add(j, k_ + 1 + j, 1.0 - a);
      out.add(j, k_, a);
    }
    for (int j = 0; j < k_; ++j) out.add(k_, k_ + 1 + j, w_[j]);
  }

 private:
  int k_;
  SwitchRateSchedule sched_;
  std::vector<double> w_;
};

// Bayes mixture of Fixed Share instances: block-diagonal copies that never
// interact after the initial split.
class GridSpec : public EhmmSpec {
 public:
  GridSpec(int k, std::vector<double> alphas, std::vector<double> prior,
           std::vector<double> w)
      : k_(k), alphas_(std::move(alphas)), prior_(std::move(prior)), w_(std::move(w)) {}
  int expert_count() const override { return k_; }
  void layer(int, Layer& out) const override {
    const int g = static_cast<int>(alphas_.size());
    out.label.resize(g * k_);
    for (int i = 0; i < g * k_; ++i) out.label[i] = i % k_;
  }
  void initial(TransitionBlock& out) const override {
    const int g = static_cast<int>(alphas_.size());
    out.reset(1, 0, g * k_);
    for (int gi = 0; gi < g; ++gi)
      for (int j = 0; j < k_; ++j) out.add(0, 1 + gi * k_ + j, prior_[gi] * w_[j]);
  }
  void transition(int, TransitionBlock& out) const override {
    const int g = static_cast<int>(alphas_.size());
    out.reset(g * k_, g, g * k_);
    const int funnel = g * k_, base = out.target_base();
    for (int gi = 0; gi < g; ++gi) {
      const double a = alphas_[gi];
      for (int j = 0; j < k_; ++j) {
        out.add(gi * k_ + j, base + gi * k_ + j, 1.0 - a);
        out.add(gi * k_ + j, funnel + gi, a);
      }
    }
    for (int gi = 0; gi < g; ++gi)
      for (int j = 0; j < k_; ++j) out.add(funnel + gi, base + gi * k_ + j, w_[j]);
  }

 private:
  int k_;
  std::vector<double> alphas_, prior_, w_;
};

// ---------------------------------------------------------------------------
// Two-sided geometric drift through silent cell chains.  A source feeds its
// direct target with kappa(0) = (1-a)/(1+a) and enters the up/down chains
// with a/(1+a); each cell continues with a and exits with 1-a, so reaching
// offset delta costs exactly kappa(delta) = a^|delta| (1-a)/(1+a).  Mass
// walking past the expert range is dropped.
class ChainKernelSpec : public EhmmSpec {
 public:
  ChainKernelSpec(int k, SwitchRateSchedule sched) : k_(k), sched_(sched) {}
  int expert_count() const override { return k_; }
  bool sub_stochastic() const override { return true; }
  void layer(int, Layer& out) const override { identity_layer(k_, out); }
  void initial(TransitionBlock& out) const override {
    const double a = sched_.rate(1);
    const double c = (1.0 - a) / (1.0 + a);
    out.reset(1, 0, k_);
    for (int j = 0; j < k_; ++j) out.add(0, 1 + j, c * std::pow(a, j));
  }
  void transition(int round, TransitionBlock& out) const override {
    const double a = sched_.rate(round + 1);  // kernel application round+1
    const double c = (1.0 - a) / (1.0 + a);
    const double enter = a / (1.0 + a);
    // up cell p (exits to target p, p = 1..k-1) at k + p - 1;
    // down cell p (p = k-2..0) at 2k - 1 + (k - 2 - p).
    const auto up = [&](int p) { return k_ + p - 1; };
    const auto down = [&](int p) { return 3 * k_ - 3 - p; };
    out.reset(k_, 2 * (k_ - 1), k_);
    const int base = out.target_base();
    for (int j = 0; j < k_; ++j) {
      out.add(j, base + j, c);
      if (j + 1 <= k_ - 1) out.add(j, up(j + 1), enter);
      if (j - 1 >= 0) out.add(j, down(j - 1), enter);
    }
    for (int p = 1; p <= k_ - 1; ++p) {
      out.add(up(p), base + p, 1.0 - a);
      if (p + 1 <= k_ - 1) out.add(up(p), up(p + 1), a);
    }
    for (int p = k_ - 2; p >= 0; --p) {
      out.add(down(p), base + p, 1.0 - a);
      if (p - 1 >= 0) out.add(down(p), down(p - 1), a);
    }
  }

 private:
  int k_;
  SwitchRateSchedule sched_;
};

// Arbitrary finite kernels: direct bipartite edges, wrapped on the ring.
class DenseKernelSpec : public EhmmSpec {
 public:
  DenseKernelSpec(int k, DriftKernel kappa) : k_(k), kappa_(std::move(kappa)) {
    if (kappa_.topology() == DriftKernel::Topology::ring) {
      row_.assign(k_, 0.0);
      for (size_t e = 0; e < kappa_.offsets().size(); ++e)
        row_[((kappa_.offsets()[e] % k_) + k_) % k_] += kappa_.pmf()[e];
    }
  }
  int expert_count() const override { return k_; }
  bool sub_stochastic() const override {
    if (kappa_.topology() == DriftKernel::Topology::ring) return false;
    for (int off : kappa_.offsets())
      if (off != 0) return true;  // some mass can leave the line
    return false;
  }
  void layer(int, Layer& out) const override { identity_layer(k_, out); }
  void initial(TransitionBlock& out) const override {
    out.reset(1, 0, k_);
    for (int j = 0; j < k_; ++j) out.add(0, 1 + j, 1.0 / k_);
  }
  void transition(int, TransitionBlock& out) const override {
    out.reset(k_, 0, k_);
    if (!row_.empty()) {
      for (int i = 0; i < k_; ++i)
        for (int r = 0; r < k_; ++r) out.add(i, k_ + (i + r) % k_, row_[r]);
      return;
    }
    for (int i = 0; i < k_; ++i)
      for (size_t e = 0; e < kappa_.offsets().size(); ++e) {
        const long j = i + kappa_.offsets()[e];
        if (j >= 0 && j < k_) out.add(i, k_ + static_cast<int>(j), kappa_.pmf()[e]);
      }
  }

 private:
  int k_;
  DriftKernel kappa_;
  std::vector<double> row_;  // ring: aggregated offset row
};

// ---------------------------------------------------------------------------
// Fused rules

class WeightFused : public FusedRule {  // shared plumbing for width-k rules
 public:
  WeightFused(int k, std::vector<double> w) : k_(k), w_(std::move(w)) {}
  int expert_count() const override { return k_; }
  int dim() const override { return k_; }
  int label(int i) const override { return i; }
  void initial(std::vector<double>& u) const override { u = w_; }

 protected:
  int k_;
  std::vector<double> w_;
};

class MixtureFused : public WeightFused {
 public:
  using WeightFused::WeightFused;
  void step(int, const std::vector<double>& v, std::vector<double>& u) const override {
    u = v;
  }
  int64_t step_cost(int) const override { return k_; }
};

class ResetFused : public WeightFused {
 public:
  using WeightFused::WeightFused;
  void step(int, const std::vector<double>&, std::vector<double>& u) const override {
    u = w_;
  }
  int64_t step_cost(int) const override { return k_; }
};

class ShareFused : public WeightFused {
 public:
  ShareFused(int k, SwitchRateSchedule sched, std::vector<double> w)
      : WeightFused(k, std::move(w)), sched_(sched) {}
  void step(int round, const std::vector<double>& v, std::vector<double>& u) const override {
    const double a = sched_.rate(round);
    u.resize(k_);
    for (int j = 0; j < k_; ++j) u[j] = (1.0 - a) * v[j] + a * w_[j];
  }
  int64_t step_cost(int) const override { return 2 * k_; }

 private:
  SwitchRateSchedule sched_;
};

class GridFused : public FusedRule {
 public:
  GridFused(int k, std::vector<double> alphas, std::vector<double> prior,
            std::vector<double> w)
      : k_(k), alphas_(std::move(alphas)), prior_(std::move(prior)), w_(std::move(w)) {}
  int expert_count() const override { return k_; }
  int dim() const override { return static_cast<int>(alphas_.size()) * k_; }
  int label(int i) const override { return i % k_; }
  void initial(std::vector<double>& u) const override {
    u.resize(dim());
    for (size_t g = 0; g < alphas_.size(); ++g)
      for (int j = 0; j < k_; ++j) u[g * k_ + j] = prior_[g] * w_[j];
  }
  void step(int, const std::vector<double>& v, std::vector<double>& u) const override {
    u.resize(dim());
    for (size_t g = 0; g < alphas_.size(); ++g) {
      double mass = 0.0;
      for (int j = 0; j < k_; ++j) mass += v[g * k_ + j];
      const double a = alphas_[g];
      for (int j = 0; j < k_; ++j)
        u[g * k_ + j] = (1.0 - a) * v[g * k_ + j] + a * mass * w_[j];
    }
  }
  int64_t step_cost(int) const override { return 3 * dim(); }

 private:
  int k_;
  std::vector<double> alphas_, prior_, w_;
};

class KernelFused : public FusedRule {
 public:
  KernelFused(int k, DriftKernel kappa, SwitchRateSchedule sched, bool scheduled)
      : k_(k), kappa_(std::move(kappa)), sched_(sched), scheduled_(scheduled) {}
  int expert_count() const override { return k_; }
  int dim() const override { return k_; }
  int label(int i) const override { return i; }
  bool sub_stochastic() const override {
    return scheduled_ || kappa_.topology() == DriftKernel::Topology::line;
  }
  void initial(std::vector<double>& u) const override {
    u.assign(k_, 0.0);
    if (scheduled_ || kappa_.is_geometric()) {
      const DriftKernel first =
          scheduled_ ? DriftKernel::geometric(sched_.rate(1)) : kappa_;
      for (int j = 0; j < k_; ++j) u[j] = first.mass(j);
    } else {
      u.assign(k_, 1.0 / k_);
    }
  }
  void step(int round, const std::vector<double>& v, std::vector<double>& u) const override {
    if (scheduled_)
      DriftKernel::geometric(sched_.rate(round + 1)).convolve(v, u);
    else
      kappa_.convolve(v, u);
  }
  int64_t step_cost(int) const override {
    if (scheduled_ || kappa_.is_geometric()) return 3 * k_;
    return static_cast<int64_t>(kappa_.offsets().size()) * k_;
  }

 private:
  int k_;
  DriftKernel kappa_;
  SwitchRateSchedule sched_;
  bool scheduled_;
};

// One Bernoulli mixing rate in front of a single kernel application.
class KernelSwitchFused : public FusedRule {
 public:
  KernelSwitchFused(int k, DriftKernel kappa, SwitchRateSchedule sched)
      : k_(k), kappa_(std::move(kappa)), sched_(sched) {}
  int expert_count() const override { return k_; }
  int dim() const override { return k_; }
  int label(int i) const override { return i; }
  bool sub_stochastic() const override {
    return kappa_.topology() == DriftKernel::Topology::line;
  }
  void initial(std::vector<double>& u) const override {
    u.assign(k_, 0.0);
    if (kappa_.is_geometric())
      for (int j = 0; j < k_; ++j) u[j] = kappa_.mass(j);
    else
      u.assign(k_, 1.0 / k_);
  }
  void step(int round, const std::vector<double>& v, std::vector<double>& u) const override {
    const double a = sched_.rate(round);
    kappa_.convolve(v, u);
    for (int j = 0; j < k_; ++j) u[j] = (1.0 - a) * v[j] + a * u[j];
  }
  int64_t step_cost(int) const override { return 4 * k_; }

 private:
  int k_;
  DriftKernel kappa_;
  SwitchRateSchedule sched_;
};

std::shared_ptr<const EhmmSpec> kernel_spec(int k, const DriftKernel& kappa) {
  if (kappa.is_geometric())
    return std::make_shared<ChainKernelSpec>(
        k, SwitchRateSchedule::constant_rate(kappa.alpha()));
  return std::make_shared<DenseKernelSpec>(k, kappa);
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<double> uniform_weights(int k) {
  return std::vector<double>(k, 1.0 / k);
}

double Model::evidence(const LikelihoodMatrix& data) const {
  if (fused) return run(*fused, data).log_evidence;
  return run(*spec, data).log_evidence;
}

Model bayes_mixture(int k, std::vector<double> w) {
  w = check_weights(k, std::move(w), "bayes");
  Model m;
  m.name = "bayes";
  m.k = k;
  m.family = BoundFamily::bayes;
  m.grid = w;
  m.spec = std::make_shared<MixtureSpec>(k, w);
  m.fused = std::make_shared<MixtureFused>(k, w);
  return m;
}

Model elementwise_mixture(int k, std::vector<double> w) {
  w = check_weights(k, std::move(w), "em");
  Model m;
  m.name = "em";
  m.k = k;
  m.family = BoundFamily::elementwise;
  m.grid = w;
  m.spec = std::make_shared<ResetSpec>(k, w);
  m.fused = std::make_shared<ResetFused>(k, w);
  return m;
}

Model fixed_share(int k, double alpha, std::vector<double> w) {
  w = check_weights(k, std::move(w), "fs");
  const auto sched = SwitchRateSchedule::constant_rate(alpha);
  Model m;
  m.name = "fs";
  m.params = "alpha=" + num(alpha);
  m.k = k;
  m.family = BoundFamily::fixed_share;
  m.alpha = alpha;
  m.schedule = sched;
  m.spec = std::make_shared<ShareSpec>(k, sched, w);
  m.fused = std::make_shared<ShareFused>(k, sched, w);
  return m;
}

Model decreasing_rate(int k, const SwitchRateSchedule& sched, std::vector<double> w) {
  w = check_weights(k, std::move(w), "dsr");
  if (sched.kind != SwitchRateSchedule::Kind::slow &&
      sched.kind != SwitchRateSchedule::Kind::fast)
    throw std::invalid_argument("dsr: schedule kind must be slow or fast");
  Model m;
  m.name = "dsr";
  m.params = sched.kind == SwitchRateSchedule::Kind::slow ? "kind=slow" : "kind=fast";
  m.params += ";c=" + num(sched.c);
  m.k = k;
  m.family = sched.kind == SwitchRateSchedule::Kind::slow
                 ? BoundFamily::decreasing_slow
                 : BoundFamily::decreasing_fast;
  m.schedule = sched;
  m.spec = std::make_shared<ShareSpec>(k, sched, w);
  m.fused = std::make_shared<ShareFused>(k, sched, w);
  return m;
}

Model switching_method(int k, std::vector<double> w) {
  w = check_weights(k, std::move(w), "sm");
  Model m;
  m.name = "sm";
  m.k = k;
  m.family = BoundFamily::counts;
  m.spec = interpolate(std::make_shared<MixtureSpec>(k, w),
                       std::make_shared<ResetSpec>(k, w), counts_interpolator());
  return m;
}

Model fixed_share_grid(int k, std::vector<double> alphas, std::vector<double> prior) {
  if (alphas.empty()) throw std::invalid_argument("fsgrid: empty rate grid");
  for (double a : alphas)
    if (!(a >= 0.0 && a <= 1.0))
      throw std::invalid_argument("fsgrid: rates must lie in [0,1]");
  if (prior.empty())
    prior.assign(alphas.size(), 1.0 / alphas.size());
  else if (prior.size() != alphas.size())
    throw std::invalid_argument("fsgrid: prior length != grid size");
  auto w = uniform_weights(k);
  Model m;
  m.name = "fsgrid";
  {
    std::ostringstream os;
    os << "alphas=";
    for (size_t i = 0; i < alphas.size(); ++i) os << (i ? ":" : "") << num(alphas[i]);
    m.params = os.str();
  }
  m.k = k;
  m.family = BoundFamily::grid;
  m.grid = alphas;
  m.spec = std::make_shared<GridSpec>(k, alphas, prior, w);
  m.fused = std::make_shared<GridFused>(k, alphas, prior, w);
  return m;
}

Model run_length_model(int k, const TailPrior& tau, std::vector<double> w) {
  w = check_weights(k, std::move(w), "rl");
  Model m;
  m.name = "rl";
  m.params = tau.describe();
  m.k = k;
  m.family = BoundFamily::run_length;
  m.theta = tau.atom();
  m.tau = tau;
  m.spec = interpolate(std::make_shared<MixtureSpec>(k, w),
                       std::make_shared<ResetSpec>(k, w),
                       run_length_interpolator(tau));
  return m;
}

Model kernel_drift(int k, const DriftKernel& kappa) {
  Model m;
  m.name = "pd";
  m.params = kappa.is_geometric() ? "alpha=" + num(kappa.alpha()) : kappa.describe();
  m.k = k;
  m.family = BoundFamily::drift;
  if (kappa.is_geometric()) m.alpha = kappa.alpha();
  m.kappa = kappa;
  m.spec = kernel_spec(k, kappa);
  m.fused = std::make_shared<KernelFused>(k, kappa, SwitchRateSchedule(), false);
  return m;
}

Model kernel_drift(int k, const SwitchRateSchedule& sched) {
  Model m;
  m.name = "pd";
  m.params = sched.describe();
  m.k = k;
  m.family = BoundFamily::drift_decreasing;
  m.schedule = sched;
  m.spec = std::make_shared<ChainKernelSpec>(k, sched);
  m.fused = std::make_shared<KernelFused>(k, DriftKernel::geometric(0.5), sched, true);
  return m;
}

Model kernel_switch(int k, const DriftKernel& kappa, const SwitchRateSchedule& sched) {
  Model m;
  m.name = "ks";
  m.params = (kappa.is_geometric() ? "kalpha=" + num(kappa.alpha()) : kappa.describe()) +
             ";" + sched.describe();
  m.k = k;
  m.family = BoundFamily::kernel_interp;
  m.alpha = sched.kind == SwitchRateSchedule::Kind::constant
                ? sched.alpha
                : std::numeric_limits<double>::quiet_NaN();
  m.kappa = kappa;
  m.schedule = sched;
  m.spec = interpolate(std::make_shared<MixtureSpec>(k, uniform_weights(k)),
                       kernel_spec(k, kappa), bernoulli_interpolator(sched));
  m.fused = std::make_shared<KernelSwitchFused>(k, kappa, sched);
  return m;
}

Model kernel_switch_counts(int k, const DriftKernel& kappa) {
  Model m;
  m.name = "ks";
  m.params = (kappa.is_geometric() ? "kalpha=" + num(kappa.alpha()) : kappa.describe()) +
             ";interp=sm";
  m.k = k;
  m.family = BoundFamily::kernel_interp;
  m.kappa = kappa;
  m.spec = interpolate(std::make_shared<MixtureSpec>(k, uniform_weights(k)),
                       kernel_spec(k, kappa), counts_interpolator());
  return m;
}

Model kernel_switch_runlength(int k, const DriftKernel& kappa, const TailPrior& tau) {
  Model m;
  m.name = "ks";
  m.params = (kappa.is_geometric() ? "kalpha=" + num(kappa.alpha()) : kappa.describe()) +
             ";interp=rl;" + tau.describe();
  m.k = k;
  m.family = BoundFamily::kernel_interp;
  m.theta = tau.atom();
  m.kappa = kappa;
  m.tau = tau;
  m.spec = interpolate(std::make_shared<MixtureSpec>(k, uniform_weights(k)),
                       kernel_spec(k, kappa), run_length_interpolator(tau));
  return m;
}

}  // namespace eswitch
