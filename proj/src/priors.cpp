#include "eswitch/priors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace eswitch {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::string num(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// SwitchRateSchedule

double SwitchRateSchedule::rate(int i) const {
  if (i < 1) throw std::invalid_argument("schedule index must be >= 1");
  switch (kind) {
    case Kind::constant:
      return alpha;
    case Kind::slow:
      return 1.0 - std::exp(-c / i);
    case Kind::fast:
      return 1.0 - std::exp(-c * fat_tail_pmf(i));
    case Kind::harmonic:
      return 1.0 / (i + 1.0);
  }
  return 0.0;
}

SwitchRateSchedule SwitchRateSchedule::constant_rate(double alpha) {
  require(alpha >= 0.0 && alpha <= 1.0, "switch rate must lie in [0,1]");
  SwitchRateSchedule s;
  s.kind = Kind::constant;
  s.alpha = alpha;
  return s;
}

SwitchRateSchedule SwitchRateSchedule::slow(double c) {
  require(c > 0.0, "rate scale c must be positive");
  SwitchRateSchedule s;
  s.kind = Kind::slow;
  s.c = c;
  return s;
}

SwitchRateSchedule SwitchRateSchedule::fast(double c) {
  require(c > 0.0, "rate scale c must be positive");
  SwitchRateSchedule s;
  s.kind = Kind::fast;
  s.c = c;
  return s;
}

SwitchRateSchedule SwitchRateSchedule::harmonic() {
  SwitchRateSchedule s;
  s.kind = Kind::harmonic;
  return s;
}

std::string SwitchRateSchedule::describe() const {
  switch (kind) {
    case Kind::constant:
      return "alpha=" + num(alpha);
    case Kind::slow:
      return "kind=slow,c=" + num(c);
    case Kind::fast:
      return "kind=fast,c=" + num(c);
    case Kind::harmonic:
      return "schedule=dec";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Fat-tailed pmf

double fat_tail_tail(double x) {
  if (x <= 1.0) return 1.0;
  return 1.0 / std::log(x + std::exp(1.0) - 1.0);
}

double fat_tail_pmf(double x) {
  return fat_tail_tail(x) - fat_tail_tail(x + 1.0);
}

// ---------------------------------------------------------------------------
// TailPrior

TailPrior TailPrior::fat(double atom) {
  require(atom >= 0.0 && atom < 1.0, "tail atom must lie in [0,1)");
  TailPrior t;
  t.kind_ = Kind::fat;
  t.atom_ = atom;
  return t;
}

TailPrior TailPrior::geometric(double alpha, double atom) {
  require(alpha > 0.0 && alpha < 1.0,
          "geometric tail rate must lie in (0,1)");
  require(atom >= 0.0 && atom < 1.0, "tail atom must lie in [0,1)");
  TailPrior t;
  t.kind_ = Kind::geometric;
  t.alpha_ = alpha;
  t.atom_ = atom;
  return t;
}

TailPrior TailPrior::custom(std::vector<double> pmf, double atom) {
  require(atom >= 0.0 && atom < 1.0, "tail atom must lie in [0,1)");
  require(!pmf.empty(), "custom tail pmf must be nonempty");
  double sum = 0.0;
  for (double p : pmf) {
    require(std::isfinite(p) && p >= 0.0,
            "custom tail pmf entries must be finite and nonnegative");
    sum += p;
  }
  require(std::fabs(sum - 1.0) <= 1e-9,
          "custom tail pmf must sum to one (got " + num(sum) + ")");
  TailPrior t;
  t.kind_ = Kind::custom;
  t.atom_ = atom;
  for (double& p : pmf) p *= (1.0 - atom);
  t.pmf_ = std::move(pmf);
  t.suffix_.assign(t.pmf_.size() + 1, 0.0);
  for (int i = static_cast<int>(t.pmf_.size()) - 1; i >= 0; --i)
    t.suffix_[i] = t.suffix_[i + 1] + t.pmf_[i];
  return t;
}

double TailPrior::pmf(int delta) const {
  if (delta < 1) throw std::invalid_argument("gap length must be >= 1");
  switch (kind_) {
    case Kind::fat:
      return (1.0 - atom_) * fat_tail_pmf(delta);
    case Kind::geometric:
      return (1.0 - atom_) * alpha_ * std::pow(1.0 - alpha_, delta - 1);
    case Kind::custom:
      return delta <= static_cast<int>(pmf_.size()) ? pmf_[delta - 1] : 0.0;
  }
  return 0.0;
}

double TailPrior::tail(int delta) const {
  if (delta < 1) throw std::invalid_argument("gap length must be >= 1");
  switch (kind_) {
    case Kind::fat:
      return (1.0 - atom_) * fat_tail_tail(delta) + atom_;
    case Kind::geometric:
      return (1.0 - atom_) * std::pow(1.0 - alpha_, delta - 1) + atom_;
    case Kind::custom: {
      int n = static_cast<int>(pmf_.size());
      return (delta <= n ? suffix_[delta - 1] : 0.0) + atom_;
    }
  }
  return 0.0;
}

double TailPrior::hazard(int delta) const {
  double t = tail(delta);
  if (t <= 0.0)
    throw std::domain_error("tail prior has no mass at gap " +
                            std::to_string(delta));
  return pmf(delta) / t;
}

double TailPrior::pmf_real(double x) const {
  switch (kind_) {
    case Kind::fat:
      return (1.0 - atom_) * fat_tail_pmf(x);
    case Kind::geometric:
      return (1.0 - atom_) * alpha_ * std::pow(1.0 - alpha_, x - 1.0);
    case Kind::custom:
      throw std::invalid_argument(
          "custom tail priors have no real-argument pmf");
  }
  return 0.0;
}

int TailPrior::max_support() const {
  if (kind_ != Kind::custom) return std::numeric_limits<int>::max();
  int last = 0;
  for (int i = 0; i < static_cast<int>(pmf_.size()); ++i)
    if (pmf_[i] > 0.0) last = i + 1;
  return last;
}

bool TailPrior::nonincreasing() const {
  if (kind_ != Kind::custom) return true;  // both closed forms decrease
  for (size_t i = 1; i < pmf_.size(); ++i)
    if (pmf_[i] > pmf_[i - 1] + 1e-15) return false;
  return true;
}

std::string TailPrior::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::fat:
      os << "tau=fat";
      break;
    case Kind::geometric:
      os << "tau=geom,alpha=" << num(alpha_);
      break;
    case Kind::custom:
      os << "tau=custom[" << pmf_.size() << "]";
      break;
  }
  if (atom_ > 0.0) os << ",theta=" << num(atom_);
  return os.str();
}

// ---------------------------------------------------------------------------
// DriftKernel

DriftKernel DriftKernel::geometric(double alpha) {
  require(alpha > 0.0 && alpha < 1.0, "drift rate must lie in (0,1)");
  DriftKernel d;
  d.geometric_ = true;
  d.alpha_ = alpha;
  return d;
}

DriftKernel DriftKernel::custom(std::vector<int> offsets,
                                std::vector<double> pmf, Topology topology) {
  require(!offsets.empty() && offsets.size() == pmf.size(),
          "drift kernel needs matching offset and mass lists");
  std::map<int, double> cells;
  double sum = 0.0;
  for (size_t i = 0; i < offsets.size(); ++i) {
    require(std::isfinite(pmf[i]) && pmf[i] >= 0.0,
            "drift kernel masses must be finite and nonnegative");
    require(!cells.count(offsets[i]), "duplicate drift kernel offset");
    cells[offsets[i]] = pmf[i];
    sum += pmf[i];
  }
  require(std::fabs(sum - 1.0) <= 1e-9,
          "drift kernel masses must sum to one (got " + num(sum) + ")");
  DriftKernel d;
  d.topology_ = topology;
  for (auto& [off, p] : cells) {
    d.offsets_.push_back(off);
    d.pmf_.push_back(p);
  }
  return d;
}

DriftKernel DriftKernel::point_mass() { return custom({0}, {1.0}); }

DriftKernel DriftKernel::uniform_ring(int k) {
  require(k >= 1, "ring size must be >= 1");
  std::vector<int> off(k);
  std::vector<double> p(k, 1.0 / k);
  for (int i = 0; i < k; ++i) off[i] = i;
  return custom(off, p, Topology::ring);
}

double DriftKernel::mass(long delta) const {
  if (geometric_)
    return std::pow(alpha_, std::labs(delta)) * (1.0 - alpha_) / (1.0 + alpha_);
  auto it = std::lower_bound(offsets_.begin(), offsets_.end(),
                             static_cast<int>(delta));
  if (it == offsets_.end() || *it != delta) return 0.0;
  return pmf_[it - offsets_.begin()];
}

void DriftKernel::convolve(const std::vector<double>& v,
                           std::vector<double>& out) const {
  int k = static_cast<int>(v.size());
  out.assign(k, 0.0);
  if (geometric_) {
    // u_j = c * sum_i alpha^|i-j| v_i with c = (1-alpha)/(1+alpha), via one
    // left-to-right and one right-to-left geometric accumulation.
    double c = (1.0 - alpha_) / (1.0 + alpha_);
    double acc = 0.0;
    for (int j = 0; j < k; ++j) {
      acc = v[j] + alpha_ * acc;
      out[j] = acc;
    }
    acc = 0.0;
    for (int j = k - 1; j >= 0; --j) {
      acc = v[j] + alpha_ * acc;
      out[j] = c * (out[j] + acc - v[j]);
    }
    return;
  }
  for (size_t e = 0; e < offsets_.size(); ++e) {
    int off = offsets_[e];
    double p = pmf_[e];
    if (p == 0.0) continue;
    for (int i = 0; i < k; ++i) {
      long j = static_cast<long>(i) + off;
      if (topology_ == Topology::ring) {
        j = ((j % k) + k) % k;
      } else if (j < 0 || j >= k) {
        continue;  // truncated off the line
      }
      out[j] += p * v[i];
    }
  }
}

std::string DriftKernel::describe() const {
  if (geometric_) return "kalpha=" + num(alpha_);
  std::ostringstream os;
  os << (topology_ == Topology::ring ? "ring" : "line") << "[";
  for (size_t i = 0; i < offsets_.size(); ++i) {
    if (i) os << ",";
    os << offsets_[i] << ":" << num(pmf_[i]);
  }
  os << "]";
  return os.str();
}

}  // namespace eswitch
