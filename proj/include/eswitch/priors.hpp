// Parameter objects shared by the model zoo and the bound calculators:
// per-round switch-rate schedules, run-length tail priors over Z+ u {inf},
// and drift kernels over signed expert-index offsets.
#pragma once

#include <limits>
#include <string>
#include <vector>

namespace eswitch {

// Per-boundary switching rates alpha_i.
//   constant:  alpha_i = alpha
//   slow:      alpha_i = 1 - exp(-c/i)
//   fast:      alpha_i = 1 - exp(-c * tau(i))  with the fat-tailed pmf below
//   harmonic:  alpha_i = 1/(i+1)               (decreasing drift)
struct SwitchRateSchedule {
  enum class Kind { constant, slow, fast, harmonic };
  Kind kind = Kind::constant;
  double alpha = 0.0;
  double c = 1.0;

  double rate(int i) const;  // i >= 1

  static SwitchRateSchedule constant_rate(double alpha);
  static SwitchRateSchedule slow(double c);
  static SwitchRateSchedule fast(double c);
  static SwitchRateSchedule harmonic();

  std::string describe() const;
};

// The heavy-tailed run-length pmf with closed-form tail 1/ln(x + e - 1):
// tau(t) = 1/ln(t+e-1) - 1/ln(t+e).  Defined for real arguments.
double fat_tail_pmf(double x);
double fat_tail_tail(double x);  // tau(z >= x)

// A distribution tau over gap lengths Z+ plus an atom tau(inf) = theta >= 0.
// The finite part is scaled by (1 - theta) so the total is always one.
class TailPrior {
 public:
  enum class Kind { fat, geometric, custom };

  static TailPrior fat(double atom = 0.0);
  static TailPrior geometric(double alpha, double atom = 0.0);
  // pmf over delta = 1..n; must sum to one within 1e-9 before scaling.
  static TailPrior custom(std::vector<double> pmf, double atom = 0.0);

  Kind kind() const { return kind_; }
  double atom() const { return atom_; }
  double alpha() const { return alpha_; }

  double pmf(int delta) const;        // tau(delta), delta >= 1, scaled
  double tail(int delta) const;       // tau(z >= delta), includes the atom
  double hazard(int delta) const;     // tau(z = delta | z >= delta)
  // The pmf's defining formula at a real argument (fat and geometric only).
  double pmf_real(double x) const;
  bool has_real_extension() const { return kind_ != Kind::custom; }

  // Largest finite delta with positive pmf; INT_MAX for the closed forms.
  // The atom is not counted here (gaps stay unbounded whenever atom() > 0).
  int max_support() const;
  // True when the finite part is nonincreasing (precondition of the
  // run-length and fast-rate bounds).
  bool nonincreasing() const;

  std::string describe() const;

 private:
  Kind kind_ = Kind::fat;
  double atom_ = 0.0;
  double alpha_ = 0.0;             // geometric
  std::vector<double> pmf_;        // custom, already scaled by (1 - atom)
  std::vector<double> suffix_;     // custom: suffix sums of pmf_
};

// A distribution kappa over signed index offsets.  On the line topology,
// convolution mass pushed outside 0..k-1 is dropped (no renormalization); on
// the ring, indices wrap modulo k.
class DriftKernel {
 public:
  enum class Topology { line, ring };

  // Two-sided geometric: kappa(delta) = alpha^|delta| (1-alpha)/(1+alpha).
  static DriftKernel geometric(double alpha);
  static DriftKernel custom(std::vector<int> offsets, std::vector<double> pmf,
                            Topology topology = Topology::line);
  static DriftKernel point_mass();         // kappa = delta_0
  static DriftKernel uniform_ring(int k);  // uniform over the k ring offsets

  bool is_geometric() const { return geometric_; }
  double alpha() const { return alpha_; }
  Topology topology() const { return topology_; }

  double mass(long delta) const;  // kappa(delta); 0 outside support

  // out[j] = sum_i v[i] * kappa(j - i), truncated or wrapped per topology.
  // Geometric line kernels use the O(k) two-sided scan; everything else the
  // direct sum.
  void convolve(const std::vector<double>& v, std::vector<double>& out) const;

  const std::vector<int>& offsets() const { return offsets_; }
  const std::vector<double>& pmf() const { return pmf_; }

  std::string describe() const;

 private:
  bool geometric_ = false;
  double alpha_ = 0.0;
  Topology topology_ = Topology::line;
  std::vector<int> offsets_;
  std::vector<double> pmf_;
};

}  // namespace eswitch
