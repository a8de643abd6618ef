// Interpolation between two expert dynamics.  An interpolator is itself an
// EHMM over the two-symbol alphabet {0 = continue, 1 = switch}; the product
// construction runs it alongside a base state space and applies, per round,
// the continue-dynamics or the switch-dynamics according to the symbol the
// interpolator emits.
#pragma once

#include <cstdint>
#include <memory>

#include "eswitch/ehmm.hpp"
#include "eswitch/priors.hpp"

namespace eswitch {

inline constexpr int kContinueSymbol = 0;
inline constexpr int kSwitchSymbol = 1;

// Independent symbols: round i switches with probability sched.rate(i).
std::shared_ptr<const EhmmSpec> bernoulli_interpolator(
    const SwitchRateSchedule& sched);

// Exchangeable symbols under the (1/2, 1/2) add-half estimator: a state per
// (count pair, last symbol), merged through per-count silent hubs.  The hub
// with a continues and b switches picks the next symbol with probabilities
// (a + 1/2)/(a + b + 1) and (b + 1/2)/(a + b + 1); the very first symbol is
// fair and is not counted.
std::shared_ptr<const EhmmSpec> counts_interpolator();

// Renewal process: gaps between switches are i.i.d. tau.  A state per
// current gap length; leaving a gap of length g costs the hazard
// tau(g)/tau(z >= g).  Finite-support tau without an atom caps the gap.
std::shared_ptr<const EhmmSpec> run_length_interpolator(const TailPrior& tau);

class ProductSpec : public EhmmSpec {
 public:
  // normal and swi must share layer sizes and labels; interp must be over the
  // two-symbol alphabet.  The product's initial distribution is the switch
  // dynamics' initial distribution.
  ProductSpec(std::shared_ptr<const EhmmSpec> normal,
              std::shared_ptr<const EhmmSpec> swi,
              std::shared_ptr<const EhmmSpec> interp);

  int expert_count() const override { return k_; }
  bool sub_stochastic() const override { return sub_; }
  void layer(int i, Layer& out) const override;
  void initial(TransitionBlock& out) const override;
  void transition(int r, TransitionBlock& out) const override;

  // Edge accounting for the block entering round r+1: the exact emitted
  // count, and the closed-form ceiling
  //   (interp states after the boundary) * max(normal, switch block edges)
  //   + (base states) * (interp block edges).
  struct BoundaryCost {
    int64_t exact = 0;
    int64_t bound = 0;
  };
  BoundaryCost boundary_cost(int r) const;

 private:
  void build(int r, TransitionBlock* out, BoundaryCost* cost) const;

  std::shared_ptr<const EhmmSpec> normal_, switch_, interp_;
  int k_;
  bool sub_;
};

std::shared_ptr<const EhmmSpec> interpolate(
    std::shared_ptr<const EhmmSpec> normal,
    std::shared_ptr<const EhmmSpec> swi,
    std::shared_ptr<const EhmmSpec> interp);

}  // namespace eswitch
