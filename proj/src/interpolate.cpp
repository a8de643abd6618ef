#include "eswitch/interpolate.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace eswitch {

namespace {

// ---------------------------------------------------------------------------
// Bernoulli interpolator: two states per layer, symbol i drawn independently
// with switch probability rate(i).

class BernoulliInterp : public EhmmSpec {
 public:
  explicit BernoulliInterp(SwitchRateSchedule sched) : sched_(sched) {}

  int expert_count() const override { return 2; }

  void layer(int, Layer& out) const override {
    out.label = {kContinueSymbol, kSwitchSymbol};
  }

  void initial(TransitionBlock& out) const override {
    const double a = sched_.rate(1);
    out.reset(1, 0, 2);
    out.add(0, 1, 1.0 - a);
    out.add(0, 2, a);
  }

  void transition(int round, TransitionBlock& out) const override {
    const double a = sched_.rate(round + 1);  // symbol for round round+1
    out.reset(2, 0, 2);
    for (NodeId v = 0; v < 2; ++v) {
      out.add(v, 2, 1.0 - a);
      out.add(v, 3, a);
    }
  }

 private:
  SwitchRateSchedule sched_;
};

// ---------------------------------------------------------------------------
// Counts interpolator.  Layer j: ids 0..j-1 are continue-states with switch
// count i = id (continue count j - i >= 1); ids j..2j-1 are switch-states
// with switch count i = id - j + 1.  The silent hub with counts (j - h, h)
// merges all states sharing those counts before the next draw.

class CountsInterp : public EhmmSpec {
 public:
  int expert_count() const override { return 2; }

  void layer(int round, Layer& out) const override {
    out.label.assign(2 * round, kContinueSymbol);
    for (int i = round; i < 2 * round; ++i) out.label[i] = kSwitchSymbol;
  }

  void initial(TransitionBlock& out) const override {
    out.reset(1, 1, 2);
    out.add(0, 1, 1.0);       // into hub (0,0)
    out.add(1, 2, 0.5);       // first symbol is fair and not counted
    out.add(1, 3, 0.5);
  }

  void transition(int round, TransitionBlock& out) const override {
    const int j = round;
    out.reset(2 * j, j + 1, 2 * (j + 1));
    const int hub = 2 * j;             // hub h at id hub + h, h = switch count
    const int base = out.target_base();
    for (NodeId v = 0; v < j; ++v) out.add(v, hub + v, 1.0);          // continue-state, count v
    for (NodeId v = j; v < 2 * j; ++v) out.add(v, hub + v - j + 1, 1.0);  // switch-state
    for (int h = 0; h <= j; ++h) {
      const double pn = (j - h + 0.5) / (j + 1.0);
      out.add(hub + h, base + h, pn);                     // continue: count stays h
      out.add(hub + h, base + (j + 1) + h, 1.0 - pn);     // switch: count h+1
    }
  }
};

// ---------------------------------------------------------------------------
// Run-length interpolator.  Layer j: id 0 is the switch-state (gap 1), id
// g-1 the continue-state with current gap g (2 <= g <= min(j+1, cap)).

class RunLengthInterp : public EhmmSpec {
 public:
  explicit RunLengthInterp(TailPrior tau) : tau_(std::move(tau)) {
    cap_ = tau_.atom() > 0.0 ? std::numeric_limits<int>::max() : tau_.max_support();
  }

  int expert_count() const override { return 2; }

  int width(int round) const { return static_cast<int>(std::min<long>(round + 1, cap_)); }

  void layer(int round, Layer& out) const override {
    out.label.assign(width(round), kContinueSymbol);
    out.label[0] = kSwitchSymbol;
  }

  void initial(TransitionBlock& out) const override {
    out.reset(1, 0, width(1));
    out.add(0, 1, tau_.hazard(1));
    if (width(1) > 1) out.add(0, 2, tau_.tail(2));
  }

  void transition(int round, TransitionBlock& out) const override {
    const int wf = width(round), wt = width(round + 1);
    out.reset(wf, 0, wt);
    for (NodeId v = 0; v < wf; ++v) {
      const int gap = v == 0 ? 1 : v + 1;
      out.add(v, wf, tau_.hazard(gap));
      if (gap + 1 <= wt)  // continue-state for gap+1 exists
        out.add(v, wf + gap, tau_.tail(gap + 1) / tau_.tail(gap));
    }
  }

 private:
  TailPrior tau_;
  long cap_;
};

}  // namespace

std::shared_ptr<const EhmmSpec> bernoulli_interpolator(const SwitchRateSchedule& sched) {
  return std::make_shared<BernoulliInterp>(sched);
}

std::shared_ptr<const EhmmSpec> counts_interpolator() {
  return std::make_shared<CountsInterp>();
}

std::shared_ptr<const EhmmSpec> run_length_interpolator(const TailPrior& tau) {
  return std::make_shared<RunLengthInterp>(tau);
}

// ---------------------------------------------------------------------------
// Product construction

ProductSpec::ProductSpec(std::shared_ptr<const EhmmSpec> normal,
                         std::shared_ptr<const EhmmSpec> swi,
                         std::shared_ptr<const EhmmSpec> interp)
    : normal_(std::move(normal)), switch_(std::move(swi)), interp_(std::move(interp)) {
  if (interp_->expert_count() != 2)
    throw std::invalid_argument("interpolator must use the two-symbol alphabet");
  if (normal_->expert_count() != switch_->expert_count())
    throw std::invalid_argument(
        "interpolated dynamics must share one expert alphabet");
  k_ = normal_->expert_count();
  sub_ = normal_->sub_stochastic() || switch_->sub_stochastic() ||
         interp_->sub_stochastic();
  Layer check;
  layer(1, check);  // validates layer-1 agreement
}

// Base layer at round i, checked for agreement between the two dynamics.
static void base_layer(const EhmmSpec& normal, const EhmmSpec& swi, int round,
                       Layer& out) {
  Layer other;
  normal.layer(round, out);
  swi.layer(round, other);
  if (out.label != other.label) {
    std::ostringstream os;
    os << "interpolated dynamics disagree on layer " << round;
    throw std::invalid_argument(os.str());
  }
}

void ProductSpec::layer(int i, Layer& out) const {
  Layer base;
  base_layer(*normal_, *switch_, i, base);
  int ci = 1;
  Layer interp_layer;
  if (i > 1) {
    interp_->layer(i - 1, interp_layer);
    ci = interp_layer.size();
  }
  out.label.assign(static_cast<size_t>(base.size()) * ci, 0);
  for (int q = 0; q < base.size(); ++q)
    for (int c = 0; c < ci; ++c) out.label[q * ci + c] = base.label[q];
}

void ProductSpec::initial(TransitionBlock& out) const {
  // Layer 1 pairs every base state with the interpolator's start context, so
  // the switch dynamics' initial block carries over verbatim.
  switch_->initial(out);
}

void ProductSpec::build(int r, TransitionBlock* out, BoundaryCost* cost) const {
  // Interpolator block emitting the symbol for round r+1: its initial block
  // when leaving round 1, its transition r-1 -> r otherwise.
  TransitionBlock bc;
  int c_from = 1;
  if (r == 1) {
    interp_->initial(bc);
  } else {
    Layer prev;
    interp_->layer(r - 1, prev);
    c_from = prev.size();
    interp_->transition(r - 1, bc);
  }
  Layer csym;
  interp_->layer(r, csym);
  const int c_to = csym.size();

  Layer base_from, base_to;
  base_layer(*normal_, *switch_, r, base_from);
  base_layer(*normal_, *switch_, r + 1, base_to);
  const int kf = base_from.size(), kt = base_to.size();

  TransitionBlock dyn_n, dyn_s;
  normal_->transition(r, dyn_n);
  switch_->transition(r, dyn_s);
  for (const TransitionBlock* d : {&dyn_n, &dyn_s}) {
    if (d->n_from != kf || d->n_to != kt)
      throw std::invalid_argument("dynamics block does not match its layers");
  }
  if (bc.n_from != c_from || bc.n_to != c_to)
    throw std::invalid_argument("interpolator block does not match its layers");

  if (cost) {
    const auto en = static_cast<int64_t>(dyn_n.edges.size());
    const auto es = static_cast<int64_t>(dyn_s.edges.size());
    int64_t exact = static_cast<int64_t>(kf) * bc.edges.size();
    for (int c = 0; c < c_to; ++c)
      exact += csym.label[c] == kSwitchSymbol ? es : en;
    cost->exact = exact;
    cost->bound = static_cast<int64_t>(c_to) * std::max(en, es) +
                  static_cast<int64_t>(kf) * bc.edges.size();
    if (!out) return;
  }

  // Node layout: sources (q, c) at q*c_from + c; per-q copies of the
  // interpolator block's silents and targets; then per-symbol-context copies
  // of the dynamics block's silents; targets (q', c') at q'*c_to + c'.
  const int iw = bc.node_count() - bc.n_from;  // width of one interp copy
  const int ib = kf * c_from;                  // interp copies start here
  const int db = ib + kf * iw;                 // dynamics silents start here
  std::vector<int> dyn_off(c_to + 1, 0);
  for (int c = 0; c < c_to; ++c) {
    const TransitionBlock& d = csym.label[c] == kSwitchSymbol ? dyn_s : dyn_n;
    dyn_off[c + 1] = dyn_off[c] + d.n_silent;
  }
  const int n_silent = kf * iw + dyn_off[c_to];
  out->reset(kf * c_from, n_silent, kt * c_to);
  const int tb = out->target_base();

  // Phase one: evolve the interpolator within every base state.
  for (int q = 0; q < kf; ++q) {
    const int copy = ib + q * iw - bc.n_from;
    for (const Edge& e : bc.edges) {
      const NodeId f = e.from < bc.n_from ? q * c_from + e.from : copy + e.from;
      out->add(f, copy + e.to, e.prob);
    }
  }

  // Phase two: apply the chosen dynamics to reach the next base layer.
  for (int c = 0; c < c_to; ++c) {
    const TransitionBlock& d = csym.label[c] == kSwitchSymbol ? dyn_s : dyn_n;
    const int mid = ib + bc.n_silent + c;  // + q*iw gives the (q, c) mid state
    const int sil = db + dyn_off[c] - d.n_from;
    const int dtb = d.target_base();
    for (const Edge& e : d.edges) {
      const NodeId f = e.from < d.n_from ? mid + e.from * iw : sil + e.from;
      const NodeId t = e.to >= dtb ? tb + (e.to - dtb) * c_to + c : sil + e.to;
      out->add(f, t, e.prob);
    }
  }
}

void ProductSpec::transition(int r, TransitionBlock& out) const {
  build(r, &out, nullptr);
}

ProductSpec::BoundaryCost ProductSpec::boundary_cost(int r) const {
  BoundaryCost cost;
  build(r, nullptr, &cost);
  return cost;
}

std::shared_ptr<const EhmmSpec> interpolate(std::shared_ptr<const EhmmSpec> normal,
                                            std::shared_ptr<const EhmmSpec> swi,
                                            std::shared_ptr<const EhmmSpec> interp) {
  return std::make_shared<ProductSpec>(std::move(normal), std::move(swi),
                                       std::move(interp));
}

}  // namespace eswitch
