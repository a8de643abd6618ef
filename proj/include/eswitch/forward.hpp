// The forward algorithm: normalized posterior weights over the current
// productive layer plus accumulated log-evidence.  Works either from a graph
// spec (edge percolation) or from a fused closed-form update rule when a
// model admits one.
#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "eswitch/data.hpp"
#include "eswitch/ehmm.hpp"

namespace eswitch {

// O(k)-style closed-form percolation for models whose layer structure is
// constant: maps the normalized weights of layer r directly to unnormalized
// weights of layer r+1 without materializing edges.
class FusedRule {
 public:
  virtual ~FusedRule() = default;
  virtual int expert_count() const = 0;
  virtual int dim() const = 0;          // internal state width, >= expert_count
  virtual int label(int i) const = 0;   // expert label of state i
  virtual bool sub_stochastic() const { return false; }
  virtual void initial(std::vector<double>& u) const = 0;
  virtual void step(int round, const std::vector<double>& v, std::vector<double>& u) const = 0;
  // Documented operation count per step, accumulated like edge relaxations.
  virtual int64_t step_cost(int round) const = 0;
  virtual int64_t initial_cost() const { return dim(); }
};

// Signalled when the whole mixture assigns zero mass to an observed round.
class EvidenceCollapse : public std::runtime_error {
 public:
  EvidenceCollapse(int round, const std::string& what) : std::runtime_error(what), round_(round) {}
  int round() const { return round_; }

 private:
  int round_;
};

class ForwardSession {
 public:
  ForwardSession(const EhmmSpec& spec, Mode mode = Mode::predict);
  ForwardSession(const FusedRule& fused, Mode mode = Mode::predict);

  int round() const { return round_; }
  double log_evidence() const { return log_evidence_; }
  double wealth() const { return wealth_; }
  double log_wealth() const { return log_wealth_; }
  bool ruined() const { return ruined_; }
  int64_t relaxations() const { return relaxations_; }

  // Normalized weights over the current productive layer (empty before the
  // first observe).
  const std::vector<double>& weights() const { return weights_; }
  const Layer& current_layer() const { return cur_layer_; }

  // Predictive distribution on experts for the next round: current weights
  // percolated into the next layer, projected onto labels.  Sums to one, or
  // to the retained mass for sub-stochastic specs.  The percolation is
  // cached and reused by the next observe.
  const std::vector<double>& predict();

  // Portfolio weights for the next round: predict() renormalized to sum one
  // (full reinvestment; identical to predict() for stochastic specs).
  std::vector<double> portfolio();

  // Consume one data row (length k).  Prediction mode accumulates
  // log-evidence; investment mode multiplies wealth by the realized
  // portfolio return and flags ruin when it hits zero.
  void observe(const double* row);

 private:
  void ensure_percolated();
  void advance_layer();

  const EhmmSpec* spec_ = nullptr;
  const FusedRule* fused_ = nullptr;
  Mode mode_;
  int k_;
  int round_ = 0;
  double log_evidence_ = 0.0;
  double wealth_ = 1.0;
  double log_wealth_ = 0.0;
  bool ruined_ = false;
  int64_t relaxations_ = 0;

  Layer cur_layer_, next_layer_;
  std::vector<double> weights_;      // normalized, current layer
  std::vector<double> percolated_;   // unnormalized, next layer
  std::vector<double> prediction_;   // percolated_ projected onto experts
  bool percolated_valid_ = false;
  TransitionBlock block_;
  std::vector<double> scratch_;
};

struct RunResult {
  double log_evidence = 0.0;                     // -ln Q(x^t), nats
  std::vector<std::vector<double>> predictions;  // row i: expert distribution used for round i+1
  int64_t relaxations = 0;
};

RunResult run(const EhmmSpec& spec, const LikelihoodMatrix& data, bool with_predictions = false);
RunResult run(const FusedRule& fused, const LikelihoodMatrix& data, bool with_predictions = false);

struct InvestResult {
  double wealth = 1.0;
  double log_wealth = 0.0;
  bool ruined = false;
  std::vector<std::vector<double>> portfolios;  // row i: weights invested in round i+1
};

InvestResult invest(const EhmmSpec& spec, const LikelihoodMatrix& returns);
InvestResult invest(const FusedRule& fused, const LikelihoodMatrix& returns);

}  // namespace eswitch
