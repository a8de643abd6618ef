#include "eswitch/forward.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace eswitch {

ForwardSession::ForwardSession(const EhmmSpec& spec, Mode mode)
    : spec_(&spec), mode_(mode), k_(spec.expert_count()) {}

ForwardSession::ForwardSession(const FusedRule& fused, Mode mode)
    : fused_(&fused), mode_(mode), k_(fused.expert_count()) {}

void ForwardSession::ensure_percolated() {
  if (percolated_valid_) return;
  if (spec_) {
    if (round_ == 0) {
      spec_->initial(block_);
      const std::vector<double> one{1.0};
      relaxations_ += percolate(block_, one, percolated_, scratch_);
      spec_->layer(1, next_layer_);
    } else {
      spec_->transition(round_, block_);
      relaxations_ += percolate(block_, weights_, percolated_, scratch_);
      spec_->layer(round_ + 1, next_layer_);
    }
  } else {
    if (round_ == 0) {
      fused_->initial(percolated_);
      relaxations_ += fused_->initial_cost();
    } else {
      fused_->step(round_, weights_, percolated_);
      relaxations_ += fused_->step_cost(round_);
    }
    next_layer_.label.resize(fused_->dim());
    for (int i = 0; i < fused_->dim(); ++i) next_layer_.label[i] = fused_->label(i);
  }
  prediction_.assign(k_, 0.0);
  for (size_t j = 0; j < percolated_.size(); ++j)
    prediction_[next_layer_.label[j]] += percolated_[j];
  percolated_valid_ = true;
}

const std::vector<double>& ForwardSession::predict() {
  ensure_percolated();
  return prediction_;
}

std::vector<double> ForwardSession::portfolio() {
  ensure_percolated();
  double total = 0.0;
  for (double v : prediction_) total += v;
  std::vector<double> p(prediction_);
  if (total > 0.0)
    for (double& v : p) v /= total;
  return p;
}

void ForwardSession::observe(const double* row) {
  ensure_percolated();
  double z = 0.0;
  double mass = 0.0;  // retained prior mass, for the investment normalization
  for (size_t j = 0; j < percolated_.size(); ++j) {
    z += percolated_[j] * row[next_layer_.label[j]];
    mass += percolated_[j];
  }

  if (mode_ == Mode::predict) {
    if (z <= 0.0) {
      std::ostringstream os;
      os << "evidence collapse at round " << (round_ + 1)
         << ": every expert in the mixture assigns zero mass";
      throw EvidenceCollapse(round_ + 1, os.str());
    }
    log_evidence_ -= std::log(z);
  } else {
    const double ret = (mass > 0.0) ? z / mass : 0.0;  // full-reinvestment return
    if (ret <= 0.0) {
      ruined_ = true;
      wealth_ = 0.0;
      log_wealth_ = -std::numeric_limits<double>::infinity();
    } else if (!ruined_) {
      wealth_ *= ret;
      log_wealth_ += std::log(ret);
    }
  }

  // Condition the layer weights on the observation and renormalize; this is
  // exact in both modes (the normalizer cancels from the posterior).
  weights_.resize(percolated_.size());
  if (z > 0.0) {
    for (size_t j = 0; j < percolated_.size(); ++j)
      weights_[j] = percolated_[j] * row[next_layer_.label[j]] / z;
  } else {
    // Ruined investment round: keep the percolated shape so inspection and
    // further percolation stay well defined.
    for (size_t j = 0; j < percolated_.size(); ++j)
      weights_[j] = (mass > 0.0) ? percolated_[j] / mass : 0.0;
  }
  cur_layer_ = next_layer_;
  ++round_;
  percolated_valid_ = false;
}

namespace {

template <typename Engine>
RunResult run_impl(const Engine& engine, const LikelihoodMatrix& data, bool with_predictions) {
  ForwardSession session(engine, Mode::predict);
  RunResult result;
  if (with_predictions) result.predictions.reserve(data.t);
  for (int i = 0; i < data.t; ++i) {
    if (with_predictions) result.predictions.push_back(session.predict());
    session.observe(data.row(i));
  }
  result.log_evidence = session.log_evidence();
  result.relaxations = session.relaxations();
  return result;
}

template <typename Engine>
InvestResult invest_impl(const Engine& engine, const LikelihoodMatrix& returns) {
  ForwardSession session(engine, Mode::invest);
  InvestResult result;
  result.portfolios.reserve(returns.t);
  for (int i = 0; i < returns.t; ++i) {
    result.portfolios.push_back(session.portfolio());
    session.observe(returns.row(i));
    if (session.ruined()) break;
  }
  result.wealth = session.wealth();
  result.log_wealth = session.log_wealth();
  result.ruined = session.ruined();
  return result;
}

}  // namespace

RunResult run(const EhmmSpec& spec, const LikelihoodMatrix& data, bool with_predictions) {
  return run_impl(spec, data, with_predictions);
}
RunResult run(const FusedRule& fused, const LikelihoodMatrix& data, bool with_predictions) {
  return run_impl(fused, data, with_predictions);
}
InvestResult invest(const EhmmSpec& spec, const LikelihoodMatrix& returns) {
  return invest_impl(spec, returns);
}
InvestResult invest(const FusedRule& fused, const LikelihoodMatrix& returns) {
  return invest_impl(fused, returns);
}

}  // namespace eswitch
