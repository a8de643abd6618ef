#include "eswitch/data.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace eswitch {

LikelihoodMatrix LikelihoodMatrix::zeros(int t, int k) {
  LikelihoodMatrix m;
  m.t = t;
  m.k = k;
  m.cells.assign(static_cast<size_t>(t) * k, 0.0);
  return m;
}

LikelihoodMatrix LikelihoodMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  LikelihoodMatrix m;
  m.t = static_cast<int>(rows.size());
  m.k = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  m.cells.reserve(static_cast<size_t>(m.t) * m.k);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != m.k)
      throw std::invalid_argument("likelihood rows have inconsistent widths");
    m.cells.insert(m.cells.end(), r.begin(), r.end());
  }
  return m;
}

std::string LikelihoodMatrix::check(Mode mode) const {
  for (int i = 0; i < t; ++i) {
    bool any_positive = false;
    for (int e = 0; e < k; ++e) {
      const double v = at(i, e);
      if (!std::isfinite(v) || v < 0.0) {
        std::ostringstream os;
        os << "row " << (i + 1) << ": entry for expert " << e << " is " << v
           << " (must be a nonnegative real)";
        return os.str();
      }
      if (mode == Mode::predict && v > 1.0) {
        std::ostringstream os;
        os << "row " << (i + 1) << ": entry for expert " << e << " is " << v
           << " (likelihoods must lie in (0,1])";
        return os.str();
      }
      if (v > 0.0) any_positive = true;
    }
    if (mode == Mode::invest && !any_positive) {
      std::ostringstream os;
      os << "row " << (i + 1) << ": all return factors are zero";
      return os.str();
    }
  }
  return {};
}

ReferenceSequence ReferenceSequence::from_experts(std::vector<int> experts) {
  ReferenceSequence r;
  r.experts = std::move(experts);
  r.t = static_cast<int>(r.experts.size());
  if (r.t == 0) return r;

  r.m = 1;
  r.block_experts.push_back(r.experts[0]);
  int run = 1;
  int prev = r.experts[0];
  r.d = std::abs(r.experts[0]);  // first drift step is taken from index 0
  for (int i = 1; i < r.t; ++i) {
    const int cur = r.experts[i];
    r.d += std::abs(cur - prev);
    if (cur != prev) {
      r.block_lengths.push_back(run);
      r.switch_bounds.push_back(i);  // boundary between rounds i and i+1, 1-based
      r.block_experts.push_back(cur);
      ++r.m;
      run = 1;
    } else {
      ++run;
    }
    prev = cur;
  }
  r.block_lengths.push_back(run);
  r.last_switch = r.switch_bounds.empty() ? 0 : r.switch_bounds.back();
  r.alpha_star = (r.t > 1) ? static_cast<double>(r.m - 1) / (r.t - 1) : 0.0;
  return r;
}

double ReferenceSequence::codelength(const LikelihoodMatrix& data) const {
  if (t != data.t) throw std::invalid_argument("reference length does not match data rows");
  double nats = 0.0;
  for (int i = 0; i < t; ++i) {
    const int e = experts[i];
    if (e < 0 || e >= data.k) throw std::invalid_argument("reference expert index out of range");
    const double p = data.at(i, e);
    if (p <= 0.0) return std::numeric_limits<double>::infinity();
    nats -= std::log(p);
  }
  return nats;
}

}  // namespace eswitch
