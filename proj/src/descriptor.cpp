#include "eswitch/descriptor.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace eswitch {

namespace {

[[noreturn]] void fail(const std::string& desc, const std::string& why) {
  throw std::invalid_argument("bad model descriptor '" + desc + "': " + why);
}

double to_number(const std::string& desc, const std::string& text) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    fail(desc, "'" + text + "' is not a number");
  }
  if (used != text.size()) fail(desc, "'" + text + "' is not a number");
  return v;
}

struct Params {
  std::string desc;
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) != 0; }
  std::string take(const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) fail(desc, "missing parameter '" + key + "'");
    std::string v = it->second;
    kv.erase(it);
    return v;
  }
  std::string take_or(const std::string& key, const std::string& dflt) {
    return has(key) ? take(key) : dflt;
  }
  double number(const std::string& key) { return to_number(desc, take(key)); }
  double number_or(const std::string& key, double dflt) {
    return has(key) ? number(key) : dflt;
  }
  void done() const {
    if (!kv.empty()) fail(desc, "unknown parameter '" + kv.begin()->first + "'");
  }
};

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 1 && parts.size() != 3)
    throw std::invalid_argument("range '" + text + "' must be a number or start:step:end");
  std::vector<double> vals;
  if (parts.size() == 1) {
    vals.push_back(to_number(text, parts[0]));
    return vals;
  }
  const double start = to_number(text, parts[0]);
  const double step = to_number(text, parts[1]);
  const double end = to_number(text, parts[2]);
  if (!(step > 0.0)) throw std::invalid_argument("range '" + text + "': step must be positive");
  if (end < start) throw std::invalid_argument("range '" + text + "': end before start");
  for (double v = start; v <= end + step * 1e-9; v += step)
    vals.push_back(std::min(v, end));
  return vals;
}

Model parse_model(const std::string& descriptor, int k) {
  std::string name = descriptor, body;
  const auto open = descriptor.find('(');
  if (open != std::string::npos) {
    if (descriptor.back() != ')') fail(descriptor, "missing closing parenthesis");
    name = descriptor.substr(0, open);
    body = descriptor.substr(open + 1, descriptor.size() - open - 2);
  }

  Params p{descriptor, {}};
  if (!body.empty()) {
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0)
        fail(descriptor, "parameter '" + item + "' is not key=value");
      if (!p.kv.emplace(item.substr(0, eq), item.substr(eq + 1)).second)
        fail(descriptor, "duplicate parameter '" + item.substr(0, eq) + "'");
    }
  }

  if (name == "bayes") {
    p.done();
    return bayes_mixture(k);
  }
  if (name == "em") {
    p.done();
    return elementwise_mixture(k);
  }
  if (name == "sm") {
    p.done();
    return switching_method(k);
  }
  if (name == "fs") {
    const double alpha = p.number("alpha");
    p.done();
    if (!(alpha >= 0.0 && alpha <= 1.0)) fail(descriptor, "alpha must lie in [0,1]");
    return fixed_share(k, alpha);
  }
  if (name == "dsr") {
    const std::string kind = p.take("kind");
    const double c = p.number_or("c", 1.0);
    p.done();
    if (!(c > 0.0)) fail(descriptor, "c must be positive");
    if (kind == "slow") return decreasing_rate(k, SwitchRateSchedule::slow(c));
    if (kind == "fast") return decreasing_rate(k, SwitchRateSchedule::fast(c));
    fail(descriptor, "kind must be slow or fast");
  }
  if (name == "fsgrid") {
    const std::string text = p.take("alphas");
    p.done();
    std::vector<double> alphas;
    try {
      alphas = parse_range(text);
    } catch (const std::invalid_argument& e) {
      fail(descriptor, e.what());
    }
    for (double a : alphas)
      if (!(a >= 0.0 && a <= 1.0)) fail(descriptor, "grid rates must lie in [0,1]");
    Model m = fixed_share_grid(k, alphas);
    m.params = "alphas=" + text;  // keep the compact range form
    return m;
  }
  if (name == "rl") {
    const std::string kind = p.take_or("tau", "fat");
    const double theta = p.number_or("theta", 0.0);
    if (!(theta >= 0.0 && theta < 1.0)) fail(descriptor, "theta must lie in [0,1)");
    if (kind == "fat") {
      p.done();
      return run_length_model(k, TailPrior::fat(theta));
    }
    if (kind == "geom") {
      const double alpha = p.number("alpha");
      p.done();
      if (!(alpha > 0.0 && alpha < 1.0)) fail(descriptor, "alpha must lie in (0,1)");
      return run_length_model(k, TailPrior::geometric(alpha, theta));
    }
    fail(descriptor, "tau must be fat or geom");
  }
  if (name == "pd") {
    if (p.has("schedule")) {
      const std::string sched = p.take("schedule");
      p.done();
      if (sched != "dec") fail(descriptor, "schedule must be dec");
      return kernel_drift(k, SwitchRateSchedule::harmonic());
    }
    const double alpha = p.number("alpha");
    p.done();
    if (!(alpha > 0.0 && alpha < 1.0)) fail(descriptor, "alpha must lie in (0,1)");
    return kernel_drift(k, DriftKernel::geometric(alpha));
  }
  if (name == "ks") {
    const double kalpha = p.number("kalpha");
    if (!(kalpha > 0.0 && kalpha < 1.0)) fail(descriptor, "kalpha must lie in (0,1)");
    const DriftKernel kappa = DriftKernel::geometric(kalpha);
    if (p.has("interp")) {
      const std::string interp = p.take("interp");
      if (interp == "sm") {
        p.done();
        return kernel_switch_counts(k, kappa);
      }
      if (interp == "rl") {
        const double theta = p.number_or("theta", 0.0);
        p.done();
        if (!(theta >= 0.0 && theta < 1.0)) fail(descriptor, "theta must lie in [0,1)");
        return kernel_switch_runlength(k, kappa, TailPrior::fat(theta));
      }
      fail(descriptor, "interp must be sm or rl");
    }
    const double alpha = p.number("alpha");
    p.done();
    if (!(alpha >= 0.0 && alpha <= 1.0)) fail(descriptor, "alpha must lie in [0,1]");
    return kernel_switch(k, kappa, SwitchRateSchedule::constant_rate(alpha));
  }
  fail(descriptor, "unknown model name '" + name + "'");
}

}  // namespace eswitch
