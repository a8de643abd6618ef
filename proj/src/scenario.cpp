#include "eswitch/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "eswitch/io.hpp"

namespace eswitch {

namespace {

[[noreturn]] void bad(const std::string& name, const std::string& why) {
  throw std::invalid_argument(name + ": " + why);
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> out;
  for (const std::string& part : split(text, ','))
    out.push_back(static_cast<int>(parse_integer(part, what)));
  return out;
}

// Applies defaults and checks structural invariants.  Idempotent, so both the
// keyvalue parser and generate() itself can run it; `name` prefixes errors.
ScenarioConfig normalized(ScenarioConfig cfg, const std::string& name) {
  if (cfg.k < 1) bad(name, "k must be >= 1");
  if (!(cfg.p_lo > 0.0 && cfg.p_lo <= cfg.p_hi && cfg.p_hi <= 1.0))
    bad(name, "need 0 < p_lo <= p_hi <= 1");

  if (cfg.kind == ScenarioConfig::Kind::piecewise) {
    if (cfg.t < 1) bad(name, "piecewise scenarios need t >= 1");
    int prev = 1;
    for (int b : cfg.boundaries) {
      if (b <= prev || b > cfg.t)
        bad(name, "boundaries must be strictly increasing block starts in 2..t");
      prev = b;
    }
    const int m = static_cast<int>(cfg.boundaries.size()) + 1;
    if (cfg.experts.empty()) {
      for (int b = 0; b < m; ++b) cfg.experts.push_back(b % cfg.k);
    } else if (static_cast<int>(cfg.experts.size()) != m) {
      bad(name, "experts list must name one expert per block");
    }
    for (int e : cfg.experts)
      if (e < 0 || e >= cfg.k) bad(name, "planted experts must lie in 0..k-1");
  } else {
    if (cfg.path.empty()) bad(name, "drift scenarios need path=");
    if (cfg.t == 0) cfg.t = static_cast<int>(cfg.path.size());
    if (cfg.t != static_cast<int>(cfg.path.size()))
      bad(name, "t disagrees with the path length");
    for (int e : cfg.path)
      if (e < 0 || e >= cfg.k) bad(name, "path experts must lie in 0..k-1");
    if (!(cfg.decay > 0.0 && cfg.decay <= 1.0)) bad(name, "decay must lie in (0,1]");
  }
  return cfg;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_keyvalue(
    const std::vector<std::pair<std::string, std::string>>& kv, const std::string& name) {
  ScenarioConfig cfg;
  bool have_kind = false, have_k = false;
  for (const auto& [key, value] : kv) {
    if (key == "kind") {
      if (value == "piecewise")
        cfg.kind = Kind::piecewise;
      else if (value == "drift")
        cfg.kind = Kind::drift;
      else
        bad(name, "kind must be piecewise or drift, got '" + value + "'");
      have_kind = true;
    } else if (key == "k") {
      cfg.k = static_cast<int>(parse_integer(value, "k"));
      have_k = true;
    } else if (key == "t") {
      cfg.t = static_cast<int>(parse_integer(value, "t"));
    } else if (key == "seed") {
      cfg.seed = static_cast<uint64_t>(parse_integer(value, "seed"));
    } else if (key == "boundaries") {
      cfg.boundaries = parse_int_list(value, "boundaries");
    } else if (key == "experts") {
      cfg.experts = parse_int_list(value, "experts");
    } else if (key == "p_hi") {
      cfg.p_hi = parse_number(value, "p_hi");
    } else if (key == "p_lo") {
      cfg.p_lo = parse_number(value, "p_lo");
    } else if (key == "path") {
      cfg.path = parse_int_list(value, "path");
    } else if (key == "decay") {
      cfg.decay = parse_number(value, "decay");
    } else {
      bad(name, "unknown key '" + key + "'");
    }
  }
  if (!have_kind) bad(name, "missing kind=");
  if (!have_k) bad(name, "missing k=");
  return normalized(std::move(cfg), name);
}

Scenario generate(const ScenarioConfig& raw) {
  const ScenarioConfig config = normalized(raw, "scenario");
  uint64_t seed = config.seed;
  if (const char* env = std::getenv("ESWITCH_SEED"))
    seed = static_cast<uint64_t>(parse_integer(env, "ESWITCH_SEED"));

  // Planted expert per round.
  std::vector<int> planted(config.t);
  if (config.kind == ScenarioConfig::Kind::piecewise) {
    int block = 0;
    for (int i = 0; i < config.t; ++i) {
      if (block + 1 < static_cast<int>(config.experts.size()) &&
          i + 1 == config.boundaries[block])
        ++block;
      planted[i] = config.experts[block];
    }
  } else {
    planted = config.path;
  }

  UniformSource rng(seed);
  Scenario out;
  out.data = LikelihoodMatrix::zeros(config.t, config.k);
  for (int i = 0; i < config.t; ++i) {
    for (int e = 0; e < config.k; ++e) {
      double base;
      if (config.kind == ScenarioConfig::Kind::piecewise) {
        base = e == planted[i] ? config.p_hi : config.p_lo;
      } else {
        base = config.p_hi * std::pow(config.decay, std::abs(e - planted[i]));
      }
      // Multiplicative jitter in [0.9, 1.1), clamped into (0, 1].
      out.data.at(i, e) = std::min(1.0, base * (0.9 + 0.2 * rng.next()));
    }
  }
  out.reference = ReferenceSequence::from_experts(std::move(planted));
  return out;
}

}  // namespace eswitch
