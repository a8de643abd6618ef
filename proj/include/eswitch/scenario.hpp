// Synthetic scenario generation: piecewise-constant best experts (the
// switching comparator class) and drifting best experts (the parameter-drift
// comparator class).  Deterministic given the seed.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "eswitch/data.hpp"

namespace eswitch {

struct ScenarioConfig {
  enum class Kind { piecewise, drift };
  Kind kind = Kind::piecewise;
  int k = 0;
  int t = 0;
  uint64_t seed = 0;

  // piecewise: blocks 2..m start at these rounds (1-based, strictly
  // increasing, all in 2..t); per-block planted experts default to 0,1,2,...
  std::vector<int> boundaries;
  std::vector<int> experts;
  double p_hi = 0.8;  // planted expert's likelihood level
  double p_lo = 0.2;  // every other expert's level

  // drift: explicit expert path; likelihood decays per index distance from
  // the planted expert: p_hi * decay^{distance}.
  std::vector<int> path;
  double decay = 0.5;

  static ScenarioConfig from_keyvalue(
      const std::vector<std::pair<std::string, std::string>>& kv,
      const std::string& name);
};

struct Scenario {
  LikelihoodMatrix data;
  ReferenceSequence reference;  // the planted comparator
};

// Applies config defaults (e.g. planted experts 0,1,2,... when unset), then
// samples; throws std::invalid_argument on structurally invalid configs.  The
// ESWITCH_SEED environment variable, when set, overrides config.seed.
Scenario generate(const ScenarioConfig& config);

// The project-wide portable uniform: mt19937_64 output mapped to [0,1) by
// (x >> 11) * 2^-53, identical across platforms (distribution classes are
// implementation-defined and deliberately avoided).
class UniformSource {
 public:
  explicit UniformSource(uint64_t seed) : gen_(seed) {}
  double next() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace eswitch
