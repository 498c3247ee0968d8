#pragma once

#include <cstdint>
#include <optional>

#include "netdet/detectors.hpp"

namespace netdet {

// Counter-based seeding: every trial owns a generator derived from
// (master seed, hypothesis index, trial index), so results do not depend on
// thread scheduling. The generator is a SplitMix64 stream; normals come from
// Box-Muller with a pinned draw order.
uint64_t derive_sub_seed(uint64_t master_seed, int hypothesis_index, uint64_t trial);

class TrialRng {
 public:
  explicit TrialRng(uint64_t seed) : state_(seed) {}
  uint64_t next_u64();
  double uniform();       // [0, 1)
  double uniform_open();  // (0, 1]
  double normal();

 private:
  uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

enum class DetectorKind { MapMean, LdMapCov, OracleInput };

struct TrialPlan {
  long trials = 1;          // per hypothesis
  uint64_t seed = 0;
  DetectorKind detector = DetectorKind::MapMean;
  int threads = 0;          // 0 = hardware concurrency
};

struct EmpiricalReport {
  double p_hat = 0.0;    // prior-weighted misclassification probability
  double std_err = 0.0;  // sqrt(sum_i pi_i^2 r_i (1 - r_i) / n_i)
  long trials_used = 0;  // per hypothesis
  double rate_h1 = 0.0, rate_h2 = 0.0;
  std::optional<double> analytic_pe;  // exact finite-horizon companion when available
};

// One measurement stack y_J[1..N] simulated under the given hypothesis
// (1 or 2), fully determined by sub_seed. Draw order: x[0] (when Sigma0 is
// non-zero), then per step w[k] followed by v[k+1].
Vec simulate_trajectory(const NetworkModel& model, const ScenarioSpec& scenario, int hypothesis,
                        const SensorSet& sensors, uint64_t sub_seed);

// Runs plan.trials trials under each hypothesis, decides with the selected
// detector, and aggregates errors with the scenario priors.
EmpiricalReport estimate_error(const TrialPlan& plan, const NetworkModel& model,
                               const SensorSet& sensors, const ScenarioSpec& scenario);

}  // namespace netdet
