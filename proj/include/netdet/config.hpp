#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "netdet/moments.hpp"

namespace netdet {

struct ToeplitzSpec {
  int n = 0;
  double a = 0.0, b = 0.0, c = 0.0;
};

// Parsed CLI configuration: one network source, a scenario block, and
// optional partition / sensor-set / ranking / toeplitz-analysis blocks.
struct RunConfig {
  std::optional<std::string> edge_list_path;
  int nodes = 0;
  std::optional<ToeplitzSpec> toeplitz;
  NodeList inputs;

  bool has_scenario = false;
  ScenarioSpec scenario;

  std::optional<NodeList> S, C_d, P;
  int d = 1;
  std::vector<NodeList> sensor_sets;

  std::optional<NodeList> rank_pool;  // default: C_d union P
  int rank_k = 0;                     // default: card(C_d)
  std::string rank_criterion = "mean";

  int toeplitz_q = 0, toeplitz_j = 0;

  int grid = 4096;
  long trials = 10000;
  uint64_t seed = 0;
  int threads = 0;
  std::string out_path;
  std::string rules_out;  // analyze: serialized decision rules
  std::string detector = "map_mean";

  NetworkModel build_model() const;
  HinfOptions hinf_options() const { return HinfOptions{grid, 1e-8}; }
};

RunConfig load_config(const std::string& path);

}  // namespace netdet
