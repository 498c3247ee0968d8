#pragma once

#include "netdet/error_prob.hpp"

namespace netdet {

enum class RankCriterion { Mean, Covariance };

struct RankedPlacement {
  NodeList subset;
  std::optional<double> pe_mean_analytic;
  std::optional<double> pe_cov_analytic;
  int rank = 0;         // 1 = lowest error probability of the selected criterion
  int worst_first_label = 0;  // 1 = highest error probability
  bool is_cutset = false;
};

struct RankingResult {
  std::vector<RankedPlacement> ranking;  // ascending by the selected criterion
  std::vector<std::pair<NodeList, std::string>> excluded;  // subset, reason
  RankCriterion criterion = RankCriterion::Mean;
};

// All k-subsets of the pool whose every node is at influence distance >= d
// from the input set, in lexicographic order.
std::vector<NodeList> enumerate_subsets(const NetworkModel& model, const NodeList& pool, int k, int d);

// Asymptotic per-subset error probabilities (Lemma 2 / Corollary 1 forms),
// sorted ascending by the selected criterion; ties break lexicographically.
RankingResult rank_placements(const NetworkModel& model, const ScenarioSpec& scenario,
                              const std::vector<NodeList>& subsets, RankCriterion criterion,
                              const NodeList& cutset = {}, const HinfOptions& opts = {});

}  // namespace netdet
