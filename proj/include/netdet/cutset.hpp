#pragma once

#include <string>
#include <vector>

#include "netdet/error_prob.hpp"

namespace netdet {

enum class VerdictRegime { Noiseless, Noisy };
enum class Conclusion { CutsetNoWorse, CutsetWorse, Inconclusive };
enum class AppliesTo { Mean, Covariance, Both };

// Tri-state outcome of a comparison theorem. The theorems are sufficient
// conditions only; when no hypothesis holds the verdict stays inconclusive.
struct ComparisonVerdict {
  VerdictRegime regime = VerdictRegime::Noisy;
  std::string condition_checked;
  std::vector<double> condition_value;
  Conclusion conclusion = Conclusion::Inconclusive;
  AppliesTo applies_to = AppliesTo::Both;
};

std::string to_string(Conclusion c);

// Noiseless measurements: the cutset is never worse than the partitioned
// set, for any weights and horizon. Rejects sigma_v^2 > 0.
ComparisonVerdict noiseless_verdict(double sigma_v2);

struct NoisyVerdicts {
  ComparisonVerdict mean;
  ComparisonVerdict cov;
  SubsystemSvExtremes sv;
  // Direct asymptotic error probabilities for the report, when the scenario
  // supports them.
  std::optional<double> pe_mean_cutset, pe_mean_partition;
  std::optional<double> pe_cov_cutset, pe_cov_partition;
};

// Noisy-measurement comparison via the extremal singular values of
// T_s(z) = (zI - G_pp)^{-1} G_pc:
//   rho_bar(1) <= 1      -> cutset no worse (mean)
//   rho_lo(1)  >  1      -> cutset worse    (mean)
//   sup rho_bar(z) <= 1  -> cutset no worse (covariance)
//   inf rho_lo(z)  >  1  -> cutset worse    (covariance)
NoisyVerdicts noisy_verdict(const CutsetPartition& partition, const NetworkModel& model,
                            const SensorSet& sensors_cutset, const SensorSet& sensors_partition,
                            const ScenarioSpec& scenario, const HinfOptions& opts = {});

struct NonnegCriteria {
  double gtilde_inf_norm = 0.0;  // ||[G_pp G_pc]||_inf
  double bound = 0.0;            // 1 / sqrt(card(P))
  bool bound_check = false;      // norm <= bound => cutset no worse, both models
  bool rowsum_gate = false;      // card(C_d) == 1
  double min_row_sum = 0.0;
  bool rowsum_check = false;     // gate && all row sums > 1 => cutset worse vs subsets of P
};

// Algebraic sufficient conditions for non-negative adjacency matrices.
// Rejects a G with negative entries (the criteria are inapplicable).
NonnegCriteria nonneg_criteria(const CutsetPartition& partition, const NetworkModel& model);

// Closed-form (I - G)^{-1} for the tridiagonal Toeplitz line via the
// theta/phi determinant recursions, accumulated in extended precision.
Mat toeplitz_inverse_entries(int n, double a, double b, double c);

enum class ProfileOrdering { Decreasing, Increasing, NonMonotone, Constant };

// Column-q magnitude profile of (I - G)^{-1}. With a + b + c < 1 the profile
// decreases strictly in l. With b = 0 and a + c > 1 the entries equal
// c^{l-q} / (1-a)^{l-q+1} and grow geometrically, so the node farthest from
// the input carries the largest gain; the classifier reports the ordering it
// actually observes rather than assuming either regime.
struct GainProfile {
  std::vector<int> nodes;       // l = q .. n
  std::vector<double> values;   // |(I - G)^{-1}_{l,q}|
  ProfileOrdering observed = ProfileOrdering::Constant;
  bool decreasing_predicted = false;  // a + b + c < 1 regime
};

GainProfile toeplitz_gain_profile(int n, double a, double b, double c, int q);

struct SisoOrderings {
  std::vector<int> nodes;  // l = j .. n (the cutset node first)
  std::vector<double> eta_s, R_s, pe_mean_v, pe_cov_v;
  double gtilde_inf_norm = 0.0;
  double min_row_sum = 0.0;
  bool cutset_dominates_mean = false;   // P_em(j) <= P_em(l) for all l in P
  bool cutset_dominates_cov = false;
  bool cutset_dominated_mean = false;   // P_em(j) >= P_em(l) for all l in P
  bool cutset_dominated_cov = false;
};

// Per-node error probabilities on the Toeplitz line with input q and cutset
// node j, using the identical-statistics SNRs.
SisoOrderings siso_orderings(int n, double a, double b, double c, int q, int j,
                             const ScenarioSpec& scenario, const HinfOptions& opts = {});

}  // namespace netdet
