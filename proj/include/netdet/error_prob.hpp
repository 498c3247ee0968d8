#pragma once

#include <optional>

#include "netdet/moments.hpp"

namespace netdet {

// Upper tail of the standard normal, Pr[Z >= t].
double gaussian_q(double t);

// Upper tail of chi-squared with one degree of freedom, Pr[Y >= t] = 2 Q(sqrt(t)).
double chi2_q1(double t);

struct PeResult {
  double value = 0.0;
  bool degenerate = false;  // eta = 0 or R = 1 continuity limit
};

// Error probability of the mean-shift MAP rule under equal priors,
// Q_N(0.5 eta). (The source text prints an extra factor 0.5 that its own
// derivation and any simulation refute; see the tests.) eta = 0 degenerates
// to the blind-guess value 0.5.
PeResult pe_mean(double eta);

// Error probability of the LD-MAP rule under equal priors,
// 0.5 [1 - Q_chi2(1, tau)] + 0.5 Q_chi2(1, tau R), tau = ln R / (R - 1).
// R = 1 degenerates to 0.5; R < 1 is rejected.
PeResult pe_cov(double R);

// Finite-horizon mean-shift SNR, eta_hat = sqrt(mu_delta^T Sigma_c^{-1} mu_delta).
double finite_snr_mean(const StackedMoments& moments);

// Finite-horizon covariance SNR, R_hat = lambda_max(Sigma_bar_1 Sigma_bar_2^{-1}).
double finite_snr_cov(const StackedMoments& moments);

struct AsymMeanSnr {
  double eta = 0.0;
  bool non_nilpotent_warning = false;  // formula exact only in the G^k = 0 limit
};

// Asymptotic mean-shift SNR (infinite-horizon form evaluated at scenario.N):
// eta^2 = N mu~^T [ (L^T L + sigma_v^2 I)^{-1} L^T L ] mu~,
// L = T(1) Sigma_c^{1/2}, mu~ = Sigma_c^{-1/2} (mu2 - mu1).
AsymMeanSnr asym_snr_mean(const NetworkModel& model, const SensorSet& sensors,
                          const ScenarioSpec& scenario, const HinfOptions& opts = {});

// Asymptotic covariance SNR, R = 1 + sigma_v^{-2} ||T(z) Sigma_1^{1/2}||_inf^2.
// Requires sigma_v^2 > 0 and Sigma_2 = 0. A precomputed resolvent grid
// short-circuits the per-sensor-set frequency sweep.
double asym_snr_cov(const NetworkModel& model, const SensorSet& sensors,
                    const ScenarioSpec& scenario, const HinfOptions& opts = {},
                    const ResolventGrid* grid = nullptr);

struct IdenticalStatsSnrs {
  double eta_s = 0.0;
  double R_s = 1.0;
};

// Corollary-1 SNRs for hypotheses N(mu_i 1, sigma_i^2 D):
// eta_s^2 = N mu_delta^2 u^T [sigma_c^2 L^T L + sigma_v^2 I]^{-1} L^T L u,
//   with L = T(1) D^{1/2} and u = D^{-1/2} 1,
// R_s = (sigma_1^2 g + sigma_v^2) / (sigma_2^2 g + sigma_v^2),
//   with g = ||T(z) D^{1/2}||_inf^2. Requires sigma_1^2 >= sigma_2^2.
IdenticalStatsSnrs identical_stats_snrs(const NetworkModel& model, const SensorSet& sensors,
                                        const ScenarioSpec& scenario, const HinfOptions& opts = {},
                                        const ResolventGrid* grid = nullptr);

// Scalar SNR/error bundle for one sensor set.
struct SnrReport {
  std::optional<double> eta_hat;   // finite horizon
  std::optional<double> eta_asym;
  std::optional<double> R_hat;
  std::optional<double> R_asym;
  std::optional<double> tau;       // ln R / (R - 1) at the asymptotic R
  int N = 0;
  bool non_nilpotent_warning = false;
};

}  // namespace netdet
