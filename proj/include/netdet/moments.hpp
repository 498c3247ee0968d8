#pragma once

#include <complex>
#include <optional>
#include <string>

#include "netdet/graph.hpp"

namespace netdet {

using CMat = Eigen::MatrixXcd;

// Sensor set J with selector C (rows e_j^T) and measurement noise variance.
struct SensorSet {
  NodeList nodes;      // 1-based, ordered
  Mat C;               // m x n selector
  double sigma_v2 = 0.0;

  static SensorSet make(const NetworkModel& model, NodeList nodes, double sigma_v2);
  int size() const { return static_cast<int>(nodes.size()); }
};

enum class ModelKind { MeanShift, CovShift, IdenticalStats };

// Hypothesis pair for the stacked detection problem. For IdenticalStats the
// scalar parameterization (mu_i * 1, sigma_i^2 * D) is kept alongside the
// expanded matrices.
struct ScenarioSpec {
  ModelKind kind = ModelKind::MeanShift;
  Vec mu1, mu2;        // r-vectors
  Mat Sigma1, Sigma2;  // r x r PSD
  double pi1 = 0.5, pi2 = 0.5;
  Mat Sigma0;          // n x n initial-state covariance
  double sigma_v2 = 0.0;
  int N = 1;

  // Scalar form (IdenticalStats): w ~ N(mu_i * 1, sigma_i^2 * D).
  double mu1_s = 0.0, mu2_s = 0.0;
  double sigma1_sq = 0.0, sigma2_sq = 0.0;
  Mat D;

  double gamma() const;  // ln(pi1/pi2)
  void validate(int n, int r) const;

  static ScenarioSpec mean_shift(Vec mu1, Vec mu2, Mat Sigma_c, double sigma_v2, int N,
                                 double pi1 = 0.5, Mat Sigma0 = Mat());
  static ScenarioSpec cov_shift(Mat Sigma1, Mat Sigma2, double sigma_v2, int N, int r,
                                double pi1 = 0.5, Vec mu_c = Vec(), Mat Sigma0 = Mat());
  static ScenarioSpec identical_stats(double mu1, double mu2, double s1_sq, double s2_sq, Mat D,
                                      double sigma_v2, int N, int r, double pi1 = 0.5);
};

// Stacked measurement moments over the horizon: mu_bar_i = F (1_N (x) mu_i),
// Sigma_bar_i = O Sigma0 O^T + F (I_N (x) Sigma_i) F^T + sigma_v^2 I.
struct StackedMoments {
  Vec mu_bar_1, mu_bar_2;   // mN
  Mat Sigma_bar_1, Sigma_bar_2;
  Mat O;                    // mN x n, rows C G^p for p = 1..N
  Mat F;                    // mN x rN, block (p,q) = C G^{p-q} Pi for p >= q
  int m = 0, r = 0, N = 0;
};

StackedMoments stacked_moments(const NetworkModel& model, const SensorSet& sensors,
                               const ScenarioSpec& scenario);

// T(z) = C (zI - G)^{-1} Pi via a linear solve. Rejects z within tolerance of
// an eigenvalue of G.
CMat transfer(const NetworkModel& model, const SensorSet& sensors, std::complex<double> z);

struct HinfOptions {
  int grid_points = 4096;
  double rel_tol = 1e-8;  // golden-section refinement stop
};

struct HinfResult {
  double gain = 0.0;
  double omega = 0.0;  // frequency achieving the gain
};

// sup over |z| = 1 of sigma_max(T(z) W), dense grid plus golden-section
// refinement around the grid maximum. Requires a stable G.
HinfResult hinf_gain(const NetworkModel& model, const SensorSet& sensors, const Mat& W,
                     const HinfOptions& opts = {});

// Precomputed resolvent inputs X_k = (z_k I - G)^{-1} Pi on the frequency
// grid, shared across sensor sets (the gain of C X_k W is a row selection).
struct ResolventGrid {
  int points = 0;
  std::vector<CMat> X;
};

ResolventGrid make_resolvent_grid(const NetworkModel& model, int grid_points = 4096);

HinfResult hinf_gain_grid(const NetworkModel& model, const ResolventGrid& grid,
                          const SensorSet& sensors, const Mat& W, double rel_tol = 1e-8);

struct SubsystemSvExtremes {
  double sup_rho_bar = 0.0;   // sup over |z|=1 of sigma_max(T_s(z))
  double inf_rho_lo = 0.0;    // inf over |z|=1 of the minimum gain of T_s(z)
  double rho_bar_1 = 0.0;     // sigma_max at z = 1
  double rho_lo_1 = 0.0;      // minimum gain at z = 1
};

// Extremal singular values of T_s(z) = (zI - G_pp)^{-1} G_pc over the unit
// circle and at z = 1. Requires the spectrum of G_pp off the unit circle.
// The minimum gain is 0 whenever G_pc has more columns than rows.
SubsystemSvExtremes subsystem_sv_extremes(const CutsetPartition& partition,
                                          const HinfOptions& opts = {});

// Symmetric PSD square root with eigenvalue clamping (negatives below
// tol * lambda_max are treated as zero; a larger violation is rejected).
Mat psd_sqrt(const Mat& S, double tol = 1e-12);

}  // namespace netdet
