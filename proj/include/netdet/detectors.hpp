#pragma once

#include "netdet/moments.hpp"

namespace netdet {

enum class Hypothesis { H1, H2 };

// MAP rule for the mean-shift model (common covariance):
// decide H2 iff w^T Y > threshold, with w = 2 Sigma_c^{-1} mu_delta and
// threshold = 2 gamma + mu_delta^T Sigma_c^{-1} (mu1 + mu2).
// Ties decide H1.
struct MeanShiftRule {
  Vec w;
  double threshold = 0.0;

  Hypothesis decide(const Vec& Y) const { return w.dot(Y) > threshold ? Hypothesis::H2 : Hypothesis::H1; }
};

MeanShiftRule build_mean_rule(const StackedMoments& moments, double pi1, double pi2);

// LD-MAP rule on the scalar discriminant y = b^T Y:
// decide H2 iff ln(d1/d2) - 2 gamma > (y - b^T mu_c)^2 (1/d2 - 1/d1).
struct CovShiftRule {
  Vec b;
  double mu_c_proj = 0.0;
  double d1 = 0.0, d2 = 0.0;
  double gamma = 0.0;

  Hypothesis decide(const Vec& Y) const;
};

CovShiftRule build_cov_rule(const StackedMoments& moments, const Vec& b, double pi1, double pi2);

struct Discriminant {
  Vec b;          // unit norm, first non-negligible entry positive
  double R_hat = 0.0;  // lambda_max(Sigma_bar_1 Sigma_bar_2^{-1})
};

// Maximizer of b^T S1 b / b^T S2 b via Cholesky whitening of S2 and a
// symmetric eigensolve. S2 must be positive definite.
Discriminant optimal_discriminant(const Mat& Sigma_bar_1, const Mat& Sigma_bar_2);

inline Hypothesis decide(const MeanShiftRule& rule, const Vec& Y) { return rule.decide(Y); }
inline Hypothesis decide(const CovShiftRule& rule, const Vec& Y) { return rule.decide(Y); }

// Exact MAP for the mean-shift model allowing a singular common covariance
// (the sigma_v^2 = 0 regime). The observation decomposes into the range of
// Sigma_c, where the usual quadratic rule applies with the pseudo-inverse,
// and its orthogonal complement, where Y is deterministic given the
// hypothesis; if the projected means differ there, the decision is almost
// surely error-free.
struct SupportMeanRule {
  Vec w;
  double threshold = 0.0;
  double gamma = 0.0;
  bool separated = false;
  Mat null_basis;          // columns spanning null(Sigma_c)
  Vec null_mu1, null_mu2;  // projected means
  double eta_hat = 0.0;    // SNR of the range-space rule

  double analytic_pe(double pi1) const;  // exact error probability of this rule
  Hypothesis decide(const Vec& Y) const;
};

SupportMeanRule build_support_mean_rule(const StackedMoments& moments, double pi1, double pi2);

}  // namespace netdet
