#include "netdet/detectors.hpp"

#include <cmath>
#include <stdexcept>

#include "netdet/error_prob.hpp"

namespace netdet {

namespace {

double scale_of(const Mat& A) { return std::max(1.0, A.size() ? A.cwiseAbs().maxCoeff() : 0.0); }

void require_common_covariance(const StackedMoments& m) {
  double scale = std::max(scale_of(m.Sigma_bar_1), scale_of(m.Sigma_bar_2));
  if ((m.Sigma_bar_1 - m.Sigma_bar_2).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument("not a mean-shift model: Sigma_bar_1 != Sigma_bar_2");
  }
}

double gamma_of(double pi1, double pi2) {
  if (!(pi1 > 0.0 && pi2 > 0.0)) throw std::invalid_argument("priors must be non-zero");
  return std::log(pi1 / pi2);
}

}  // namespace

MeanShiftRule build_mean_rule(const StackedMoments& moments, double pi1, double pi2) {
  require_common_covariance(moments);
  const Mat Sc = 0.5 * (moments.Sigma_bar_1 + moments.Sigma_bar_2);
  Eigen::LLT<Mat> llt(Sc);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Mat> es(Sc, Eigen::EigenvaluesOnly);
    double lmax = std::max(es.eigenvalues().maxCoeff(), 0.0);
    int rank = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      if (es.eigenvalues()(i) > 1e-12 * std::max(lmax, 1.0)) ++rank;
    }
    throw std::invalid_argument("singular common covariance: rank " + std::to_string(rank) + " of " +
                                std::to_string(Sc.rows()));
  }
  const Vec mu_delta = moments.mu_bar_2 - moments.mu_bar_1;
  const Vec sol = llt.solve(mu_delta);
  MeanShiftRule rule;
  rule.w = 2.0 * sol;
  rule.threshold = 2.0 * gamma_of(pi1, pi2) + sol.dot(moments.mu_bar_1 + moments.mu_bar_2);
  return rule;
}

Hypothesis CovShiftRule::decide(const Vec& Y) const {
  const double y = b.dot(Y);
  const double lhs = std::log(d1 / d2) - 2.0 * gamma;
  const double dev = y - mu_c_proj;
  const double rhs = dev * dev * (1.0 / d2 - 1.0 / d1);
  return lhs > rhs ? Hypothesis::H2 : Hypothesis::H1;
}

CovShiftRule build_cov_rule(const StackedMoments& moments, const Vec& b, double pi1, double pi2) {
  double mu_scale = 1.0 + std::max(moments.mu_bar_1.cwiseAbs().maxCoeff(), moments.mu_bar_2.cwiseAbs().maxCoeff());
  if ((moments.mu_bar_1 - moments.mu_bar_2).cwiseAbs().maxCoeff() > 1e-10 * mu_scale) {
    throw std::invalid_argument("not a covariance-shift model: mu_bar_1 != mu_bar_2");
  }
  CovShiftRule rule;
  rule.b = b;
  rule.gamma = gamma_of(pi1, pi2);
  rule.mu_c_proj = b.dot(moments.mu_bar_1);
  rule.d1 = b.dot(moments.Sigma_bar_1 * b);
  rule.d2 = b.dot(moments.Sigma_bar_2 * b);
  if (!(rule.d1 > 0.0) || !(rule.d2 > 0.0)) {
    throw std::invalid_argument("discriminant variances must be positive");
  }
  if (std::abs(rule.d1 - rule.d2) <= 1e-10 * std::max(rule.d1, rule.d2)) {
    throw std::invalid_argument("not a covariance-shift model along b: d1 = d2");
  }
  return rule;
}

Discriminant optimal_discriminant(const Mat& Sigma_bar_1, const Mat& Sigma_bar_2) {
  if (Sigma_bar_1.rows() != Sigma_bar_2.rows() || Sigma_bar_1.rows() != Sigma_bar_1.cols()) {
    throw std::invalid_argument("covariance dimension mismatch");
  }
  Eigen::LLT<Mat> llt(Sigma_bar_2);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("optimal_discriminant: Sigma_bar_2 is not positive definite");
  }
  const auto L = llt.matrixL();
  Mat X = L.solve(Sigma_bar_1);         // L^{-1} S1
  Mat W = L.solve(X.transpose());       // L^{-1} S1 L^{-T}
  W = 0.5 * (W + W.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Mat> es(W);
  const Vec& lam = es.eigenvalues();  // ascending
  const int n = static_cast<int>(lam.size());
  const double lmax = lam(n - 1);
  int pick = n - 1;
  // Ties resolve to the lowest index of the degenerate block.
  const double tie_tol = 1e-10 * std::max(std::abs(lmax), 1.0);
  while (pick > 0 && lam(pick - 1) >= lmax - tie_tol) --pick;

  Vec v = es.eigenvectors().col(pick);
  Vec b = llt.matrixU().solve(v);  // L^{-T} v
  b.normalize();
  for (int i = 0; i < b.size(); ++i) {
    if (std::abs(b(i)) > 1e-12) {
      if (b(i) < 0.0) b = -b;
      break;
    }
  }
  return Discriminant{std::move(b), lmax};
}

Hypothesis SupportMeanRule::decide(const Vec& Y) const {
  if (separated) {
    const Vec z = null_basis.transpose() * Y;
    const double r1 = (z - null_mu1).squaredNorm();
    const double r2 = (z - null_mu2).squaredNorm();
    return r2 < r1 ? Hypothesis::H2 : Hypothesis::H1;
  }
  return w.dot(Y) > threshold ? Hypothesis::H2 : Hypothesis::H1;
}

double SupportMeanRule::analytic_pe(double pi1) const {
  const double pi2 = 1.0 - pi1;
  if (separated) return 0.0;
  if (eta_hat <= 0.0) return gamma >= 0.0 ? pi2 : pi1;
  return pi1 * gaussian_q(gamma / eta_hat + 0.5 * eta_hat) +
         pi2 * gaussian_q(0.5 * eta_hat - gamma / eta_hat);
}

SupportMeanRule build_support_mean_rule(const StackedMoments& moments, double pi1, double pi2) {
  require_common_covariance(moments);
  const Mat Sc = 0.5 * (moments.Sigma_bar_1 + moments.Sigma_bar_2);
  const Vec mu_delta = moments.mu_bar_2 - moments.mu_bar_1;

  Eigen::SelfAdjointEigenSolver<Mat> es(Sc);
  const Vec& lam = es.eigenvalues();
  const int n = static_cast<int>(lam.size());
  const double lmax = std::max(lam(n - 1), 0.0);
  const double rank_tol = 1e-12 * std::max(lmax, 1.0);

  SupportMeanRule rule;
  rule.gamma = gamma_of(pi1, pi2);

  std::vector<int> null_idx, range_idx;
  for (int i = 0; i < n; ++i) (lam(i) > rank_tol ? range_idx : null_idx).push_back(i);

  if (!null_idx.empty()) {
    rule.null_basis.resize(n, static_cast<int>(null_idx.size()));
    for (size_t k = 0; k < null_idx.size(); ++k) rule.null_basis.col(k) = es.eigenvectors().col(null_idx[k]);
    rule.null_mu1 = rule.null_basis.transpose() * moments.mu_bar_1;
    rule.null_mu2 = rule.null_basis.transpose() * moments.mu_bar_2;
    double mu_scale = 1.0 + std::max(moments.mu_bar_1.cwiseAbs().maxCoeff(), moments.mu_bar_2.cwiseAbs().maxCoeff());
    rule.separated = (rule.null_mu1 - rule.null_mu2).cwiseAbs().maxCoeff() > 1e-9 * mu_scale;
  }

  Vec half_w = Vec::Zero(n);
  for (int i : range_idx) {
    const Vec v = es.eigenvectors().col(i);
    half_w += v * (v.dot(mu_delta) / lam(i));
  }
  rule.w = 2.0 * half_w;
  rule.threshold = 2.0 * rule.gamma + half_w.dot(moments.mu_bar_1 + moments.mu_bar_2);
  rule.eta_hat = std::sqrt(std::max(0.0, half_w.dot(mu_delta)));
  return rule;
}

}  // namespace netdet
