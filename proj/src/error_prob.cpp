#include "netdet/error_prob.hpp"

#include <cmath>
#include <stdexcept>

namespace netdet {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Real T(1) = C (I - G)^{-1} Pi.
Mat transfer_at_one(const NetworkModel& model, const SensorSet& sensors) {
  Mat A = Mat::Identity(model.node_count(), model.node_count()) - model.G();
  return sensors.C * Eigen::PartialPivLU<Mat>(A).solve(model.Pi());
}

// Positive-definite square root plus its inverse; rejects singular input.
std::pair<Mat, Mat> pd_sqrt_and_inv(const Mat& S, const std::string& name) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (S + S.transpose()));
  const Vec& lam = es.eigenvalues();
  double lmax = std::max(lam.maxCoeff(), 0.0);
  require(lam.minCoeff() > 1e-12 * std::max(lmax, 1.0), name + " must be positive definite");
  Vec sq = lam.cwiseSqrt();
  Mat half = es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().transpose();
  Mat inv_half = es.eigenvectors() * sq.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  return {half, inv_half};
}

void require_stable(const NetworkModel& model, const char* who) {
  if (!model.is_stable()) {
    throw std::invalid_argument(std::string(who) + ": G is not stable (spectral radius " +
                                std::to_string(model.spectral_radius()) + ")");
  }
}

// x^T [(A + s I)^{-1} A] x for symmetric PSD A; s = 0 uses the projector
// onto range(A).
double filtered_quadratic(const Mat& A, const Vec& x, double sigma_v2) {
  if (sigma_v2 > 0.0) {
    Mat M = A;
    M.diagonal().array() += sigma_v2;
    return x.dot(Eigen::LLT<Mat>(M).solve(A * x));
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(A);
  double lmax = std::max(es.eigenvalues().maxCoeff(), 0.0);
  double tol = 1e-12 * std::max(lmax, 1.0);
  double acc = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > tol) {
      double c = es.eigenvectors().col(i).dot(x);
      acc += c * c;
    }
  }
  return acc;
}

}  // namespace

double gaussian_q(double t) { return 0.5 * std::erfc(t * kInvSqrt2); }

double chi2_q1(double t) {
  require(t >= 0.0, "chi2_q1: argument must be non-negative");
  return std::erfc(std::sqrt(0.5 * t));
}

PeResult pe_mean(double eta) {
  require(eta >= 0.0, "pe_mean: eta must be non-negative");
  PeResult r;
  r.degenerate = eta == 0.0;
  r.value = gaussian_q(0.5 * eta);
  return r;
}

PeResult pe_cov(double R) {
  require(std::isfinite(R), "pe_cov: R must be finite");
  require(R >= 1.0 - 1e-12, "pe_cov: R must be > 1 (got " + std::to_string(R) + ")");
  PeResult r;
  if (R - 1.0 <= 1e-12) {
    r.degenerate = true;
    r.value = 0.5;
    return r;
  }
  const double e = R - 1.0;
  const double tau = std::log1p(e) / e;
  r.value = 0.5 * (1.0 - chi2_q1(tau)) + 0.5 * chi2_q1(tau * R);
  return r;
}

double finite_snr_mean(const StackedMoments& moments) {
  double scale = std::max(1.0, std::max(moments.Sigma_bar_1.cwiseAbs().maxCoeff(),
                                        moments.Sigma_bar_2.cwiseAbs().maxCoeff()));
  require((moments.Sigma_bar_1 - moments.Sigma_bar_2).cwiseAbs().maxCoeff() <= 1e-10 * scale,
          "finite_snr_mean: not a mean-shift model");
  Eigen::LLT<Mat> llt(moments.Sigma_bar_1);
  require(llt.info() == Eigen::Success, "finite_snr_mean: singular common covariance");
  const Vec mu_delta = moments.mu_bar_2 - moments.mu_bar_1;
  return std::sqrt(std::max(0.0, mu_delta.dot(llt.solve(mu_delta))));
}

double finite_snr_cov(const StackedMoments& moments) {
  Eigen::LLT<Mat> llt(moments.Sigma_bar_2);
  require(llt.info() == Eigen::Success, "finite_snr_cov: Sigma_bar_2 is not positive definite");
  const auto L = llt.matrixL();
  Mat X = L.solve(moments.Sigma_bar_1);
  Mat W = L.solve(X.transpose());
  W = 0.5 * (W + W.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(W, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

AsymMeanSnr asym_snr_mean(const NetworkModel& model, const SensorSet& sensors,
                          const ScenarioSpec& scenario, const HinfOptions&) {
  require_stable(model, "asym_snr_mean");
  const int r = model.input_count();
  scenario.validate(model.node_count(), r);
  double s_scale = std::max(1.0, std::max(scenario.Sigma1.cwiseAbs().maxCoeff(),
                                          scenario.Sigma2.cwiseAbs().maxCoeff()));
  require((scenario.Sigma1 - scenario.Sigma2).cwiseAbs().maxCoeff() <= 1e-10 * s_scale,
          "asym_snr_mean: scenario is not mean-shift (Sigma1 != Sigma2)");

  auto [S_half, S_inv_half] = pd_sqrt_and_inv(scenario.Sigma1, "Sigma_c");
  Mat L = transfer_at_one(model, sensors) * S_half;
  Vec mu_tilde = S_inv_half * (scenario.mu2 - scenario.mu1);
  Mat A = L.transpose() * L;

  AsymMeanSnr out;
  out.non_nilpotent_warning = !model.is_nilpotent();
  out.eta = std::sqrt(std::max(0.0, scenario.N * filtered_quadratic(A, mu_tilde, scenario.sigma_v2)));
  return out;
}

double asym_snr_cov(const NetworkModel& model, const SensorSet& sensors,
                    const ScenarioSpec& scenario, const HinfOptions& opts, const ResolventGrid* grid) {
  require_stable(model, "asym_snr_cov");
  scenario.validate(model.node_count(), model.input_count());
  require(scenario.sigma_v2 > 0.0, "asym_snr_cov: requires sigma_v^2 > 0 (R undefined otherwise)");
  require(scenario.Sigma2.cwiseAbs().maxCoeff() == 0.0, "asym_snr_cov: requires Sigma_2 = 0");
  Mat S1_half = psd_sqrt(scenario.Sigma1);
  double g = grid ? hinf_gain_grid(model, *grid, sensors, S1_half, opts.rel_tol).gain
                  : hinf_gain(model, sensors, S1_half, opts).gain;
  return 1.0 + g * g / scenario.sigma_v2;
}

IdenticalStatsSnrs identical_stats_snrs(const NetworkModel& model, const SensorSet& sensors,
                                        const ScenarioSpec& scenario, const HinfOptions& opts,
                                        const ResolventGrid* grid) {
  require_stable(model, "identical_stats_snrs");
  require(scenario.kind == ModelKind::IdenticalStats, "identical_stats_snrs: scenario must be identical-stats");
  const int r = model.input_count();
  scenario.validate(model.node_count(), r);
  require(scenario.D.rows() == r && scenario.D.cols() == r, "D must be r x r");

  auto [D_half, D_inv_half] = pd_sqrt_and_inv(scenario.D, "D");
  Mat L = transfer_at_one(model, sensors) * D_half;
  Mat A = L.transpose() * L;
  Vec u = D_inv_half * Vec::Ones(r);
  const double sigma_c2 = scenario.sigma1_sq;  // common variance of the mean-shift pair

  IdenticalStatsSnrs out;
  const double mu_delta = scenario.mu2_s - scenario.mu1_s;
  // u^T (sigma_c^2 A + sigma_v^2 I)^{-1} A u
  double quad;
  if (sigma_c2 > 0.0) {
    quad = filtered_quadratic(sigma_c2 * A, u, scenario.sigma_v2) / sigma_c2;
  } else {
    require(scenario.sigma_v2 > 0.0, "identical_stats_snrs: sigma_c^2 = 0 needs sigma_v^2 > 0");
    quad = u.dot(A * u) / scenario.sigma_v2;
  }
  out.eta_s = std::sqrt(std::max(0.0, scenario.N * mu_delta * mu_delta * quad));

  require(scenario.sigma1_sq >= scenario.sigma2_sq,
          "identical_stats_snrs: requires sigma_1^2 >= sigma_2^2 for R_s");
  if (scenario.sigma1_sq == scenario.sigma2_sq) {
    out.R_s = 1.0;
  } else {
    double gain = grid ? hinf_gain_grid(model, *grid, sensors, D_half, opts.rel_tol).gain
                       : hinf_gain(model, sensors, D_half, opts).gain;
    double g = gain * gain;
    double num = scenario.sigma1_sq * g + scenario.sigma_v2;
    double den = scenario.sigma2_sq * g + scenario.sigma_v2;
    require(den > 0.0, "identical_stats_snrs: R_s undefined (zero gain and zero sensor noise)");
    out.R_s = num / den;
  }
  return out;
}

}  // namespace netdet
