#include "netdet/moments.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace netdet {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void check_symmetric_psd(const Mat& S, const std::string& name, double tol = 1e-10) {
  require(S.rows() == S.cols(), name + " must be square");
  if (S.size() == 0) return;
  double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  require((S - S.transpose()).cwiseAbs().maxCoeff() <= tol * scale, name + " must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
  require(es.eigenvalues().minCoeff() >= -tol * scale, name + " must be positive semidefinite");
}

// Golden-section search for the maximum of f on [lo, hi]; returns (x, f(x)).
template <typename F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double abs_tol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > abs_tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    }
  }
  double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

double sigma_max(const CMat& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(A);
  return svd.singularValues()(0);
}

// Minimum gain min_{||x||=1} ||A x||: zero when A has a non-trivial null
// space by shape, otherwise the smallest singular value.
double min_gain(const CMat& A) {
  if (A.size() == 0) return 0.0;
  if (A.cols() > A.rows()) return 0.0;
  Eigen::JacobiSVD<CMat> svd(A);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

}  // namespace

SensorSet SensorSet::make(const NetworkModel& model, NodeList nodes, double sigma_v2) {
  const int n = model.node_count();
  require(!nodes.empty(), "sensor set must be non-empty");
  require(sigma_v2 >= 0.0, "sensor noise variance must be >= 0");
  std::set<int> seen;
  for (int j : nodes) {
    require(j >= 1 && j <= n, "sensor node " + std::to_string(j) + " out of range");
    require(seen.insert(j).second, "duplicate sensor node " + std::to_string(j));
  }
  SensorSet s;
  s.nodes = std::move(nodes);
  s.sigma_v2 = sigma_v2;
  s.C = Mat::Zero(static_cast<int>(s.nodes.size()), n);
  for (int r = 0; r < static_cast<int>(s.nodes.size()); ++r) s.C(r, s.nodes[r] - 1) = 1.0;
  return s;
}

double ScenarioSpec::gamma() const {
  require(pi1 > 0.0 && pi2 > 0.0, "priors must be non-zero for a MAP rule");
  return std::log(pi1 / pi2);
}

void ScenarioSpec::validate(int n, int r) const {
  require(N >= 1, "horizon N must be >= 1");
  require(pi1 > 0.0 && pi2 > 0.0 && std::abs(pi1 + pi2 - 1.0) <= 1e-12, "priors must be positive and sum to 1");
  require(sigma_v2 >= 0.0, "sigma_v2 must be >= 0");
  require(mu1.size() == r && mu2.size() == r, "mu_i must be r-vectors");
  require(Sigma1.rows() == r && Sigma2.rows() == r, "Sigma_i must be r x r");
  check_symmetric_psd(Sigma1, "Sigma1");
  check_symmetric_psd(Sigma2, "Sigma2");
  if (Sigma0.size() != 0) {
    require(Sigma0.rows() == n && Sigma0.cols() == n, "Sigma0 must be n x n");
    check_symmetric_psd(Sigma0, "Sigma0");
  }
}

ScenarioSpec ScenarioSpec::mean_shift(Vec mu1, Vec mu2, Mat Sigma_c, double sigma_v2, int N,
                                      double pi1, Mat Sigma0) {
  ScenarioSpec s;
  s.kind = ModelKind::MeanShift;
  s.mu1 = std::move(mu1);
  s.mu2 = std::move(mu2);
  s.Sigma1 = Sigma_c;
  s.Sigma2 = std::move(Sigma_c);
  s.pi1 = pi1;
  s.pi2 = 1.0 - pi1;
  s.sigma_v2 = sigma_v2;
  s.N = N;
  s.Sigma0 = std::move(Sigma0);
  return s;
}

ScenarioSpec ScenarioSpec::cov_shift(Mat Sigma1, Mat Sigma2, double sigma_v2, int N, int r,
                                     double pi1, Vec mu_c, Mat Sigma0) {
  ScenarioSpec s;
  s.kind = ModelKind::CovShift;
  s.mu1 = mu_c.size() ? mu_c : Vec::Zero(r);
  s.mu2 = s.mu1;
  s.Sigma1 = std::move(Sigma1);
  s.Sigma2 = std::move(Sigma2);
  s.pi1 = pi1;
  s.pi2 = 1.0 - pi1;
  s.sigma_v2 = sigma_v2;
  s.N = N;
  s.Sigma0 = std::move(Sigma0);
  return s;
}

ScenarioSpec ScenarioSpec::identical_stats(double mu1, double mu2, double s1_sq, double s2_sq,
                                           Mat D, double sigma_v2, int N, int r, double pi1) {
  require(s1_sq >= 0.0 && s2_sq >= 0.0, "sigma_i^2 must be >= 0");
  ScenarioSpec s;
  s.kind = ModelKind::IdenticalStats;
  if (D.size() == 0) D = Mat::Identity(r, r);
  s.mu1 = mu1 * Vec::Ones(r);
  s.mu2 = mu2 * Vec::Ones(r);
  s.Sigma1 = s1_sq * D;
  s.Sigma2 = s2_sq * D;
  s.mu1_s = mu1;
  s.mu2_s = mu2;
  s.sigma1_sq = s1_sq;
  s.sigma2_sq = s2_sq;
  s.D = std::move(D);
  s.pi1 = pi1;
  s.pi2 = 1.0 - pi1;
  s.sigma_v2 = sigma_v2;
  s.N = N;
  return s;
}

Mat psd_sqrt(const Mat& S, double tol) {
  if (S.size() == 0) return S;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (S + S.transpose()));
  Vec lam = es.eigenvalues();
  double scale = std::max(lam.cwiseAbs().maxCoeff(), 1.0);
  for (int i = 0; i < lam.size(); ++i) {
    if (lam(i) < -tol * scale * 10.0) {
      throw std::invalid_argument("psd_sqrt: matrix has a negative eigenvalue " + std::to_string(lam(i)));
    }
    lam(i) = lam(i) > tol * scale ? std::sqrt(lam(i)) : 0.0;
  }
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

StackedMoments stacked_moments(const NetworkModel& model, const SensorSet& sensors,
                               const ScenarioSpec& scenario) {
  const int n = model.node_count();
  const int r = model.input_count();
  const int m = sensors.size();
  scenario.validate(n, r);
  const int N = scenario.N;

  StackedMoments out;
  out.m = m;
  out.r = r;
  out.N = N;

  // H_p = C G^p by iterated products; K_p = H_p Pi.
  std::vector<Mat> H(N + 1);
  H[0] = sensors.C;
  for (int p = 1; p <= N; ++p) H[p] = H[p - 1] * model.G();

  out.O.resize(m * N, n);
  for (int p = 1; p <= N; ++p) out.O.middleRows((p - 1) * m, m) = H[p];

  std::vector<Mat> K(N);
  for (int l = 0; l < N; ++l) K[l] = H[l] * model.Pi();

  out.F = Mat::Zero(m * N, r * N);
  for (int p = 0; p < N; ++p) {
    for (int q = 0; q <= p; ++q) out.F.block(p * m, q * r, m, r) = K[p - q];
  }

  Vec ones_mu1(r * N), ones_mu2(r * N);
  for (int k = 0; k < N; ++k) {
    ones_mu1.segment(k * r, r) = scenario.mu1;
    ones_mu2.segment(k * r, r) = scenario.mu2;
  }
  out.mu_bar_1 = out.F * ones_mu1;
  out.mu_bar_2 = out.F * ones_mu2;

  Mat O_sqrt0;
  if (scenario.Sigma0.size() != 0 && scenario.Sigma0.cwiseAbs().maxCoeff() > 0.0) {
    O_sqrt0 = out.O * psd_sqrt(scenario.Sigma0);
  }

  auto build_cov = [&](const Mat& Sigma_w) {
    Mat A = out.F;
    Mat sw = psd_sqrt(Sigma_w);
    for (int q = 0; q < N; ++q) {
      A.middleCols(q * r, r) = out.F.middleCols(q * r, r) * sw;
    }
    Mat S = Mat::Zero(m * N, m * N);
    S.selfadjointView<Eigen::Lower>().rankUpdate(A);
    if (O_sqrt0.size() != 0) S.selfadjointView<Eigen::Lower>().rankUpdate(O_sqrt0);
    Mat full = S.selfadjointView<Eigen::Lower>();
    full.diagonal().array() += scenario.sigma_v2;
    return full;
  };
  out.Sigma_bar_1 = build_cov(scenario.Sigma1);
  out.Sigma_bar_2 = build_cov(scenario.Sigma2);
  return out;
}

CMat transfer(const NetworkModel& model, const SensorSet& sensors, std::complex<double> z) {
  const double tol = 1e-10 * (1.0 + std::abs(z));
  for (int i = 0; i < model.eigenvalues().size(); ++i) {
    if (std::abs(z - model.eigenvalues()(i)) < tol) {
      throw std::invalid_argument("transfer: z is within tolerance of an eigenvalue of G");
    }
  }
  CMat A = -model.G().cast<std::complex<double>>();
  A.diagonal().array() += z;
  CMat X = Eigen::PartialPivLU<CMat>(A).solve(model.Pi().cast<std::complex<double>>());
  return sensors.C.cast<std::complex<double>>() * X;
}

HinfResult hinf_gain(const NetworkModel& model, const SensorSet& sensors, const Mat& W,
                     const HinfOptions& opts) {
  if (!model.is_stable()) {
    throw std::invalid_argument("hinf_gain: G is not stable (spectral radius " +
                                std::to_string(model.spectral_radius()) + ")");
  }
  if (W.rows() != model.input_count()) {
    throw std::invalid_argument("hinf_gain: weight must have r rows");
  }
  const int gp = std::max(opts.grid_points, 8);
  CMat Wc = W.cast<std::complex<double>>();

  auto eval = [&](double omega) {
    std::complex<double> z = std::polar(1.0, omega);
    return sigma_max(transfer(model, sensors, z) * Wc);
  };

  double best = -1.0;
  int best_k = 0;
  for (int k = 0; k < gp; ++k) {
    double v = eval(2.0 * kPi * k / gp);
    if (v > best) {
      best = v;
      best_k = k;
    }
  }
  const double step = 2.0 * kPi / gp;
  // The bracket of one grid step on each side always contains the maximizer
  // the grid found.
  auto [omega_ref, gain_ref] =
      golden_max(eval, step * best_k - step, step * best_k + step, opts.rel_tol * 2.0 * kPi);

  HinfResult res;
  if (gain_ref >= best) {
    res.gain = gain_ref;
    res.omega = omega_ref;
  } else {
    res.gain = best;
    res.omega = step * best_k;
  }
  if (res.omega < 0.0) res.omega += 2.0 * kPi;
  return res;
}

ResolventGrid make_resolvent_grid(const NetworkModel& model, int grid_points) {
  if (!model.is_stable()) {
    throw std::invalid_argument("make_resolvent_grid: G is not stable (spectral radius " +
                                std::to_string(model.spectral_radius()) + ")");
  }
  ResolventGrid grid;
  grid.points = std::max(grid_points, 8);
  grid.X.reserve(grid.points);
  CMat Pi_c = model.Pi().cast<std::complex<double>>();
  for (int k = 0; k < grid.points; ++k) {
    CMat A = -model.G().cast<std::complex<double>>();
    A.diagonal().array() += std::polar(1.0, 2.0 * kPi * k / grid.points);
    grid.X.push_back(Eigen::PartialPivLU<CMat>(A).solve(Pi_c));
  }
  return grid;
}

HinfResult hinf_gain_grid(const NetworkModel& model, const ResolventGrid& grid,
                          const SensorSet& sensors, const Mat& W, double rel_tol) {
  CMat Wc = W.cast<std::complex<double>>();
  CMat Cc = sensors.C.cast<std::complex<double>>();
  double best = -1.0;
  int best_k = 0;
  for (int k = 0; k < grid.points; ++k) {
    double v = sigma_max(Cc * grid.X[k] * Wc);
    if (v > best) {
      best = v;
      best_k = k;
    }
  }
  auto eval = [&](double omega) {
    std::complex<double> z = std::polar(1.0, omega);
    return sigma_max(transfer(model, sensors, z) * Wc);
  };
  const double step = 2.0 * kPi / grid.points;
  auto [omega_ref, gain_ref] =
      golden_max(eval, step * best_k - step, step * best_k + step, rel_tol * 2.0 * kPi);
  HinfResult res;
  if (gain_ref >= best) {
    res.gain = gain_ref;
    res.omega = omega_ref;
  } else {
    res.gain = best;
    res.omega = step * best_k;
  }
  if (res.omega < 0.0) res.omega += 2.0 * kPi;
  return res;
}

SubsystemSvExtremes subsystem_sv_extremes(const CutsetPartition& partition, const HinfOptions& opts) {
  const Mat& Gpp = partition.G_pp;
  const Mat& Gpc = partition.G_pc;
  Eigen::EigenSolver<Mat> es(Gpp, false);
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    if (std::abs(std::abs(es.eigenvalues()(i)) - 1.0) < 1e-9) {
      throw std::invalid_argument("subsystem_sv_extremes: G_pp has an eigenvalue on the unit circle");
    }
  }
  CMat Gpc_c = Gpc.cast<std::complex<double>>();

  auto Ts = [&](double omega) {
    CMat A = -Gpp.cast<std::complex<double>>();
    A.diagonal().array() += std::polar(1.0, omega);
    return CMat(Eigen::PartialPivLU<CMat>(A).solve(Gpc_c));
  };
  auto hi_eval = [&](double omega) { return sigma_max(Ts(omega)); };
  auto lo_eval = [&](double omega) { return min_gain(Ts(omega)); };

  SubsystemSvExtremes out;
  out.rho_bar_1 = hi_eval(0.0);
  out.rho_lo_1 = lo_eval(0.0);

  const int gp = std::max(opts.grid_points, 8);
  const double step = 2.0 * kPi / gp;
  double best_hi = -1.0, best_lo = std::numeric_limits<double>::infinity();
  int k_hi = 0, k_lo = 0;
  for (int k = 0; k < gp; ++k) {
    double w = step * k;
    double shi = hi_eval(w), slo = lo_eval(w);
    if (shi > best_hi) {
      best_hi = shi;
      k_hi = k;
    }
    if (slo < best_lo) {
      best_lo = slo;
      k_lo = k;
    }
  }
  out.sup_rho_bar =
      std::max(best_hi, golden_max(hi_eval, step * k_hi - step, step * k_hi + step, opts.rel_tol * 2.0 * kPi).second);

  if (Gpc.cols() > Gpc.rows()) {
    out.inf_rho_lo = 0.0;  // shape-forced null space, min gain identically zero
  } else {
    auto neg = [&](double w) { return -lo_eval(w); };
    double refined_lo = -golden_max(neg, step * k_lo - step, step * k_lo + step, opts.rel_tol * 2.0 * kPi).second;
    out.inf_rho_lo = std::min(best_lo, refined_lo);
  }
  return out;
}

}  // namespace netdet
