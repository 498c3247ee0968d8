#include "netdet/cutset.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace netdet {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool is_mean_shift_pair(const ScenarioSpec& sc) {
  double scale = std::max(1.0, std::max(sc.Sigma1.cwiseAbs().maxCoeff(), sc.Sigma2.cwiseAbs().maxCoeff()));
  return (sc.Sigma1 - sc.Sigma2).cwiseAbs().maxCoeff() <= 1e-10 * scale;
}

// Spectral radius of the tridiagonal Toeplitz matrix: a + 2 sqrt(bc) cos(pi/(n+1)).
double toeplitz_spectral_radius(int n, double a, double b, double c) {
  if (n == 1) return std::abs(a);
  return a + 2.0 * std::sqrt(b * c) * std::cos(3.14159265358979323846 / (n + 1));
}

void check_toeplitz_args(int n, double a, double b, double c) {
  require(n >= 1, "n must be >= 1");
  require(a >= 0.0 && b >= 0.0 && c >= 0.0, "a, b, c must be non-negative");
  double rho = toeplitz_spectral_radius(n, a, b, c);
  require(rho < 1.0, "toeplitz line is not stable (spectral radius " + std::to_string(rho) + ")");
}

}  // namespace

std::string to_string(Conclusion c) {
  switch (c) {
    case Conclusion::CutsetNoWorse: return "cutset_no_worse";
    case Conclusion::CutsetWorse: return "cutset_worse";
    default: return "inconclusive";
  }
}

ComparisonVerdict noiseless_verdict(double sigma_v2) {
  require(sigma_v2 == 0.0, "noiseless_verdict: sigma_v^2 must be 0");
  ComparisonVerdict v;
  v.regime = VerdictRegime::Noiseless;
  v.condition_checked = "sigma_v^2 = 0 (weight-independent)";
  v.conclusion = Conclusion::CutsetNoWorse;
  v.applies_to = AppliesTo::Both;
  return v;
}

NoisyVerdicts noisy_verdict(const CutsetPartition& partition, const NetworkModel& model,
                            const SensorSet& sensors_cutset, const SensorSet& sensors_partition,
                            const ScenarioSpec& scenario, const HinfOptions& opts) {
  require(scenario.sigma_v2 > 0.0, "noisy_verdict: requires sigma_v^2 > 0");

  NoisyVerdicts out;
  out.sv = subsystem_sv_extremes(partition, opts);

  out.mean.regime = VerdictRegime::Noisy;
  out.mean.applies_to = AppliesTo::Mean;
  if (out.sv.rho_bar_1 <= 1.0) {
    out.mean.condition_checked = "rho_bar(1) <= 1";
    out.mean.condition_value = {out.sv.rho_bar_1};
    out.mean.conclusion = Conclusion::CutsetNoWorse;
  } else if (out.sv.rho_lo_1 > 1.0) {
    out.mean.condition_checked = "rho_lo(1) > 1";
    out.mean.condition_value = {out.sv.rho_lo_1};
    out.mean.conclusion = Conclusion::CutsetWorse;
  } else {
    out.mean.condition_checked = "rho_bar(1) <= 1 or rho_lo(1) > 1";
    out.mean.condition_value = {out.sv.rho_bar_1, out.sv.rho_lo_1};
    out.mean.conclusion = Conclusion::Inconclusive;
  }

  out.cov.regime = VerdictRegime::Noisy;
  out.cov.applies_to = AppliesTo::Covariance;
  if (out.sv.sup_rho_bar <= 1.0) {
    out.cov.condition_checked = "sup rho_bar(z) <= 1";
    out.cov.condition_value = {out.sv.sup_rho_bar};
    out.cov.conclusion = Conclusion::CutsetNoWorse;
  } else if (out.sv.inf_rho_lo > 1.0) {
    out.cov.condition_checked = "inf rho_lo(z) > 1";
    out.cov.condition_value = {out.sv.inf_rho_lo};
    out.cov.conclusion = Conclusion::CutsetWorse;
  } else {
    out.cov.condition_checked = "sup rho_bar(z) <= 1 or inf rho_lo(z) > 1";
    out.cov.condition_value = {out.sv.sup_rho_bar, out.sv.inf_rho_lo};
    out.cov.conclusion = Conclusion::Inconclusive;
  }

  // Direct Lemma-2 probabilities where the scenario allows them.
  if (scenario.kind == ModelKind::IdenticalStats) {
    auto sc = identical_stats_snrs(model, sensors_cutset, scenario, opts);
    auto sp = identical_stats_snrs(model, sensors_partition, scenario, opts);
    out.pe_mean_cutset = pe_mean(sc.eta_s).value;
    out.pe_mean_partition = pe_mean(sp.eta_s).value;
    if (scenario.sigma1_sq > scenario.sigma2_sq) {
      out.pe_cov_cutset = pe_cov(sc.R_s).value;
      out.pe_cov_partition = pe_cov(sp.R_s).value;
    }
  } else if (is_mean_shift_pair(scenario)) {
    out.pe_mean_cutset = pe_mean(asym_snr_mean(model, sensors_cutset, scenario, opts).eta).value;
    out.pe_mean_partition = pe_mean(asym_snr_mean(model, sensors_partition, scenario, opts).eta).value;
  } else if (scenario.Sigma2.cwiseAbs().maxCoeff() == 0.0) {
    out.pe_cov_cutset = pe_cov(asym_snr_cov(model, sensors_cutset, scenario, opts)).value;
    out.pe_cov_partition = pe_cov(asym_snr_cov(model, sensors_partition, scenario, opts)).value;
  }
  return out;
}

NonnegCriteria nonneg_criteria(const CutsetPartition& partition, const NetworkModel& model) {
  require(model.G().minCoeff() >= 0.0, "nonneg_criteria: G has negative entries, criteria inapplicable");

  const int m1 = static_cast<int>(partition.P.size());
  Mat Gt(m1, partition.G_pp.cols() + partition.G_pc.cols());
  Gt << partition.G_pp, partition.G_pc;

  NonnegCriteria out;
  out.gtilde_inf_norm = Gt.cwiseAbs().rowwise().sum().maxCoeff();
  out.bound = 1.0 / std::sqrt(static_cast<double>(m1));
  out.bound_check = out.gtilde_inf_norm <= out.bound;
  out.rowsum_gate = partition.C_d.size() == 1;
  out.min_row_sum = Gt.rowwise().sum().minCoeff();
  out.rowsum_check = out.rowsum_gate && out.min_row_sum > 1.0;
  return out;
}

Mat toeplitz_inverse_entries(int n, double a, double b, double c) {
  check_toeplitz_args(n, a, b, c);
  const long double at = 1.0L - static_cast<long double>(a);
  const long double bc = static_cast<long double>(b) * static_cast<long double>(c);

  // theta_k = det of the leading k x k block of I - G; phi from the trailing end.
  std::vector<long double> theta(n + 1), phi(n + 2);
  theta[0] = 1.0L;
  theta[1] = at;
  for (int k = 2; k <= n; ++k) theta[k] = at * theta[k - 1] - bc * theta[k - 2];
  phi[n + 1] = 1.0L;
  phi[n] = at;
  for (int k = n - 1; k >= 1; --k) phi[k] = at * phi[k + 1] - bc * phi[k + 2];

  require(std::abs(static_cast<double>(theta[n])) > 1e-300, "toeplitz_inverse_entries: det(I - G) vanishes");

  Mat inv(n, n);
  for (int l = 1; l <= n; ++l) {
    for (int q = 1; q <= n; ++q) {
      long double v;
      if (q >= l) {
        // (-1)^{l+q} (-b)^{q-l} theta_{l-1} phi_{q+1} = b^{q-l} theta_{l-1} phi_{q+1}
        v = std::pow(static_cast<long double>(b), q - l) * theta[l - 1] * phi[q + 1];
      } else {
        v = std::pow(static_cast<long double>(c), l - q) * theta[q - 1] * phi[l + 1];
      }
      inv(l - 1, q - 1) = static_cast<double>(v / theta[n]);
    }
  }
  return inv;
}

GainProfile toeplitz_gain_profile(int n, double a, double b, double c, int q) {
  require(q >= 1 && q <= n, "input node q out of range");
  Mat inv = toeplitz_inverse_entries(n, a, b, c);

  GainProfile out;
  out.decreasing_predicted = a + b + c < 1.0;
  for (int l = q; l <= n; ++l) {
    out.nodes.push_back(l);
    out.values.push_back(std::abs(inv(l - 1, q - 1)));
  }
  bool non_increasing = true, non_decreasing = true;
  for (size_t i = 1; i < out.values.size(); ++i) {
    if (out.values[i] > out.values[i - 1] * (1.0 + 1e-12)) non_increasing = false;
    if (out.values[i] < out.values[i - 1] * (1.0 - 1e-12)) non_decreasing = false;
  }
  if (non_increasing && non_decreasing) {
    out.observed = ProfileOrdering::Constant;
  } else if (non_increasing) {
    out.observed = ProfileOrdering::Decreasing;
  } else if (non_decreasing) {
    out.observed = ProfileOrdering::Increasing;
  } else {
    out.observed = ProfileOrdering::NonMonotone;
  }
  return out;
}

SisoOrderings siso_orderings(int n, double a, double b, double c, int q, int j,
                             const ScenarioSpec& scenario, const HinfOptions& opts) {
  require(1 <= q && q < j && j < n, "requires 1 <= q < j < n");
  require(scenario.sigma_v2 > 0.0, "siso_orderings: requires sigma_v^2 > 0");
  require(scenario.kind == ModelKind::IdenticalStats, "siso_orderings: identical-statistics scenario required");
  check_toeplitz_args(n, a, b, c);

  NetworkModel model = toeplitz_line(n, a, b, c, {q});

  SisoOrderings out;
  for (int l = j; l <= n; ++l) {
    SensorSet sensor = SensorSet::make(model, {l}, scenario.sigma_v2);
    auto snr = identical_stats_snrs(model, sensor, scenario, opts);
    out.nodes.push_back(l);
    out.eta_s.push_back(snr.eta_s);
    out.R_s.push_back(snr.R_s);
    out.pe_mean_v.push_back(pe_mean(snr.eta_s).value);
    out.pe_cov_v.push_back(scenario.sigma1_sq > scenario.sigma2_sq ? pe_cov(snr.R_s).value : 0.5);
  }

  // G~ rows are the partitioned nodes {j+1..n}; columns cover P and the
  // cutset node j. Row sums are a+b+c in the interior, a+c at the ends.
  const Mat& G = model.G();
  out.gtilde_inf_norm = 0.0;
  out.min_row_sum = std::numeric_limits<double>::infinity();
  for (int row = j + 1; row <= n; ++row) {
    double sum = 0.0;
    for (int col = j; col <= n; ++col) sum += std::abs(G(row - 1, col - 1));
    out.gtilde_inf_norm = std::max(out.gtilde_inf_norm, sum);
    out.min_row_sum = std::min(out.min_row_sum, sum);
  }

  auto dominates = [&](const std::vector<double>& pe) {
    bool dom = true, domd = true;
    for (size_t i = 1; i < pe.size(); ++i) {
      if (pe[0] > pe[i] + 1e-12) dom = false;
      if (pe[0] < pe[i] - 1e-12) domd = false;
    }
    return std::pair<bool, bool>(dom, domd);
  };
  std::tie(out.cutset_dominates_mean, out.cutset_dominated_mean) = dominates(out.pe_mean_v);
  std::tie(out.cutset_dominates_cov, out.cutset_dominated_cov) = dominates(out.pe_cov_v);
  return out;
}

}  // namespace netdet
