#include "netdet/monte_carlo.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "netdet/error_prob.hpp"

namespace netdet {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

struct HypothesisParams {
  Vec mu;
  Mat A;  // PSD factor of the input covariance
};

// Shared per-plan simulation state; each trial only touches its own rng and
// the caller-provided buffers.
struct Simulator {
  const NetworkModel& model;
  const ScenarioSpec& scenario;
  const SensorSet& sensors;
  Mat A0;  // factor of Sigma0 (empty when zero)
  HypothesisParams hyp[2];
  double sigma_v = 0.0;
  int n = 0, r = 0, m = 0, N = 0;

  Simulator(const NetworkModel& mdl, const ScenarioSpec& sc, const SensorSet& ss)
      : model(mdl), scenario(sc), sensors(ss) {
    n = model.node_count();
    r = model.input_count();
    m = sensors.size();
    N = scenario.N;
    scenario.validate(n, r);
    if (scenario.Sigma0.size() != 0 && scenario.Sigma0.cwiseAbs().maxCoeff() > 0.0) {
      A0 = psd_sqrt(scenario.Sigma0);
    }
    hyp[0] = {scenario.mu1, psd_sqrt(scenario.Sigma1)};
    hyp[1] = {scenario.mu2, psd_sqrt(scenario.Sigma2)};
    sigma_v = std::sqrt(scenario.sigma_v2);
  }

  void stacked_measurements(int hypothesis, uint64_t sub_seed, Vec& Y) const {
    TrialRng rng(sub_seed);
    const HypothesisParams& h = hyp[hypothesis - 1];
    Vec x = Vec::Zero(n), z(r), w(r);
    if (A0.size() != 0) {
      Vec z0(n);
      for (int i = 0; i < n; ++i) z0(i) = rng.normal();
      x.noalias() = A0 * z0;
    }
    Vec xn(n);
    for (int k = 0; k < N; ++k) {
      for (int i = 0; i < r; ++i) z(i) = rng.normal();
      w = h.mu;
      w.noalias() += h.A * z;
      xn.noalias() = model.G() * x;
      xn.noalias() += model.Pi() * w;
      x.swap(xn);
      for (int i = 0; i < m; ++i) {
        double v = sigma_v != 0.0 ? sigma_v * rng.normal() : 0.0;
        Y(k * m + i) = x(sensors.nodes[i] - 1) + v;
      }
    }
  }

  // Stacked raw inputs w[0..N-1] for the oracle detector, same seeding scheme.
  void stacked_inputs(int hypothesis, uint64_t sub_seed, Vec& W) const {
    TrialRng rng(sub_seed);
    const HypothesisParams& h = hyp[hypothesis - 1];
    Vec z(r);
    for (int k = 0; k < N; ++k) {
      for (int i = 0; i < r; ++i) z(i) = rng.normal();
      W.segment(k * r, r) = h.mu;
      W.segment(k * r, r).noalias() += h.A * z;
    }
  }
};

// Analytic error probability of the LD-MAP rule with general priors.
double ldmap_analytic_pe(double d1, double d2, double gamma, double pi1) {
  const double pi2 = 1.0 - pi1;
  const double lhs = std::log(d1 / d2) - 2.0 * gamma;
  const double q = 1.0 / d2 - 1.0 / d1;
  if (q > 0.0) {  // decide H2 iff z^2 < lhs / q
    if (lhs <= 0.0) return pi2;
    const double t = lhs / q;
    return pi1 * (1.0 - chi2_q1(t / d1)) + pi2 * chi2_q1(t / d2);
  }
  if (q < 0.0) {  // decide H2 iff z^2 > lhs / q
    if (lhs >= 0.0) return pi1;  // always exceeds a non-positive threshold: H2 almost surely
    const double t = lhs / q;
    return pi1 * chi2_q1(t / d1) + pi2 * (1.0 - chi2_q1(t / d2));
  }
  return lhs > 0.0 ? pi1 : pi2;  // q == 0: rule decided by the sign of lhs alone
}

}  // namespace

uint64_t derive_sub_seed(uint64_t master_seed, int hypothesis_index, uint64_t trial) {
  uint64_t h = mix64(master_seed);
  h = mix64(h ^ (0x632be59bd9b4e019ull * static_cast<uint64_t>(hypothesis_index)));
  h = mix64(h ^ trial);
  return h;
}

uint64_t TrialRng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ull;
  uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double TrialRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double TrialRng::uniform_open() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

double TrialRng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = kTwoPi * u2;
  spare_ = rad * std::sin(ang);
  have_spare_ = true;
  return rad * std::cos(ang);
}

Vec simulate_trajectory(const NetworkModel& model, const ScenarioSpec& scenario, int hypothesis,
                        const SensorSet& sensors, uint64_t sub_seed) {
  if (hypothesis != 1 && hypothesis != 2) throw std::invalid_argument("hypothesis must be 1 or 2");
  Simulator sim(model, scenario, sensors);
  Vec Y(sim.m * sim.N);
  sim.stacked_measurements(hypothesis, sub_seed, Y);
  return Y;
}

EmpiricalReport estimate_error(const TrialPlan& plan, const NetworkModel& model,
                               const SensorSet& sensors, const ScenarioSpec& scenario) {
  if (plan.trials < 1) throw std::invalid_argument("trials must be >= 1");
  Simulator sim(model, scenario, sensors);

  const bool oracle = plan.detector == DetectorKind::OracleInput;
  SupportMeanRule mean_rule;
  CovShiftRule cov_rule;
  std::optional<double> analytic;

  if (plan.detector == DetectorKind::MapMean) {
    StackedMoments mom = stacked_moments(model, sensors, scenario);
    mean_rule = build_support_mean_rule(mom, scenario.pi1, scenario.pi2);
    analytic = mean_rule.analytic_pe(scenario.pi1);
  } else if (plan.detector == DetectorKind::LdMapCov) {
    StackedMoments mom = stacked_moments(model, sensors, scenario);
    Discriminant disc = optimal_discriminant(mom.Sigma_bar_1, mom.Sigma_bar_2);
    cov_rule = build_cov_rule(mom, disc.b, scenario.pi1, scenario.pi2);
    analytic = ldmap_analytic_pe(cov_rule.d1, cov_rule.d2, cov_rule.gamma, scenario.pi1);
  } else {
    // Oracle MAP observing the raw inputs w[0..N-1] (mean-shift scenarios).
    const int r = model.input_count();
    double s_scale = std::max(1.0, std::max(scenario.Sigma1.cwiseAbs().maxCoeff(),
                                            scenario.Sigma2.cwiseAbs().maxCoeff()));
    if ((scenario.Sigma1 - scenario.Sigma2).cwiseAbs().maxCoeff() > 1e-10 * s_scale) {
      throw std::invalid_argument("oracle_input detector supports mean-shift scenarios only");
    }
    StackedMoments mom;
    mom.m = r;
    mom.r = r;
    mom.N = scenario.N;
    Vec m1(r * scenario.N), m2(r * scenario.N);
    for (int k = 0; k < scenario.N; ++k) {
      m1.segment(k * r, r) = scenario.mu1;
      m2.segment(k * r, r) = scenario.mu2;
    }
    mom.mu_bar_1 = m1;
    mom.mu_bar_2 = m2;
    Mat S = Mat::Zero(r * scenario.N, r * scenario.N);
    for (int k = 0; k < scenario.N; ++k) S.block(k * r, k * r, r, r) = scenario.Sigma1;
    mom.Sigma_bar_1 = S;
    mom.Sigma_bar_2 = S;
    mean_rule = build_support_mean_rule(mom, scenario.pi1, scenario.pi2);
    analytic = mean_rule.analytic_pe(scenario.pi1);
  }

  const long n_trials = plan.trials;
  int n_threads = plan.threads > 0 ? plan.threads
                                   : std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  n_threads = static_cast<int>(std::min<long>(n_threads, n_trials));

  long errors[2] = {0, 0};
  for (int h = 1; h <= 2; ++h) {
    std::vector<long> partial(n_threads, 0);
    std::vector<std::thread> pool;
    const long chunk = (n_trials + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      const long begin = t * chunk;
      const long end = std::min(n_trials, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&, h, t, begin, end] {
        Vec Y(oracle ? sim.r * sim.N : sim.m * sim.N);
        long errs = 0;
        for (long trial = begin; trial < end; ++trial) {
          const uint64_t s = derive_sub_seed(plan.seed, h, static_cast<uint64_t>(trial));
          if (oracle) {
            sim.stacked_inputs(h, s, Y);
          } else {
            sim.stacked_measurements(h, s, Y);
          }
          Hypothesis got = plan.detector == DetectorKind::LdMapCov ? cov_rule.decide(Y) : mean_rule.decide(Y);
          const int got_i = got == Hypothesis::H1 ? 1 : 2;
          if (got_i != h) ++errs;
        }
        partial[t] = errs;
      });
    }
    for (auto& th : pool) th.join();
    for (long e : partial) errors[h - 1] += e;
  }

  EmpiricalReport rep;
  rep.trials_used = n_trials;
  rep.rate_h1 = static_cast<double>(errors[0]) / static_cast<double>(n_trials);
  rep.rate_h2 = static_cast<double>(errors[1]) / static_cast<double>(n_trials);
  rep.p_hat = scenario.pi1 * rep.rate_h1 + scenario.pi2 * rep.rate_h2;
  const double n = static_cast<double>(n_trials);
  rep.std_err = std::sqrt(scenario.pi1 * scenario.pi1 * rep.rate_h1 * (1.0 - rep.rate_h1) / n +
                          scenario.pi2 * scenario.pi2 * rep.rate_h2 * (1.0 - rep.rate_h2) / n);
  rep.analytic_pe = analytic;
  return rep;
}

}  // namespace netdet
