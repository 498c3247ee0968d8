#include <doctest.h>

#include "netdet/cutset.hpp"
#include "netdet/error_prob.hpp"
#include "support.hpp"

using namespace netdet;
using namespace netdet::testsupport;

TEST_CASE("50-node fixture satisfies the advertised structure") {
  NetworkModel m = load_fixture("net50.txt", 50, Net50::inputs());
  CHECK(m.G().minCoeff() >= 0.0);
  CHECK(m.spectral_radius() < 0.5);

  CutsetCheck check = verify_cutset(m, Net50::source(), Net50::cutset(), Net50::partition(), 1);
  REQUIRE(check.valid);

  NonnegCriteria crit = nonneg_criteria(check.partition, m);
  CHECK(crit.gtilde_inf_norm < 0.3780);  // 1/sqrt(7)
  CHECK(crit.bound_check);

  // Lemma-4 consistency: the bound forces the no-worse verdict.
  ScenarioSpec sc = ScenarioSpec::identical_stats(2.0, 1.0, 1.5, 1.5, Mat(), 1.2, 200, 8);
  SensorSet on_c = SensorSet::make(m, Net50::cutset(), 1.2);
  SensorSet on_p = SensorSet::make(m, Net50::partition(), 1.2);
  NoisyVerdicts nv = noisy_verdict(check.partition, m, on_c, on_p, sc);
  CHECK(nv.mean.conclusion == Conclusion::CutsetNoWorse);
  CHECK(nv.cov.conclusion == Conclusion::CutsetNoWorse);
  CHECK(nv.sv.rho_bar_1 < 1.0);
}

TEST_CASE("10-node fixtures: structure and per-node orderings") {
  NetworkModel short_mem = load_fixture("line10_short.txt", 10, {1, 2});
  NetworkModel long_mem = load_fixture("line10_long.txt", 10, {1, 2});

  SUBCASE("short-memory fixture is nilpotent with heavy rows") {
    CHECK(short_mem.is_nilpotent());
    CutsetCheck check = verify_cutset(short_mem, {1, 2}, {3}, {4, 5, 6, 7, 8, 9, 10}, 1);
    REQUIRE(check.valid);
    NonnegCriteria crit = nonneg_criteria(check.partition, short_mem);
    CHECK(crit.rowsum_gate);
    CHECK(crit.min_row_sum > 1.0);
    CHECK(crit.rowsum_check);
  }
  SUBCASE("long-memory fixture has spectral radius 0.97") {
    // The 0.97 eigenvalue sits in a Jordan block; the solver resolves it to
    // O(eps^{1/3}) only.
    CHECK(long_mem.spectral_radius() == doctest::Approx(0.97).epsilon(1e-4));
    CHECK(!long_mem.is_nilpotent());
    CutsetCheck check = verify_cutset(long_mem, {1, 2}, {3}, {4, 5, 6, 7, 8, 9, 10}, 1);
    CHECK(check.valid);
  }
  SUBCASE("cutset node 3 is the worst sensor for both models, both fixtures") {
    ScenarioSpec mean_sc = ScenarioSpec::identical_stats(2.0, 1.0, 1.5, 1.5, Mat(), 1.2, 200, 2);
    ScenarioSpec cov_sc = ScenarioSpec::identical_stats(0.0, 0.0, 2.0, 1.0, Mat(), 1.2, 200, 2);
    for (const NetworkModel* m : {&short_mem, &long_mem}) {
      SensorSet cut = SensorSet::make(*m, {3}, 1.2);
      double eta_c = identical_stats_snrs(*m, cut, mean_sc).eta_s;
      double R_c = identical_stats_snrs(*m, cut, cov_sc).R_s;
      for (int l = 4; l <= 10; ++l) {
        SensorSet s = SensorSet::make(*m, {l}, 1.2);
        CHECK(identical_stats_snrs(*m, s, mean_sc).eta_s > eta_c);
        CHECK(identical_stats_snrs(*m, s, cov_sc).R_s > R_c);
      }
    }
  }
  SUBCASE("finite-horizon ordering matches at N = 200") {
    ScenarioSpec mean_sc = ScenarioSpec::mean_shift(2.0 * Vec::Ones(2), Vec::Ones(2),
                                                    1.5 * Mat::Identity(2, 2), 1.2, 200);
    SensorSet cut = SensorSet::make(short_mem, {3}, 1.2);
    double eta_c = finite_snr_mean(stacked_moments(short_mem, cut, mean_sc));
    for (int l = 4; l <= 10; ++l) {
      SensorSet s = SensorSet::make(short_mem, {l}, 1.2);
      CHECK(finite_snr_mean(stacked_moments(short_mem, s, mean_sc)) > eta_c);
    }
  }
}

TEST_CASE("cutset illustration fixture behaves like the in-code graph") {
  NetworkModel m = load_fixture("fig1.txt", 10, {1, 2});
  CHECK(verify_cutset(m, {1, 2, 3}, {4, 5, 6}, {7, 8, 9, 10}, 1).valid);
  CHECK(!verify_cutset(m, {1, 2, 3, 4}, {5, 6, 7}, {8, 9, 10}, 1).valid);
}
