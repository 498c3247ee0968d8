#include <doctest.h>

#include "netdet/cutset.hpp"
#include "support.hpp"

using namespace netdet;
using namespace netdet::testsupport;

namespace {

// Three-node directed chain 1 -> 2 -> 3 with self-loops a and coupling c:
// S = {1}, C_d = {2}, P = {3}, so G_pp = a and G_pc = c.
CutsetPartition chain_partition(double a, double c) {
  NetworkModel m = toeplitz_line(3, a, 0.0, c, {1});
  CutsetCheck check = verify_cutset(m, {1}, {2}, {3}, 1);
  REQUIRE(check.valid);
  return check.partition;
}

}  // namespace

TEST_CASE("noiseless verdict") {
  ComparisonVerdict v = noiseless_verdict(0.0);
  CHECK(v.conclusion == Conclusion::CutsetNoWorse);
  CHECK(v.applies_to == AppliesTo::Both);
  CHECK_THROWS_AS(noiseless_verdict(0.5), std::invalid_argument);
}

TEST_CASE("noisy verdict on scalar chains") {
  NetworkModel weak = toeplitz_line(3, 0.3, 0.0, 0.5, {1});
  NetworkModel strong = toeplitz_line(3, 0.3, 0.0, 0.9, {1});

  ScenarioSpec sc = ScenarioSpec::identical_stats(2.0, 1.0, 1.5, 1.5, Mat(), 1.2, 50, 1);

  SUBCASE("rho_bar(1) <= 1 concludes cutset no worse") {
    CutsetCheck check = verify_cutset(weak, {1}, {2}, {3}, 1);
    REQUIRE(check.valid);
    SensorSet on_c = SensorSet::make(weak, {2}, 1.2);
    SensorSet on_p = SensorSet::make(weak, {3}, 1.2);
    NoisyVerdicts nv = noisy_verdict(check.partition, weak, on_c, on_p, sc);
    CHECK(nv.sv.rho_bar_1 == doctest::Approx(0.5 / 0.7).epsilon(1e-10));
    CHECK(nv.mean.conclusion == Conclusion::CutsetNoWorse);
    CHECK(nv.cov.conclusion == Conclusion::CutsetNoWorse);  // sup over circle also at z
    REQUIRE(nv.pe_mean_cutset.has_value());
    CHECK(*nv.pe_mean_cutset <= *nv.pe_mean_partition + 1e-12);
  }
  SUBCASE("rho_lo(1) > 1 concludes cutset worse for the mean model") {
    CutsetCheck check = verify_cutset(strong, {1}, {2}, {3}, 1);
    REQUIRE(check.valid);
    SensorSet on_c = SensorSet::make(strong, {2}, 1.2);
    SensorSet on_p = SensorSet::make(strong, {3}, 1.2);
    NoisyVerdicts nv = noisy_verdict(check.partition, strong, on_c, on_p, sc);
    CHECK(nv.sv.rho_lo_1 == doctest::Approx(0.9 / 0.7).epsilon(1e-10));
    CHECK(nv.mean.conclusion == Conclusion::CutsetWorse);
    // Over the whole circle the gain dips to c/(1+a) < 1, so neither
    // covariance case applies.
    CHECK(nv.sv.inf_rho_lo == doctest::Approx(0.9 / 1.3).epsilon(1e-9));
    CHECK(nv.cov.conclusion == Conclusion::Inconclusive);
    REQUIRE(nv.pe_mean_cutset.has_value());
    CHECK(*nv.pe_mean_cutset >= *nv.pe_mean_partition - 1e-12);
  }
  SUBCASE("inf rho_lo(z) > 1 concludes cutset worse for the covariance model") {
    // Needs c > 1 + a so that the minimum gain c/(1+a) stays above one.
    NetworkModel very_strong = toeplitz_line(3, 0.3, 0.0, 1.5, {1});
    ScenarioSpec cov_sc = ScenarioSpec::identical_stats(0.0, 0.0, 25.0, 0.1, Mat(), 0.5, 50, 1);
    CutsetCheck check = verify_cutset(very_strong, {1}, {2}, {3}, 1);
    REQUIRE(check.valid);
    SensorSet on_c = SensorSet::make(very_strong, {2}, 0.5);
    SensorSet on_p = SensorSet::make(very_strong, {3}, 0.5);
    NoisyVerdicts nv = noisy_verdict(check.partition, very_strong, on_c, on_p, cov_sc);
    CHECK(nv.sv.inf_rho_lo == doctest::Approx(1.5 / 1.3).epsilon(1e-9));
    CHECK(nv.cov.conclusion == Conclusion::CutsetWorse);
    CHECK(nv.mean.conclusion == Conclusion::CutsetWorse);
    REQUIRE(nv.pe_cov_cutset.has_value());
    CHECK(*nv.pe_cov_cutset >= *nv.pe_cov_partition - 1e-12);
  }
  SUBCASE("rejects noiseless scenarios") {
    ScenarioSpec clean = ScenarioSpec::identical_stats(2.0, 1.0, 1.5, 1.5, Mat(), 0.0, 50, 1);
    CutsetCheck check = verify_cutset(weak, {1}, {2}, {3}, 1);
    SensorSet on_c = SensorSet::make(weak, {2}, 0.0);
    SensorSet on_p = SensorSet::make(weak, {3}, 0.0);
    CHECK_THROWS_AS(noisy_verdict(check.partition, weak, on_c, on_p, clean), std::invalid_argument);
  }
}

TEST_CASE("randomized verdict-ordering consistency") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<> unif(0.0, 1.0);
  int conclusive = 0;
  for (int rep = 0; rep < 30; ++rep) {
    double a = 0.1 + 0.5 * unif(gen);
    double c = rep % 2 ? 0.1 + (0.9 - a) * unif(gen) : 1.1 * (1.0 - a) + unif(gen);
    NetworkModel m = toeplitz_line(3, a, 0.0, c, {1});
    if (!m.is_stable()) continue;
    CutsetCheck check = verify_cutset(m, {1}, {2}, {3}, 1);
    REQUIRE(check.valid);
    ScenarioSpec sc = ScenarioSpec::identical_stats(1.0, 0.4, 2.0, 2.0, Mat(), 0.9, 40, 1);
    SensorSet on_c = SensorSet::make(m, {2}, 0.9);
    SensorSet on_p = SensorSet::make(m, {3}, 0.9);
    NoisyVerdicts nv = noisy_verdict(check.partition, m, on_c, on_p, sc);
    if (nv.mean.conclusion == Conclusion::CutsetNoWorse) {
      ++conclusive;
      CHECK(*nv.pe_mean_cutset <= *nv.pe_mean_partition + 1e-10);
    } else if (nv.mean.conclusion == Conclusion::CutsetWorse) {
      ++conclusive;
      CHECK(*nv.pe_mean_cutset >= *nv.pe_mean_partition - 1e-10);
    }
  }
  CHECK(conclusive > 10);
}

TEST_CASE("non-negative matrix criteria") {
  SUBCASE("zero coupling passes the bound trivially") {
    NetworkModel m = build_network(3, {{2, 1, 0.4}}, {1});
    CutsetCheck check = verify_cutset(m, {1}, {2}, {3}, 1);
    REQUIRE(check.valid);
    NonnegCriteria crit = nonneg_criteria(check.partition, m);
    CHECK(crit.gtilde_inf_norm == 0.0);
    CHECK(crit.bound_check);
  }
  SUBCASE("rejects negative entries") {
    NetworkModel m = build_network(3, {{2, 1, -0.4}, {3, 2, 0.2}}, {1});
    CutsetCheck check = verify_cutset(m, {1}, {2}, {3}, 1);
    REQUIRE(check.valid);
    CHECK_THROWS_AS(nonneg_criteria(check.partition, m), std::invalid_argument);
  }
  SUBCASE("bound check implies rho_bar(1) < 1 and a no-worse verdict") {
    std::mt19937 gen(13);
    std::uniform_real_distribution<> unif(0.0, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
      LayeredNet net = random_layered_cutset_network(gen, 0.5);
      CutsetCheck check = verify_cutset(net.model, net.S, net.C, net.P, 1);
      REQUIRE(check.valid);
      const int m1 = static_cast<int>(net.P.size());
      // Rescale so the partition rows satisfy the Lemma-4 bound.
      Mat G = net.model.G();
      double row_max = 0.0;
      for (int p : net.P) {
        double sum = 0.0;
        for (int col : net.P) sum += G(p - 1, col - 1);
        for (int col : net.C) sum += G(p - 1, col - 1);
        row_max = std::max(row_max, sum);
      }
      double target = 0.9 / std::sqrt(static_cast<double>(m1));
      if (row_max > target) {
        double shrink = target / row_max;
        for (int p : net.P)
          for (int col = 0; col < G.cols(); ++col) G(p - 1, col) *= shrink;
      }
      NetworkModel scaled(G, net.K);
      CutsetCheck check2 = verify_cutset(scaled, net.S, net.C, net.P, 1);
      REQUIRE(check2.valid);
      NonnegCriteria crit = nonneg_criteria(check2.partition, scaled);
      CHECK(crit.bound_check);
      SubsystemSvExtremes sv = subsystem_sv_extremes(check2.partition);
      CHECK(sv.rho_bar_1 < 1.0);
      ScenarioSpec sc = ScenarioSpec::identical_stats(1.0, 0.2, 1.0, 1.0, Mat(), 0.8, 30,
                                                      scaled.input_count());
      SensorSet on_c = SensorSet::make(scaled, net.C, 0.8);
      SensorSet on_p = SensorSet::make(scaled, net.P, 0.8);
      NoisyVerdicts nv = noisy_verdict(check2.partition, scaled, on_c, on_p, sc);
      CHECK(nv.mean.conclusion == Conclusion::CutsetNoWorse);
      CHECK(nv.cov.conclusion == Conclusion::CutsetNoWorse);
    }
  }
  SUBCASE("row-sum criterion needs a singleton cutset") {
    CutsetPartition part = chain_partition(0.3, 0.9);
    NetworkModel m = toeplitz_line(3, 0.3, 0.0, 0.9, {1});
    NonnegCriteria crit = nonneg_criteria(part, m);
    CHECK(crit.rowsum_gate);
    CHECK(crit.min_row_sum == doctest::Approx(1.2));
    CHECK(crit.rowsum_check);
  }
}

TEST_CASE("toeplitz inverse entries") {
  SUBCASE("n = 1") {
    Mat inv = toeplitz_inverse_entries(1, 0.4, 0.0, 0.0);
    CHECK(inv(0, 0) == doctest::Approx(1.0 / 0.6).epsilon(1e-14));
  }
  SUBCASE("lower-triangular closed form at b = 0") {
    const double a = 0.3, c = 0.8;
    const int n = 8;
    Mat inv = toeplitz_inverse_entries(n, a, 0.0, c);
    for (int l = 1; l <= n; ++l) {
      for (int q = 1; q <= l; ++q) {
        double expect = std::pow(c, l - q) / std::pow(1.0 - a, l - q + 1);
        CHECK(inv(l - 1, q - 1) == doctest::Approx(expect).epsilon(1e-12));
      }
    }
    CHECK(inv(0, 1) == 0.0);
  }
  SUBCASE("matches the dense inverse on random stable triples") {
    // Sampled with a + b + c < 1: beyond that the matrix is non-normal enough
    // that inverse entries grow exponentially in n and the double-precision
    // dense oracle cannot anchor an absolute comparison.
    std::mt19937 gen(17);
    std::uniform_real_distribution<> unif(0.0, 1.0);
    for (int rep = 0; rep < 25; ++rep) {
      int n = 2 + static_cast<int>(unif(gen) * 19);
      double a = 0.8 * unif(gen);
      double spare = (0.97 - a) * unif(gen);
      double split = unif(gen);
      double b = spare * split, c = spare * (1.0 - split);
      Mat inv = toeplitz_inverse_entries(n, a, b, c);
      NetworkModel m = toeplitz_line(n, a, b, c, {1});
      Mat dense = (Mat::Identity(n, n) - m.G()).inverse();
      CHECK((inv - dense).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SUBCASE("non-normal regime stays finite and self-consistent in extended precision") {
    // a + b + c > 1 with b >> c: entries blow up exponentially yet satisfy
    // the defining relation (I - G) X = I far better than double LU does.
    const int n = 32;
    const double a = 0.695, b = 0.93, c = 0.017;
    Mat X = toeplitz_inverse_entries(n, a, b, c);
    NetworkModel m = toeplitz_line(n, a, b, c, {1});
    Mat residual = (Mat::Identity(n, n) - m.G()) * X - Mat::Identity(n, n);
    double scale = X.cwiseAbs().maxCoeff();
    CHECK(scale > 1e6);  // genuine pseudospectral growth
    CHECK(residual.cwiseAbs().maxCoeff() / scale < 1e-14);
  }
  SUBCASE("rejects unstable parameters") {
    CHECK_THROWS_AS(toeplitz_inverse_entries(5, 0.9, 0.4, 0.4), std::invalid_argument);
  }
}

TEST_CASE("toeplitz gain profile") {
  SUBCASE("contractive line decreases strictly") {
    GainProfile p = toeplitz_gain_profile(10, 0.2, 0.1, 0.3, 2);
    CHECK(p.decreasing_predicted);
    CHECK(p.observed == ProfileOrdering::Decreasing);
    for (size_t i = 1; i < p.values.size(); ++i) CHECK(p.values[i] < p.values[i - 1]);
  }
  SUBCASE("b = 0 with a + c > 1 grows geometrically") {
    const double a = 0.3, c = 0.8;
    GainProfile p = toeplitz_gain_profile(9, a, 0.0, c, 2);
    CHECK(!p.decreasing_predicted);
    CHECK(p.observed == ProfileOrdering::Increasing);
    for (size_t i = 0; i < p.values.size(); ++i) {
      double expect = std::pow(c, static_cast<double>(i)) / std::pow(1.0 - a, static_cast<double>(i) + 1.0);
      CHECK(p.values[i] == doctest::Approx(expect).epsilon(1e-12));
      CHECK(p.values[i] >= p.values[0] - 1e-15);
    }
  }
  SUBCASE("c = 0 leaves only the diagonal entry") {
    GainProfile p = toeplitz_gain_profile(6, 0.25, 0.2, 0.0, 3);
    CHECK(p.values[0] == doctest::Approx(1.0 / 0.75).epsilon(1e-14));
    for (size_t i = 1; i < p.values.size(); ++i) CHECK(p.values[i] == 0.0);
  }
}

TEST_CASE("siso orderings") {
  ScenarioSpec sc = ScenarioSpec::identical_stats(2.0, 1.0, 1.5, 0.9, Mat(), 1.2, 60, 1);
  SUBCASE("contractive line: cutset node dominates") {
    SisoOrderings ord = siso_orderings(10, 0.2, 0.1, 0.3, 2, 4, sc);
    CHECK(ord.gtilde_inf_norm <= 1.0);
    CHECK(ord.cutset_dominates_mean);
    CHECK(ord.cutset_dominates_cov);
  }
  SUBCASE("expansive line: ordering reverses") {
    SisoOrderings ord = siso_orderings(10, 0.3, 0.0, 0.8, 2, 4, sc);
    CHECK(ord.min_row_sum > 1.0);
    CHECK(ord.cutset_dominated_mean);
    CHECK(ord.cutset_dominated_cov);
  }
  SUBCASE("noiseless sensors tie every node") {
    NetworkModel m = toeplitz_line(8, 0.2, 0.1, 0.3, {2});
    ScenarioSpec clean = ScenarioSpec::identical_stats(2.0, 1.0, 1.5, 1.5, Mat(), 0.0, 60, 1);
    double first = 0.0;
    for (int node : {4, 5, 6, 7}) {
      SensorSet s = SensorSet::make(m, {node}, 0.0);
      double eta = identical_stats_snrs(m, s, clean).eta_s;
      if (first == 0.0) first = eta;
      CHECK(eta == doctest::Approx(first).epsilon(1e-9));
    }
  }
  SUBCASE("rejects invalid geometry and noiseless scenarios") {
    CHECK_THROWS_AS(siso_orderings(10, 0.2, 0.1, 0.3, 5, 5, sc), std::invalid_argument);
    ScenarioSpec clean = ScenarioSpec::identical_stats(2.0, 1.0, 1.5, 0.9, Mat(), 0.0, 60, 1);
    CHECK_THROWS_AS(siso_orderings(10, 0.2, 0.1, 0.3, 2, 4, clean), std::invalid_argument);
  }
}
