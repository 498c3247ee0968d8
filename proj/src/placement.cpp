#include "netdet/placement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace netdet {

namespace {

bool is_mean_shift_pair(const ScenarioSpec& sc) {
  double scale = std::max(1.0, std::max(sc.Sigma1.cwiseAbs().maxCoeff(), sc.Sigma2.cwiseAbs().maxCoeff()));
  return (sc.Sigma1 - sc.Sigma2).cwiseAbs().maxCoeff() <= 1e-10 * scale;
}

}  // namespace

std::vector<NodeList> enumerate_subsets(const NetworkModel& model, const NodeList& pool, int k, int d) {
  if (k < 0 || k > static_cast<int>(pool.size())) {
    throw std::invalid_argument("enumerate_subsets: cardinality out of range");
  }
  NodeList sorted_pool = pool;
  std::sort(sorted_pool.begin(), sorted_pool.end());
  sorted_pool.erase(std::unique(sorted_pool.begin(), sorted_pool.end()), sorted_pool.end());

  NodeList eligible;
  for (int v : sorted_pool) {
    if (d <= 0) {
      eligible.push_back(v);
    } else {
      int dist_kv = distance(model, model.input_nodes(), {v});
      if (dist_kv == kInfiniteDistance || dist_kv >= d) eligible.push_back(v);
    }
  }

  std::vector<NodeList> out;
  NodeList current;
  // Lexicographic k-combinations of the eligible pool.
  auto rec = [&](auto&& self, size_t start) -> void {
    if (static_cast<int>(current.size()) == k) {
      out.push_back(current);
      return;
    }
    for (size_t i = start; i < eligible.size(); ++i) {
      if (static_cast<int>(eligible.size() - i) < k - static_cast<int>(current.size())) break;
      current.push_back(eligible[i]);
      self(self, i + 1);
      current.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

RankingResult rank_placements(const NetworkModel& model, const ScenarioSpec& scenario,
                              const std::vector<NodeList>& subsets, RankCriterion criterion,
                              const NodeList& cutset, const HinfOptions& opts) {
  RankingResult res;
  res.criterion = criterion;

  NodeList cutset_sorted = cutset;
  std::sort(cutset_sorted.begin(), cutset_sorted.end());

  const bool need_gain_grid =
      scenario.kind == ModelKind::IdenticalStats || scenario.kind == ModelKind::CovShift;
  ResolventGrid grid;
  if (need_gain_grid) grid = make_resolvent_grid(model, opts.grid_points);
  const ResolventGrid* grid_ptr = need_gain_grid ? &grid : nullptr;

  for (const NodeList& subset : subsets) {
    RankedPlacement rp;
    rp.subset = subset;
    std::sort(rp.subset.begin(), rp.subset.end());
    rp.is_cutset = !cutset_sorted.empty() && rp.subset == cutset_sorted;
    try {
      SensorSet sensors = SensorSet::make(model, rp.subset, scenario.sigma_v2);
      if (scenario.kind == ModelKind::IdenticalStats) {
        auto snr = identical_stats_snrs(model, sensors, scenario, opts, grid_ptr);
        rp.pe_mean_analytic = pe_mean(snr.eta_s).value;
        if (scenario.sigma1_sq > scenario.sigma2_sq) rp.pe_cov_analytic = pe_cov(snr.R_s).value;
      } else if (is_mean_shift_pair(scenario)) {
        rp.pe_mean_analytic = pe_mean(asym_snr_mean(model, sensors, scenario, opts).eta).value;
      } else {
        rp.pe_cov_analytic = pe_cov(asym_snr_cov(model, sensors, scenario, opts, grid_ptr)).value;
      }
      const auto& key = criterion == RankCriterion::Mean ? rp.pe_mean_analytic : rp.pe_cov_analytic;
      if (!key.has_value()) {
        res.excluded.emplace_back(rp.subset, "selected criterion not computable for this scenario");
        continue;
      }
      res.ranking.push_back(std::move(rp));
    } catch (const std::exception& e) {
      res.excluded.emplace_back(rp.subset, e.what());
    }
  }

  auto key_of = [&](const RankedPlacement& rp) {
    return criterion == RankCriterion::Mean ? *rp.pe_mean_analytic : *rp.pe_cov_analytic;
  };
  std::sort(res.ranking.begin(), res.ranking.end(), [&](const RankedPlacement& a, const RankedPlacement& b) {
    double ka = key_of(a), kb = key_of(b);
    if (ka != kb) return ka < kb;
    return a.subset < b.subset;
  });
  const int count = static_cast<int>(res.ranking.size());
  for (int i = 0; i < count; ++i) {
    res.ranking[i].rank = i + 1;
    res.ranking[i].worst_first_label = count - i;
  }
  return res;
}

}  // namespace netdet
